#include "kacring/fitting.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace kacring {

double FitResult::param(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values(static_cast<Eigen::Index>(i));
  }
  throw std::out_of_range("fit has no parameter named '" + std::string(name) + "'");
}

FitResult fit_linear(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_linear: x and y differ in length");
  if (x.size() < 2) throw std::domain_error("fit_linear: need at least two points");
  const double mx = x.mean();
  const double my = y.mean();
  const Eigen::ArrayXd dx = x.array() - mx;
  const double sxx = (dx * dx).sum();
  if (sxx == 0.0) throw std::domain_error("fit_linear: all x values are identical");
  const double slope = (dx * (y.array() - my)).sum() / sxx;
  const double intercept = my - slope * mx;

  FitResult fit;
  fit.names = {"slope", "intercept"};
  fit.values = Eigen::Vector2d(slope, intercept);
  fit.residual_sum_squares = (y.array() - (slope * x.array() + intercept)).square().sum();
  fit.converged = true;
  return fit;
}

FitResult fit_geometric(const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y) {
  if ((y.array() <= 0.0).any() || y.hasNaN()) {
    throw std::domain_error("fit_geometric: all y values must be positive");
  }
  const Eigen::VectorXd logy = y.array().log().matrix();
  FitResult line = fit_linear(x, logy);
  FitResult fit;
  fit.names = {"base", "prefactor"};
  fit.values = Eigen::Vector2d(std::exp(line.values(0)), std::exp(line.values(1)));
  fit.residual_sum_squares = line.residual_sum_squares;
  fit.converged = true;
  return fit;
}

FitResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                      const Eigen::VectorXd& start, const NelderMeadOptions& options) {
  const Eigen::Index dim = start.size();
  Eigen::MatrixXd simplex(dim, dim + 1);
  Eigen::VectorXd f(dim + 1);
  int evaluations = 0;
  auto eval = [&](const Eigen::VectorXd& p) {
    ++evaluations;
    const double v = objective(p);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  simplex.col(0) = start;
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd p = start;
    p(i) = p(i) != 0.0 ? p(i) * (1.0 + options.initial_step) : options.initial_step;
    simplex.col(i + 1) = p;
  }
  for (Eigen::Index j = 0; j <= dim; ++j) f(j) = eval(simplex.col(j));

  FitResult result;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim + 1));
  int iteration = 0;
  while (true) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return f(a) < f(b); });
    const Eigen::Index best = order.front();
    const Eigen::Index worst = order.back();
    const Eigen::Index second_worst = order[order.size() - 2];
    result.objective_history.push_back(f(best));

    const double spread = f(worst) - f(best);
    if (std::isfinite(f(best)) &&
        spread <= options.ftol * std::abs(f(best)) + options.ftol * options.ftol) {
      result.converged = true;
      break;
    }
    if (evaluations >= options.max_evaluations) break;
    ++iteration;

    const Eigen::VectorXd centroid = (simplex.rowwise().sum() - simplex.col(worst)) / double(dim);
    const Eigen::VectorXd reflected = centroid + (centroid - simplex.col(worst));
    const double fr = eval(reflected);

    if (fr < f(best)) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex.col(worst));
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex.col(worst) = expanded;
        f(worst) = fe;
      } else {
        simplex.col(worst) = reflected;
        f(worst) = fr;
      }
      continue;
    }
    if (fr < f(second_worst)) {
      simplex.col(worst) = reflected;
      f(worst) = fr;
      continue;
    }
    // Contraction toward the better of the reflected and worst points.
    const bool outside = fr < f(worst);
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (simplex.col(worst) - centroid));
    const double fc = eval(contracted);
    if (fc < (outside ? fr : f(worst))) {
      simplex.col(worst) = contracted;
      f(worst) = fc;
      continue;
    }
    for (Eigen::Index j = 0; j <= dim; ++j) {
      if (j == best) continue;
      simplex.col(j) = simplex.col(best) + 0.5 * (simplex.col(j) - simplex.col(best));
      f(j) = eval(simplex.col(j));
    }
  }

  Eigen::Index best = 0;
  f.minCoeff(&best);
  result.values = simplex.col(best);
  result.residual_sum_squares = f(best);
  result.iterations = iteration;
  result.names.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) result.names.push_back("p" + std::to_string(i));
  if (!result.values.allFinite()) result.converged = false;
  return result;
}

FitResult fit_cauchy_like(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& y, double n_sites,
                          const NelderMeadOptions& options) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_cauchy_like: x and y differ in length");
  if (x.size() < 4) throw std::invalid_argument("fit_cauchy_like: need at least 4 points");
  if ((y.array() < 0.0).any()) throw std::invalid_argument("fit_cauchy_like: y must be non-negative");

  const Eigen::VectorXd xs = x;
  const Eigen::VectorXd ys = y;
  auto sse = [&](const Eigen::VectorXd& p) {
    if (p(1) == 0.0) return std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      const double r = cauchy_like(xs(i), n_sites, p(0), p(1), p(2)) - ys(i);
      s += r * r;
    }
    return s;
  };

  const double a0 = ys.maxCoeff();
  const double half_width = std::max(n_sites, 1.0);
  FitResult best;
  bool have_best = false;
  for (const double bf : {1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0}) {
    for (const double c0 : {2.0, 4.0, 6.0}) {
      Eigen::Vector3d start(a0 != 0.0 ? a0 : 1.0, half_width * bf, c0);
      FitResult r = nelder_mead(sse, start, options);
      // Restart from the optimum until the objective stops moving.
      for (int restart = 0; restart < 5 && r.converged; ++restart) {
        FitResult again = nelder_mead(sse, r.values, options);
        again.iterations += r.iterations;
        const bool stalled = again.residual_sum_squares >= r.residual_sum_squares;
        if (again.residual_sum_squares <= r.residual_sum_squares) r = std::move(again);
        if (stalled) break;
      }
      const bool better = !have_best || (r.converged && !best.converged) ||
                          (r.converged == best.converged &&
                           r.residual_sum_squares < best.residual_sum_squares);
      if (better) {
        best = std::move(r);
        have_best = true;
      }
    }
  }
  best.names = {"a", "b", "c"};
  return best;
}

double relative_rms_residual(const Eigen::Ref<const Eigen::VectorXd>& y,
                             const Eigen::Ref<const Eigen::VectorXd>& y_fit) {
  const double denom = std::sqrt(y.squaredNorm() / double(y.size()));
  const double num = std::sqrt((y - y_fit).squaredNorm() / double(y.size()));
  return denom == 0.0 ? num : num / denom;
}

Eigen::VectorXd cauchy_curve(const FitResult& fit, const Eigen::Ref<const Eigen::VectorXd>& x,
                             double n_sites) {
  const double a = fit.param("a");
  const double b = fit.param("b");
  const double c = fit.param("c");
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = cauchy_like(x(i), n_sites, a, b, c);
  return out;
}

}  // namespace kacring
