#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "kacring/fitting.hpp"
#include "kacring/random.hpp"

using namespace kacring;

namespace {

Eigen::VectorXd range(int lo, int hi) {
  return Eigen::VectorXd::LinSpaced(hi - lo + 1, double(lo), double(hi));
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("cauchy_like profile") {
  CHECK(cauchy_like(8.0, 16, 0.3, 2.0, 3.7) == 0.3);
  CHECK(cauchy_like(1.0, 0, 1.0, 1.0, 2.0) == 0.5);
  for (double d : {0.5, 1.0, 3.0, 7.25}) {
    CHECK(cauchy_like(5.0 + d, 10, 0.7, 1.3, 4.0) == doctest::Approx(cauchy_like(5.0 - d, 10, 0.7, 1.3, 4.0)));
    // The absolute value makes non-integer exponents symmetric too.
    CHECK(cauchy_like(5.0 + d, 10, 0.7, 1.3, 2.5) == doctest::Approx(cauchy_like(5.0 - d, 10, 0.7, 1.3, 2.5)));
  }
  CHECK(std::isfinite(cauchy_like(1.0, 10, 1.0, 2.0, 2.5)));
  CHECK_THROWS_AS(cauchy_like(1.0, 4, 1.0, 0.0, 2.0), std::domain_error);
  CHECK(cauchy_like(1.0f, 4, 2.0f, 1.0f, 2.0f) == doctest::Approx(1.0));
}

TEST_CASE("fit_linear") {
  const Eigen::VectorXd n = range(3, 64);
  const auto exact = fit_linear(n, 2.0 * n);
  CHECK(exact.param("slope") == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(exact.param("intercept")) < 1e-12);
  CHECK(exact.residual_sum_squares < 1e-20);

  const auto two = fit_linear(Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 3));
  CHECK(two.param("slope") == doctest::Approx(2.0));
  CHECK(two.param("intercept") == doctest::Approx(1.0));

  RandomStream rng(8);
  Eigen::VectorXd noisy = 2.0 * n;
  for (Eigen::Index i = 0; i < noisy.size(); ++i) noisy(i) += 0.1 * (rng.uniform01() - 0.5);
  CHECK(std::abs(fit_linear(n, noisy).param("slope") - 2.0) < 0.01);

  const auto roundtrip = fit_linear(n, -0.37 * n.array() + 5.5);
  CHECK(rel(roundtrip.param("slope"), -0.37) < 1e-4);
  CHECK(rel(roundtrip.param("intercept"), 5.5) < 1e-4);

  CHECK_THROWS_AS(fit_linear(Eigen::Vector3d(2, 2, 2), Eigen::Vector3d(1, 2, 3)), std::domain_error);
  CHECK_THROWS_AS(fit_linear(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)), std::domain_error);
  CHECK_THROWS_AS(two.param("base"), std::out_of_range);
}

TEST_CASE("fit_geometric") {
  const Eigen::VectorXd n = range(2, 10);
  const Eigen::VectorXd pow2 = n.unaryExpr([](double v) { return std::pow(2.0, v); });
  const auto exact = fit_geometric(n, pow2);
  CHECK(exact.param("base") == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(exact.param("prefactor") == doctest::Approx(1.0).epsilon(1e-12));

  const auto scaled = fit_geometric(n, 3.0 * pow2);
  CHECK(scaled.param("base") == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(scaled.param("prefactor") == doctest::Approx(3.0).epsilon(1e-12));

  const Eigen::VectorXd y = n.unaryExpr([](double v) { return 0.8 * std::pow(1.7, v) * (1.0 + 0.05 * std::sin(v)); });
  const auto a = fit_geometric(n, y);
  for (double k : {1e-3, 0.5, 7.0, 1e4}) {
    const auto b = fit_geometric(n, k * y);
    CHECK(b.param("base") == doctest::Approx(a.param("base")).epsilon(1e-12));
    CHECK(b.param("prefactor") == doctest::Approx(k * a.param("prefactor")).epsilon(1e-10));
  }

  Eigen::VectorXd bad = pow2;
  bad(3) = 0.0;
  CHECK_THROWS_AS(fit_geometric(n, bad), std::domain_error);
  bad(3) = -1.0;
  CHECK_THROWS_AS(fit_geometric(n, bad), std::domain_error);
}

TEST_CASE("nelder_mead on a quadratic bowl") {
  auto bowl = [](const Eigen::VectorXd& p) {
    return (p(0) - 1.0) * (p(0) - 1.0) + 10.0 * (p(1) + 2.0) * (p(1) + 2.0) + 0.5;
  };
  const auto r = nelder_mead(bowl, Eigen::Vector2d(4.0, 3.0));
  CHECK(r.converged);
  CHECK(r.values(0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.values(1) == doctest::Approx(-2.0).epsilon(1e-4));
  for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
    CHECK(r.objective_history[i] <= r.objective_history[i - 1]);
  }

  NelderMeadOptions tight;
  tight.max_evaluations = 10;
  const auto capped = nelder_mead(bowl, Eigen::Vector2d(40.0, 30.0), tight);
  CHECK_FALSE(capped.converged);
  CHECK(capped.values.allFinite());
}

TEST_CASE("fit_cauchy_like round trip") {
  constexpr double n_sites = 16;
  const Eigen::VectorXd x = range(0, 16);
  const Eigen::VectorXd y = x.unaryExpr([](double v) { return cauchy_like(v, n_sites, 0.3, 4.0, 4.0); });
  const auto fit = fit_cauchy_like(x, y, n_sites);
  CHECK(fit.converged);
  CHECK(rel(fit.param("a"), 0.3) < 1e-4);
  CHECK(rel(std::abs(fit.param("b")), 4.0) < 1e-4);
  CHECK(rel(fit.param("c"), 4.0) < 1e-4);
  CHECK(relative_rms_residual(y, cauchy_curve(fit, x, n_sites)) < 1e-6);
}

TEST_CASE("fit_cauchy_like objective never increases") {
  const Eigen::VectorXd x = range(0, 12);
  const Eigen::VectorXd y = x.unaryExpr([](double v) { return cauchy_like(v, 12, 0.2, 2.5, 3.0) + 0.01 * std::cos(3 * v); });
  auto sse = [&](const Eigen::VectorXd& p) {
    return (y - x.unaryExpr([&](double v) { return cauchy_like(v, 12, p(0), p(1), p(2)); })).squaredNorm();
  };
  const auto r = nelder_mead(sse, Eigen::Vector3d(0.3, 3.0, 2.0));
  REQUIRE(r.objective_history.size() > 2);
  for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
    CHECK(r.objective_history[i] <= r.objective_history[i - 1]);
  }
}

TEST_CASE("fit_cauchy_like degenerate and invalid inputs") {
  const Eigen::VectorXd x = range(0, 8);
  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(9, 0.1);
  FitResult fit;
  CHECK_NOTHROW(fit = fit_cauchy_like(x, flat, 8));
  if (fit.converged) {
    CHECK(fit.values.allFinite());
    CHECK(relative_rms_residual(flat, cauchy_curve(fit, x, 8)) < 1e-2);
  }
  CHECK_THROWS_AS(fit_cauchy_like(range(0, 2), Eigen::Vector3d(1, 2, 1), 2), std::invalid_argument);
  CHECK_THROWS_AS(fit_cauchy_like(x, -flat, 8), std::invalid_argument);
}
