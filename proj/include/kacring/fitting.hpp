#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace kacring {

struct FitResult {
  std::vector<std::string> names;
  Eigen::VectorXd values;
  double residual_sum_squares = 0.0;
  bool converged = false;
  int iterations = 0;
  /// Best objective value after each simplex iteration (empty for closed-form fits).
  std::vector<double> objective_history;

  /// Throws std::out_of_range for an unknown name.
  double param(std::string_view name) const;
};

/// a / (1 + |(x - N/2) / b|^c). The absolute value keeps the profile real for
/// non-integer c. Throws std::domain_error when b == 0.
template <typename Scalar>
Scalar cauchy_like(Scalar x, double n_sites, Scalar a, Scalar b, Scalar c) {
  if (b == Scalar(0)) throw std::domain_error("cauchy_like: width b must be non-zero");
  using std::abs;
  using std::pow;
  return a / (Scalar(1) + pow(abs((x - Scalar(n_sites / 2.0)) / b), c));
}

/// Ordinary least squares y = slope * x + intercept.
/// Throws std::domain_error if fewer than two distinct x values.
FitResult fit_linear(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y);

/// y = prefactor * base^x, fitted as a line through (x, log y); the reported
/// residual is in log space. Throws std::domain_error on non-positive y.
FitResult fit_geometric(const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y);

struct NelderMeadOptions {
  /// Stop when f_worst - f_best <= ftol * |f_best| + ftol^2.
  double ftol = 1e-10;
  int max_evaluations = 100'000;
  /// Relative edge length of the initial simplex.
  double initial_step = 0.1;
};

/// Derivative-free simplex minimisation (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Parameters are reported as p0, p1, ...
FitResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                      const Eigen::VectorXd& start, const NelderMeadOptions& options = {});

/// Unweighted least squares of cauchy_like over (a, b, c), multi-started from
/// a = max(y), b in {N/8, N/4, N/2}, c in {2, 4, 6}; the best start wins.
/// Throws std::invalid_argument for fewer than 4 points or negative y.
FitResult fit_cauchy_like(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& y, double n_sites,
                          const NelderMeadOptions& options = {});

/// sqrt(mean(residual^2)) / sqrt(mean(y^2)) of a fitted profile.
double relative_rms_residual(const Eigen::Ref<const Eigen::VectorXd>& y,
                             const Eigen::Ref<const Eigen::VectorXd>& y_fit);

/// Evaluates a Cauchy-like fit at each x.
Eigen::VectorXd cauchy_curve(const FitResult& fit, const Eigen::Ref<const Eigen::VectorXd>& x,
                             double n_sites);

}  // namespace kacring
