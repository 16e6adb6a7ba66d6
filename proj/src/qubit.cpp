#include "kacring/qubit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kacring {

namespace {

const Eigen::Matrix2cd& hadamard_matrix() {
  static const Eigen::Matrix2cd h = [] {
    Eigen::Matrix2cd m;
    m << 1.0, 1.0, 1.0, -1.0;
    return Eigen::Matrix2cd(m / std::numbers::sqrt2);
  }();
  return h;
}

}  // namespace

bool QubitState::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) <= tol;
}

QubitState QubitState::basis(int bit) {
  if (bit != 0 && bit != 1) throw std::domain_error("qubit basis index must be 0 or 1");
  QubitState s;
  s.amplitudes = bit == 0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
  return s;
}

QubitState QubitState::from_amplitudes(std::complex<double> a0, std::complex<double> a1) {
  QubitState s;
  s.amplitudes << a0, a1;
  return s;
}

QubitState qubit_zero() { return QubitState::basis(0); }

QubitState hadamard(const QubitState& s) {
  if (!s.is_normalized()) throw std::domain_error("hadamard: input state is not normalized");
  QubitState out;
  out.amplitudes.noalias() = hadamard_matrix() * s.amplitudes;
  return out;
}

MeasurementOutcome measure(const QubitState& s, RandomStream& rng) {
  const double p1 = std::norm(s.amp1());
  const int bit = rng.uniform01() < p1 ? 1 : 0;
  return {bit, QubitState::basis(bit)};
}

bool sample_flip(RandomStream& rng) {
  return measure(hadamard(qubit_zero()), rng).bit == 1;
}

}  // namespace kacring
