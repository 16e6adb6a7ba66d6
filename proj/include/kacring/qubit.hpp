#pragma once

#include <complex>

#include <Eigen/Core>

#include "kacring/random.hpp"

namespace kacring {

/// Single pointer qubit as a two-amplitude state vector (|0>, |1>).
/// Global phase is stored as given.
struct QubitState {
  Eigen::Vector2cd amplitudes{1.0, 0.0};

  std::complex<double> amp0() const { return amplitudes(0); }
  std::complex<double> amp1() const { return amplitudes(1); }

  /// |amp0|^2 + |amp1|^2
  double norm_squared() const { return amplitudes.squaredNorm(); }
  bool is_normalized(double tol = 1e-12) const;

  static QubitState basis(int bit);
  static QubitState from_amplitudes(std::complex<double> a0, std::complex<double> a1);
};

struct MeasurementOutcome {
  int bit = 0;
  QubitState post_state;
};

QubitState qubit_zero();

/// Throws std::domain_error on a non-normalized input.
QubitState hadamard(const QubitState& s);

/// Born-rule measurement in the computational basis: a single uniform draw u
/// yields bit 1 iff u < |amp1|^2.
MeasurementOutcome measure(const QubitState& s, RandomStream& rng);

/// One full pointer cycle: prepare |0>, apply H, measure. True iff the outcome
/// is 1. Nothing is carried between calls.
bool sample_flip(RandomStream& rng);

}  // namespace kacring
