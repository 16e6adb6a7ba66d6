#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "kacring/ring.hpp"

// Ground-truth engines kept independent of the simulator: colours are plain
// bool vectors and the step is written out naively.

namespace kacring::oracle {

using NaiveRing = std::vector<bool>;  // true = Black, index = site

/// Site j of the result is bit j of code.
NaiveRing decode(std::size_t n, std::uint64_t code);

/// Rotate clockwise; the ball landing on site 0 flips when `flip` is set.
NaiveRing naive_step(const NaiveRing& ring, bool flip);

std::size_t naive_distance(const NaiveRing& a, const NaiveRing& b);

/// Classical orbit of `initial`: states at t = 0..T where T is the recurrence
/// time (the last state equals the first).
std::vector<NaiveRing> classical_orbit(const NaiveRing& initial);

/// Recurrence time of every configuration, indexed by code (bit j = site j is
/// Black). Throws std::invalid_argument unless 1 <= n <= 20.
std::vector<std::uint32_t> classical_recurrence_map(std::size_t n);

/// True iff S(t) = S(2n - t) for all 0 <= t <= 2n and every configuration of
/// n sites under the classical pointer. Throws unless 1 <= n <= 10.
bool symmetry_check(std::size_t n);

/// A state of the stochastic pointer chain: configuration code and rotation
/// phase t mod N. Index = phase * 2^N + code.
struct ChainState {
  std::uint64_t code = 0;
  std::size_t phase = 0;
};

inline constexpr std::size_t kMaxChainSites = 6;

/// Dense row-stochastic kernel on the N * 2^N chain states: each step rotates,
/// advances the phase and flips the arriving ball with probability 1/2.
Eigen::MatrixXd transition_kernel(std::size_t n);

/// Exact expected recurrence time (first t >= 1 with configuration equal to
/// `initial`, any phase) for the fair stochastic pointer, by a hitting-time
/// linear solve. Throws std::invalid_argument unless 1 <= N <= 6.
double quantum_expected_recurrence(const RingConfig& initial);

/// Same solve, but the target is (initial, phase 0): the first return that is
/// also a whole number of rotations.
double phase_locked_expected_return(const RingConfig& initial);

}  // namespace kacring::oracle
