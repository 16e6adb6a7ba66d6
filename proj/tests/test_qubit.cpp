#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "kacring/qubit.hpp"

using namespace kacring;

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

bool close(const QubitState& s, std::complex<double> a0, std::complex<double> a1, double tol = 1e-12) {
  return std::abs(s.amp0() - a0) <= tol && std::abs(s.amp1() - a1) <= tol;
}

}  // namespace

TEST_CASE("qubit preparation and hadamard") {
  CHECK(close(qubit_zero(), 1.0, 0.0, 0.0));
  CHECK(close(hadamard(qubit_zero()), kInvSqrt2, kInvSqrt2));
  CHECK(close(hadamard(QubitState::from_amplitudes(kInvSqrt2, kInvSqrt2)), 1.0, 0.0));
  CHECK(close(hadamard(QubitState::basis(1)), kInvSqrt2, -kInvSqrt2));
  CHECK_THROWS_AS(hadamard(QubitState::from_amplitudes(1.0, 1.0)), std::domain_error);
  CHECK_THROWS_AS(QubitState::basis(2), std::domain_error);
}

TEST_CASE("hadamard preserves norm and is self-inverse") {
  RandomStream rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double theta = rng.uniform01() * std::numbers::pi;
    const double phi = rng.uniform01() * 2 * std::numbers::pi;
    const double gamma = rng.uniform01() * 2 * std::numbers::pi;
    const auto s = QubitState::from_amplitudes(std::polar(std::cos(theta / 2), gamma),
                                               std::polar(std::sin(theta / 2), gamma + phi));
    const auto h = hadamard(s);
    CHECK(std::abs(h.norm_squared() - 1.0) < 1e-12);
    CHECK(close(hadamard(h), s.amp0(), s.amp1()));
  }
}

TEST_CASE("measurement of basis states is deterministic") {
  RandomStream rng(4);
  for (int i = 0; i < 1000; ++i) {
    const auto m0 = measure(qubit_zero(), rng);
    CHECK(m0.bit == 0);
    CHECK(close(m0.post_state, 1.0, 0.0, 0.0));
    const auto m1 = measure(QubitState::basis(1), rng);
    CHECK(m1.bit == 1);
    CHECK(close(m1.post_state, 0.0, 1.0, 0.0));
  }
}

TEST_CASE("measurement of the equal superposition") {
  RandomStream rng(2024);
  const auto plus = hadamard(qubit_zero());
  constexpr int n = 1'000'000;
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    const auto m = measure(plus, rng);
    ones += m.bit;
    if (i < 100) CHECK(close(m.post_state, m.bit == 0 ? 1.0 : 0.0, m.bit == 1 ? 1.0 : 0.0, 0.0));
  }
  const double freq = double(ones) / n;
  CHECK(freq >= 0.498);
  CHECK(freq <= 0.502);
}

TEST_CASE("measurement follows the Born rule for a biased state") {
  RandomStream rng(77);
  const auto s = QubitState::from_amplitudes(std::sqrt(0.8), std::complex<double>(0.0, std::sqrt(0.2)));
  constexpr int n = 200'000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += measure(s, rng).bit;
  const double sigma = std::sqrt(0.2 * 0.8 / n);
  CHECK(std::abs(double(ones) / n - 0.2) < 4 * sigma);
}

TEST_CASE("sample_flip is a reproducible fair coin") {
  RandomStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(sample_flip(a) == sample_flip(b));

  for (int n : {1000, 100'000}) {
    RandomStream rng(static_cast<std::uint64_t>(n));
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += sample_flip(rng) ? 1 : 0;
    CHECK(std::abs(double(ones) / n - 0.5) < 4 * 0.5 / std::sqrt(double(n)));
  }

  // Lag-1 pairs are uniform over {00, 01, 10, 11}: no state survives a call.
  RandomStream rng(5);
  int pairs[2][2] = {};
  bool prev = sample_flip(rng);
  constexpr int n = 400'000;
  for (int i = 0; i < n; ++i) {
    const bool cur = sample_flip(rng);
    ++pairs[prev][cur];
    prev = cur;
  }
  const double sigma = std::sqrt(0.25 * 0.75 / n);
  for (auto& row : pairs)
    for (int c : row) CHECK(std::abs(double(c) / n - 0.25) < 4 * sigma);
}
