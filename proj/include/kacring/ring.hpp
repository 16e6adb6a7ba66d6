#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kacring/random.hpp"

namespace kacring {

enum class Color : std::uint8_t { White = 0, Black = 1 };

constexpr Color flip(Color c) noexcept {
  return c == Color::Black ? Color::White : Color::Black;
}

constexpr char to_char(Color c) noexcept { return c == Color::Black ? 'B' : 'W'; }

/// Two-colour ring of N sites, bit-packed (Black = 1, White = 0, site j is bit
/// j % 64 of word j / 64). Padding bits past N are always zero.
class RingConfig {
 public:
  /// All-white ring. Throws std::invalid_argument when sites == 0.
  explicit RingConfig(std::size_t sites);

  static RingConfig uniform(std::size_t sites, Color c);
  /// Parses a string over {B, W}; the leftmost character is site 0.
  static RingConfig parse(std::string_view text);
  /// Bit j of `code` is site j; requires sites <= 64.
  static RingConfig from_code(std::size_t sites, std::uint64_t code);
  /// Uniform over all 2^sites colourings.
  static RingConfig random(std::size_t sites, RandomStream& rng);

  std::size_t size() const noexcept { return sites_; }

  Color operator[](std::size_t site) const noexcept {
    return ((words_[site >> 6] >> (site & 63)) & 1U) != 0 ? Color::Black : Color::White;
  }
  void set(std::size_t site, Color c) noexcept;
  void flip_site(std::size_t site) noexcept { words_[site >> 6] ^= std::uint64_t{1} << (site & 63); }

  /// In-place step: rotate one site clockwise (j -> j+1 mod N), flipping the
  /// ball that arrives at the pointer (site 0) when `flip_at_pointer` is set.
  void advance(bool flip_at_pointer) noexcept;

  std::size_t black_count() const noexcept;
  std::string to_string() const;
  /// Inverse of from_code; requires sites <= 64.
  std::uint64_t code() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const RingConfig&, const RingConfig&) = default;

 private:
  std::size_t sites_;
  std::vector<std::uint64_t> words_;
};

/// Site-wise Hamming distance. Throws std::invalid_argument on length mismatch.
std::size_t relative_entropy(const RingConfig& current, const RingConfig& initial);

struct ColorCounts {
  std::size_t black = 0;
  std::size_t white = 0;
};

ColorCounts counts(const RingConfig& config);

/// B - W.
std::int64_t delta(const RingConfig& config);

/// Mean-field law: delta0 * (1 - 2 mu)^t. Throws std::domain_error unless 0 <= mu <= 1.
double delta_theory(double delta0, double mu, std::uint64_t t);

struct StepDecision {
  bool flip = true;
};

RingConfig step(const RingConfig& config, StepDecision decision);

/// How the pointer decides whether the crossing ball flips.
/// Quantum runs one Hadamard-and-measure cycle per step; FairCoin draws a raw
/// random bit (a distributionally identical reference for Quantum).
enum class PointerPolicy { Classical, Quantum, FairCoin };

std::string_view to_string(PointerPolicy p) noexcept;
PointerPolicy parse_policy(std::string_view text);

StepDecision decide(PointerPolicy policy, RandomStream& rng);

/// Default recurrence cap: 2N for the classical pointer, 64 * 2^N otherwise
/// (N clamped at 40).
std::uint64_t default_cap(PointerPolicy policy, std::size_t sites);

struct Trajectory {
  RingConfig initial;
  std::vector<std::uint32_t> entropy_series;
  std::vector<std::int64_t> delta_series;
  /// Empty when the cap was reached first.
  std::optional<std::uint64_t> recurrence_time;
};

/// Runs the dynamics from `initial`, calling `observe(t, config)` for
/// t = 0, 1, ... until the configuration first equals `initial` again (t >= 1)
/// or t == cap. Returns the recurrence time if it was reached.
template <typename Observer>
std::optional<std::uint64_t> evolve_with(const RingConfig& initial, PointerPolicy policy,
                                         RandomStream& rng, std::uint64_t cap,
                                         Observer&& observe) {
  RingConfig current = initial;
  observe(std::uint64_t{0}, current);
  for (std::uint64_t t = 1; t <= cap; ++t) {
    current.advance(decide(policy, rng).flip);
    observe(t, current);
    if (current == initial) return t;
  }
  return std::nullopt;
}

/// Records entropy and delta at every step. Throws std::invalid_argument when cap == 0.
Trajectory evolve(const RingConfig& initial, PointerPolicy policy, RandomStream& rng,
                  std::uint64_t cap);

}  // namespace kacring
