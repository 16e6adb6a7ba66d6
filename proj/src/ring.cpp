#include "kacring/ring.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "kacring/qubit.hpp"

namespace kacring {

namespace {

constexpr std::size_t word_count(std::size_t sites) { return (sites + 63) / 64; }

std::uint64_t tail_mask(std::size_t sites) {
  const std::size_t rem = sites & 63;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

}  // namespace

RingConfig::RingConfig(std::size_t sites) : sites_(sites), words_(word_count(sites), 0) {
  if (sites == 0) throw std::invalid_argument("ring must have at least one site");
}

RingConfig RingConfig::uniform(std::size_t sites, Color c) {
  RingConfig r(sites);
  if (c == Color::Black) {
    std::fill(r.words_.begin(), r.words_.end(), ~std::uint64_t{0});
    r.words_.back() &= tail_mask(sites);
  }
  return r;
}

RingConfig RingConfig::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("invalid config string: empty");
  RingConfig r(text.size());
  for (std::size_t j = 0; j < text.size(); ++j) {
    switch (text[j]) {
      case 'B': r.set(j, Color::Black); break;
      case 'W': break;
      default:
        throw std::invalid_argument("invalid config string: character '" +
                                    std::string(1, text[j]) + "' at position " +
                                    std::to_string(j) + " is not B or W");
    }
  }
  return r;
}

RingConfig RingConfig::from_code(std::size_t sites, std::uint64_t code) {
  if (sites > 64) throw std::invalid_argument("from_code supports at most 64 sites");
  RingConfig r(sites);
  r.words_[0] = code & tail_mask(sites);
  return r;
}

RingConfig RingConfig::random(std::size_t sites, RandomStream& rng) {
  RingConfig r(sites);
  for (auto& w : r.words_) w = rng.next_u64();
  r.words_.back() &= tail_mask(sites);
  return r;
}

void RingConfig::set(std::size_t site, Color c) noexcept {
  const std::uint64_t bit = std::uint64_t{1} << (site & 63);
  if (c == Color::Black) {
    words_[site >> 6] |= bit;
  } else {
    words_[site >> 6] &= ~bit;
  }
}

void RingConfig::advance(bool flip_at_pointer) noexcept {
  const std::size_t last = sites_ - 1;
  const std::uint64_t outgoing = (words_[last >> 6] >> (last & 63)) & 1U;
  for (std::size_t i = words_.size() - 1; i > 0; --i) {
    words_[i] = (words_[i] << 1) | (words_[i - 1] >> 63);
  }
  words_[0] <<= 1;
  words_.back() &= tail_mask(sites_);
  words_[0] |= outgoing ^ static_cast<std::uint64_t>(flip_at_pointer);
}

std::size_t RingConfig::black_count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::string RingConfig::to_string() const {
  std::string s(sites_, 'W');
  for (std::size_t j = 0; j < sites_; ++j) s[j] = to_char((*this)[j]);
  return s;
}

std::uint64_t RingConfig::code() const {
  if (sites_ > 64) throw std::invalid_argument("code() supports at most 64 sites");
  return words_[0];
}

std::size_t relative_entropy(const RingConfig& current, const RingConfig& initial) {
  if (current.size() != initial.size()) {
    throw std::invalid_argument("relative_entropy: configurations have different lengths (" +
                                std::to_string(current.size()) + " vs " +
                                std::to_string(initial.size()) + ")");
  }
  const auto a = current.words();
  const auto b = initial.words();
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
  return d;
}

ColorCounts counts(const RingConfig& config) {
  const std::size_t black = config.black_count();
  return {black, config.size() - black};
}

std::int64_t delta(const RingConfig& config) {
  const auto c = counts(config);
  return static_cast<std::int64_t>(c.black) - static_cast<std::int64_t>(c.white);
}

double delta_theory(double delta0, double mu, std::uint64_t t) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::domain_error("delta_theory: mu must lie in [0, 1]");
  return delta0 * std::pow(1.0 - 2.0 * mu, static_cast<double>(t));
}

RingConfig step(const RingConfig& config, StepDecision decision) {
  RingConfig next = config;
  next.advance(decision.flip);
  return next;
}

std::string_view to_string(PointerPolicy p) noexcept {
  switch (p) {
    case PointerPolicy::Classical: return "classical";
    case PointerPolicy::Quantum: return "quantum";
    case PointerPolicy::FairCoin: return "coin";
  }
  return "unknown";
}

PointerPolicy parse_policy(std::string_view text) {
  if (text == "classical") return PointerPolicy::Classical;
  if (text == "quantum") return PointerPolicy::Quantum;
  if (text == "coin") return PointerPolicy::FairCoin;
  throw std::invalid_argument("unknown pointer mode '" + std::string(text) +
                              "' (expected classical, quantum or coin)");
}

StepDecision decide(PointerPolicy policy, RandomStream& rng) {
  switch (policy) {
    case PointerPolicy::Classical: return {true};
    case PointerPolicy::Quantum: return {sample_flip(rng)};
    case PointerPolicy::FairCoin: return {rng.fair_bit()};
  }
  return {true};
}

std::uint64_t default_cap(PointerPolicy policy, std::size_t sites) {
  if (policy == PointerPolicy::Classical) return 2 * static_cast<std::uint64_t>(sites);
  return std::uint64_t{64} << std::min<std::size_t>(sites, 40);
}

Trajectory evolve(const RingConfig& initial, PointerPolicy policy, RandomStream& rng,
                  std::uint64_t cap) {
  if (cap == 0) throw std::invalid_argument("evolve: cap must be at least 1");
  Trajectory tr{initial, {}, {}, std::nullopt};
  tr.recurrence_time = evolve_with(initial, policy, rng, cap,
                                   [&](std::uint64_t, const RingConfig& c) {
                                     tr.entropy_series.push_back(
                                         static_cast<std::uint32_t>(relative_entropy(c, initial)));
                                     tr.delta_series.push_back(delta(c));
                                   });
  return tr;
}

}  // namespace kacring
