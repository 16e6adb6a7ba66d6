#include "kacring/oracle.hpp"

#include <Eigen/LU>

#include <stdexcept>
#include <string>

namespace kacring::oracle {

NaiveRing decode(std::size_t n, std::uint64_t code) {
  NaiveRing r(n);
  for (std::size_t j = 0; j < n; ++j) r[j] = ((code >> j) & 1U) != 0;
  return r;
}

NaiveRing naive_step(const NaiveRing& ring, bool flip) {
  const std::size_t n = ring.size();
  NaiveRing next(n);
  for (std::size_t j = 1; j < n; ++j) next[j] = ring[j - 1];
  next[0] = flip ? !ring[n - 1] : ring[n - 1];
  return next;
}

std::size_t naive_distance(const NaiveRing& a, const NaiveRing& b) {
  std::size_t d = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] != b[j]) ++d;
  }
  return d;
}

std::vector<NaiveRing> classical_orbit(const NaiveRing& initial) {
  std::vector<NaiveRing> orbit{initial};
  do {
    orbit.push_back(naive_step(orbit.back(), true));
  } while (orbit.back() != initial);
  return orbit;
}

std::vector<std::uint32_t> classical_recurrence_map(std::size_t n) {
  if (n < 1 || n > 20) {
    throw std::invalid_argument("oracle: classical enumeration supports 1..20 sites, got " +
                                std::to_string(n));
  }
  std::vector<std::uint32_t> out(std::size_t{1} << n);
  for (std::uint64_t code = 0; code < out.size(); ++code) {
    const NaiveRing initial = decode(n, code);
    NaiveRing ring = naive_step(initial, true);
    std::uint32_t t = 1;
    while (ring != initial) {
      ring = naive_step(ring, true);
      ++t;
    }
    out[code] = t;
  }
  return out;
}

bool symmetry_check(std::size_t n) {
  if (n < 1 || n > 10) {
    throw std::invalid_argument("oracle: symmetry check supports 1..10 sites");
  }
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    const NaiveRing initial = decode(n, code);
    std::vector<std::size_t> s;
    NaiveRing ring = initial;
    for (std::size_t t = 0; t <= 2 * n; ++t) {
      s.push_back(naive_distance(ring, initial));
      ring = naive_step(ring, true);
    }
    for (std::size_t t = 0; t <= 2 * n; ++t) {
      if (s[t] != s[2 * n - t]) return false;
    }
  }
  return true;
}

namespace {

void check_chain_size(std::size_t n) {
  if (n < 1 || n > kMaxChainSites) {
    throw std::invalid_argument("oracle: exact stochastic-pointer solve supports 1.." +
                                std::to_string(kMaxChainSites) + " sites, got " +
                                std::to_string(n));
  }
}

std::uint64_t encode(const NaiveRing& ring) {
  std::uint64_t code = 0;
  for (std::size_t j = 0; j < ring.size(); ++j) {
    if (ring[j]) code |= std::uint64_t{1} << j;
  }
  return code;
}

std::uint64_t code_of(const RingConfig& config) {
  NaiveRing ring(config.size());
  for (std::size_t j = 0; j < config.size(); ++j) ring[j] = config[j] == Color::Black;
  return encode(ring);
}

std::size_t index_of(std::size_t n, const ChainState& s) {
  return s.phase * (std::size_t{1} << n) + static_cast<std::size_t>(s.code);
}

// Expected first hitting time of `is_target`, starting one step after
// (initial, phase 0).
template <typename Target>
double expected_return(const RingConfig& initial, Target is_target) {
  const std::size_t n = initial.size();
  check_chain_size(n);
  const Eigen::MatrixXd kernel = transition_kernel(n);
  const auto states = kernel.rows();

  // Unknowns: hitting times of the non-target states.
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(states), -1);
  Eigen::Index unknowns = 0;
  for (Eigen::Index i = 0; i < states; ++i) {
    if (!is_target(static_cast<std::size_t>(i))) slot[static_cast<std::size_t>(i)] = unknowns++;
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(unknowns, unknowns);
  const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(unknowns);
  for (Eigen::Index i = 0; i < states; ++i) {
    const auto row = slot[static_cast<std::size_t>(i)];
    if (row < 0) continue;
    for (Eigen::Index j = 0; j < states; ++j) {
      const auto col = slot[static_cast<std::size_t>(j)];
      if (col >= 0 && kernel(i, j) != 0.0) a(row, col) -= kernel(i, j);
    }
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw std::logic_error("oracle: hitting-time system is singular");
  const Eigen::VectorXd h = lu.solve(rhs);
  if ((a * h - rhs).lpNorm<Eigen::Infinity>() >= 1e-8) {
    throw std::logic_error("oracle: hitting-time residual check failed");
  }

  const auto start = static_cast<Eigen::Index>(index_of(n, {code_of(initial), 0}));
  double expected = 1.0;
  for (Eigen::Index j = 0; j < states; ++j) {
    const auto col = slot[static_cast<std::size_t>(j)];
    if (col >= 0) expected += kernel(start, j) * h(col);
  }
  return expected;
}

}  // namespace

Eigen::MatrixXd transition_kernel(std::size_t n) {
  check_chain_size(n);
  const std::size_t configs = std::size_t{1} << n;
  const auto states = static_cast<Eigen::Index>(n * configs);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(states, states);
  for (std::size_t phase = 0; phase < n; ++phase) {
    for (std::uint64_t code = 0; code < configs; ++code) {
      const auto from = static_cast<Eigen::Index>(index_of(n, {code, phase}));
      const std::size_t next_phase = (phase + 1) % n;
      const NaiveRing ring = decode(n, code);
      for (const bool flip : {false, true}) {
        const auto to = static_cast<Eigen::Index>(
            index_of(n, {encode(naive_step(ring, flip)), next_phase}));
        k(from, to) += 0.5;
      }
    }
  }
  return k;
}

double quantum_expected_recurrence(const RingConfig& initial) {
  check_chain_size(initial.size());
  const std::size_t configs = std::size_t{1} << initial.size();
  const std::uint64_t target = code_of(initial);
  return expected_return(initial, [&](std::size_t index) { return index % configs == target; });
}

double phase_locked_expected_return(const RingConfig& initial) {
  check_chain_size(initial.size());
  const std::uint64_t target = code_of(initial);
  return expected_return(initial, [&](std::size_t index) { return index == target; });
}

}  // namespace kacring::oracle
