#include "kacring/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace kacring {

namespace {

// Runs are reduced in fixed blocks of this many consecutive indices, then the
// blocks are merged in index order, so floating-point sums never depend on the
// thread count.
constexpr std::size_t kBlockSize = 64;

using u128 = unsigned __int128;

struct BlockAccumulator {
  std::map<std::uint64_t, std::uint64_t> bins;
  std::uint64_t overflow = 0;
  u128 rec_sum = 0;
  u128 rec_sum_sq = 0;
  std::vector<double> occ_sum;
  std::vector<double> occ_sum_sq;
  std::vector<BundledRun> bundle;
};

void run_block(const EnsembleParams& params, std::size_t block, BlockAccumulator& acc) {
  const std::size_t n = params.sites;
  const std::uint64_t cap = params.effective_cap();
  acc.occ_sum.assign(n + 1, 0.0);
  acc.occ_sum_sq.assign(n + 1, 0.0);
  std::vector<std::uint64_t> level_steps(n + 1);
  std::vector<std::uint32_t> series;

  const std::size_t first = block * kBlockSize;
  const std::size_t last = std::min(first + kBlockSize, params.runs);
  for (std::size_t run = first; run < last; ++run) {
    RandomStream rng(derive_seed(params.master_seed, run));
    const RingConfig initial = initial_config_for(params, rng);
    const bool keep = run < params.bundle_runs;
    std::fill(level_steps.begin(), level_steps.end(), 0);
    series.clear();

    const auto rec = evolve_with(initial, params.policy, rng, cap,
                                 [&](std::uint64_t t, const RingConfig& c) {
                                   const std::size_t s = relative_entropy(c, initial);
                                   // The recurring state closes the period; it is not occupancy.
                                   if (t == 0 || s != 0) ++level_steps[s];
                                   if (keep) series.push_back(static_cast<std::uint32_t>(s));
                                 });
    if (!rec) {
      ++acc.overflow;
      continue;
    }
    const std::uint64_t r = *rec;
    ++acc.bins[r];
    acc.rec_sum += r;
    acc.rec_sum_sq += static_cast<u128>(r) * r;
    const double period = static_cast<double>(r);
    for (std::size_t s = 0; s <= n; ++s) {
      const double f = static_cast<double>(level_steps[s]) / period;
      acc.occ_sum[s] += f;
      acc.occ_sum_sq[s] += f * f;
    }
    if (keep) acc.bundle.push_back({run, r, series});
  }
}

double standard_error(double sum, double sum_sq, double count) {
  if (count < 2.0) return 0.0;
  const double mean = sum / count;
  const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
  return std::sqrt(var / count);
}

}  // namespace

void EnsembleParams::validate() const {
  if (sites == 0) throw std::invalid_argument("ensemble: sites must be >= 1");
  if (runs == 0) throw std::invalid_argument("ensemble: runs must be >= 1");
  if (initial_mode == InitialMode::Fixed) {
    if (!fixed_initial) throw std::invalid_argument("ensemble: fixed initial mode requires a config");
    if (fixed_initial->size() != sites) {
      throw std::invalid_argument("sites/length mismatch: --sites is " + std::to_string(sites) +
                                  " but the initial config has " +
                                  std::to_string(fixed_initial->size()) + " sites");
    }
  }
}

std::uint64_t RecurrenceHistogram::total() const {
  std::uint64_t t = overflow_count;
  for (const auto& [time, count] : bins) t += count;
  return t;
}

RingConfig initial_config_for(const EnsembleParams& params, RandomStream& rng) {
  switch (params.initial_mode) {
    case InitialMode::Random: return RingConfig::random(params.sites, rng);
    case InitialMode::AllBlack: return RingConfig::uniform(params.sites, Color::Black);
    case InitialMode::Fixed: return *params.fixed_initial;
  }
  throw std::logic_error("unhandled initial mode");
}

EnsembleResult run_ensemble(const EnsembleParams& params) {
  params.validate();
  const std::size_t blocks = (params.runs + kBlockSize - 1) / kBlockSize;
  std::vector<BlockAccumulator> partial(blocks);

  unsigned threads = params.threads != 0 ? params.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, blocks));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b = next++; b < blocks; b = next++) run_block(params, b, partial[b]);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  const std::size_t n = params.sites;
  EnsembleResult result;
  result.runs = params.runs;
  u128 rec_sum = 0;
  u128 rec_sum_sq = 0;
  std::vector<double> occ_sum(n + 1, 0.0);
  std::vector<double> occ_sum_sq(n + 1, 0.0);
  for (auto& acc : partial) {
    for (const auto& [time, count] : acc.bins) result.histogram.bins[time] += count;
    result.histogram.overflow_count += acc.overflow;
    rec_sum += acc.rec_sum;
    rec_sum_sq += acc.rec_sum_sq;
    for (std::size_t s = 0; s <= n; ++s) {
      occ_sum[s] += acc.occ_sum[s];
      occ_sum_sq[s] += acc.occ_sum_sq[s];
    }
    for (auto& b : acc.bundle) result.bundle.runs.push_back(std::move(b));
  }

  const std::uint64_t recurred = params.runs - result.histogram.overflow_count;
  auto& occ = result.occupancy;
  occ.included_runs = recurred;
  occ.excluded_runs = result.histogram.overflow_count;
  occ.mean_fraction.assign(n + 1, 0.0);
  occ.stderr_fraction.assign(n + 1, 0.0);
  if (recurred > 0) {
    const double count = static_cast<double>(recurred);
    const long double mean = static_cast<long double>(rec_sum) / recurred;
    result.mean_recurrence = static_cast<double>(mean);
    if (recurred > 1) {
      // Exact integer sums: var = (sum_sq - sum^2 / k) / (k - 1).
      const long double ss = static_cast<long double>(rec_sum_sq) -
                             static_cast<long double>(rec_sum) * mean;
      const long double var = std::max<long double>(0.0L, ss / (recurred - 1));
      result.stderr_recurrence = static_cast<double>(std::sqrt(var / recurred));
    }
    for (std::size_t s = 0; s <= n; ++s) {
      occ.mean_fraction[s] = occ_sum[s] / count;
      occ.stderr_fraction[s] = standard_error(occ_sum[s], occ_sum_sq[s], count);
    }
  }
  return result;
}

std::vector<SweepRow> sweep_sites(std::size_t min_sites, std::size_t max_sites,
                                  const EnsembleParams& params_template) {
  if (min_sites < 1 || min_sites > max_sites) {
    throw std::invalid_argument("sweep: require 1 <= min_sites <= max_sites");
  }
  if (params_template.initial_mode == InitialMode::Fixed) {
    throw std::invalid_argument("sweep: fixed initial configurations cannot span several sizes");
  }
  std::vector<SweepRow> rows;
  for (std::size_t n = min_sites; n <= max_sites; ++n) {
    EnsembleParams p = params_template;
    p.sites = n;
    p.master_seed = derive_seed(params_template.master_seed, n);
    p.bundle_runs = 0;
    const auto r = run_ensemble(p);
    rows.push_back({n, p.runs, r.mean_recurrence, r.stderr_recurrence, r.histogram.overflow_count});
  }
  return rows;
}

EntropyOccupancy entropy_time_distribution(const EnsembleParams& params) {
  return run_ensemble(params).occupancy;
}

}  // namespace kacring
