#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "kacring/ring.hpp"

namespace kacring {

enum class InitialMode { Random, Fixed, AllBlack };

struct EnsembleParams {
  std::size_t sites = 1;
  std::size_t runs = 10'000;
  PointerPolicy policy = PointerPolicy::Classical;
  std::uint64_t master_seed = 0;
  /// 0 selects default_cap(policy, sites).
  std::uint64_t cap = 0;
  InitialMode initial_mode = InitialMode::Random;
  /// Required (and only used) when initial_mode == Fixed.
  std::optional<RingConfig> fixed_initial;
  /// Worker threads; 0 uses the hardware concurrency. Never affects results.
  unsigned threads = 0;
  /// Number of leading runs (by run index) whose entropy series are kept.
  std::size_t bundle_runs = 0;

  std::uint64_t effective_cap() const { return cap != 0 ? cap : default_cap(policy, sites); }
  /// Throws std::invalid_argument on inconsistent parameters.
  void validate() const;
};

struct RecurrenceHistogram {
  std::map<std::uint64_t, std::uint64_t> bins;
  std::uint64_t overflow_count = 0;

  std::uint64_t total() const;
};

/// Per entropy level s = 0..N: fraction of a run's recurrence period spent at
/// s, averaged over the runs that recurred.
struct EntropyOccupancy {
  std::vector<double> mean_fraction;
  std::vector<double> stderr_fraction;
  std::size_t included_runs = 0;
  std::size_t excluded_runs = 0;
};

struct BundledRun {
  std::size_t run = 0;
  std::uint64_t recurrence_time = 0;
  /// Entropy at t = 0..recurrence_time; normalized time is t / recurrence_time.
  std::vector<std::uint32_t> entropy;
};

struct TrajectoryBundle {
  std::vector<BundledRun> runs;
};

struct EnsembleResult {
  RecurrenceHistogram histogram;
  EntropyOccupancy occupancy;
  TrajectoryBundle bundle;
  /// Mean and standard error over runs that recurred within the cap.
  double mean_recurrence = 0.0;
  double stderr_recurrence = 0.0;
  std::size_t runs = 0;
};

/// Initial configuration of run `run` and the stream it continues with.
RingConfig initial_config_for(const EnsembleParams& params, RandomStream& rng);

EnsembleResult run_ensemble(const EnsembleParams& params);

struct SweepRow {
  std::size_t sites = 0;
  std::size_t runs = 0;
  double mean_recurrence = 0.0;
  double stderr_recurrence = 0.0;
  std::uint64_t overflow = 0;
};

/// One ensemble per N in [min_sites, max_sites], seeded by
/// derive_seed(template.master_seed, N). A template cap of 0 means the
/// per-N default. Fixed initial mode is rejected.
std::vector<SweepRow> sweep_sites(std::size_t min_sites, std::size_t max_sites,
                                  const EnsembleParams& params_template);

EntropyOccupancy entropy_time_distribution(const EnsembleParams& params);

}  // namespace kacring
