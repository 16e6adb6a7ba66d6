// kacring: command-line driver for Kac ring simulations, ensembles, exact
// oracles and curve fits. All data goes out as CSV; --plot adds an SVG.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "kacring/ensemble.hpp"
#include "kacring/fitting.hpp"
#include "kacring/io.hpp"
#include "kacring/oracle.hpp"
#include "kacring/ring.hpp"
#include "kacring/svg.hpp"

namespace {

using namespace kacring;

constexpr int kExitFailure = 1;
constexpr int kExitBadConfig = 3;
constexpr int kExitLengthMismatch = 4;
constexpr int kExitBadInput = 5;
constexpr std::size_t kQuantumSiteLimit = 20;

struct CliError : std::runtime_error {
  CliError(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
  int exit_code;
};

struct Options {
  std::string mode = "classical";
  std::string sites;
  std::size_t runs = 10'000;
  std::size_t trajectory_runs = 20;
  std::uint64_t seed = 0;
  std::uint64_t cap = 0;
  std::string initial = "random";
  std::string output;
  std::string plot;
  unsigned threads = 0;
  bool force = false;
  // fit
  std::string input;
  std::string kind = "linear";
  std::string x_column;
  std::string y_column;
  std::string curve;
  bool pow2_only = false;
};

struct SiteRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

std::size_t parse_count(const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size() || v == 0) {
    throw CliError(kExitFailure, "invalid site count '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

SiteRange parse_sites(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto n = parse_count(text);
    return {n, n};
  }
  SiteRange r{parse_count(text.substr(0, dots)), parse_count(text.substr(dots + 2))};
  if (r.lo > r.hi) throw CliError(kExitFailure, "site range '" + text + "' is empty");
  return r;
}

std::optional<std::size_t> single_sites(const Options& o) {
  if (o.sites.empty()) return std::nullopt;
  const auto r = parse_sites(o.sites);
  if (r.lo != r.hi) throw CliError(kExitFailure, "this command takes a single --sites value, not a range");
  return r.lo;
}

PointerPolicy policy_of(const Options& o) {
  try {
    return parse_policy(o.mode);
  } catch (const std::invalid_argument& e) {
    throw CliError(kExitFailure, e.what());
  }
}

void check_quantum_size(const Options& o, PointerPolicy policy, std::size_t n) {
  if (policy != PointerPolicy::Classical && n > kQuantumSiteLimit && !o.force) {
    throw CliError(kExitFailure, "stochastic-pointer runs with more than " +
                                     std::to_string(kQuantumSiteLimit) +
                                     " sites need --force (expected recurrence ~2^N steps)");
  }
}

RingConfig parse_config(const std::string& text) {
  try {
    return RingConfig::parse(text);
  } catch (const std::invalid_argument& e) {
    throw CliError(kExitBadConfig, e.what());
  }
}

// Fills sites/initial_mode/fixed_initial of `p` from --sites and --initial.
void resolve_initial(const Options& o, EnsembleParams& p) {
  const auto sites = single_sites(o);
  if (o.initial == "random" || o.initial == "all-black") {
    if (!sites) throw CliError(kExitFailure, "--sites is required with --initial " + o.initial);
    p.sites = *sites;
    p.initial_mode = o.initial == "random" ? InitialMode::Random : InitialMode::AllBlack;
    return;
  }
  RingConfig config = parse_config(o.initial);
  if (sites && *sites != config.size()) {
    throw CliError(kExitLengthMismatch, "sites/length mismatch: --sites is " +
                                            std::to_string(*sites) + " but --initial has " +
                                            std::to_string(config.size()) + " sites");
  }
  p.sites = config.size();
  p.initial_mode = InitialMode::Fixed;
  p.fixed_initial = std::move(config);
}

EnsembleParams ensemble_params(const Options& o) {
  EnsembleParams p;
  p.policy = policy_of(o);
  p.runs = o.runs;
  p.master_seed = o.seed;
  p.cap = o.cap;
  p.threads = o.threads;
  resolve_initial(o, p);
  check_quantum_size(o, p.policy, p.sites);
  return p;
}

// Destination for CSV data: --output, else $KACRING_OUTPUT_DIR/<command>.csv, else stdout.
class Sink {
 public:
  Sink(const Options& o, const std::string& command) {
    std::string path = o.output;
    if (path.empty()) {
      if (const char* dir = std::getenv("KACRING_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
        path = std::string(dir) + "/" + command + ".csv";
      }
    }
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw CliError(kExitFailure, "cannot write output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_plot(const Options& o, const std::function<void(std::ostream&)>& draw) {
  if (o.plot.empty()) return;
  std::ofstream out(o.plot, std::ios::binary);
  if (!out) throw CliError(kExitFailure, "cannot write plot file '" + o.plot + "'");
  draw(out);
}

void cmd_simulate(const Options& o) {
  EnsembleParams p = ensemble_params(o);
  RandomStream rng(derive_seed(o.seed, 0));
  const RingConfig initial = initial_config_for(p, rng);
  const Trajectory tr = evolve(initial, p.policy, rng, p.effective_cap());
  Sink sink(o, "simulate");
  io::write_trajectory_csv(sink.stream(), tr);
  const std::string label = initial.size() <= 64 ? initial.to_string() : "(N=" + std::to_string(initial.size()) + ")";
  if (tr.recurrence_time) {
    std::cerr << "initial " << label << ": recurrence at t=" << *tr.recurrence_time << '\n';
  } else {
    std::cerr << "initial " << label << ": no recurrence within cap " << p.effective_cap() << '\n';
  }
  write_plot(o, [&](std::ostream& out) {
    svg::Series s{"entropy", {}, {}};
    for (std::size_t t = 0; t < tr.entropy_series.size(); ++t) {
      s.x.push_back(double(t));
      s.y.push_back(tr.entropy_series[t]);
    }
    svg::line_chart(out, {"Relative entropy, N=" + std::to_string(p.sites), "t", "entropy"}, {s});
  });
}

void cmd_sweep(const Options& o) {
  if (o.sites.empty()) throw CliError(kExitFailure, "sweep requires --sites A..B");
  const SiteRange range = parse_sites(o.sites);
  EnsembleParams p;
  p.policy = policy_of(o);
  check_quantum_size(o, p.policy, range.hi);
  p.runs = o.runs;
  p.master_seed = o.seed;
  p.cap = o.cap;
  p.threads = o.threads;
  if (o.initial == "all-black") {
    p.initial_mode = InitialMode::AllBlack;
  } else if (o.initial != "random") {
    throw CliError(kExitFailure, "sweep supports --initial random or all-black only");
  }
  const auto rows = sweep_sites(range.lo, range.hi, p);
  Sink sink(o, "sweep");
  io::write_sweep_csv(sink.stream(), rows);
  for (const auto& r : rows) {
    if (r.overflow > 0) std::cerr << "N=" << r.sites << ": " << r.overflow << " runs hit the cap\n";
  }
  write_plot(o, [&](std::ostream& out) {
    svg::Series s{"mean recurrence", {}, {}};
    for (const auto& r : rows) {
      s.x.push_back(double(r.sites));
      s.y.push_back(r.mean_recurrence);
    }
    svg::line_chart(out, {"Recurrence time vs sites (" + o.mode + ")", "N", "mean recurrence"}, {s});
  });
}

void cmd_hist(const Options& o) {
  const EnsembleParams p = ensemble_params(o);
  const auto result = run_ensemble(p);
  Sink sink(o, "hist");
  io::write_histogram_csv(sink.stream(), result.histogram);
  if (result.histogram.overflow_count > 0) {
    std::cerr << result.histogram.overflow_count << " runs hit the cap\n";
  }
  write_plot(o, [&](std::ostream& out) {
    std::vector<double> x, h;
    for (const auto& [time, count] : result.histogram.bins) {
      x.push_back(double(time));
      h.push_back(double(count));
    }
    svg::bar_chart(out, {"Recurrence time distribution, N=" + std::to_string(p.sites) + " (" + o.mode + ")",
                         "recurrence time", "count"},
                   x, h);
  });
}

void cmd_entropy_dist(const Options& o) {
  const EnsembleParams p = ensemble_params(o);
  const auto occ = entropy_time_distribution(p);
  Sink sink(o, "entropy-dist");
  io::write_occupancy_csv(sink.stream(), occ);
  if (occ.excluded_runs > 0) std::cerr << occ.excluded_runs << " runs hit the cap and were excluded\n";
  write_plot(o, [&](std::ostream& out) {
    std::vector<double> x;
    for (std::size_t s = 0; s < occ.mean_fraction.size(); ++s) x.push_back(double(s));
    svg::bar_chart(out, {"Time distribution of entropy, N=" + std::to_string(p.sites) + " (" + o.mode + ")",
                         "entropy", "fraction of period"},
                   x, occ.mean_fraction);
  });
}

void cmd_trajectories(const Options& o) {
  EnsembleParams p = ensemble_params(o);
  p.runs = o.trajectory_runs;
  p.bundle_runs = p.runs;
  const auto result = run_ensemble(p);
  Sink sink(o, "trajectories");
  io::write_bundle_csv(sink.stream(), result.bundle);
  write_plot(o, [&](std::ostream& out) {
    std::vector<svg::Series> series;
    for (const auto& run : result.bundle.runs) {
      svg::Series s;
      for (std::size_t t = 0; t < run.entropy.size(); ++t) {
        s.x.push_back(double(t) / double(run.recurrence_time));
        s.y.push_back(run.entropy[t]);
      }
      series.push_back(std::move(s));
    }
    svg::line_chart(out, {"Relative entropy over runs, N=" + std::to_string(p.sites) + " (" + o.mode + ")",
                          "normalized time", "entropy"},
                    series);
  });
}

bool is_power_of_two(double v) {
  const auto n = static_cast<unsigned long long>(v);
  return double(n) == v && n != 0 && (n & (n - 1)) == 0;
}

void cmd_fit(const Options& o) {
  if (o.input.empty()) throw CliError(kExitFailure, "fit requires --input CSV");
  io::CsvTable table;
  try {
    table = io::read_csv_file(o.input);
  } catch (const std::exception& e) {
    throw CliError(kExitBadInput, e.what());
  }
  const bool cauchy = o.kind == "cauchy";
  if (!cauchy && o.kind != "linear" && o.kind != "geometric") {
    throw CliError(kExitFailure, "unknown fit kind '" + o.kind + "' (linear, geometric, cauchy)");
  }
  const std::string xc = !o.x_column.empty() ? o.x_column : (cauchy ? "entropy" : "n");
  const std::string yc = !o.y_column.empty() ? o.y_column : (cauchy ? "mean_fraction" : "mean_recurrence");
  std::vector<double> xs, ys;
  try {
    xs = table.numeric_column(xc);
    ys = table.numeric_column(yc);
  } catch (const std::exception& e) {
    throw CliError(kExitBadInput, "input CSV '" + o.input + "': " + e.what());
  }
  if (o.pow2_only) {
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (is_power_of_two(xs[i])) {
        fx.push_back(xs[i]);
        fy.push_back(ys[i]);
      }
    }
    xs.swap(fx);
    ys.swap(fy);
  }
  const Eigen::Map<const Eigen::VectorXd> x(xs.data(), Eigen::Index(xs.size()));
  const Eigen::Map<const Eigen::VectorXd> y(ys.data(), Eigen::Index(ys.size()));

  double n_sites = 0.0;
  if (cauchy) n_sites = o.sites.empty() ? (xs.empty() ? 0.0 : x.maxCoeff()) : double(*single_sites(o));

  FitResult fit;
  try {
    fit = o.kind == "linear" ? fit_linear(x, y) : o.kind == "geometric" ? fit_geometric(x, y)
                                                                      : fit_cauchy_like(x, y, n_sites);
  } catch (const std::exception& e) {
    throw CliError(kExitFailure, std::string("fit failed: ") + e.what());
  }
  Sink sink(o, "fit");
  io::write_params_csv(sink.stream(), fit);

  std::vector<double> cx, cy;
  if (!xs.empty()) {
    const double lo = x.minCoeff();
    const double hi = x.maxCoeff();
    constexpr int kSamples = 101;
    for (int i = 0; i < kSamples; ++i) {
      const double xv = lo + (hi - lo) * i / (kSamples - 1);
      double yv = 0.0;
      if (o.kind == "linear") {
        yv = fit.param("slope") * xv + fit.param("intercept");
      } else if (o.kind == "geometric") {
        yv = fit.param("prefactor") * std::pow(fit.param("base"), xv);
      } else {
        yv = cauchy_like(xv, n_sites, fit.param("a"), fit.param("b"), fit.param("c"));
      }
      cx.push_back(xv);
      cy.push_back(yv);
    }
  }
  if (!o.curve.empty()) {
    std::ofstream out(o.curve, std::ios::binary);
    if (!out) throw CliError(kExitFailure, "cannot write curve file '" + o.curve + "'");
    io::write_curve_csv(out, cx, cy);
  }
  write_plot(o, [&](std::ostream& out) {
    svg::line_chart(out, {o.kind + " fit of " + o.input, xc, yc},
                    {svg::Series{"data", xs, ys}, svg::Series{"fit", cx, cy}});
  });
}

void cmd_oracle(const Options& o) {
  const auto sites = single_sites(o);
  if (!sites) throw CliError(kExitFailure, "oracle requires --sites N");
  const PointerPolicy policy = policy_of(o);
  Sink sink(o, "oracle");
  auto& out = sink.stream();
  try {
    if (policy == PointerPolicy::Classical) {
      const auto map = oracle::classical_recurrence_map(*sites);
      out << "config,recurrence_time\n";
      for (std::uint64_t code = 0; code < map.size(); ++code) {
        out << RingConfig::from_code(*sites, code).to_string() << ',' << map[code] << '\n';
      }
    } else {
      out << "config,expected_recurrence\n";
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << std::min<std::size_t>(*sites, 63)); ++code) {
        const RingConfig c = RingConfig::from_code(*sites, code);
        out << c.to_string() << ',' << io::format_double(oracle::quantum_expected_recurrence(c)) << '\n';
      }
    }
  } catch (const std::invalid_argument& e) {
    throw CliError(kExitFailure, e.what());
  }
}

void add_common(CLI::App* sub, Options& o, std::size_t* runs) {
  sub->add_option("--mode", o.mode, "Pointer: classical, quantum or coin")
      ->capture_default_str()
      ->check(CLI::IsMember({"classical", "quantum", "coin"}));
  sub->add_option("--sites", o.sites, "Number of sites N (sweep: inclusive range A..B)");
  sub->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  sub->add_option("--cap", o.cap, "Recurrence cap in steps (0 = 2N classical, 64*2^N otherwise)")
      ->capture_default_str();
  sub->add_option("--output,-o", o.output, "CSV output file (default: $KACRING_OUTPUT_DIR/<command>.csv or stdout)");
  sub->add_option("--plot", o.plot, "Also write an SVG plot to this file");
  sub->add_flag("--force", o.force, "Allow stochastic-pointer runs with N > 20");
  if (runs != nullptr) {
    sub->add_option("--runs", *runs, "Ensemble size")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores); never changes results")
        ->capture_default_str();
  }
  sub->add_option("--initial", o.initial, "Initial config: B/W string (site 0 first), random or all-black")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical and quantum Kac ring simulator"};
  app.set_config("--config", "", "TOML file with flag values; command-line flags take precedence");
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "Evolve one ring and write its trajectory (t,entropy,delta)");
  add_common(simulate, o, nullptr);
  auto* sweep = app.add_subcommand("sweep", "Mean recurrence time for each N in a range");
  add_common(sweep, o, &o.runs);
  auto* hist = app.add_subcommand("hist", "Recurrence-time histogram of an ensemble");
  add_common(hist, o, &o.runs);
  auto* entropy = app.add_subcommand("entropy-dist", "Time distribution of relative entropy");
  add_common(entropy, o, &o.runs);
  auto* traj = app.add_subcommand("trajectories", "Entropy trajectories over normalized time");
  add_common(traj, o, &o.trajectory_runs);

  auto* fit = app.add_subcommand("fit", "Fit sweep or occupancy CSV data");
  fit->add_option("--input,-i", o.input, "Input CSV")->required();
  fit->add_option("--kind", o.kind, "linear, geometric or cauchy")
      ->capture_default_str()
      ->check(CLI::IsMember({"linear", "geometric", "cauchy"}));
  fit->add_option("--x", o.x_column, "x column (default n, or entropy for cauchy)");
  fit->add_option("--y", o.y_column, "y column (default mean_recurrence, or mean_fraction for cauchy)");
  fit->add_option("--sites", o.sites, "N for the Cauchy-like centre N/2 (default: largest x)");
  fit->add_flag("--pow2-only", o.pow2_only, "Keep only rows whose x is a power of two");
  fit->add_option("--curve", o.curve, "Write sampled fitted curve (x,y_fit)");
  fit->add_option("--output,-o", o.output, "Parameter CSV output (default stdout)");
  fit->add_option("--plot", o.plot, "Also write an SVG plot to this file");

  auto* orc = app.add_subcommand("oracle", "Exact recurrence times by enumeration (classical) or linear solve (quantum)");
  orc->add_option("--sites", o.sites, "Number of sites N")->required();
  orc->add_option("--mode", o.mode, "classical or quantum")
      ->capture_default_str()
      ->check(CLI::IsMember({"classical", "quantum", "coin"}));
  orc->add_option("--output,-o", o.output, "CSV output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) cmd_simulate(o);
    else if (*sweep) cmd_sweep(o);
    else if (*hist) cmd_hist(o);
    else if (*entropy) cmd_entropy_dist(o);
    else if (*traj) cmd_trajectories(o);
    else if (*fit) cmd_fit(o);
    else if (*orc) cmd_oracle(o);
  } catch (const CliError& e) {
    std::cerr << "kacring: " << e.what() << '\n';
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "kacring: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
