#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kacring/ensemble.hpp"
#include "kacring/fitting.hpp"

namespace kacring::io {

/// Shortest decimal that round-trips; locale-independent.
std::string format_double(double v);

void write_trajectory_csv(std::ostream& out, const Trajectory& tr);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_histogram_csv(std::ostream& out, const RecurrenceHistogram& h);
void write_occupancy_csv(std::ostream& out, const EntropyOccupancy& occ);
void write_bundle_csv(std::ostream& out, const TrajectoryBundle& bundle);
void write_params_csv(std::ostream& out, const FitResult& fit);
void write_curve_csv(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y);

inline constexpr const char* kSweepHeader = "n,runs,mean_recurrence,stderr,overflow";
inline constexpr const char* kHistogramHeader = "recurrence_time,count";
inline constexpr const char* kOccupancyHeader = "entropy,mean_fraction,stderr";
inline constexpr const char* kBundleHeader = "run,t,normalized_t,entropy";
inline constexpr const char* kTrajectoryHeader = "t,entropy,delta";

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws std::out_of_range if the column is missing.
  std::size_t column(const std::string& name) const;
  std::vector<double> numeric_column(const std::string& name) const;
};

/// Plain comma-separated text with one header line; no quoting.
/// Throws std::runtime_error on malformed input.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

}  // namespace kacring::io
