#include "kacring/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kacring::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << kTrajectoryHeader << '\n';
  for (std::size_t t = 0; t < tr.entropy_series.size(); ++t) {
    out << t << ',' << tr.entropy_series[t] << ',' << tr.delta_series[t] << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << r.sites << ',' << r.runs << ',' << format_double(r.mean_recurrence) << ','
        << format_double(r.stderr_recurrence) << ',' << r.overflow << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const RecurrenceHistogram& h) {
  out << kHistogramHeader << '\n';
  for (const auto& [time, count] : h.bins) out << time << ',' << count << '\n';
}

void write_occupancy_csv(std::ostream& out, const EntropyOccupancy& occ) {
  out << kOccupancyHeader << '\n';
  for (std::size_t s = 0; s < occ.mean_fraction.size(); ++s) {
    out << s << ',' << format_double(occ.mean_fraction[s]) << ','
        << format_double(occ.stderr_fraction[s]) << '\n';
  }
}

void write_bundle_csv(std::ostream& out, const TrajectoryBundle& bundle) {
  out << kBundleHeader << '\n';
  for (const auto& run : bundle.runs) {
    const double period = static_cast<double>(run.recurrence_time);
    for (std::size_t t = 0; t < run.entropy.size(); ++t) {
      out << run.run << ',' << t << ',' << format_double(static_cast<double>(t) / period) << ','
          << run.entropy[t] << '\n';
    }
  }
}

void write_params_csv(std::ostream& out, const FitResult& fit) {
  out << "param,value\n";
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    out << fit.names[i] << ',' << format_double(fit.values(static_cast<Eigen::Index>(i))) << '\n';
  }
  out << "residual_sum_squares," << format_double(fit.residual_sum_squares) << '\n';
  out << "converged," << (fit.converged ? 1 : 0) << '\n';
  out << "iterations," << fit.iterations << '\n';
}

void write_curve_csv(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y) {
  out << "x,y_fit\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << format_double(x[i]) << ',' << format_double(y[i]) << '\n';
  }
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("CSV has no column '" + name + "'");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const std::string& f = row[c];
    double v = 0.0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
      throw std::runtime_error("CSV column '" + name + "' has non-numeric value '" + f + "'");
    }
    out.push_back(v);
  }
  return out;
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("CSV input is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split_line(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != table.header.size()) {
      throw std::runtime_error("CSV line " + std::to_string(lineno) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read input CSV '" + path + "'");
  return read_csv(in);
}

}  // namespace kacring::io
