#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qsid/error.hpp"
#include "qsid/harness.hpp"
#include "qsid/series_io.hpp"

namespace qsid {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) fail(ErrorCode::kInvalidArgument, "quantile of empty data");
  if (!(q >= 0.0 && q <= 1.0)) fail(ErrorCode::kInvalidArgument, "quantile level must lie in [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::size_t histogram_bin(double f_min) {
  const double clamped = std::clamp(f_min, 0.0, 1.0);
  return std::min(kHistogramBins - 1, static_cast<std::size_t>(std::floor(clamped * kHistogramBins)));
}

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records) {
  std::map<std::pair<IdentificationMethod, double>, std::pair<CellSummary, std::vector<double>>> cells;
  for (const auto& r : records) {
    auto& [cell, values] = cells[{r.method, r.w}];
    cell.method = r.method;
    cell.w = r.w;
    ++cell.trials;
    if (!r.converged) continue;
    ++cell.converged;
    if (r.f_min) {
      values.push_back(*r.f_min);
      ++cell.histogram[histogram_bin(*r.f_min)];
    }
  }
  std::vector<CellSummary> out;
  out.reserve(cells.size());
  for (auto& [key, entry] : cells) {
    auto& [cell, values] = entry;
    if (!values.empty()) {
      std::sort(values.begin(), values.end());
      cell.q1 = quantile_sorted(values, 0.25);
      cell.median = quantile_sorted(values, 0.5);
      cell.q3 = quantile_sorted(values, 0.75);
    }
    out.push_back(cell);
  }
  return out;
}

std::vector<TrialRecord> read_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::vector<TrialRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(record_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      fail(ErrorCode::kSchema, path + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      fail(ErrorCode::kSchema, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

namespace {

std::string fmt_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_optional(const std::optional<double>& v) { return v ? fmt_number(*v) : std::string(); }

}  // namespace

std::string summary_csv(const std::vector<CellSummary>& cells) {
  std::ostringstream os;
  os << "method,w,trials,converged,convergence_rate,f_min_q1,f_min_median,f_min_q3";
  for (std::size_t b = 0; b < kHistogramBins; ++b) {
    char buf[16];
    std::snprintf(buf, sizeof buf, ",bin_%02zu", b);
    os << buf;
  }
  os << '\n';
  for (const auto& c : cells) {
    os << method_name(c.method) << ',' << fmt_number(c.w) << ',' << c.trials << ',' << c.converged << ','
       << fmt_number(c.convergence_rate()) << ',' << fmt_optional(c.q1) << ',' << fmt_optional(c.median) << ','
       << fmt_optional(c.q3);
    for (std::size_t count : c.histogram) os << ',' << count;
    os << '\n';
  }
  return os.str();
}

std::vector<CellSummary> report(const std::string& records_path, const std::string& out_csv) {
  std::vector<CellSummary> cells = summarize(read_records(records_path));
  write_text_file(out_csv, summary_csv(cells));
  return cells;
}

}  // namespace qsid
