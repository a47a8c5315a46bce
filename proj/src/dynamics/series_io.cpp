#include "qsid/series_io.hpp"

#include <fstream>
#include <sstream>

#include "qsid/error.hpp"

namespace qsid {

Json series_to_json(const TimeSeries& series) {
  Json states = Json::array();
  for (const auto& s : series.states()) states.push_back(matrix_to_json(s.matrix()));
  return Json{{"version", kSeriesFormatVersion},
              {"n", series.dim()},
              {"dt", series.dt()},
              {"w", series.metadata().noise_weight},
              {"seed", series.metadata().seed},
              {"generator", series.metadata().generator},
              {"states", std::move(states)}};
}

TimeSeries series_from_json(const Json& doc, double state_tol) {
  require_version(doc, kSeriesFormatVersion, "time series");
  try {
    const auto n = doc.at("n").get<std::size_t>();
    const auto dt = doc.at("dt").get<double>();
    SeriesMetadata meta;
    meta.noise_weight = doc.value("w", 0.0);
    meta.seed = doc.value("seed", std::uint64_t{0});
    meta.generator = doc.value("generator", std::string());
    std::vector<DensityMatrix> states;
    for (const auto& m : doc.at("states")) {
      ComplexMatrix mat = matrix_from_json(m);
      if (mat.rows() != n || mat.cols() != n) fail(ErrorCode::kSchema, "time series: state does not match n");
      states.emplace_back(std::move(mat), state_tol);
    }
    return {dt, std::move(states), std::move(meta)};
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchema, std::string("time series: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::kIo, "write to '" + path + "' failed");
}

void write_series(const std::string& path, const TimeSeries& series) {
  write_text_file(path, series_to_json(series).dump() + "\n");
}

TimeSeries read_series(const std::string& path, double state_tol) {
  const std::string text = read_text_file(path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchema, "'" + path + "': " + e.what());
  }
  return series_from_json(doc, state_tol);
}

}  // namespace qsid
