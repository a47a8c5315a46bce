#pragma once

#include <string>

#include "qsid/dynamics.hpp"
#include "qsid/wire.hpp"

namespace qsid {

inline constexpr int kSeriesFormatVersion = 1;

/// {version, n, dt, w, seed, generator, states: [matrix...]}
Json series_to_json(const TimeSeries& series);
TimeSeries series_from_json(const Json& doc, double state_tol = 1e-6);

void write_series(const std::string& path, const TimeSeries& series);
TimeSeries read_series(const std::string& path, double state_tol = 1e-6);

/// Reads a whole file into a string, ErrorCode::kIo on failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qsid
