#include "qsid/wire.hpp"

#include <string>

#include "qsid/error.hpp"

namespace qsid {

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::kSchema, "matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) fail(ErrorCode::kSchema, "matrix rows must be non-empty arrays");
  std::vector<Complex> entries;
  entries.reserve(rows * cols);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) fail(ErrorCode::kSchema, "matrix rows have unequal length");
    for (const auto& z : row) {
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        fail(ErrorCode::kSchema, "matrix entry must be a [re, im] pair of numbers");
      }
      entries.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

void require_version(const Json& doc, int expected, const char* what) {
  if (!doc.is_object()) fail(ErrorCode::kSchema, std::string(what) + ": document is not an object");
  const auto it = doc.find("version");
  if (it == doc.end() || !it->is_number_integer()) {
    fail(ErrorCode::kSchema, std::string(what) + ": missing integer 'version' field");
  }
  if (it->get<int>() != expected) {
    fail(ErrorCode::kSchema, std::string(what) + ": unsupported version " + std::to_string(it->get<int>()) +
                                 " (expected " + std::to_string(expected) + ")");
  }
}

}  // namespace qsid
