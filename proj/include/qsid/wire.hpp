#pragma once

#include <json.hpp>

#include "qsid/matrix.hpp"

namespace qsid {

using Json = nlohmann::json;

// Matrices travel as row-major nested arrays, each entry a [re, im] pair.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// Throws ErrorCode::kSchema unless `doc` is an object with `version` equal
/// to `expected`.
void require_version(const Json& doc, int expected, const char* what);

}  // namespace qsid
