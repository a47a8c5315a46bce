#pragma once

#include <stdexcept>
#include <string>

namespace qsid {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kValidation = 3,
  kNumerical = 4,
  kIo = 5,
  kSchema = 6,
};

/// Exception type thrown by every qsid module. The code maps one-to-one onto
/// the status values of the C API.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qsid
