#pragma once

#include <stdexcept>
#include <string>

namespace covnet {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  not_symmetric,
  non_finite,
  convergence,
  numerical,
  schema,
  io,
};

/// Exception type thrown by every covnet module. The code lets the CLI map
/// failures onto distinct exit statuses.
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

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace covnet
