#pragma once

#include <stdexcept>
#include <string>

namespace confdim {

enum class ErrorCode {
  InvalidArgument,
  EmptyWord,
  Inadmissible,
  Reducible,
  IterationLimit,
  DegenerateSystem,
  Unsupported,
  UnknownName,
  EmptyAdmissibleSet,
};

const char* to_string(ErrorCode code) noexcept;

// All library failures surface as this exception; `code()` tells callers
// which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Non-convergence carries the last residual so the caller can report it.
class IterationLimitError : public Error {
 public:
  IterationLimitError(const std::string& what, double last_residual)
      : Error(ErrorCode::IterationLimit, what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace confdim
