#pragma once

#include <stdexcept>
#include <string>

namespace tomolab {

enum class ErrorKind {
  Domain,
  Overflow,
  Singularity,
  SingularSystem,
  Mismatch,
  SpecOutOfDomain,
  Nonphysical,
  Truncation,
  ZeroDenominator,
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown when a dense factorization is numerically singular.
class SingularSystemError : public Error {
 public:
  SingularSystemError(const std::string& what, double condition)
      : Error(ErrorKind::SingularSystem, what), condition_(condition) {}
  double condition_estimate() const noexcept { return condition_; }

 private:
  double condition_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace tomolab
