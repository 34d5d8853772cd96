#pragma once

#include <stdexcept>
#include <string>

namespace involutions {

enum class ErrorKind {
  InvalidArgument,
  TruncationFailure,
  TailNotConverged,
  QuadratureNotConverged,
  DimensionOdd,
  SelfDualityViolation,
  NearDegenerate,
  SingularDeterminant,
  DivergentParameter,
  SizeGuard,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::TruncationFailure: return "truncation-failure";
    case ErrorKind::TailNotConverged: return "tail-not-converged";
    case ErrorKind::QuadratureNotConverged: return "quadrature-not-converged";
    case ErrorKind::DimensionOdd: return "dimension-odd";
    case ErrorKind::SelfDualityViolation: return "self-duality-violation";
    case ErrorKind::NearDegenerate: return "near-degenerate";
    case ErrorKind::SingularDeterminant: return "singular-determinant";
    case ErrorKind::DivergentParameter: return "divergent-parameter";
    case ErrorKind::SizeGuard: return "size-guard";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) throw Error(kind, msg);
}

}  // namespace involutions
