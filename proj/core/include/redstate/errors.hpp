#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace redstate {

enum class ErrorKind {
  dimension,
  not_hermitian,
  not_psd,
  trace_not_one,
  infeasible_rank,
  infeasible,
  precondition,
  domain,
  unsupported_regime,
  invalid_certificate,
  format,
  internal,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::not_hermitian: return "not-hermitian";
    case ErrorKind::not_psd: return "not-psd";
    case ErrorKind::trace_not_one: return "trace-not-one";
    case ErrorKind::infeasible_rank: return "infeasible-rank";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::domain: return "domain";
    case ErrorKind::unsupported_regime: return "unsupported-regime";
    case ErrorKind::invalid_certificate: return "invalid-certificate";
    case ErrorKind::format: return "format";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace redstate
