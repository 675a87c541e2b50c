#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polarq {

enum class ErrorCode {
  invalid_argument,
  invalid_truncation,
  convergence_failure,
  invalid_units,
  degenerate_geometry,
  index_out_of_range,
  capacity,
  solver_failure,
  normalization,
  insufficient_spectrum,
  perturbation_invalid,
  labeling,
  invalid_pair,
  numerical_validity,
  domain,
  grid_mismatch,
  circuit,
  graph,
  size,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_truncation: return "invalid-truncation";
    case ErrorCode::convergence_failure: return "convergence-failure";
    case ErrorCode::invalid_units: return "invalid-units";
    case ErrorCode::degenerate_geometry: return "degenerate-geometry";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::capacity: return "capacity";
    case ErrorCode::solver_failure: return "solver-failure";
    case ErrorCode::normalization: return "normalization";
    case ErrorCode::insufficient_spectrum: return "insufficient-spectrum";
    case ErrorCode::perturbation_invalid: return "perturbation-invalid";
    case ErrorCode::labeling: return "labeling";
    case ErrorCode::invalid_pair: return "invalid-pair";
    case ErrorCode::numerical_validity: return "numerical-validity";
    case ErrorCode::domain: return "domain";
    case ErrorCode::grid_mismatch: return "grid-mismatch";
    case ErrorCode::circuit: return "circuit";
    case ErrorCode::graph: return "graph";
    case ErrorCode::size: return "size";
  }
  return "unknown";
}

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by iterative eigensolvers that exhaust their restart budget.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double residual)
      : Error(ErrorCode::solver_failure,
              what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace detail
}  // namespace polarq
