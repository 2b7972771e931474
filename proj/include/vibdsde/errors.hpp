#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vibdsde {

enum class ErrorCode {
    BadParameter,
    DomainViolation,
    GeometryUndefined,
    ShapeMismatch,
    RootFindFailure,
    OutOfRange,
    NonConvergence,
    HypothesisViolation,
    QuadratureFailure,
    ConfigParse,
    Validation,
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::BadParameter: return "BadParameter";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::GeometryUndefined: return "GeometryUndefined";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::RootFindFailure: return "RootFindFailure";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::HypothesisViolation: return "HypothesisViolation";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::ConfigParse: return "ConfigParse";
        case ErrorCode::Validation: return "Validation";
    }
    return "Unknown";
}

class SolverError : public std::runtime_error {
  public:
    SolverError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

// Picard failure keeps the per-iteration gap history for diagnosis.
class NonConvergenceError : public SolverError {
  public:
    NonConvergenceError(const std::string& what, std::vector<double> residuals)
        : SolverError(ErrorCode::NonConvergence, what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const { return residuals_; }

  private:
    std::vector<double> residuals_;
};

}  // namespace vibdsde
