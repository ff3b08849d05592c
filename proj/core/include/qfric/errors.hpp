#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qfric {

enum class ErrorKind {
    ParamOutOfRange,
    MaxSubdivisionsExceeded,
    NonFiniteIntegrand,
    PoleTooCloseToEndpoint,
    PoleOutsideInterval,
    InvalidIntegrand,
    BranchBoundaryDegenerate,
    DegenerateDenominator,
    NonpositiveDenominator,
    RegulatorTooSmall,
    NotPositiveSemidefinite,
    KernelQuadratureFailed,
    InvalidKernel,
    GridMismatch,
    FactorizationFailed,
    BlowupDetected,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ParamOutOfRange : public Error {
public:
    ParamOutOfRange(std::string field, double value, std::string allowed);
    const std::string& field() const noexcept { return field_; }
    double value() const noexcept { return value_; }
    const std::string& allowed() const noexcept { return allowed_; }

private:
    std::string field_;
    double value_;
    std::string allowed_;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t n_evals = 0;
};

class QuadratureError : public Error {
public:
    QuadratureError(ErrorKind kind, const std::string& message, QuadratureResult best, double location = 0.0);
    const QuadratureResult& best() const noexcept { return best_; }
    double location() const noexcept { return location_; }

private:
    QuadratureResult best_;
    double location_;
};

}
