#include "qfric/errors.hpp"

#include <sstream>

namespace qfric {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::MaxSubdivisionsExceeded: return "MaxSubdivisionsExceeded";
    case ErrorKind::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorKind::PoleTooCloseToEndpoint: return "PoleTooCloseToEndpoint";
    case ErrorKind::PoleOutsideInterval: return "PoleOutsideInterval";
    case ErrorKind::InvalidIntegrand: return "InvalidIntegrand";
    case ErrorKind::BranchBoundaryDegenerate: return "BranchBoundaryDegenerate";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::NonpositiveDenominator: return "NonpositiveDenominator";
    case ErrorKind::RegulatorTooSmall: return "RegulatorTooSmall";
    case ErrorKind::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorKind::KernelQuadratureFailed: return "KernelQuadratureFailed";
    case ErrorKind::InvalidKernel: return "InvalidKernel";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::FactorizationFailed: return "FactorizationFailed";
    case ErrorKind::BlowupDetected: return "BlowupDetected";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
{
}

static std::string param_message(const std::string& field, double value, const std::string& allowed)
{
    std::ostringstream os;
    os.precision(17);
    os << field << " = " << value << " outside allowed range " << allowed;
    return os.str();
}

ParamOutOfRange::ParamOutOfRange(std::string field, double value, std::string allowed)
    : Error(ErrorKind::ParamOutOfRange, param_message(field, value, allowed)),
      field_(std::move(field)), value_(value), allowed_(std::move(allowed))
{
}

QuadratureError::QuadratureError(ErrorKind kind, const std::string& message, QuadratureResult best, double location)
    : Error(kind, message), best_(best), location_(location)
{
}

}
