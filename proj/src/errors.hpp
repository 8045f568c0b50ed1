#pragma once

#include <stdexcept>
#include <string>

namespace specshift {

// Stable error identifiers, mirrored one-to-one by the C API status codes.
enum class ErrorCode {
    InvalidArgument,
    NonHermitianInput,
    DimensionMismatch,
    QuadratureFailure,
    GuardViolation,
    BranchAmbiguity,
    EndpointDegeneracy,
    CrossingAmbiguity,
    LabelStructureViolation,
    ParseError,
    IoError,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:         return "InvalidArgument";
        case ErrorCode::NonHermitianInput:       return "NonHermitianInput";
        case ErrorCode::DimensionMismatch:       return "DimensionMismatch";
        case ErrorCode::QuadratureFailure:       return "QuadratureFailure";
        case ErrorCode::GuardViolation:          return "GuardViolation";
        case ErrorCode::BranchAmbiguity:         return "BranchAmbiguity";
        case ErrorCode::EndpointDegeneracy:      return "EndpointDegeneracy";
        case ErrorCode::CrossingAmbiguity:       return "CrossingAmbiguity";
        case ErrorCode::LabelStructureViolation: return "LabelStructureViolation";
        case ErrorCode::ParseError:              return "ParseError";
        case ErrorCode::IoError:                 return "IoError";
    }
    return "UnknownError";
}

[[noreturn]] inline void raise(ErrorCode code, const std::string& operation,
                               const std::string& detail) {
    throw Error(code, operation + ": " + std::string(error_code_name(code)) +
                          (detail.empty() ? "" : ": " + detail));
}

} // namespace specshift
