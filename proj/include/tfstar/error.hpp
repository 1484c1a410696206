// error.hpp
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tfstar {

enum class ErrorCode {
    InadmissibleConstants,
    NonPositiveInput,
    NumericalBlowup,
    InvalidHandoff,
    BracketFailure,
    EnvelopeFitFailure,
    NoRootInBracket,
    Inadmissible,
    NonIntegrable,
    InadmissibleRatio,
    RatioNotBracketed,
    QuadratureNotConverged,
    InvalidProfile,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. The CLI maps codes to exit
/// statuses; everything else just reports what().
class SolverError : public std::runtime_error {
public:
    SolverError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tfstar
