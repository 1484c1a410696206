#include "tfstar/error.hpp"

namespace tfstar {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InadmissibleConstants: return "InadmissibleConstants";
        case ErrorCode::NonPositiveInput: return "NonPositiveInput";
        case ErrorCode::NumericalBlowup: return "NumericalBlowup";
        case ErrorCode::InvalidHandoff: return "InvalidHandoff";
        case ErrorCode::BracketFailure: return "BracketFailure";
        case ErrorCode::EnvelopeFitFailure: return "EnvelopeFitFailure";
        case ErrorCode::NoRootInBracket: return "NoRootInBracket";
        case ErrorCode::Inadmissible: return "Inadmissible";
        case ErrorCode::NonIntegrable: return "NonIntegrable";
        case ErrorCode::InadmissibleRatio: return "InadmissibleRatio";
        case ErrorCode::RatioNotBracketed: return "RatioNotBracketed";
        case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
        case ErrorCode::InvalidProfile: return "InvalidProfile";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace tfstar
