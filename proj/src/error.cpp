#include "kronred/error.hpp"

namespace kronred {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::Disconnected: return "Disconnected";
        case ErrorCode::NonpositiveInductance: return "NonpositiveInductance";
        case ErrorCode::NegativeResistance: return "NegativeResistance";
        case ErrorCode::EmptyBoundary: return "EmptyBoundary";
        case ErrorCode::UnknownNodeRef: return "UnknownNodeRef";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::RankDeficientInput: return "RankDeficientInput";
        case ErrorCode::SingularBlock: return "SingularBlock";
        case ErrorCode::Inconsistent: return "Inconsistent";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::InconsistentInitialCondition: return "InconsistentInitialCondition";
        case ErrorCode::NotHomogeneous: return "NotHomogeneous";
        case ErrorCode::ConstraintDrift: return "ConstraintDrift";
        case ErrorCode::InsufficientWindow: return "InsufficientWindow";
        case ErrorCode::NegativeSynthesizedElement: return "NegativeSynthesizedElement";
    }
    return "Unknown";
}

bool is_applicability_error(ErrorCode code) noexcept {
    return code == ErrorCode::NotHomogeneous || code == ErrorCode::NegativeSynthesizedElement;
}

}  // namespace kronred
