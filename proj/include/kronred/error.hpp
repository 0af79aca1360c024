#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kronred {

enum class ErrorCode {
    ParseError,
    InvalidArgument,
    DimensionMismatch,
    // network structure
    Disconnected,
    NonpositiveInductance,
    NegativeResistance,
    EmptyBoundary,
    UnknownNodeRef,
    DuplicateId,
    SelfLoop,
    // linear algebra
    RankDeficientInput,
    SingularBlock,
    Inconsistent,
    NotPositiveDefinite,
    // reduction / simulation
    InconsistentInitialCondition,
    NotHomogeneous,
    ConstraintDrift,
    InsufficientWindow,
    NegativeSynthesizedElement,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Input/validation failures map to exit code 2, model-applicability failures to 3.
[[nodiscard]] bool is_applicability_error(ErrorCode code) noexcept;

/// Single exception type for the library. `subject()` names the offending
/// entity (edge id, node id, ...) when there is one; `value()` carries the
/// associated number (component count, residual, condition estimate, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string subject = {}, double value = 0.0)
        : std::runtime_error(std::move(message)),
          code_(code),
          subject_(std::move(subject)),
          value_(value) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::string& subject() const noexcept { return subject_; }
    [[nodiscard]] double value() const noexcept { return value_; }

private:
    ErrorCode code_;
    std::string subject_;
    double value_;
};

}  // namespace kronred
