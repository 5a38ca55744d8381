#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relaydde {

enum class ErrorKind {
    Validation,
    PreconditionViolated,
    DegenerateStall,
    MIsOne,
    HZero,
    NoCycle,
    NotApplicable,
    StepTooLarge,
    NonFiniteState,
    ShapeLost,
    PairingFailed,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` distinguishes the failure.
/// Validation errors carry the offending field name.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::string field = {})
        : std::runtime_error(message), kind_(kind), field_(std::move(field)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& field() const noexcept { return field_; }

private:
    ErrorKind kind_;
    std::string field_;
};

[[noreturn]] inline void fail_validation(const std::string& field, const std::string& message) {
    throw Error(ErrorKind::Validation, field + ": " + message, field);
}

}  // namespace relaydde
