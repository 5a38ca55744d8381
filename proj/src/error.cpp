#include "relaydde/error.hpp"

namespace relaydde {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Validation: return "Validation";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::DegenerateStall: return "DegenerateStall";
        case ErrorKind::MIsOne: return "MIsOne";
        case ErrorKind::HZero: return "HZero";
        case ErrorKind::NoCycle: return "NoCycle";
        case ErrorKind::NotApplicable: return "NotApplicable";
        case ErrorKind::StepTooLarge: return "StepTooLarge";
        case ErrorKind::NonFiniteState: return "NonFiniteState";
        case ErrorKind::ShapeLost: return "ShapeLost";
        case ErrorKind::PairingFailed: return "PairingFailed";
    }
    return "Unknown";
}

}  // namespace relaydde
