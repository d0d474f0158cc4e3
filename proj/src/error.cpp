#include "mutsim/error.hpp"

#include <json.hpp>

namespace mutsim {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::UnknownKey: return "UnknownKey";
        case ErrorCode::MalformedValue: return "MalformedValue";
        case ErrorCode::ConstraintViolation: return "ConstraintViolation";
        case ErrorCode::NonDivisible: return "NonDivisible";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::ReplicateFailures: return "ReplicateFailures";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

int exit_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::NoConvergence:
        case ErrorCode::Overflow:
        case ErrorCode::ReplicateFailures:
            return kExitNumerical;
        default:
            return kExitValidation;
    }
}

std::string Error::to_json() const {
    nlohmann::ordered_json j;
    j["error"] = std::string(to_string(code_));
    j["message"] = what();
    if (!key_.empty()) {
        j["key"] = key_;
        j["line"] = line_;
    }
    return j.dump();
}

}  // namespace mutsim
