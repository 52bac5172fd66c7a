#include "hermite/errors.hpp"

namespace hermite {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidTable: return "InvalidTable";
    case ErrorCode::EmbeddingMismatch: return "EmbeddingMismatch";
    case ErrorCode::NotTotallyReal: return "NotTotallyReal";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::SingularMinor: return "SingularMinor";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::ViolationDetected: return "ViolationDetected";
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::RamifiedPrime: return "RamifiedPrime";
    case ErrorCode::NotResidueSystem: return "NotResidueSystem";
    case ErrorCode::NotInP: return "NotInP";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::WitnessNotFound: return "WitnessNotFound";
    case ErrorCode::ThresholdNotMet: return "ThresholdNotMet";
    case ErrorCode::InvariantBreach: return "InvariantBreach";
    }
    return "Unknown";
}

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::InvalidTable:
    case ErrorCode::EmbeddingMismatch:
    case ErrorCode::NotTotallyReal:
    case ErrorCode::SingularMinor:
    case ErrorCode::Singular:
    case ErrorCode::UnsupportedField:
    case ErrorCode::RamifiedPrime:
    case ErrorCode::NotResidueSystem:
    case ErrorCode::NotInP:
        return 2;
    case ErrorCode::BudgetExceeded:
    case ErrorCode::PrecisionExhausted:
        return 3;
    case ErrorCode::HypothesisViolated:
    case ErrorCode::WitnessNotFound:
    case ErrorCode::ThresholdNotMet:
        return 4;
    case ErrorCode::ViolationDetected:
    case ErrorCode::InvariantBreach:
        return 5;
    }
    return 5;
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace hermite
