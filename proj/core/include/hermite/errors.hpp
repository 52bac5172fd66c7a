#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hermite {

enum class ErrorCode {
    InvalidInput,
    InvalidTable,
    EmbeddingMismatch,
    NotTotallyReal,
    PrecisionExhausted,
    BudgetExceeded,
    SingularMinor,
    Singular,
    ViolationDetected,
    UnsupportedField,
    RamifiedPrime,
    NotResidueSystem,
    NotInP,
    HypothesisViolated,
    WitnessNotFound,
    ThresholdNotMet,
    InvariantBreach,
};

std::string_view to_string(ErrorCode code);

// Process exit status for an error class: 2 input, 3 budget,
// 4 hypothesis or threshold, 5 internal invariant breach.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace hermite
