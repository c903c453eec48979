#pragma once

#include <stdexcept>
#include <string>

namespace cq {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotPrime : Error {
    explicit NotPrime(const std::string& m) : Error("NotPrime: " + m) {}
};
struct ReducibleModulus : Error {
    explicit ReducibleModulus(const std::string& m) : Error("ReducibleModulus: " + m) {}
};
struct FieldMismatch : Error {
    explicit FieldMismatch(const std::string& m) : Error("FieldMismatch: " + m) {}
};
struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& m) : Error("DivisionByZero: " + m) {}
};
struct EvenCharacteristic : Error {
    explicit EvenCharacteristic(const std::string& m) : Error("EvenCharacteristic: " + m) {}
};
struct SmallCharacteristic : Error {
    explicit SmallCharacteristic(const std::string& m) : Error("SmallCharacteristic: " + m) {}
};
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& m) : Error("DimensionMismatch: " + m) {}
};
struct DegreeTooLarge : Error {
    explicit DegreeTooLarge(const std::string& m) : Error("DegreeTooLarge: " + m) {}
};
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& m) : Error("BudgetExceeded: " + m) {}
};
struct HypothesisNotMet : Error {
    explicit HypothesisNotMet(const std::string& m) : Error("HypothesisNotMet: " + m) {}
};
struct NotAbsolutelyIrreducible : Error {
    explicit NotAbsolutelyIrreducible(const std::string& m) : Error("NotAbsolutelyIrreducible: " + m) {}
};
struct NonIntegralResult : Error {
    explicit NonIntegralResult(const std::string& m) : Error("NonIntegralResult: " + m) {}
};
struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& m) : Error("PrecisionExhausted: " + m) {}
};
struct SingularJacobian : Error {
    explicit SingularJacobian(const std::string& m) : Error("SingularJacobian: " + m) {}
};

// Carries per-stage trial counts so callers can diagnose which hypothesis
// the input most likely violates.
struct SearchExhausted : Error {
    explicit SearchExhausted(const std::string& m) : Error("SearchExhausted: " + m) {}
};

struct ParseError : Error {
    ParseError(int line, const std::string& m)
        : Error("parse error at line " + std::to_string(line) + ": " + m), line_no(line) {}
    int line_no;
};

} // namespace cq
