#pragma once

#include <stdexcept>
#include <string>

namespace sinv {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- polynomial / rational-function algebra ----

struct DivisionByZeroPolynomial : Error {
    DivisionByZeroPolynomial() : Error("polynomial division by zero") {}
};

struct BothZero : Error {
    BothZero() : Error("gcd of two zero polynomials is undefined") {}
};

struct ZeroPolynomial : Error {
    ZeroPolynomial() : Error("zero polynomial has no stability class") {}
};

struct DivisionByZeroRational : Error {
    DivisionByZeroRational() : Error("rational-function division by zero") {}
};

struct PoleAtEvaluationPoint : Error {
    explicit PoleAtEvaluationPoint(const std::string& what) : Error(what) {}
};

// ---- rational matrices ----

struct NotInImage : Error {
    NotInImage() : Error("right-hand side is not in the image of the matrix") {}
};

struct Underdetermined : Error {
    explicit Underdetermined(int free_vars)
        : Error("system is underdetermined with " + std::to_string(free_vars) +
                " free variable(s)"),
          free_variables(free_vars) {}
    int free_variables;
};

struct ZeroEntry : Error {
    ZeroEntry() : Error("averaged left inverse requires every entry nonzero") {}
};

struct RankDeficient : Error {
    RankDeficient() : Error("matrix does not have full column rank") {}
};

// ---- plant modeling ----

struct SpeedLimitExceeded : Error {
    explicit SpeedLimitExceeded(double omega, double limit)
        : Error("motor speed " + std::to_string(omega) + " rev/s exceeds limit " +
                std::to_string(limit) + " rev/s") {}
};

struct NonlinearExponent : Error {
    NonlinearExponent() : Error("linear channel model requires material exponent n = 1") {}
};

struct EmptyChannelList : Error {
    EmptyChannelList() : Error("at least one channel is required") {}
};

struct FitFailed : Error {
    explicit FitFailed(const std::string& what) : Error(what) {}
};

// ---- synthesis ----

struct UnstableInverse : Error {
    explicit UnstableInverse(const std::string& what) : Error(what) {}
};

struct ImproperUnfixable : Error {
    explicit ImproperUnfixable(const std::string& what) : Error(what) {}
};

struct EmptySet : Error {
    EmptySet() : Error("perturbed plant set is empty") {}
};

struct PoleOnGrid : Error {
    explicit PoleOnGrid(double omega)
        : Error("transfer function has a pole at grid frequency " + std::to_string(omega)) {}
};

// ---- simulation / configuration ----

struct ImproperTransferFunction : Error {
    explicit ImproperTransferFunction(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace sinv
