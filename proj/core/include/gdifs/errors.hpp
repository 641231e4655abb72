#pragma once

#include <stdexcept>
#include <string>

namespace gdifs {

// Base of every error the library throws deliberately.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- configuration / validation (CLI exit code 2) ---------------------------

class ConfigError : public Error {
public:
    using Error::Error;
};

// parse_config collects every violation before throwing.
class ValidationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Quotient class would merge the identity with a non-identity vertex.
class InvalidQuotient : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class IoError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// --- budgets (CLI exit code 3) ----------------------------------------------

class BudgetError : public Error {
public:
    using Error::Error;
};

// Neighbor-graph frontier exceeded max_vertices; the IFS may not be finite type.
class FiniteTypeBudgetExceeded : public BudgetError {
public:
    using BudgetError::BudgetError;
};

// GIFS recursion produced more sets than the configured cap.
class BudgetExceeded : public BudgetError {
public:
    using BudgetError::BudgetError;
};

// Subset construction exceeded the configured number of determinized states.
class StateBudgetExceeded : public BudgetError {
public:
    using BudgetError::BudgetError;
};

// --- numeric / algebraic failures (CLI exit code 4) --------------------------

class NumericError : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public NumericError {
public:
    using NumericError::NumericError;
};

// gcd(divisor, min_poly) is non-constant: the modulus is reducible.
class NonInvertible : public NumericError {
public:
    using NumericError::NumericError;
};

class RootRefinementFailed : public NumericError {
public:
    using NumericError::NumericError;
};

class NonConvergence : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace gdifs
