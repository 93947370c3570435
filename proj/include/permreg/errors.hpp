#pragma once

#include <stdexcept>
#include <string>

namespace permreg {

// Input shapes do not line up (vector lengths, matrix sizes, n = 0, ...).
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Requested value outside its admissible range (k > n, index out of bounds).
struct RangeError : std::out_of_range {
    explicit RangeError(const std::string& msg) : std::out_of_range(msg) {}
};

// A bijection on [n] cannot move exactly one index.
struct InfeasibleSparsityError : std::invalid_argument {
    explicit InfeasibleSparsityError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Design matrix is rank deficient; never silently regularized.
struct SingularDesignError : std::runtime_error {
    explicit SingularDesignError(const std::string& msg) : std::runtime_error(msg) {}
};

// Scalar parameter invalid (nonpositive lambda, sigma, ...).
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Enumeration would exceed the caller-supplied candidate budget.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// Too few retained observations for the requested fit.
struct InsufficientDataError : std::runtime_error {
    explicit InsufficientDataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A theoretical bound's precondition does not hold for these inputs.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace permreg
