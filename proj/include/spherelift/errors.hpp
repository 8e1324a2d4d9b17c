#ifndef SPHERELIFT_ERRORS_HPP
#define SPHERELIFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spherelift {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input rejected before any numerics ran (shape, symmetry, parameter range).
struct ValidationError : Error {
    enum class Kind {
        NonSquare,
        AsymmetryTooLarge,
        NotOverparameterized,
        NonFinite,
        BadParameter,
        DimensionMismatch,
    };
    Kind kind;
    ValidationError(Kind k, const std::string& msg) : Error(msg), kind(k) {}
};

struct DimensionMismatch : ValidationError {
    explicit DimensionMismatch(const std::string& msg)
        : ValidationError(Kind::DimensionMismatch, msg) {}
};

// Cholesky hit a nonpositive pivot.
struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(const std::string& msg) : Error(msg) {}
};

// A triangular-entry vector left the region where the diagonal is real.
struct OutOfSupport : Error {
    explicit OutOfSupport(const std::string& msg) : Error(msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Random orthonormalization failed twice in a row (measure zero).
struct RankDeficient : Error {
    explicit RankDeficient(const std::string& msg) : Error(msg) {}
};

// Newton step could not keep positive definiteness / reduce the residual.
struct LineSearchStalled : Error {
    explicit LineSearchStalled(const std::string& msg) : Error(msg) {}
};

// Requested brute-force computation exceeds the configured budget.
struct CostGuard : Error {
    explicit CostGuard(const std::string& msg) : Error(msg) {}
};

// Matrix / config file could not be parsed; carries a 1-based line number.
struct ParseError : Error {
    int line;
    ParseError(const std::string& msg, int line_no = 0) : Error(msg), line(line_no) {}
};

}  // namespace spherelift

#endif
