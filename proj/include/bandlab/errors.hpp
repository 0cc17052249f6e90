#pragma once

#include <stdexcept>
#include <string>

namespace bandlab {

// Enumeration or exact-arithmetic request beyond the configured caps.
struct SizeLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Polynomial degree above the cap; raw Hermite values overflow past it.
struct DegreeLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double residual)
        : std::runtime_error(what), achieved_residual(residual) {}
    double achieved_residual;
};

struct SolverError : std::runtime_error {
    SolverError(const std::string& what, int sweeps, double offdiagonal)
        : std::runtime_error(what), sweeps(sweeps), offdiagonal(offdiagonal) {}
    int sweeps;
    double offdiagonal;
};

struct MemoryBudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bandlab
