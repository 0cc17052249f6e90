#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bandlab/band_matrix.hpp"

namespace bandlab {

class DensityModel;

struct SolverDiagnostics {
    int ql_sweeps = 0;
    double trace_residual = 0.0;      // |sum(lambda) - trace| / scale
    double frobenius_residual = 0.0;  // |sum(lambda^2) - ||A||_F^2| / scale
};

// Implicit-shift QL with Wilkinson shifts, eigenvalues only. d is the
// diagonal, e the subdiagonal with e[i] connecting d[i-1] and d[i] (e[0]
// ignored). Ascending output. Throws SolverError past the sweep budget.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e,
                                            SolverDiagnostics* diag = nullptr);

// Householder reduction to tridiagonal form, then QL. a is row-major n x n
// and must be symmetric to 1e-12 relative tolerance.
std::vector<double> eigenvalues_dense(std::vector<double> a, int n,
                                      SolverDiagnostics* diag = nullptr);

// Givens band reduction (bulge chasing) to tridiagonal form, then QL.
std::vector<double> eigenvalues_band(const SymmetricBandMatrix& a,
                                     SolverDiagnostics* diag = nullptr);

struct SpectralSample {
    std::vector<double> eigenvalues;  // ascending
    std::string fingerprint;
    SolverDiagnostics diagnostics;
};

// Band-path solve plus the trace and Frobenius consistency residuals.
SpectralSample solve_spectrum(const SymmetricBandMatrix& a, std::string fingerprint = "");

// (1/n) sum lambda_i^k for k = 1..k_max.
std::vector<double> empirical_moments(const std::vector<double>& eigenvalues, int k_max);

// Two-sided Kolmogorov-Smirnov distance between the empirical distribution
// of a sorted sample and a reference cdf.
double ks_distance(const std::vector<double>& sorted_values,
                   const std::function<double(double)>& cdf);
double ks_distance(const std::vector<double>& sorted_values, const DensityModel& model);

// KS distance between two empirical distributions (both inputs sorted).
double two_sample_ks(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace bandlab
