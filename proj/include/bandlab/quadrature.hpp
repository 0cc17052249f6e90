#pragma once

#include <functional>
#include <vector>

namespace bandlab {

struct QuadratureRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule of the given order, cached after first use.
const QuadratureRule& gauss_legendre(int order);

// Composite Gauss-Legendre over [a, b]: total_nodes evaluations split into
// equal panels of panel_order points each.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int total_nodes = 2048, int panel_order = 16);

// Bisecting Gauss-Legendre with an interval-level error estimate. Throws
// QuadratureError (carrying the achieved residual) when the tolerance is
// unreachable within the depth limit.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-11, int max_depth = 24,
                          double* achieved = nullptr);

}  // namespace bandlab
