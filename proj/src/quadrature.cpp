#include "bandlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "bandlab/errors.hpp"

namespace bandlab {

namespace {

QuadratureRule make_rule(int order) {
    if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev guess, then Newton on the Legendre recurrence.
        double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < order; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = order * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[order - 1 - i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[order - 1 - i] = rule.weights[i];
    }
    return rule;
}

double panel_sum(const std::function<double(double)>& f, double a, double b,
                 const QuadratureRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double whole, double tol, int depth, int max_depth,
                     const QuadratureRule& rule, double* worst) {
    const double mid = 0.5 * (a + b);
    const double left = panel_sum(f, a, mid, rule);
    const double right = panel_sum(f, mid, b, rule);
    const double err = std::fabs(left + right - whole);
    if (err <= tol || b - a < 1e-14) {
        if (err > *worst) *worst = err;
        return left + right;
    }
    if (depth >= max_depth) {
        throw QuadratureError("adaptive quadrature did not converge", err);
    }
    return adaptive_step(f, a, mid, left, tol * 0.5, depth + 1, max_depth, rule, worst) +
           adaptive_step(f, mid, b, right, tol * 0.5, depth + 1, max_depth, rule, worst);
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int total_nodes, int panel_order) {
    if (b <= a) return 0.0;
    if (panel_order < 2) panel_order = 2;
    int panels = total_nodes / panel_order;
    if (panels < 1) panels = 1;
    const QuadratureRule& rule = gauss_legendre(panel_order);
    const double width = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p)
        sum += panel_sum(f, a + p * width, a + (p + 1) * width, rule);
    return sum;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth, double* achieved) {
    if (b <= a) {
        if (achieved) *achieved = 0.0;
        return 0.0;
    }
    const QuadratureRule& rule = gauss_legendre(16);
    double worst = 0.0;
    const double whole = panel_sum(f, a, b, rule);
    double value = adaptive_step(f, a, b, whole, tol, 0, max_depth, rule, &worst);
    if (achieved) *achieved = worst;
    return value;
}

}  // namespace bandlab
