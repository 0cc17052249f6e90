#pragma once

#include <vector>

namespace bandlab {

enum class EnsembleClass { Gue, Goe };

inline constexpr int kMaxBlockOrder = 64;
inline constexpr int kMaxDensityMoment = 16;

// Limit density of the GUE family at block order m:
//   f_m(x) = m^{-1/2} * sum_{j<m} psi_j(sqrt(m) x)^2.
double gue_density(int m, double x);

// GOE-family analogue: the sum above plus a sign-kernel correction term
//   sqrt(m/2) * psi_{m-1}(sqrt(m) x) * Int eps(x - t) psi_m(sqrt(m) t) dt,
// eps(u) = sign(u)/2 (eps(0) = 0), plus, for odd m = 2s+1, the tail term
//   psi_{2s}(sqrt(m) x) / (m * Int psi_{2s}(sqrt(m) t) dt).
// Evaluated pointwise with adaptive quadrature on a truncated domain.
double goe_density(int m, double x);

struct DensityQuadrature {
    int total_nodes = 2048;
    int panel_order = 16;
    double radius_u = 40.0;  // truncation |u| <= radius_u in scaled coordinates u = sqrt(m) x
    int cdf_grid = 4001;
};

// Cached evaluator: pdf, cdf (monotone piecewise-linear over a uniform grid)
// and quadrature moments for one ensemble class and block order.
class DensityModel {
public:
    DensityModel(EnsembleClass cls, int m, DensityQuadrature quad = {});

    EnsembleClass ensemble_class() const { return class_; }
    int block_order() const { return m_; }
    double radius() const { return radius_x_; }

    double pdf(double x) const;
    double cdf(double x) const;
    double moment(int k) const;  // Int x^k pdf(x) dx, k <= 16
    double total_mass() const { return cdf_grid_.back(); }

private:
    double sign_kernel_integral(double x) const;  // Int eps(x-t) psi_m(sqrt(m) t) dt, from cache
    double pdf_raw(double x) const;

    EnsembleClass class_;
    int m_;
    DensityQuadrature quad_;
    double radius_x_;

    // cumulative integral of psi_m in scaled coordinates (GOE only)
    std::vector<double> psi_cum_;
    double psi_panel_width_ = 0.0;
    double psi_total_ = 0.0;
    double alpha_norm_ = 0.0;  // Int psi_{2s}(u) du for odd m

    std::vector<double> cdf_grid_;
    double grid_lo_ = 0.0;
    double grid_step_ = 0.0;
};

}  // namespace bandlab
