#include "bandlab/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bandlab/errors.hpp"
#include "bandlab/quadrature.hpp"
#include "bandlab/wave_functions.hpp"

namespace bandlab {

namespace {

void check_block_order(int m) {
    if (m < 1 || m > kMaxBlockOrder)
        throw SizeLimitError("block order " + std::to_string(m) + " outside [1, " +
                             std::to_string(kMaxBlockOrder) + "]");
}

double gue_part(int m, double u) {
    std::vector<double> psi = wave_function_ladder(m - 1, u);
    double sum = 0.0;
    for (int j = 0; j < m; ++j) sum += psi[j] * psi[j];
    return sum / std::sqrt(static_cast<double>(m));
}

}  // namespace

double gue_density(int m, double x) {
    check_block_order(m);
    return gue_part(m, std::sqrt(static_cast<double>(m)) * x);
}

double goe_density(int m, double x) {
    check_block_order(m);
    const double root_m = std::sqrt(static_cast<double>(m));
    const double u = root_m * x;
    const double radius = 40.0 / root_m;

    double value = gue_part(m, u);

    auto psi_m = [m, root_m](double t) { return wave_function(m, root_m * t); };
    const double xl = std::clamp(x, -radius, radius);
    const double below = integrate_adaptive(psi_m, -radius, xl, 1e-12);
    const double above = integrate_adaptive(psi_m, xl, radius, 1e-12);
    value += std::sqrt(0.5 * m) * wave_function(m - 1, u) * 0.5 * (below - above);

    if (m % 2 == 1) {
        auto psi_even = [m, root_m](double t) { return wave_function(m - 1, root_m * t); };
        const double denom = integrate_adaptive(psi_even, -radius, radius, 1e-12);
        value += wave_function(m - 1, u) / (m * denom);
    }
    return value;
}

DensityModel::DensityModel(EnsembleClass cls, int m, DensityQuadrature quad)
    : class_(cls), m_(m), quad_(quad) {
    check_block_order(m);
    const double root_m = std::sqrt(static_cast<double>(m_));
    radius_x_ = quad_.radius_u / root_m;

    if (class_ == EnsembleClass::Goe) {
        // cumulative integral of psi_m over panels in u = sqrt(m) x coordinates
        const int panels = 512;
        psi_panel_width_ = 2.0 * quad_.radius_u / panels;
        psi_cum_.assign(panels + 1, 0.0);
        const QuadratureRule& rule = gauss_legendre(quad_.panel_order);
        for (int p = 0; p < panels; ++p) {
            const double lo = -quad_.radius_u + p * psi_panel_width_;
            const double hi = lo + psi_panel_width_;
            const double mid = 0.5 * (lo + hi);
            const double half = 0.5 * (hi - lo);
            double sum = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                sum += rule.weights[i] * wave_function(m_, mid + half * rule.nodes[i]);
            psi_cum_[p + 1] = psi_cum_[p] + sum * half;
        }
        psi_total_ = psi_cum_.back();
        if (m_ % 2 == 1) {
            alpha_norm_ = integrate([this](double u) { return wave_function(m_ - 1, u); },
                                    -quad_.radius_u, quad_.radius_u, quad_.total_nodes,
                                    quad_.panel_order);
        }
    }

    // cdf over a uniform grid, one Gauss-Legendre pass per segment
    const int grid = std::max(quad_.cdf_grid, 3);
    grid_lo_ = -radius_x_;
    grid_step_ = 2.0 * radius_x_ / (grid - 1);
    cdf_grid_.assign(grid, 0.0);
    const QuadratureRule& seg_rule = gauss_legendre(8);
    for (int i = 1; i < grid; ++i) {
        const double a = grid_lo_ + (i - 1) * grid_step_;
        const double b = grid_lo_ + i * grid_step_;
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double sum = 0.0;
        for (std::size_t j = 0; j < seg_rule.nodes.size(); ++j)
            sum += seg_rule.weights[j] * pdf_raw(mid + half * seg_rule.nodes[j]);
        cdf_grid_[i] = cdf_grid_[i - 1] + sum * half;
    }
}

double DensityModel::sign_kernel_integral(double x) const {
    const double root_m = std::sqrt(static_cast<double>(m_));
    double u = std::clamp(root_m * x, -quad_.radius_u, quad_.radius_u);
    int panel = static_cast<int>((u + quad_.radius_u) / psi_panel_width_);
    panel = std::clamp(panel, 0, static_cast<int>(psi_cum_.size()) - 2);
    const double lo = -quad_.radius_u + panel * psi_panel_width_;
    const QuadratureRule& rule = gauss_legendre(quad_.panel_order);
    const double mid = 0.5 * (lo + u);
    const double half = 0.5 * (u - lo);
    double partial = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        partial += rule.weights[i] * wave_function(m_, mid + half * rule.nodes[i]);
    const double below = psi_cum_[panel] + partial * half;
    // Int eps(x-t) psi_m dt = (below - total/2) / sqrt(m)
    return (below - 0.5 * psi_total_) / root_m;
}

double DensityModel::pdf_raw(double x) const {
    const double root_m = std::sqrt(static_cast<double>(m_));
    const double u = root_m * x;
    std::vector<double> psi = wave_function_ladder(m_, u);
    double sum = 0.0;
    for (int j = 0; j < m_; ++j) sum += psi[j] * psi[j];
    double value = sum / root_m;
    if (class_ == EnsembleClass::Goe) {
        value += std::sqrt(0.5 * m_) * psi[m_ - 1] * sign_kernel_integral(x);
        if (m_ % 2 == 1) value += psi[m_ - 1] * root_m / (m_ * alpha_norm_);
    }
    return value;
}

double DensityModel::pdf(double x) const { return pdf_raw(x); }

double DensityModel::cdf(double x) const {
    if (x <= grid_lo_) return 0.0;
    const double hi = grid_lo_ + grid_step_ * (cdf_grid_.size() - 1);
    if (x >= hi) return cdf_grid_.back();
    const double pos = (x - grid_lo_) / grid_step_;
    const int i = std::min(static_cast<int>(pos), static_cast<int>(cdf_grid_.size()) - 2);
    const double frac = pos - i;
    return cdf_grid_[i] + frac * (cdf_grid_[i + 1] - cdf_grid_[i]);
}

double DensityModel::moment(int k) const {
    if (k < 0 || k > kMaxDensityMoment)
        throw SizeLimitError("density moment order " + std::to_string(k) + " above cap " +
                             std::to_string(kMaxDensityMoment));
    return integrate([this, k](double x) { return std::pow(x, k) * pdf_raw(x); },
                     -radius_x_, radius_x_, quad_.total_nodes, quad_.panel_order);
}

}  // namespace bandlab
