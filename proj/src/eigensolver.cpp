#include "bandlab/eigensolver.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

#include "bandlab/density.hpp"
#include "bandlab/errors.hpp"

namespace bandlab {

namespace {

double pythag(double a, double b) {
    const double absa = std::fabs(a);
    const double absb = std::fabs(b);
    if (absa > absb) {
        const double r = absb / absa;
        return absa * std::sqrt(1.0 + r * r);
    }
    if (absb == 0.0) return 0.0;
    const double r = absa / absb;
    return absb * std::sqrt(1.0 + r * r);
}

// Householder reduction of a row-major symmetric matrix to tridiagonal form,
// eigenvalues-only variant (no transform accumulation).
void householder_tridiag(std::vector<double>& a, int n, std::vector<double>& d,
                         std::vector<double>& e) {
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::fabs(a[i * n + k]);
            if (scale == 0.0) {
                e[i] = a[i * n + l];
            } else {
                for (int k = 0; k <= l; ++k) {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                double f = a[i * n + l];
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a[j * n + k] * a[i * n + k];
                    for (int k = j + 1; k <= l; ++k) g += a[k * n + j] * a[i * n + k];
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a[i * n + j];
                    g = e[j] - hh * f;
                    e[j] = g;
                    for (int k = 0; k <= j; ++k)
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
    }
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) d[i] = a[i * n + i];
}

}  // namespace

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e,
                                            SolverDiagnostics* diag) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return {};
    if (static_cast<int>(e.size()) != n)
        throw std::invalid_argument("subdiagonal length must match diagonal");

    // shift to the classic layout: ee[i] couples d[i] and d[i+1]
    std::vector<double> ee(n, 0.0);
    for (int i = 1; i < n; ++i) ee[i - 1] = e[i];

    int total_sweeps = 0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int mdef;
        do {
            for (mdef = l; mdef < n - 1; ++mdef) {
                const double dd = std::fabs(d[mdef]) + std::fabs(d[mdef + 1]);
                if (std::fabs(ee[mdef]) <= DBL_EPSILON * dd) break;
            }
            if (mdef != l) {
                if (iter++ == 30)
                    throw SolverError("tridiagonal QL did not converge within the sweep budget",
                                      total_sweeps, std::fabs(ee[l]));
                ++total_sweeps;
                double g = (d[l + 1] - d[l]) / (2.0 * ee[l]);
                double r = pythag(g, 1.0);
                g = d[mdef] - d[l] + ee[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = mdef - 1; i >= l; --i) {
                    double f = s * ee[i];
                    const double b = c * ee[i];
                    r = pythag(f, g);
                    ee[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        ee[mdef] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                ee[l] = g;
                ee[mdef] = 0.0;
            }
        } while (mdef != l);
    }
    if (diag) diag->ql_sweeps = total_sweeps;
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<double> eigenvalues_dense(std::vector<double> a, int n, SolverDiagnostics* diag) {
    if (n < 0 || static_cast<std::size_t>(n) * n != a.size())
        throw std::invalid_argument("matrix storage does not match its order");
    if (n == 0) return {};

    double max_abs = 0.0;
    double max_asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            max_abs = std::max(max_abs, std::fabs(a[i * n + j]));
            max_asym = std::max(max_asym, std::fabs(a[i * n + j] - a[j * n + i]));
        }
    if (max_asym > 1e-12 * std::max(max_abs, 1.0))
        throw std::invalid_argument("matrix is not symmetric");

    std::vector<double> d, e;
    householder_tridiag(a, n, d, e);
    return tridiagonal_eigenvalues(std::move(d), std::move(e), diag);
}

std::vector<double> eigenvalues_band(const SymmetricBandMatrix& a, SolverDiagnostics* diag) {
    const int n = a.size();
    const int h = a.half_bandwidth();
    if (n == 0) return {};

    std::vector<double> d(n, 0.0), e(n, 0.0);
    if (h <= 1) {
        for (int i = 0; i < n; ++i) d[i] = a.lower(i, i);
        if (h == 1)
            for (int i = 1; i < n; ++i) e[i] = a.lower(i, i - 1);
        return tridiagonal_eigenvalues(std::move(d), std::move(e), diag);
    }

    // working band with one spare diagonal for the chased bulge
    const int hw = std::min(h + 1, n - 1);
    const int stride = hw + 1;
    std::vector<double> w(static_cast<std::size_t>(n) * stride, 0.0);
    auto at = [&w, stride](int i, int j) -> double& {
        return w[static_cast<std::size_t>(j) * stride + (i - j)];
    };
    for (int j = 0; j < n; ++j) {
        const int top = std::min(j + h, n - 1);
        for (int i = j; i <= top; ++i) at(i, j) = a.lower(i, j);
    }

    for (int band = h; band >= 2; --band) {
        for (int j = 0; j + band < n; ++j) {
            int q = j;
            int p = j + band - 1;
            while (true) {
                const double x = at(p, q);
                const double y = at(p + 1, q);
                if (y == 0.0) break;
                const double r = pythag(x, y);
                const double c = x / r;
                const double s = y / r;

                for (int k = std::max(0, p - band); k < p; ++k) {
                    const double wp = at(p, k);
                    const double wq = at(p + 1, k);
                    at(p, k) = c * wp + s * wq;
                    at(p + 1, k) = -s * wp + c * wq;
                }
                const double app = at(p, p);
                const double apq = at(p + 1, p);
                const double aqq = at(p + 1, p + 1);
                at(p, p) = c * c * app + 2.0 * c * s * apq + s * s * aqq;
                at(p + 1, p + 1) = s * s * app - 2.0 * c * s * apq + c * c * aqq;
                at(p + 1, p) = c * s * (aqq - app) + (c * c - s * s) * apq;
                const int low = std::min(n - 1, p + 1 + band);
                for (int r2 = p + 2; r2 <= low; ++r2) {
                    const double wp = at(r2, p);
                    const double wq = at(r2, p + 1);
                    at(r2, p) = c * wp + s * wq;
                    at(r2, p + 1) = -s * wp + c * wq;
                }
                at(p + 1, q) = 0.0;

                q = p;
                p += band;
                if (p + 1 >= n) break;
            }
        }
    }

    for (int i = 0; i < n; ++i) d[i] = at(i, i);
    for (int i = 1; i < n; ++i) e[i] = at(i, i - 1);
    return tridiagonal_eigenvalues(std::move(d), std::move(e), diag);
}

SpectralSample solve_spectrum(const SymmetricBandMatrix& a, std::string fingerprint) {
    SpectralSample out;
    out.fingerprint = std::move(fingerprint);
    out.eigenvalues = eigenvalues_band(a, &out.diagnostics);

    double sum = 0.0, sum_sq = 0.0, max_abs = 0.0;
    for (double v : out.eigenvalues) {
        sum += v;
        sum_sq += v * v;
        max_abs = std::max(max_abs, std::fabs(v));
    }
    const double scale = std::max(1.0, max_abs) * std::max<std::size_t>(a.size(), 1);
    out.diagnostics.trace_residual = std::fabs(sum - a.trace()) / scale;
    out.diagnostics.frobenius_residual =
        std::fabs(sum_sq - a.frobenius_sq()) / std::max(a.frobenius_sq(), 1.0);
    return out;
}

std::vector<double> empirical_moments(const std::vector<double>& eigenvalues, int k_max) {
    std::vector<double> moments(k_max, 0.0);
    if (eigenvalues.empty()) return moments;
    for (double v : eigenvalues) {
        double p = 1.0;
        for (int k = 0; k < k_max; ++k) {
            p *= v;
            moments[k] += p;
        }
    }
    for (double& mk : moments) mk /= static_cast<double>(eigenvalues.size());
    return moments;
}

double ks_distance(const std::vector<double>& sorted_values,
                   const std::function<double(double)>& cdf) {
    const std::size_t n = sorted_values.size();
    if (n == 0) throw std::invalid_argument("KS distance of an empty sample");
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(sorted_values[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

double ks_distance(const std::vector<double>& sorted_values, const DensityModel& model) {
    return ks_distance(sorted_values, [&model](double x) { return model.cdf(x); });
}

double two_sample_ks(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("KS distance of an empty sample");
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                                  static_cast<double>(j) / b.size()));
    }
    return d;
}

}  // namespace bandlab
