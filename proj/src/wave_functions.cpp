#include "bandlab/wave_functions.hpp"

#include <cmath>
#include <string>

#include "bandlab/errors.hpp"

namespace bandlab {

namespace {

// (2*pi)^(-1/4)
constexpr double kPsiZeroNorm = 0.63161877774606470129;

void check_degree(int degree) {
    if (degree < 0) throw DegreeLimitError("negative polynomial degree");
    if (degree > kMaxHermiteDegree)
        throw DegreeLimitError("degree " + std::to_string(degree) + " above cap " +
                               std::to_string(kMaxHermiteDegree));
}

}  // namespace

double hermite(int degree, double x) {
    check_degree(degree);
    if (degree == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int j = 1; j < degree; ++j) {
        double next = x * cur - j * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> wave_function_ladder(int max_degree, double x) {
    check_degree(max_degree);
    std::vector<double> psi(max_degree + 1);
    psi[0] = kPsiZeroNorm * std::exp(-0.25 * x * x);
    if (max_degree == 0) return psi;
    psi[1] = x * psi[0];
    for (int j = 1; j < max_degree; ++j) {
        psi[j + 1] = (x / std::sqrt(j + 1.0)) * psi[j] -
                     std::sqrt(j / (j + 1.0)) * psi[j - 1];
    }
    return psi;
}

double wave_function(int degree, double x) {
    return wave_function_ladder(degree, x).back();
}

WaveFunctionTable::WaveFunctionTable(int max_degree) : max_degree(max_degree) {
    check_degree(max_degree);
}

}  // namespace bandlab
