#pragma once

#include <vector>

namespace bandlab {

inline constexpr int kMaxHermiteDegree = 200;

// Probabilists' Hermite polynomial H_j, three-term recurrence
// H_{j+1}(x) = x H_j(x) - j H_{j-1}(x).
double hermite(int degree, double x);

// Oscillator wave function
//   psi_j(x) = exp(-x^2/4) H_j(x) / sqrt(sqrt(2*pi) * j!),
// evaluated through the normalized recurrence
//   psi_{j+1} = (x/sqrt(j+1)) psi_j - sqrt(j/(j+1)) psi_{j-1},
// which never leaves the representable range for |x| <= 50, j <= 200.
double wave_function(int degree, double x);

// psi_0(x), ..., psi_{max_degree}(x) from one recurrence pass.
std::vector<double> wave_function_ladder(int max_degree, double x);

struct WaveFunctionTable {
    int max_degree;
    explicit WaveFunctionTable(int max_degree);
    std::vector<double> evaluate(double x) const { return wave_function_ladder(max_degree, x); }
};

}  // namespace bandlab
