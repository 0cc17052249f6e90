#pragma once

#include <cstddef>
#include <vector>

namespace bandlab {

// Symmetric band matrix, lower half stored column-wise: entry (i, j) with
// j <= i <= j + h lives at data[j * (h + 1) + (i - j)].
class SymmetricBandMatrix {
public:
    SymmetricBandMatrix(int n, int half_bandwidth)
        : n_(n),
          h_(half_bandwidth < n ? half_bandwidth : n - 1),
          data_(static_cast<std::size_t>(n) * (h_ + 1), 0.0) {}

    int size() const { return n_; }
    int half_bandwidth() const { return h_; }
    std::size_t bytes() const { return data_.size() * sizeof(double); }

    double operator()(int i, int j) const {
        if (i < j) std::swap(i, j);
        if (i - j > h_) return 0.0;
        return data_[static_cast<std::size_t>(j) * (h_ + 1) + (i - j)];
    }

    // i in [j, j + h]
    double& lower(int i, int j) {
        return data_[static_cast<std::size_t>(j) * (h_ + 1) + (i - j)];
    }
    double lower(int i, int j) const {
        return data_[static_cast<std::size_t>(j) * (h_ + 1) + (i - j)];
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < n_; ++i) t += lower(i, i);
        return t;
    }

    double frobenius_sq() const {
        double sum = 0.0;
        for (int j = 0; j < n_; ++j) {
            const int top = j + h_ < n_ ? j + h_ : n_ - 1;
            for (int i = j; i <= top; ++i) {
                const double v = lower(i, j);
                sum += (i == j) ? v * v : 2.0 * v * v;
            }
        }
        return sum;
    }

    std::vector<double> to_dense() const {
        std::vector<double> a(static_cast<std::size_t>(n_) * n_, 0.0);
        for (int j = 0; j < n_; ++j) {
            const int top = j + h_ < n_ ? j + h_ : n_ - 1;
            for (int i = j; i <= top; ++i) {
                const double v = lower(i, j);
                a[static_cast<std::size_t>(i) * n_ + j] = v;
                a[static_cast<std::size_t>(j) * n_ + i] = v;
            }
        }
        return a;
    }

private:
    int n_;
    int h_;
    std::vector<double> data_;
};

}  // namespace bandlab
