#pragma once

#include <vector>

namespace vps {

/// General band matrix with LU (partial pivoting) from LAPACK.
class BandMatrix {
public:
    BandMatrix(int n, int kl, int ku);

    int n() const { return n_; }
    void add(int i, int j, double v);
    double get(int i, int j) const;

    /// Factors in place; returns false if singular.
    bool factor();
    /// Solves with the factored matrix, overwriting rhs.
    void solve(std::vector<double>& rhs) const;

private:
    double& at(int i, int j) { return ab_[(kl_ + ku_ + i - j) + j * ld_]; }
    double at(int i, int j) const { return ab_[(kl_ + ku_ + i - j) + j * ld_]; }

    int n_, kl_, ku_, ld_;
    std::vector<double> ab_;
    std::vector<int> ipiv_;
    bool factored_ = false;
};

}  // namespace vps
