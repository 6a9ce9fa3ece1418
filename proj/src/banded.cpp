#include "vps/banded.hpp"

#include <cstdlib>

#include "vps/errors.hpp"

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab, const int* ldab, int* ipiv,
             int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs, const double* ab,
             const int* ldab, const int* ipiv, double* b, const int* ldb, int* info, std::size_t trans_len);
}

namespace vps {

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), ab_(static_cast<size_t>(ld_) * n, 0.0), ipiv_(n) {}

void BandMatrix::add(int i, int j, double v) {
    if (i - j > kl_ || j - i > ku_ || i < 0 || j < 0 || i >= n_ || j >= n_)
        throw InvalidArgument("band matrix entry outside the band");
    at(i, j) += v;
}

double BandMatrix::get(int i, int j) const {
    if (i - j > kl_ || j - i > ku_) return 0.0;
    return at(i, j);
}

bool BandMatrix::factor() {
    int info = 0;
    dgbtrf_(&n_, &n_, &kl_, &ku_, ab_.data(), &ld_, ipiv_.data(), &info);
    factored_ = (info == 0);
    return factored_;
}

void BandMatrix::solve(std::vector<double>& rhs) const {
    if (!factored_) throw InvalidArgument("band matrix not factored");
    int info = 0, nrhs = 1;
    char t = 'N';
    dgbtrs_(&t, &n_, &kl_, &ku_, &nrhs, ab_.data(), &ld_, ipiv_.data(), rhs.data(), &n_, &info, 1);
    if (info != 0) throw InvalidArgument("band solve failed");
}

}  // namespace vps
