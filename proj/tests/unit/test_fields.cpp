#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "vps/fields.hpp"

using namespace vps;

namespace {

Field random_field(const Grid& g, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    std::vector<double> v(g.n_cells());
    for (double& x : v) x = nd(rng);
    return Field(g, v);
}

Eigen::MatrixXd stencil_matrix(const Grid& g) {
    const int n = g.n_cells();
    const double ih2 = 1.0 / (g.h() * g.h());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        if (j > 0) M(j, j - 1) -= ih2, M(j, j) += ih2;
        if (j + 1 < n) M(j, j + 1) -= ih2, M(j, j) += ih2;
    }
    return M;  // -Δ
}

}  // namespace

TEST(Grid, RejectsTooFewCells) {
    EXPECT_THROW(Grid(1.0, 3), InvalidArgument);
    EXPECT_THROW(Grid(0.0, 16), InvalidArgument);
    Grid g(2.0, 8);
    EXPECT_DOUBLE_EQ(g.h() * g.n_cells(), 2.0);
    EXPECT_DOUBLE_EQ(g.x(0), 0.125);
}

TEST(Field, RejectsNonFinite) {
    Grid g(1.0, 4);
    EXPECT_THROW(Field(g, {0.0, NAN, 1.0, 2.0}), InvalidArgument);
    EXPECT_THROW(Field(g, {0.0, 1.0}), InvalidArgument);
}

TEST(Field, GridMismatch) {
    Field a = Field::zeros(Grid(1.0, 8)), b = Field::zeros(Grid(1.0, 16));
    EXPECT_THROW(inner_l2(a, b), GridMismatch);
    EXPECT_THROW(a + b, GridMismatch);
}

TEST(Mean, ConstantAndCosine) {
    for (int n : {4, 7, 64, 255}) {
        Grid g(1.3, n);
        EXPECT_NEAR(mean(Field::constant(g, 2.5)), 2.5, 1e-15);
        Field c = Field::sample(g, [&](double x) { return std::cos(std::numbers::pi * x / 1.3); });
        EXPECT_NEAR(mean(c), 0.0, 1e-14);
    }
    std::mt19937_64 rng(1);
    Grid g(1.0, 100);
    EXPECT_NEAR(mean(subtract_mean(random_field(g, rng))), 0.0, 1e-13);
}

TEST(Laplacian, ConstantsAndMean) {
    Grid g(1.0, 32);
    EXPECT_EQ(neumann_laplacian(Field::constant(g, 3.0)).max_abs(), 0.0);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) EXPECT_NEAR(mean(neumann_laplacian(random_field(g, rng))), 0.0, 1e-13 * 32 * 32);
}

TEST(Laplacian, DenseEigenOracle) {
    for (int n : {8, 33, 64}) {
        Grid g(1.7, n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(stencil_matrix(g));
        for (int k = 0; k < n; ++k) {
            double lam = neumann_eigenvalue(g, k);
            EXPECT_NEAR(es.eigenvalues()(k), lam, 1e-10 * (1.0 + lam)) << "n=" << n << " k=" << k;
            Field phi = neumann_mode(g, k);
            Field lp = neumann_laplacian(phi);
            for (int j = 0; j < n; ++j) EXPECT_NEAR(lp[j], -lam * phi[j], 1e-10 * (1.0 + lam));
        }
    }
}

TEST(InverseLaplacian, ZeroAndInverseProperty) {
    Grid g(1.0, 128);
    EXPECT_EQ(inv_neumann_laplacian(Field::zeros(g)).max_abs(), 0.0);
    std::mt19937_64 rng(3);
    for (auto method : {InverseMethod::CosineTransform, InverseMethod::ConjugateGradient}) {
        for (int i = 0; i < 10; ++i) {
            Field f = subtract_mean(random_field(g, rng));
            Field w = inv_neumann_laplacian(f, method);
            EXPECT_NEAR(mean(w), 0.0, 1e-12);
            Field r = neumann_laplacian(w) + f;
            EXPECT_LE(norm_l2(r), 1e-11 * norm_l2(f));
            Field back = inv_neumann_laplacian(subtract_mean(-neumann_laplacian(f)), method);
            EXPECT_LE(norm_l2(back - f), 1e-10 * norm_l2(f));
        }
    }
}

TEST(InverseLaplacian, Eigenvector) {
    Grid g(1.0, 64);
    for (int k : {1, 5, 31, 63}) {
        Field phi = neumann_mode(g, k);
        Field w = inv_neumann_laplacian(phi);
        double lam = neumann_eigenvalue(g, k);
        EXPECT_LE(norm_linf(w - phi * (1.0 / lam)), 1e-12 / lam * 10);
    }
}

TEST(InverseLaplacian, NonZeroMean) {
    Grid g(1.0, 16);
    EXPECT_THROW(inv_neumann_laplacian(Field::constant(g, 1.0)), NonZeroMean);
    EXPECT_THROW(norm_hm1av(Field::constant(g, 1.0)), NonZeroMean);
    EXPECT_THROW(norm_H(Field::constant(g, 1.0), Field::zeros(g)), NonZeroMean);
}

TEST(Norms, L2) {
    Grid g(1.0, 50);
    EXPECT_NEAR(norm_l2(Field::constant(g, 1.0)), 1.0, 1e-15);
    for (int k : {1, 7, 49}) EXPECT_NEAR(norm_l2(neumann_mode(g, k)) * norm_l2(neumann_mode(g, k)), 0.5, 1e-12);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        Field f = random_field(g, rng), h = random_field(g, rng);
        EXPECT_LE(std::abs(inner_l2(f, h)), norm_l2(f) * norm_l2(h) * (1 + 1e-14));
        EXPECT_DOUBLE_EQ(inner_l2(f, h), inner_l2(h, f));
    }
}

TEST(Norms, H1Seminorm) {
    Grid g(1.0, 40);
    EXPECT_EQ(norm_h1av(Field::constant(g, 4.0)), 0.0);
    for (int k : {1, 3, 20}) {
        Field phi = neumann_mode(g, k);
        double l2 = norm_l2(phi);
        EXPECT_NEAR(norm_h1av(phi) * norm_h1av(phi), neumann_eigenvalue(g, k) * l2 * l2,
                    1e-10 * neumann_eigenvalue(g, k));
    }
    for (int n : {64, 128, 256}) {
        Grid gn(1.0, n);
        Field ramp = Field::sample(gn, [](double x) { return x; });
        // faces cover (h/2, 1 - h/2): ‖∇f‖² = 1 - h
        EXPECT_NEAR(norm_h1av(ramp) * norm_h1av(ramp), 1.0 - gn.h(), 1e-12);
    }
}

TEST(Norms, Hm1AndH) {
    Grid g(2.0, 64);
    EXPECT_EQ(norm_hm1av(Field::zeros(g)), 0.0);
    EXPECT_EQ(norm_H(Field::zeros(g), Field::zeros(g)), 0.0);
    Field dz = Field::sample(g, [](double x) { return std::sin(x); });
    EXPECT_NEAR(norm_H(Field::zeros(g), dz), norm_l2(dz), 1e-15);
    for (int k : {1, 4, 17}) {
        Field phi = neumann_mode(g, k);
        double lam = neumann_eigenvalue(g, k);
        double l2 = norm_l2(phi);
        EXPECT_NEAR(norm_hm1av(phi) * norm_hm1av(phi), l2 * l2 / lam, 1e-12);
        EXPECT_NEAR(norm_H(phi, Field::zeros(g)), l2 / std::sqrt(lam), 1e-12);
    }
}

TEST(Properties, SummationByParts) {
    Grid g(1.0, 77);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        Field f = random_field(g, rng), h = random_field(g, rng);
        double lhs = inner_l2(-neumann_laplacian(f), h), rhs = inner_h1av(f, h);
        EXPECT_NEAR(lhs, rhs, 1e-12 * (std::abs(lhs) + norm_h1av(f) * norm_h1av(h)));
    }
}

TEST(Properties, DiscreteInterpolation) {
    Grid g(1.0, 128);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 1000; ++i) {
        Field f = subtract_mean(random_field(g, rng));
        double l2 = inner_l2(f, f);
        EXPECT_LE(l2, norm_h1av(f) * norm_hm1av(f) * (1.0 + 1e-12));
    }
}

TEST(Properties, H2RatioBounded) {
    // ‖f - mean f‖_{H²} / ‖Δf‖ stays bounded at fixed N
    Grid g(1.0, 64);
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        Field f = random_field(g, rng);
        worst = std::max(worst, norm_h2(subtract_mean(f)) / norm_l2(neumann_laplacian(f)));
    }
    // smallest nonzero eigenvalue controls the ratio
    double lam1 = neumann_eigenvalue(g, 1);
    EXPECT_LE(worst, std::sqrt(1.0 + 1.0 / lam1 + 1.0 / (lam1 * lam1)) * (1 + 1e-12));
}
