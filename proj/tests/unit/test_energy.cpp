#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vps/diagnostics.hpp"
#include "vps/energy.hpp"

using namespace vps;

TEST(Energy, ConstantStates) {
    Grid g(1.0, 64);
    Model dw = default_double_well();
    Field u = Field::constant(g, 0.3);
    EnergyBreakdown e = energy(make_state(u, u.map(dw.K)), dw);
    EXPECT_NEAR(e.total, 0.0441, 1e-15);
    EXPECT_EQ(e.gradient_part, 0.0);
    EXPECT_EQ(e.stress_part, 0.0);

    EnergyBreakdown s = energy(make_state(Field::zeros(g), Field::constant(g, 1.0)), dw);
    EXPECT_NEAR(s.total, 0.5, 1e-15);
    EXPECT_NEAR(energy(make_state(Field::zeros(g), Field::constant(g, 1.0)), dw, 0.5).total, 2.0, 1e-14);
    EXPECT_THROW(energy(make_state(u, u), dw, 0.0), InvalidArgument);
}

TEST(Energy, PartsSumAndSigns) {
    Model m = default_asymmetric_A_tau();
    StateSampler gen(Grid(1.0, 128), 11);
    for (int i = 0; i < 50; ++i) {
        EnergyBreakdown e = energy(gen.state(m, 0.4), m, 0.3);
        EXPECT_NEAR(e.total, e.gradient_part + e.potential_part + e.stress_part, 1e-12 * std::abs(e.total));
        EXPECT_GE(e.gradient_part, 0.0);
        EXPECT_GE(e.stress_part, 0.0);
    }
}

TEST(Energy, GridRefinement) {
    Model m = default_asymmetric_A_tau();
    auto at = [&](int n) {
        Grid g(1.0, n);
        Field u = Field::sample(g, [](double x) { return 0.5 + 0.1 * std::cos(M_PI * x); });
        return energy(make_state(u, u.map(m.K) + Field::constant(g, 0.05)), m).total;
    };
    double ref = at(4096);
    double e1 = std::abs(at(256) - ref), e2 = std::abs(at(512) - ref);
    EXPECT_LT(e1, 1e-4);
    EXPECT_NEAR(e1 / e2, 4.0, 0.5);  // second order
}

TEST(DeltaEnergy, PurePhase) {
    Grid g(1.0, 32);
    Model m = default_asymmetric_A_tau();
    Field u = Field::constant(g, 0.8);
    Covector d = delta_energy(make_state(u, u.map(m.K)), m);
    EXPECT_LE(d.mu.max_abs(), 1e-15);
    EXPECT_EQ(d.xi.max_abs(), 0.0);

    Model c = constant_model(2.0, 1.0);
    Covector dc = delta_energy(make_state(Field::constant(g, 0.25), Field::constant(g, 1.5)), c, 0.5);
    EXPECT_LE(dc.mu.max_abs(), 1e-14);
    for (int j = 0; j < 32; ++j) EXPECT_NEAR(dc.xi[j], (1.5 - 2.0 * 0.25) / 0.25, 1e-13);
}

TEST(DeltaEnergy, DirectionalDerivative) {
    Model m = default_asymmetric_A_tau();
    Grid g(1.0, 64);
    StateSampler gen(g, 12);
    for (double eps : {1.0, 0.3}) {
        for (int i = 0; i < 10; ++i) {
            State s = gen.state(m, 0.5);
            Field du = gen.profile(1.0), dz = gen.profile(1.0, true);
            Covector d = delta_energy(s, m, eps);
            double pred = inner_l2(d.mu, du) + inner_l2(d.xi, dz);
            double e0 = energy(s, m, eps).total;
            double err[2];
            int k = 0;
            for (double t : {1e-4, 1e-5}) {
                State p{s.u + du * t, s.z + dz * t, s.mass};
                err[k++] = std::abs((energy(p, m, eps).total - e0) / t - pred);
            }
            EXPECT_LT(err[1], 1e-3 * (1 + std::abs(pred)));
            EXPECT_NEAR(err[0] / err[1], 10.0, 1.0);  // first order in t
        }
    }
}

TEST(DeltaEnergy, MeanTerm) {
    Grid g(1.0, 16);
    Model dw = default_double_well();
    EXPECT_EQ(a_mean(make_state(Field::zeros(g), Field::zeros(g)), dw), 0.0);
    Field h = Field::constant(g, 0.5);
    EXPECT_NEAR(a_mean(make_state(h, h.map(dw.K)), dw), 0.0, 1e-15);

    Model m = default_asymmetric_A_tau();
    StateSampler gen(Grid(1.0, 100), 13);
    for (int i = 0; i < 20; ++i) {
        State s = gen.state(m, 0.3);
        Covector d = delta_energy(s, m, 0.7);
        EXPECT_NEAR(mean(d.mu), 0.0, 1e-13);
        // μ + 𝔞 reconstructs the unprojected chemical potential
        Field q = stress_field(s, m);
        Field raw = -neumann_laplacian(s.u) + s.u.map(m.f) - s.u.map(m.A).times(q) * (1 / 0.49);
        EXPECT_NEAR(mean(raw), a_mean(s, m, 0.7), 1e-12 * (1 + raw.max_abs()));
        EXPECT_LE(norm_linf(d.mu + Field::constant(s.u.grid(), a_mean(s, m, 0.7)) - raw), 1e-10 * (1 + raw.max_abs()));
    }
}

TEST(Moduli, Examples) {
    Grid g(1.0, 8);
    Model m = default_asymmetric_A_tau();
    Field u = Field::sample(g, [](double x) { return x; });
    State relaxed = make_state(u, u.map(m.K));
    EXPECT_DOUBLE_EQ(lambda_mod(relaxed, m), -0.125);
    EXPECT_DOUBLE_EQ(Lambda_mod(relaxed, m, 3.0), 3.0);
    EXPECT_EQ(omega_mod(relaxed, m), 0.0);

    Model c = constant_model(1.0, 1.0);
    State stressed = make_state(u, u + Field::constant(g, 5.0));
    EXPECT_DOUBLE_EQ(lambda_mod(stressed, c), -0.125);
    EXPECT_DOUBLE_EQ(Lambda_mod(stressed, c, 2.0), 2.0);
    EXPECT_EQ(omega_mod(stressed, c), 0.0);

    // ‖A'‖ = 1.5, ‖z - K(u)‖∞ = 2
    State two = make_state(u, u.map(m.K) + Field::constant(g, 2.0));
    EXPECT_NEAR(lambda_mod(two, m), -2.0, 1e-12);
    // (1 + 4.2·2)² and 2.7²·4
    EXPECT_NEAR(Lambda_mod(two, m, 1.0), 9.4 * 9.4, 1e-10);
    EXPECT_NEAR(omega_mod(two, m), 2.7 * 2.7 * 4.0, 1e-10);
    State one = make_state(u, u.map(m.K) - Field::constant(g, 1.0));
    EXPECT_NEAR(Lambda_mod(one, m, 1.0), 27.04, 1e-10);
    EXPECT_GT(kDefaultC1, 0.0);
}

TEST(EnergyCH, Examples) {
    Grid g(2.0, 32);
    Model dw = default_double_well();
    EXPECT_EQ(energy_ch(Field::zeros(g), dw), 0.0);
    EXPECT_NEAR(energy_ch(Field::constant(g, 0.5), dw), 2.0 / 16.0, 1e-15);
    Model m = default_asymmetric_A_tau();
    Field u = Field::sample(g, [](double x) { return std::sin(3 * x); });
    EXPECT_EQ(energy(make_state(u, u.map(m.K)), m, 0.1).total, energy_ch(u, m));
}

TEST(GammaRecovery, ExactAcrossEps) {
    Model m = default_asymmetric_A_tau();
    Grid g(1.0, 64);
    StateSampler gen(g, 14);
    Field u0 = Field::constant(g, 0.6);
    for (double eps : {1.0, 0.4, 0.1, 0.05}) {
        ScalingParams p = make_scaling_family(m, eps, 0.0, 0.0, 0.1);
        State r = gamma_recovery(u0, p);
        EXPECT_EQ(r.z[3], p.model_eps.K(0.6));
        for (int i = 0; i < 20; ++i) {
            Field u = Field::constant(g, 0.5) + gen.profile(1.5);
            EnergyBreakdown e = energy(gamma_recovery(u, p), p.model_eps, eps);
            EXPECT_EQ(e.stress_part, 0.0);
            EXPECT_NEAR(e.total, energy_ch(u, m), 1e-14);
        }
    }
}
