#include <gtest/gtest.h>

#include <cmath>

#include "vps/diagnostics.hpp"

using namespace vps;

namespace {

StepperConfig cfg(double dt, double T) {
    StepperConfig c;
    c.dt = dt;
    c.t_end = T;
    return c;
}

State spinodal(const Grid& g, const Model& m, int k = 1) { return cosine_initial(g, m, 0.5, 0.05, k); }

}  // namespace

TEST(FitRate, ExactSlopes) {
    std::vector<double> xs = {0.1, 0.05, 0.025, 0.0125};
    std::vector<double> sq, c;
    for (double x : xs) {
        sq.push_back(std::sqrt(x));
        c.push_back(3.0);
    }
    EXPECT_NEAR(fit_rate(xs, xs).slope, 1.0, 1e-12);
    EXPECT_NEAR(fit_rate(xs, sq).slope, 0.5, 1e-12);
    EXPECT_NEAR(fit_rate(xs, c).slope, 0.0, 1e-12);
    EXPECT_NEAR(fit_rate(xs, c).intercept, std::log(3.0), 1e-12);
}

TEST(FitRate, Degenerate) {
    EXPECT_THROW(fit_rate({0.1, 0.05}, {1, 2}), DegenerateInput);
    EXPECT_THROW(fit_rate({0.1, 0.05, 0.02}, {1, 0, 2}), DegenerateInput);
    EXPECT_THROW(fit_rate({0.1, 0.2, 0.05}, {1, 2, 3}), DegenerateInput);
    EXPECT_THROW(fit_rate({0.1, 0.05, 0.02}, {1, 2}), DegenerateInput);
}

TEST(Edb, ConstantTrajectoryIsZero) {
    Grid g(1.0, 32);
    Model m = default_asymmetric_A_tau();
    State s = make_state(Field::constant(g, 0.3), Field::constant(g, m.K(0.3)));
    Trajectory tr = run(s, m, cfg(1e-2, 0.1));
    for (double r : edb_residual(tr, m)) EXPECT_LE(std::abs(r), 1e-14);
    Trajectory bare = tr;
    bare.covectors.clear();
    EXPECT_THROW(edb_residual(bare, m), MissingCovectors);
}

TEST(Edb, OneSidedOnSpinodal) {
    Grid g(1.0, 64);
    Model m = default_asymmetric_A_tau();
    StepperConfig c = cfg(1e-3, 0.1);
    Trajectory tr = run(spinodal(g, m, 2), m, c);
    std::vector<double> r = edb_residual(tr, m);
    EXPECT_EQ(r[0], 0.0);
    for (double x : r) EXPECT_LE(x, c.newton_tol * 100);
}

TEST(Fenchel, EveryStep) {
    Grid g(1.0, 64);
    Model m = default_asymmetric_A_tau();
    Trajectory tr = run(spinodal(g, m, 2), m, cfg(1e-3, 0.05));
    for (double d : fenchel_defects(tr, m)) EXPECT_LE(d, 1e-10);
}

TEST(Interpolants, CauchyAndGap) {
    Grid g(1.0, 64);
    Model m = default_asymmetric_A_tau();
    Trajectory a = run(spinodal(g, m), m, cfg(2e-3, 0.02));
    Trajectory b = run(spinodal(g, m), m, cfg(1e-3, 0.02));
    EXPECT_EQ(cauchy_sup(a, a), 0.0);
    EXPECT_GT(cauchy_sup(a, b), 0.0);
    double gap = 0.0;
    for (size_t n = 0; n + 1 < a.states.size(); ++n)
        gap = std::max(gap, norm_H(a.states[n + 1].u - a.states[n].u, a.states[n + 1].z - a.states[n].z));
    EXPECT_DOUBLE_EQ(interpolant_gap(a), gap);
}

TEST(Stability, ZeroPerturbation) {
    Grid g(1.0, 32);
    Model m = default_asymmetric_A_tau();
    State s = spinodal(g, m, 2);
    StabilityReport r = stability_harness(s.u, s.z, Field::zeros(g), Field::zeros(g), m, cfg(1e-3, 0.02));
    EXPECT_FALSE(r.applicable);
    for (double d : r.diff_norm) EXPECT_EQ(d, 0.0);
}

TEST(Stability, ConstantModelIntegrandIsOne) {
    Grid g(1.0, 32);
    Model m = constant_model(1.5, 0.8);
    State s = spinodal(g, m, 2);
    Field du = neumann_mode(g, 3) * 1e-3;
    StabilityReport r = stability_harness(s.u, s.z, du, Field::zeros(g), m, cfg(1e-3, 0.05));
    EXPECT_TRUE(r.applicable);
    for (double w : r.gronwall_integrand) EXPECT_DOUBLE_EQ(w, 1.0);
    EXPECT_GT(r.diff_norm[0], 0.0);
}

TEST(Sampler, Deterministic) {
    Grid g(1.0, 64);
    Model m = default_asymmetric_A_tau();
    StateSampler a(g, 9), b(g, 9);
    for (int i = 0; i < 5; ++i) {
        State x = a.state(m, 0.4), y = b.state(m, 0.4);
        EXPECT_EQ(x.u.values(), y.u.values());
        EXPECT_EQ(x.z.values(), y.z.values());
        EXPECT_NEAR(mean(x.u), 0.4, 1e-12);
    }
}

TEST(Suites, Subgradient) {
    Grid g(1.0, 128);
    SuiteReport r = subgradient_suite(default_asymmetric_A_tau(), 300, 7, g);
    EXPECT_EQ(r.samples, 300);
    EXPECT_EQ(r.violations, 0);
    SuiteReport c = subgradient_suite(constant_model(1.0, 1.0), 300, 8, g);
    EXPECT_EQ(c.violations, 0);
    EXPECT_GE(c.statistic, 0.0);
}

TEST(Suites, MonotonicityStableUnderRefinement) {
    Model m = default_asymmetric_A_tau();
    double c128 = monotonicity_suite(m, 400, 5, Grid(8.0, 128)).statistic;
    double c256 = monotonicity_suite(m, 400, 5, Grid(8.0, 256)).statistic;
    ASSERT_TRUE(std::isfinite(c128));
    EXPECT_LE(c128, kDefaultC1);
    EXPECT_LE(c256, kDefaultC1);
    if (c128 > 0.0 && c256 > 0.0) {
        EXPECT_LE(c256 / c128, 2.0);
        EXPECT_GE(c256 / c128, 0.5);
    }
    // constant coefficients: finite
    EXPECT_TRUE(std::isfinite(monotonicity_suite(constant_model(1.0, 1.0), 200, 6, Grid(8.0, 128)).statistic));
}

TEST(Suites, WEstimateBounded) {
    Model m = default_asymmetric_A_tau();
    double r64 = w_estimate_suite(m, 200, 3, Grid(1.0, 64)).statistic;
    double r128 = w_estimate_suite(m, 200, 3, Grid(1.0, 128)).statistic;
    ASSERT_TRUE(std::isfinite(r64));
    EXPECT_NEAR(r128 / r64, 1.0, 0.5);
}

TEST(Suites, Interpolation) {
    SuiteReport r = interpolation_suite(500, 4, Grid(1.0, 128));
    EXPECT_EQ(r.violations, 0);
    EXPECT_LE(r.statistic, 1.0 + 1e-12);
}

TEST(OriginalVariables, Examples) {
    Grid g(1.0, 64);
    Model m = default_asymmetric_A_tau();
    State s = make_state(Field::constant(g, 0.3), Field::constant(g, m.K(0.3)));
    for (double d : original_variables_residual(run(s, m, cfg(1e-2, 0.05)), m)) EXPECT_LE(d, 1e-14);

    Trajectory one = run(s, m, cfg(1e-2, 0.01));
    EXPECT_THROW(original_variables_residual(one, m), InvalidArgument);

    Model c = constant_model(1.0, 1.0);
    std::vector<double> r = original_variables_residual(run(spinodal(g, c), c, cfg(1e-4, 0.01)), c);
    EXPECT_LE(*std::max_element(r.begin(), r.end()), 1e-8);
}
