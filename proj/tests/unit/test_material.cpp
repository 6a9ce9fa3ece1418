#include <gtest/gtest.h>

#include <cmath>

#include "vps/errors.hpp"
#include "vps/material.hpp"

using namespace vps;

TEST(DoubleWell, Values) {
    Model m = default_double_well();
    EXPECT_EQ(m.F(0.0), 0.0);
    EXPECT_EQ(m.F(1.0), 0.0);
    EXPECT_DOUBLE_EQ(m.F(0.5), 1.0 / 16.0);
    EXPECT_DOUBLE_EQ(m.beta, 1.0);
    EXPECT_DOUBLE_EQ(m.p, 3.0);
    EXPECT_DOUBLE_EQ(m.df(0.5), -1.0);
    for (double u : {-2.0, -0.3, 0.5, 1.7, 4.0}) {
        EXPECT_NEAR(m.f(u), 4 * u * u * u - 6 * u * u + 2 * u, 1e-12 * (1 + std::abs(u * u * u)));
        EXPECT_NEAR(m.h(u), m.F(u) + 0.5 * u * u, 1e-12 * (1 + u * u * u * u));
        EXPECT_GE(m.df(u), -m.beta);
    }
}

TEST(Asymmetric, Values) {
    Model m = default_asymmetric_A_tau();
    EXPECT_DOUBLE_EQ(m.A(0.5), 1.0);
    EXPECT_DOUBLE_EQ(m.tau(0.5), 1.0);
    EXPECT_NEAR(m.K(0.0), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(m.A_lo, 0.5);
    EXPECT_DOUBLE_EQ(m.A_hi, 1.5);
    EXPECT_DOUBLE_EQ(m.A_lip, 1.5);
    EXPECT_DOUBLE_EQ(m.tau_lo, 0.1);
    EXPECT_DOUBLE_EQ(m.tau_hi, 1.9);
    EXPECT_DOUBLE_EQ(m.tau_lip, 2.7);
    for (double u : {-1.0, 0.3, 2.0}) {
        double d = 1e-5;
        EXPECT_NEAR((m.K(u + d) - m.K(u - d)) / (2 * d), m.A(u), 1e-8);
    }
    // closed form
    for (double u : {-3.0, 0.0, 0.9, 4.5}) {
        double ref = u + (std::log(std::cosh(3 * (u - 0.5))) - std::log(std::cosh(1.5))) / 6.0;
        EXPECT_NEAR(m.K(u), ref, 1e-13);
    }
}

TEST(KInverse, Examples) {
    Model m = default_asymmetric_A_tau();
    EXPECT_EQ(k_inverse(m, 0.0), 0.0);
    EXPECT_NEAR(k_inverse(m, m.K(0.7)), 0.7, 1e-10);
    Model c = constant_model(2.5, 1.0);
    for (double w : {-3.0, 0.1, 7.0}) EXPECT_NEAR(k_inverse(c, w), w / 2.5, 1e-13 * (1 + std::abs(w)));
    for (double w : {-20.0, -1.0, 1e-8, 3.0, 40.0}) {
        double u = k_inverse(m, w);
        EXPECT_LE(std::abs(m.K(u) - w), 1e-12 * (1 + std::abs(w)));
    }
}

TEST(KInverse, MalformedModelDoesNotConverge) {
    Model m = default_asymmetric_A_tau();
    m.K = [](double u) { return u > 0 ? 1.0 : -1.0; };  // no preimage for w = 0.5
    EXPECT_THROW(k_inverse(m, 0.5), NoConvergence);
}

TEST(Tabulated, MatchesClosedForm) {
    Model m = default_asymmetric_A_tau();
    ScalarFn K = tabulated_primitive(m.A);
    EXPECT_EQ(K(0.0), 0.0);
    for (double u = -12.0; u <= 13.0; u += 0.01713) EXPECT_NEAR(K(u), m.K(u), 1e-11 * (1 + std::abs(u)));
    // outside the table
    for (double u : {-30.0, 25.0}) EXPECT_NEAR(K(u), m.K(u), 1e-9 * std::abs(u));
}

TEST(Tabulated, ModelWithoutClosedFormK) {
    ResponseSpec r = asymmetric_response();
    r.K = nullptr;
    Model m = make_model(double_well_potential(), r);
    EXPECT_NEAR(m.K(1.3), default_asymmetric_A_tau().K(1.3), 1e-12);
}

TEST(Validation, CatchesBrokenModels) {
    ResponseSpec r = asymmetric_response();
    r.A_lo = 0.9;  // A dips to 0.5
    EXPECT_THROW(make_model(double_well_potential(), r), ValidationError);

    PotentialSpec p = double_well_potential();
    p.beta = 0.5;  // f' reaches -1
    try {
        make_model(p, asymmetric_response());
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.invariant(), "f' >= -beta");
    }

    PotentialSpec q = double_well_potential();
    q.f = [](double u) { return 4 * u * u * u; };
    EXPECT_THROW(make_model(q, asymmetric_response()), ValidationError);

    ResponseSpec k = asymmetric_response();
    k.K = [](double u) { return 1.01 * u; };
    EXPECT_THROW(make_model(double_well_potential(), k), ValidationError);

    PotentialSpec g = double_well_potential();
    g.c1 = 1.0;
    try {
        make_model(g, asymmetric_response());
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.invariant(), "growth of f");
    }
}

TEST(Properties, MonotoneKAndCoercivity) {
    Model m = default_asymmetric_A_tau();
    for (double a = -4.0; a < 5.0; a += 0.37)
        for (double b = a + 0.013; b < 5.0; b += 0.61) {
            EXPECT_GT(m.K(b), m.K(a));
            EXPECT_LE(m.A_lo * (b - a) * (b - a), (m.K(b) - m.K(a)) * (b - a) * (1 + 1e-12));
        }
}

TEST(ScalingFamily, ZeroPerturbationIsLimit) {
    Model m = default_asymmetric_A_tau();
    for (double eps : {1.0, 0.3, 0.05}) {
        ScalingParams s = make_scaling_family(m, eps, 0.0, 1.0, 0.0);
        for (double u : {-2.0, 0.2, 0.8, 3.0}) {
            EXPECT_EQ(s.model_eps.A(u), m.A(u));
            EXPECT_EQ(s.model_eps.tau(u), m.tau(u));
            EXPECT_EQ(s.model_eps.K(u), m.K(u));
        }
        EXPECT_EQ(s.sup_A_diff, 0.0);
    }
}

TEST(ScalingFamily, SupDistanceAndBounds) {
    Model m = default_asymmetric_A_tau();
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        ScalingParams s = make_scaling_family(m, eps, 1.0, 0.0, 0.1);
        EXPECT_GT(s.sup_A_diff, 0.0);
        EXPECT_LE(s.sup_A_diff, 0.1 * eps * m.A_hi * (1 + 1e-12));
        EXPECT_LE(s.sup_tau_diff, 0.1 * eps * m.tau_hi * (1 + 1e-12));
        EXPECT_LE(s.model_eps.A_hi, m.A_hi * 1.1);
        EXPECT_GE(s.model_eps.A_lo, m.A_lo * 0.9);
        const Model& me = s.model_eps;
        for (double u = -4.0; u <= 5.0; u += 0.05) {
            EXPECT_GE(me.A(u), me.A_lo);
            EXPECT_LE(me.A(u), me.A_hi);
            EXPECT_GE(me.tau(u), me.tau_lo);
            EXPECT_LE(me.tau(u), me.tau_hi);
        }
        EXPECT_NEAR(me.K(k_inverse(me, 1.234)), 1.234, 1e-12);
    }
}

TEST(ScalingFamily, Rejections) {
    Model m = default_asymmetric_A_tau();
    try {
        make_scaling_family(m, 0.5, 1.0, 1.0, 0.1);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.invariant(), "γ·κ = 0");
    }
    EXPECT_THROW(make_scaling_family(m, 0.5, 0.0, 0.0, 1.0), BoundViolation);
    EXPECT_THROW(make_scaling_family(m, 0.5, 0.0, 0.0, -0.1), BoundViolation);
    EXPECT_THROW(make_scaling_family(m, 0.0, 0.0, 0.0, 0.1), ValidationError);
    EXPECT_THROW(make_scaling_family(m, 1.5, 0.0, 0.0, 0.1), ValidationError);
}
