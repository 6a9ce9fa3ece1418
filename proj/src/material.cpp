#include "vps/material.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <vector>

#include "vps/errors.hpp"

namespace vps {

namespace {

// ln cosh without overflow.
double log_cosh(double x) {
    double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double sech2(double x) {
    double c = std::cosh(x);
    return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}

// 5-point Gauss-Legendre on [a, b].
double gauss5(const ScalarFn& g, double a, double b) {
    static const std::array<double, 5> x = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                            0.9061798459386640};
    static const std::array<double, 5> w = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                            0.2369268850561891, 0.2369268850561891};
    double c = 0.5 * (a + b), r = 0.5 * (b - a), s = 0.0;
    for (int i = 0; i < 5; ++i) s += w[i] * g(c + r * x[i]);
    return r * s;
}

struct PrimitiveTable {
    double lo, hi, step;
    std::vector<double> K, A;
    ScalarFn a_fn;

    double eval(double u) const {
        if (u < lo) return K.front() - integrate(u, lo);
        if (u > hi) return K.back() + integrate(hi, u);
        double s = (u - lo) / step;
        int i = std::min(static_cast<int>(s), static_cast<int>(K.size()) - 2);
        double t = s - i;
        double t2 = t * t, t3 = t2 * t;
        double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * K[i] + h10 * step * A[i] + h01 * K[i + 1] + h11 * step * A[i + 1];
    }

    double integrate(double a, double b) const {
        int panels = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
        double w = (b - a) / panels, s = 0.0;
        for (int i = 0; i < panels; ++i) s += gauss5(a_fn, a + i * w, a + (i + 1) * w);
        return s;
    }
};

void check(bool ok, const std::string& invariant, const std::string& detail) {
    if (!ok) throw ValidationError(invariant, detail);
}

}  // namespace

ScalarFn tabulated_primitive(const ScalarFn& A) {
    auto t = std::make_shared<PrimitiveTable>();
    t->lo = -12.0;
    t->hi = 13.0;
    t->step = 1.0 / 512.0;
    t->a_fn = A;
    int n = static_cast<int>(std::lround((t->hi - t->lo) / t->step)) + 1;
    t->K.assign(n, 0.0);
    t->A.assign(n, 0.0);
    // Node i0 sits exactly at u = 0, so K(0) = 0 holds exactly.
    int i0 = static_cast<int>(std::lround(-t->lo / t->step));
    for (int i = 0; i < n; ++i) t->A[i] = A(t->lo + i * t->step);
    for (int i = i0 + 1; i < n; ++i)
        t->K[i] = t->K[i - 1] + gauss5(A, t->lo + (i - 1) * t->step, t->lo + i * t->step);
    for (int i = i0 - 1; i >= 0; --i)
        t->K[i] = t->K[i + 1] - gauss5(A, t->lo + i * t->step, t->lo + (i + 1) * t->step);
    return [t](double u) { return t->eval(u); };
}

double Model::K_inv(double w) const { return k_inverse(*this, w); }

double k_inverse(const Model& m, double w) {
    if (w == 0.0) return 0.0;
    double lo = w > 0 ? w / m.A_hi : w / m.A_lo;
    double hi = w > 0 ? w / m.A_lo : w / m.A_hi;
    // Guard the bracket against slightly optimistic bounds.
    double pad = 1e-12 * (1.0 + std::abs(w));
    while (m.K(lo) - w > 0) lo -= std::max(pad, std::abs(lo));
    while (m.K(hi) - w < 0) hi += std::max(pad, std::abs(hi));
    double tol = 1e-12 * (1.0 + std::abs(w));
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double r = m.K(u) - w;
        if (std::abs(r) <= tol) return u;
        if (r > 0) hi = u; else lo = u;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(u))) {
            if (std::abs(r) <= 1e-8 * (1.0 + std::abs(w))) return u;
            break;  // bracket collapsed onto a jump of K
        }
        double a = m.A(u);
        double next = u - r / a;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        u = next;
    }
    throw NoConvergence("K inverse did not converge for w = " + std::to_string(w));
}

PotentialSpec double_well_potential() {
    PotentialSpec p;
    p.name = "double_well";
    p.F = [](double u) { return u * u * (u - 1.0) * (u - 1.0); };
    p.f = [](double u) { return 4.0 * u * u * u - 6.0 * u * u + 2.0 * u; };
    p.df = [](double u) { return 12.0 * u * u - 12.0 * u + 2.0; };
    p.beta = 1.0;
    p.p = 3.0;
    p.c1 = 12.0;
    p.c2 = 4.0;
    return p;
}

ResponseSpec asymmetric_response() {
    ResponseSpec r;
    r.name = "asymmetric";
    r.A = [](double u) { return 1.0 + 0.5 * std::tanh(3.0 * (u - 0.5)); };
    r.dA = [](double u) { return 1.5 * sech2(3.0 * (u - 0.5)); };
    r.A_lip = 1.5;
    r.A_lo = 0.5;
    r.A_hi = 1.5;
    r.tau = [](double u) { return 1.0 + 0.9 * std::tanh(3.0 * (u - 0.5)); };
    r.dtau = [](double u) { return 2.7 * sech2(3.0 * (u - 0.5)); };
    r.tau_lip = 2.7;
    r.tau_lo = 0.1;
    r.tau_hi = 1.9;
    const double c = log_cosh(1.5);
    r.K = [c](double u) { return u + (log_cosh(3.0 * (u - 0.5)) - c) / 6.0; };
    return r;
}

ResponseSpec constant_response(double a, double t) {
    ResponseSpec r;
    r.name = "constant";
    r.A = [a](double) { return a; };
    r.dA = [](double) { return 0.0; };
    r.A_lo = r.A_hi = a;
    r.tau = [t](double) { return t; };
    r.dtau = [](double) { return 0.0; };
    r.tau_lo = r.tau_hi = t;
    r.K = [a](double u) { return a * u; };
    return r;
}

Model make_model(const PotentialSpec& pot, const ResponseSpec& resp) {
    Model m;
    m.name = pot.name + "/" + resp.name;
    m.F = pot.F;
    m.f = pot.f;
    m.df = pot.df;
    m.beta = pot.beta;
    ScalarFn F = pot.F;
    double beta = pot.beta;
    m.h = [F, beta](double u) { return F(u) + 0.5 * beta * u * u; };
    m.p = pot.p;
    m.c1 = pot.c1;
    m.c2 = pot.c2;
    m.A = resp.A;
    m.dA = resp.dA;
    m.A_lip = resp.A_lip;
    m.A_lo = resp.A_lo;
    m.A_hi = resp.A_hi;
    m.tau = resp.tau;
    m.dtau = resp.dtau;
    m.tau_lip = resp.tau_lip;
    m.tau_lo = resp.tau_lo;
    m.tau_hi = resp.tau_hi;
    m.K = resp.K ? resp.K : tabulated_primitive(resp.A);
    validate_model(m);
    return m;
}

void validate_model(const Model& m) {
    check(m.F && m.f && m.df && m.A && m.dA && m.tau && m.K, "model functions", "missing function");
    check(m.beta >= 0.0, "beta", "must be nonnegative");
    check(m.A_lo > 0.0 && m.A_lo <= m.A_hi, "A bounds", "need 0 < A_lo <= A_hi");
    check(m.tau_lo > 0.0 && m.tau_lo <= m.tau_hi, "tau bounds", "need 0 < tau_lo <= tau_hi");
    check(std::abs(m.K(0.0)) <= 1e-14, "K(0) = 0", "K(0) = " + std::to_string(m.K(0.0)));

    const double span = kSampleHi - kSampleLo;
    double prev_u = kSampleLo, prev_K = m.K(kSampleLo);
    for (int i = 0; i < kSampleCount; ++i) {
        double u = kSampleLo + span * i / (kSampleCount - 1);
        double d = 1e-5 * std::max(1.0, std::abs(u));
        std::string at = "u = " + std::to_string(u);

        double f = m.f(u), df = m.df(u);
        double fd_F = (m.F(u + d) - m.F(u - d)) / (2 * d);
        check(std::abs(fd_F - f) <= 1e-6 * (1.0 + std::abs(f)), "f = F'", at);
        double fd_f = (m.f(u + d) - m.f(u - d)) / (2 * d);
        check(std::abs(fd_f - df) <= 1e-6 * (1.0 + std::abs(df)), "df = f'", at);
        check(df >= -m.beta - 1e-12, "f' >= -beta", at);
        check(std::abs(f) <= m.c1 * (std::pow(std::abs(u), m.p) + 1.0), "growth of f", at);
        check(std::abs(m.F(u)) <= m.c2 * (std::pow(std::abs(u), m.p + 1.0) + 1.0), "growth of F", at);

        double a = m.A(u), t = m.tau(u);
        check(a >= m.A_lo - 1e-12 && a <= m.A_hi + 1e-12, "A bounds", at);
        check(t >= m.tau_lo - 1e-12 && t <= m.tau_hi + 1e-12, "tau bounds", at);
        double fd_A = (m.A(u + d) - m.A(u - d)) / (2 * d);
        check(std::abs(fd_A - m.dA(u)) <= 1e-6 * (1.0 + std::abs(m.dA(u))), "dA = A'", at);
        check(std::abs(m.dA(u)) <= m.A_lip * (1.0 + 1e-9) + 1e-12, "A Lipschitz", at);
        if (m.dtau) check(std::abs(m.dtau(u)) <= m.tau_lip * (1.0 + 1e-9) + 1e-12, "tau Lipschitz", at);
        double fd_t = (m.tau(u + d) - m.tau(u - d)) / (2 * d);
        check(std::abs(fd_t) <= m.tau_lip * (1.0 + 1e-6) + 1e-9, "tau Lipschitz", at);

        double K = m.K(u);
        double fd_K = (m.K(u + d) - m.K(u - d)) / (2 * d);
        check(std::abs(fd_K - a) <= 1e-6 * (1.0 + a), "K' = A", at);
        check(std::abs(k_inverse(m, K) - u) <= 1e-9 * std::max(1.0, std::abs(u)), "K_inv(K(u)) = u", at);
        if (i > 0) {
            check(K > prev_K, "K monotone", at);
            double du = u - prev_u;
            check(m.A_lo * du * du <= (K - prev_K) * du * (1.0 + 1e-9), "A_lo du^2 <= dK du", at);
        }
        prev_u = u;
        prev_K = K;
    }
}

Model default_double_well() { return make_model(double_well_potential(), constant_response(1.0, 1.0)); }

Model default_asymmetric_A_tau() { return make_model(double_well_potential(), asymmetric_response()); }

Model constant_model(double a, double t) { return make_model(double_well_potential(), constant_response(a, t)); }

ScalingParams make_scaling_family(const Model& limit, double eps, double gamma, double kappa_exp, double p) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("eps", "need 0 < eps <= 1");
    if (gamma < 0.0 || kappa_exp < 0.0) throw ValidationError("gamma, kappa >= 0");
    if (gamma * kappa_exp != 0.0) throw ValidationError("γ·κ = 0");
    if (!(p >= 0.0 && p < 1.0)) throw BoundViolation("perturbation size must lie in [0, 1)");

    ScalingParams s;
    s.eps = eps;
    s.gamma = gamma;
    s.kappa_exp = kappa_exp;
    s.perturbation = p;
    s.model_limit = limit;
    if (p == 0.0) {
        s.model_eps = limit;
        return s;
    }

    const double pe = p * eps;
    const double pi = std::numbers::pi;
    ScalarFn A = limit.A, dA = limit.dA, tau = limit.tau, dtau = limit.dtau;
    Model m = limit;
    m.name = limit.name + "/eps";
    m.A = [A, pe, pi](double u) { return A(u) * (1.0 + pe * std::sin(pi * u)); };
    m.dA = [A, dA, pe, pi](double u) {
        return dA(u) * (1.0 + pe * std::sin(pi * u)) + A(u) * pe * pi * std::cos(pi * u);
    };
    m.tau = [tau, pe, pi](double u) { return tau(u) * (1.0 + pe * std::cos(pi * u)); };
    if (dtau)
        m.dtau = [tau, dtau, pe, pi](double u) {
            return dtau(u) * (1.0 + pe * std::cos(pi * u)) - tau(u) * pe * pi * std::sin(pi * u);
        };
    // Uniform-in-ε bounds of the family.
    m.A_lo = limit.A_lo * (1.0 - p);
    m.A_hi = limit.A_hi * (1.0 + p);
    m.tau_lo = limit.tau_lo * (1.0 - p);
    m.tau_hi = limit.tau_hi * (1.0 + p);
    m.A_lip = limit.A_lip * (1.0 + pe) + limit.A_hi * pe * pi;
    m.tau_lip = limit.tau_lip * (1.0 + pe) + limit.tau_hi * pe * pi;
    m.K = tabulated_primitive(m.A);
    try {
        validate_model(m);
    } catch (const ValidationError& e) {
        throw BoundViolation(std::string("scaled family fails validation: ") + e.what());
    }

    const double span = kSampleHi - kSampleLo;
    for (int i = 0; i < kSampleCount; ++i) {
        double u = kSampleLo + span * i / (kSampleCount - 1);
        s.sup_A_diff = std::max(s.sup_A_diff, std::abs(m.A(u) - limit.A(u)));
        s.sup_tau_diff = std::max(s.sup_tau_diff, std::abs(m.tau(u) - limit.tau(u)));
    }
    s.model_eps = std::move(m);
    return s;
}

}  // namespace vps
