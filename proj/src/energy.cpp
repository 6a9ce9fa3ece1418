#include "vps/energy.hpp"

#include <algorithm>
#include <cmath>

namespace vps {

namespace {

double gradient_energy(const Field& u) {
    double h = u.grid().h(), s = 0.0;
    for (int j = 0; j + 1 < u.size(); ++j) {
        double d = u[j + 1] - u[j];
        s += d * d;
    }
    return 0.5 * s / h;
}

double potential_energy(const Field& u, const Model& m) {
    double s = 0.0;
    for (int j = 0; j < u.size(); ++j) s += m.F(u[j]);
    return u.grid().h() * s;
}

}  // namespace

Field stress_field(const State& s, const Model& m) {
    require_same_grid(s.u, s.z);
    std::vector<double> q(s.u.size());
    for (int j = 0; j < s.u.size(); ++j) q[j] = s.z[j] - m.K(s.u[j]);
    return Field(s.u.grid(), std::move(q));
}

double stress_linf(const State& s, const Model& m) { return stress_field(s, m).max_abs(); }

EnergyBreakdown energy(const State& s, const Model& m, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    EnergyBreakdown e;
    e.gradient_part = gradient_energy(s.u);
    e.potential_part = potential_energy(s.u, m);
    Field q = stress_field(s, m);
    e.stress_part = 0.5 * inner_l2(q, q) / (eps * eps);
    e.total = e.gradient_part + e.potential_part + e.stress_part;
    return e;
}

double a_mean(const State& s, const Model& m, double eps) {
    double acc = 0.0, ie2 = 1.0 / (eps * eps);
    for (int j = 0; j < s.u.size(); ++j) {
        double u = s.u[j];
        acc += m.f(u) - ie2 * m.A(u) * (s.z[j] - m.K(u));
    }
    return acc / s.u.size();
}

Covector delta_energy(const State& s, const Model& m, double eps) {
    require_same_grid(s.u, s.z);
    int n = s.u.size();
    double ie2 = 1.0 / (eps * eps);
    std::vector<double> mu(n), xi(n), lap(n);
    raw::laplacian(s.u.values().data(), n, s.u.grid().h(), lap.data());
    for (int j = 0; j < n; ++j) {
        double u = s.u[j];
        double q = s.z[j] - m.K(u);
        xi[j] = ie2 * q;
        mu[j] = -lap[j] + m.f(u) - m.A(u) * xi[j];
    }
    double a = raw::sum(mu.data(), n) / n;
    for (double& x : mu) x -= a;
    return Covector{Field(s.u.grid(), std::move(mu)), Field(s.u.grid(), std::move(xi))};
}

double lambda_mod(const State& s, const Model& m) {
    double c = m.beta + m.A_lip * stress_linf(s, m);
    return -0.125 * c * c;
}

double Lambda_mod(const State& s, const Model& m, double C1) {
    double c = 1.0 + (m.A_lip + m.tau_lip) * stress_linf(s, m);
    return C1 * c * c;
}

double omega_mod(const State& s, const Model& m) {
    double q = stress_linf(s, m);
    return m.tau_lip * m.tau_lip * q * q;
}

double energy_ch(const Field& u, const Model& m) { return gradient_energy(u) + potential_energy(u, m); }

State gamma_recovery(const Field& u, const ScalingParams& sc) {
    const Model& m = sc.model_eps;
    return make_state(u, u.map([&m](double x) { return m.K(x); }));
}

}  // namespace vps
