#include "vps/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>

#include "vps/dissipation.hpp"

namespace vps {

RateFit fit_rate(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw DegenerateInput("xs and ys differ in length");
    if (xs.size() < 3) throw DegenerateInput("need at least 3 points");
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0 && ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i]))
            throw DegenerateInput("rate fit needs positive finite data");
        if (i > 0 && !(xs[i] < xs[i - 1])) throw DegenerateInput("xs must be strictly decreasing");
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    RateFit r{xs, ys, 0.0, 0.0};
    r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.intercept = (sy - r.slope * sx) / n;
    return r;
}

namespace {

void require_covectors(const Trajectory& tr) {
    if (tr.covectors.size() != tr.states.size() || tr.diss_increments.size() != tr.states.size())
        throw MissingCovectors("trajectory has no aligned covectors/dissipation data");
}

double rms(const Field& f) { return norm_l2(f) / std::sqrt(f.grid().length()); }

}  // namespace

std::vector<double> edb_residual(const Trajectory& tr, const Model&) {
    require_covectors(tr);
    std::vector<double> r(tr.states.size(), 0.0);
    double e0 = tr.energies.front().total, acc = 0.0;
    for (size_t n = 1; n < tr.states.size(); ++n) {
        acc += tr.diss_increments[n];
        r[n] = tr.energies[n].total - e0 + acc;
    }
    return r;
}

std::vector<double> fenchel_defects(const Trajectory& tr, const Model& m) {
    require_covectors(tr);
    std::vector<double> d(tr.states.size(), 0.0);
    for (size_t n = 1; n < tr.states.size(); ++n) {
        const State& a = tr.states[n - 1];
        const State& b = tr.states[n];
        DissipationWeights w = make_weights(tr.scaling, m, a.u);
        Field v = subtract_mean((b.u - a.u) * (1.0 / tr.dt));
        Field y = (b.z - a.z) * (1.0 / tr.dt);
        Covector g = apply_G(w, v, y);
        double pair = inner_l2(g.mu, v) + inner_l2(g.xi, y);
        double lhs = R_value(w, v, y) + R_star_value(w, Covector{subtract_mean(g.mu), g.xi});
        d[n] = pair > 0.0 ? std::abs(lhs - pair) / pair : std::abs(lhs - pair);
    }
    return d;
}

std::vector<double> covector_mismatch(const Trajectory& tr, const Model& m) {
    require_covectors(tr);
    std::vector<double> d(tr.states.size(), 0.0);
    for (size_t n = 1; n < tr.states.size(); ++n) {
        const State& a = tr.states[n - 1];
        const State& b = tr.states[n];
        DissipationWeights w = make_weights(tr.scaling, m, a.u);
        Field v = subtract_mean((b.u - a.u) * (1.0 / tr.dt));
        Field y = (b.z - a.z) * (1.0 / tr.dt);
        Covector g = apply_G(w, v, y);
        const Covector& c = tr.covectors[n];
        Field dm = c.mu + subtract_mean(g.mu), dx = c.xi + g.xi;
        double h = b.u.grid().h();
        double scale = 1.0 + rms(b.u) * 4.0 / (h * h) + rms(c.mu) + rms(c.xi) * (1.0 + m.A_hi) +
                       rms(b.u.map(m.f));
        d[n] = std::sqrt(rms(dm) * rms(dm) + rms(dx) * rms(dx)) / scale;
    }
    return d;
}

double z_linf_bound_ratio(const Trajectory& tr, const Model& m) {
    double bound = norm_linf(tr.states.front().z), worst = 0.0;
    for (size_t n = 0; n < tr.states.size(); ++n) {
        if (n > 0) bound += tr.dt / m.tau_lo * norm_linf(tr.states[n].u.map(m.K));
        double z = norm_linf(tr.states[n].z);
        worst = std::max(worst, bound > 0.0 ? z / bound : (z > 0 ? std::numeric_limits<double>::infinity() : 0.0));
    }
    return worst;
}

double cauchy_sup(const Trajectory& coarse, const Trajectory& fine) {
    double sup = 0.0;
    for (size_t n = 0; n < fine.states.size(); ++n) {
        double t = fine.times[n];
        State c = interpolant_eval(coarse, std::min(t, coarse.times.back()), Interpolant::Affine);
        const State& f = fine.states[n];
        sup = std::max(sup, norm_H(subtract_mean(c.u - f.u), c.z - f.z));
    }
    return sup;
}

double interpolant_gap(const Trajectory& tr) {
    double sup = 0.0;
    for (size_t n = 1; n < tr.states.size(); ++n) {
        const State& a = tr.states[n - 1];
        const State& b = tr.states[n];
        sup = std::max(sup, norm_H(subtract_mean(b.u - a.u), b.z - a.z));
    }
    return sup;
}

StabilityReport stability_harness(const Field& u0, const Field& z0, const Field& du, const Field& dz,
                                  const Model& m, const StepperConfig& cfg) {
    if (std::abs(mean(du)) > 1e-12 * (1.0 + du.max_abs()))
        throw ValidationError("perturbation mass", "both initial states must share the mass");
    State s1 = make_state(u0, z0);
    State s2{u0 + du, z0 + dz, s1.mass};
    auto f1 = std::async(std::launch::async, [&] { return run(s1, m, cfg); });
    Trajectory t2 = run(s2, m, cfg);
    Trajectory t1 = f1.get();

    StabilityReport rep;
    rep.times = t1.times;
    for (size_t n = 0; n < t1.states.size(); ++n) {
        const State& a = t1.states[n];
        const State& b = t2.states[n];
        rep.diff_norm.push_back(norm_H(subtract_mean(a.u - b.u), a.z - b.z));
        double q = stress_linf(a, m);
        double c = 1.0 + (m.A_lip + m.tau_lip) * q;
        rep.gronwall_integrand.push_back(c * c);
    }
    const size_t n = rep.times.size();
    std::vector<double> I(n, 0.0);
    for (size_t k = 1; k < n; ++k)
        I[k] = I[k - 1] + 0.5 * (rep.times[k] - rep.times[k - 1]) * (rep.gronwall_integrand[k] + rep.gronwall_integrand[k - 1]);

    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (size_t s = 0; s < n; ++s) {
        if (!(rep.diff_norm[s] > 0.0)) continue;
        double ls = std::log(rep.diff_norm[s]);
        for (size_t t = s + 1; t < n; ++t) {
            if (!(rep.diff_norm[t] > 0.0)) continue;
            any = true;
            best = std::max(best, (std::log(rep.diff_norm[t]) - ls) / (I[t] - I[s]));
        }
    }
    rep.applicable = any;
    rep.fitted_C = best;
    return rep;
}

StateSampler::StateSampler(const Grid& grid, std::uint64_t seed) : grid_(grid), rng_(seed) {}

double StateSampler::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

Field StateSampler::profile(double amplitude, bool with_constant) {
    constexpr int kModes = 6;
    double c[kModes + 1];
    c[0] = with_constant ? uniform(-1.0, 1.0) : 0.0;
    for (int k = 1; k <= kModes; ++k) c[k] = uniform(-1.0, 1.0) / k;
    const double L = grid_.length();
    Field p = Field::sample(grid_, [&](double x) {
        double s = c[0];
        for (int k = 1; k <= kModes; ++k) s += c[k] * std::cos(k * std::numbers::pi * x / L);
        return s;
    });
    double mx = p.max_abs();
    if (mx == 0.0) return p;
    return p * (amplitude / mx);
}

State StateSampler::state(const Model& m, double mass) {
    Field u = Field::constant(grid_, mass) + profile(uniform(0.0, 2.0));
    Field z = u.map(m.K) + profile(uniform(-2.0, 2.0), true);
    return State{u, z, mass};
}

SuiteReport subgradient_suite(const Model& m, int n_samples, std::uint64_t seed, const Grid& grid) {
    if (n_samples < 1) throw InvalidArgument("need at least one sample");
    StateSampler gen(grid, seed);
    SuiteReport rep;
    rep.samples = n_samples;
    rep.statistic = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_samples; ++i) {
        double mass = gen.uniform(0.0, 1.0);
        State u = gen.state(m, mass);
        State v = gen.state(m, mass);
        Field du = subtract_mean(v.u - u.u), dz = v.z - u.z;
        double eu = energy(u, m).total, ev = energy(v, m).total;
        Covector d = delta_energy(u, m);
        double dist = norm_H(du, dz);
        double rhs = eu + inner_l2(d.mu, du) + inner_l2(d.xi, dz) + lambda_mod(u, m) * dist * dist;
        double margin = ev - rhs;
        // Rounding allowance only: the inequality holds exactly in the discrete setting.
        double tol = 1e-12 * (1.0 + std::abs(eu) + std::abs(ev));
        if (margin < -tol) ++rep.violations;
        rep.statistic = std::min(rep.statistic, margin);
        rep.values.push_back(margin);
    }
    return rep;
}

SuiteReport monotonicity_suite(const Model& m, int n_samples, std::uint64_t seed, const Grid& grid) {
    if (n_samples < 1) throw InvalidArgument("need at least one sample");
    StateSampler gen(grid, seed);
    SuiteReport rep;
    rep.samples = n_samples;
    for (int i = 0; i < n_samples; ++i) {
        double mass = gen.uniform(0.0, 1.0);
        State u1 = gen.state(m, mass), u2 = gen.state(m, mass);
        State v1 = gen.state(m, gen.uniform(0.0, 1.0)), v2 = gen.state(m, gen.uniform(0.0, 1.0));
        if (i % 2 == 1) {
            // nearby quadruple: small differences, v close to u
            double s = std::pow(10.0, gen.uniform(-3.0, 0.0));
            u2 = State{u1.u + gen.profile(s), u1.z + gen.profile(s * gen.uniform(0.0, 4.0), true), mass};
            double t = std::pow(10.0, gen.uniform(-3.0, 0.0));
            v1 = State{u1.u + gen.profile(t, true), u1.z, mass};
            v2 = State{u2.u + gen.profile(t, true), u2.z, mass};
        }
        Covector d1 = delta_energy(u1, m), d2 = delta_energy(u2, m);
        Field du = subtract_mean(u1.u - u2.u), dz = u1.z - u2.z;
        // K(v)δ𝓔(u) = (-Δμ, ξ/τ(v)).
        Field a_u = subtract_mean(neumann_laplacian(d2.mu) - neumann_laplacian(d1.mu));
        std::vector<double> a_z(grid.n_cells());
        for (int j = 0; j < grid.n_cells(); ++j)
            a_z[j] = d1.xi[j] / m.tau(v1.u[j]) - d2.xi[j] / m.tau(v2.u[j]);
        double lhs = inner_H(a_u, Field(grid, a_z), du, dz);
        double dist2 = norm_H(du, dz);
        dist2 *= dist2;
        double w1 = norm_l2(v1.u - u1.u), w2 = norm_l2(v2.u - u2.u);
        double slack = lhs + omega_mod(u1, m) * (w1 * w1 + w2 * w2);
        double base = Lambda_mod(u1, m, 1.0);
        double c1 = (slack < 0.0 && dist2 > 0.0) ? -slack / (base * dist2) : 0.0;
        rep.values.push_back(c1);
        rep.statistic = std::max(rep.statistic, c1);
    }
    return rep;
}

SuiteReport w_estimate_suite(const Model& m, int n_samples, std::uint64_t seed, const Grid& grid) {
    StateSampler gen(grid, seed);
    SuiteReport rep;
    rep.samples = n_samples;
    for (int i = 0; i < n_samples; ++i) {
        double mass = gen.uniform(0.0, 1.0);
        State s = gen.state(m, mass);
        Field um = s.u - Field::constant(grid, mass);
        Covector d = delta_energy(s, m);
        double den = norm_H(subtract_mean(um), s.z) + std::sqrt(inner_h1av(d.mu, d.mu) + inner_l2(d.xi, d.xi));
        if (!(den > 0.0)) continue;
        double r = norm_h2(um) / den;
        rep.values.push_back(r);
        rep.statistic = std::max(rep.statistic, r);
    }
    return rep;
}

SuiteReport interpolation_suite(int n_samples, std::uint64_t seed, const Grid& grid) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    SuiteReport rep;
    rep.samples = n_samples;
    for (int i = 0; i < n_samples; ++i) {
        std::vector<double> v(grid.n_cells());
        for (double& x : v) x = nd(rng);
        Field f = subtract_mean(Field(grid, v));
        double l2 = inner_l2(f, f);
        double rhs = norm_h1av(f) * norm_hm1av(f);
        double r = l2 / rhs;
        if (r > 1.0 + 1e-12) ++rep.violations;
        rep.statistic = std::max(rep.statistic, r);
        rep.values.push_back(r);
    }
    return rep;
}

std::vector<double> original_variables_residual(const Trajectory& tr, const Model& m, int n_test) {
    if (tr.states.size() < 3) throw InvalidArgument("need a trajectory with at least 2 steps");
    const Grid& g = tr.states.front().u.grid();
    std::vector<Field> basis;
    for (int k = 0; k < n_test; ++k) {
        Field p = neumann_mode(g, k);
        basis.push_back(p * (1.0 / norm_l2(p)));
    }
    std::vector<double> out;
    for (size_t n = 1; n < tr.states.size(); ++n) {
        const State& a = tr.states[n - 1];
        const State& b = tr.states[n];
        std::vector<double> d(g.n_cells());
        for (int j = 0; j < g.n_cells(); ++j) {
            double qa = a.z[j] - m.K(a.u[j]), qb = b.z[j] - m.K(b.u[j]);
            double udot = (b.u[j] - a.u[j]) / tr.dt;
            d[j] = (qb - qa) / tr.dt + m.A(a.u[j]) * udot + qb / m.tau(a.u[j]);
        }
        Field df(g, std::move(d));
        double s = 0.0;
        for (const Field& p : basis) {
            double c = inner_l2(df, p);
            s += c * c;
        }
        out.push_back(std::sqrt(s));
    }
    return out;
}

}  // namespace vps
