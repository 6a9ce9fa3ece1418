#include "vps/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "vps/implicit.hpp"

namespace vps {

void validate_config(const StepperConfig& c) {
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ValidationError("dt", "must be positive");
    if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) throw ValidationError("T", "must be nonnegative");
    if (c.t_end > 0.0) {
        double n = std::round(c.t_end / c.dt);
        if (n < 1 || std::abs(n * c.dt - c.t_end) > 1e-6 * c.t_end)
            throw ValidationError("dt divides T", "T / dt must be an integer");
    }
    if (!(c.newton_tol > 0.0)) throw ValidationError("newton_tol", "must be positive");
    if (c.newton_max_iter < 1) throw ValidationError("newton_max_iter", "must be at least 1");
    if (!(c.dt_backoff > 0.0 && c.dt_backoff < 1.0)) throw ValidationError("dt_backoff", "must lie in (0, 1)");
    if (!(c.scaling.eps > 0.0 && c.scaling.eps <= 1.0)) throw ValidationError("eps", "need 0 < eps <= 1");
    if (c.scaling.gamma < 0.0 || c.scaling.kappa_exp < 0.0) throw ValidationError("gamma, kappa >= 0");
    if (c.scaling.gamma * c.scaling.kappa_exp != 0.0) throw ValidationError("γ·κ = 0");
}

int step_count(const StepperConfig& c) { return c.t_end == 0.0 ? 0 : static_cast<int>(std::lround(c.t_end / c.dt)); }

Field z_update(const Field& u_next, const Field& z_prev, const Field& tau_prev, double dt, const Scaling& sc,
               const Model& m) {
    require_same_grid(u_next, z_prev);
    require_same_grid(u_next, tau_prev);
    double pre = std::pow(sc.eps, sc.kappa_exp + 2.0) / dt;
    std::vector<double> z(u_next.size());
    for (int j = 0; j < u_next.size(); ++j) {
        double c = pre * tau_prev[j];
        z[j] = (c * z_prev[j] + m.K(u_next[j])) / (c + 1.0);
    }
    return Field(u_next.grid(), std::move(z));
}

namespace {

std::optional<StepResult> attempt(const State& s, const Model& m, const StepperConfig& cfg, double dt) {
    const Scaling& sc = cfg.scaling;
    const int n = s.u.size();
    const double ie2 = 1.0 / (sc.eps * sc.eps);
    DissipationWeights w = make_weights(sc, m, s.u);
    const double pre = std::pow(sc.eps, sc.kappa_exp + 2.0) / dt;
    std::vector<double> cfac(n);  // c / (c + 1)
    for (int j = 0; j < n; ++j) {
        double c = pre * w.tau_at[j];
        cfac[j] = c / (c + 1.0);
    }
    const std::vector<double>& zn = s.z.values();

    FluxStepProblem p;
    p.u_prev = &s.u.values();
    p.h = s.u.grid().h();
    p.b = dt / w.w_u;
    p.tol = cfg.newton_tol;
    p.max_iter = cfg.newton_max_iter;
    p.local = [&](const double* u, double* r, double* g) {
        for (int j = 0; j < n; ++j) {
            double a = m.A(u[j]);
            double q = zn[j] - m.K(u[j]);
            r[j] = m.f(u[j]) - ie2 * cfac[j] * a * q;
            g[j] = m.df(u[j]) - ie2 * cfac[j] * (m.dA(u[j]) * q - a * a);
        }
    };
    FluxStepResult fr = solve_flux_step(p);
    if (!fr.converged) return std::nullopt;

    Field u_next(s.u.grid(), std::move(fr.u));
    Field z_next = z_update(u_next, s.z, w.tau_at, dt, sc, m);
    State next{u_next, z_next, s.mass};
    double e_old = energy(s, m, sc.eps).total;
    double e_new = energy(next, m, sc.eps).total;
    if (!(e_new <= e_old + cfg.newton_tol)) return std::nullopt;

    Field v = subtract_mean((next.u - s.u) * (1.0 / dt));
    Field y = (next.z - s.z) * (1.0 / dt);
    StepResult out{next, delta_energy(next, m, sc.eps), G_pairing(w, v, y) * dt, 1, fr.scaled_residual};
    return out;
}

StepResult advance(const State& s, const Model& m, const StepperConfig& cfg, double dt, double dt_min) {
    if (auto r = attempt(s, m, cfg, dt)) return *r;
    int pieces = std::max(2, static_cast<int>(std::lround(1.0 / cfg.dt_backoff)));
    double sub = dt / pieces;
    if (sub < dt_min * (1.0 - 1e-12))
        throw StepFailed("no energy-decreasing Newton solution down to dt = " + std::to_string(dt));
    StepResult acc{s, Covector{s.u, s.z}, 0.0, 0, 0.0};
    for (int i = 0; i < pieces; ++i) {
        StepResult r = advance(acc.state, m, cfg, sub, dt_min);
        acc.state = r.state;
        acc.covector = r.covector;
        acc.diss_increment += r.diss_increment;
        acc.substeps += r.substeps;
        acc.newton_residual = std::max(acc.newton_residual, r.newton_residual);
    }
    return acc;
}

}  // namespace

StepResult mm_step(const State& s, const Model& m, const StepperConfig& cfg) {
    validate_config(cfg);
    return advance(s, m, cfg, cfg.dt, cfg.dt * std::ldexp(1.0, -10));
}

Trajectory run(const State& initial, const Model& m, const StepperConfig& cfg) {
    validate_config(cfg);
    Trajectory tr;
    tr.dt = cfg.dt;
    tr.scaling = cfg.scaling;
    const Scaling& sc = cfg.scaling;
    int steps = step_count(cfg);
    tr.times.reserve(steps + 1);
    tr.states.reserve(steps + 1);
    tr.times.push_back(0.0);
    tr.states.push_back(initial);
    tr.covectors.push_back(delta_energy(initial, m, sc.eps));
    tr.energies.push_back(energy(initial, m, sc.eps));
    tr.diss_increments.push_back(0.0);
    double dt_min = cfg.dt * std::ldexp(1.0, -10);
    for (int k = 1; k <= steps; ++k) {
        StepResult r = [&] {
            try {
                return advance(tr.states.back(), m, cfg, cfg.dt, dt_min);
            } catch (const StepFailed& e) {
                throw StepFailed(std::string(e.what()) + " at step " + std::to_string(k), k);
            }
        }();
        tr.times.push_back(k * cfg.dt);
        tr.energies.push_back(energy(r.state, m, sc.eps));
        tr.states.push_back(std::move(r.state));
        tr.covectors.push_back(std::move(r.covector));
        tr.diss_increments.push_back(r.diss_increment);
        tr.substeps_taken += r.substeps;
    }
    return tr;
}

State interpolant_eval(const Trajectory& tr, double t, Interpolant kind) {
    const int steps = static_cast<int>(tr.states.size()) - 1;
    const double T = steps * tr.dt;
    if (!(t >= 0.0 && t <= T * (1.0 + 1e-12))) throw OutOfRange("t outside [0, T]");
    double s = t / tr.dt;
    double r = std::round(s);
    if (std::abs(s - r) <= 1e-9 * std::max(1.0, s)) s = r;
    int lo = std::clamp(static_cast<int>(std::floor(s)), 0, steps);
    int hi = std::clamp(static_cast<int>(std::ceil(s)), 0, steps);
    switch (kind) {
        case Interpolant::LeftConst:
            return tr.states[hi];
        case Interpolant::RightConst:
            return tr.states[lo];
        case Interpolant::Affine:
        default: {
            if (lo == hi) return tr.states[lo];
            double th = s - lo;
            const State& a = tr.states[lo];
            const State& b = tr.states[hi];
            return State{a.u * (1.0 - th) + b.u * th, a.z * (1.0 - th) + b.z * th, a.mass};
        }
    }
}

std::vector<Field> z_ode_reconstruct(const std::vector<Field>& u_path, const std::vector<double>& times,
                                     const Field& z0, const Model& m) {
    if (u_path.size() != times.size() || u_path.empty()) throw InvalidArgument("path and times differ in length");
    const int n = z0.size();
    std::vector<Field> out;
    out.reserve(u_path.size());
    out.push_back(z0);
    std::vector<double> z = z0.values();
    std::vector<double> inv_prev(n), src_prev(n);
    for (int j = 0; j < n; ++j) {
        double t = m.tau(u_path[0][j]);
        inv_prev[j] = 1.0 / t;
        src_prev[j] = m.K(u_path[0][j]) / t;
    }
    for (size_t l = 1; l < u_path.size(); ++l) {
        double dt = times[l] - times[l - 1];
        for (int j = 0; j < n; ++j) {
            double t = m.tau(u_path[l][j]);
            double inv = 1.0 / t, src = m.K(u_path[l][j]) / t;
            double decay = std::exp(-0.5 * dt * (inv_prev[j] + inv));
            z[j] = decay * z[j] + 0.5 * dt * (decay * src_prev[j] + src);
            inv_prev[j] = inv;
            src_prev[j] = src;
        }
        out.emplace_back(z0.grid(), z);
    }
    return out;
}

State cosine_initial(const Grid& g, const Model& m, double mass, double a, int k) {
    const double L = g.length();
    Field u = Field::sample(g, [=](double x) { return mass + a * std::cos(k * std::numbers::pi * x / L); });
    return make_state(u, u.map([&m](double x) { return m.K(x); }));
}

double phi_kappa(const State& prev, const State& w, const Model& m, const StepperConfig& cfg) {
    DissipationWeights wt = make_weights(cfg.scaling, m, prev.u);
    Field du = w.u - prev.u, dz = w.z - prev.z;
    return energy(w, m, cfg.scaling.eps).total + 0.5 / cfg.dt * G_pairing(wt, subtract_mean(du), dz);
}

State minimize_phi_descent(const State& prev, const Model& m, const StepperConfig& cfg, int max_iter,
                           double grad_tol) {
    DissipationWeights wt = make_weights(cfg.scaling, m, prev.u);
    State w = prev;
    double alpha = 1e-3;
    double phi = phi_kappa(prev, w, m, cfg);
    for (int it = 0; it < max_iter; ++it) {
        Covector de = delta_energy(w, m, cfg.scaling.eps);
        Covector gd = apply_G(wt, subtract_mean(w.u - prev.u), w.z - prev.z);
        Field cm = de.mu + gd.mu * (1.0 / cfg.dt);
        Field cx = de.xi + gd.xi * (1.0 / cfg.dt);
        cm = subtract_mean(cm);
        double gnorm2 = inner_h1av(cm, cm) + inner_l2(cx, cx);
        if (std::sqrt(gnorm2) <= grad_tol) break;
        Field step_u = neumann_laplacian(cm);  // -(H-gradient) in u
        for (int bt = 0; bt < 60; ++bt) {
            State trial{w.u + step_u * alpha, w.z - cx * alpha, w.mass};
            double phi_t = phi_kappa(prev, trial, m, cfg);
            if (phi_t <= phi - 0.5 * alpha * gnorm2) {
                w = trial;
                phi = phi_t;
                alpha *= 1.5;
                break;
            }
            alpha *= 0.5;
        }
    }
    return w;
}

}  // namespace vps
