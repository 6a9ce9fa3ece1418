#include "vps/limits.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>

#include "vps/banded.hpp"
#include "vps/implicit.hpp"

namespace vps {

ScalingCase classify_case(double gamma, double kappa_exp) {
    if (gamma < 0.0 || kappa_exp < 0.0) throw ValidationError("gamma, kappa >= 0");
    if (gamma * kappa_exp != 0.0) throw ValidationError("γ·κ = 0");
    if (gamma == 0.0 && kappa_exp > 0.0) return {CaseLabel::CH, gamma, kappa_exp};
    if (gamma == 0.0) return {CaseLabel::vCH, gamma, kappa_exp};
    return {CaseLabel::mAC, gamma, kappa_exp};
}

std::string case_name(CaseLabel l) {
    switch (l) {
        case CaseLabel::CH: return "CH";
        case CaseLabel::vCH: return "vCH";
        default: return "mAC";
    }
}

std::string case_signature(CaseLabel l) {
    switch (l) {
        case CaseLabel::CH: return "(0,+)";
        case CaseLabel::vCH: return "(0,0)";
        default: return "(+,0)";
    }
}

namespace {

std::optional<Field> flux_limit_attempt(const Field& u, const Model& m, double dt, const std::vector<double>* visc,
                                        const LimitOptions& opt) {
    const int n = u.size();
    FluxStepProblem p;
    p.u_prev = &u.values();
    p.h = u.grid().h();
    p.b = dt;
    p.visc = visc;
    p.tol = opt.newton_tol;
    p.max_iter = opt.newton_max_iter;
    p.local = [&m, n](const double* x, double* r, double* g) {
        for (int j = 0; j < n; ++j) {
            r[j] = m.f(x[j]);
            g[j] = m.df(x[j]);
        }
    };
    FluxStepResult fr = solve_flux_step(p);
    if (!fr.converged) return std::nullopt;
    return Field(u.grid(), std::move(fr.u));
}

// Mass-conserving Allen-Cahn: M w + dt(-Δu⁺ + f(u⁺)) = λ, mean(w) = 0, u⁺ = uₙ + w.
std::optional<Field> mac_attempt(const Field& un, const Model& m, double dt, const LimitOptions& opt) {
    const int n = un.size();
    const double h = un.grid().h(), ih2 = 1.0 / (h * h);
    std::vector<double> M(n), w(n, 0.0), u(n), lap(n), R(n);
    for (int j = 0; j < n; ++j) {
        double a = m.A(un[j]);
        M[j] = a * a * m.tau(un[j]);
    }
    double lambda = 0.0;
    auto rms = [n](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s / n);
    };
    for (int it = 0; it <= opt.newton_max_iter; ++it) {
        for (int j = 0; j < n; ++j) u[j] = un[j] + w[j];
        raw::laplacian(u.data(), n, h, lap.data());
        std::vector<double> fu(n);
        for (int j = 0; j < n; ++j) {
            fu[j] = m.f(u[j]);
            R[j] = M[j] * w[j] + dt * (-lap[j] + fu[j]) - lambda;
        }
        double scale = rms(M) * rms(w) + dt * (1.0 + rms(fu) + 4.0 * ih2 * rms(u)) + std::abs(lambda);
        double sr = rms(R) / scale;
        if (!std::isfinite(sr)) return std::nullopt;
        if (sr <= opt.newton_tol) return Field(un.grid(), u);
        if (it == opt.newton_max_iter) break;

        BandMatrix J(n, 1, 1);
        for (int i = 0; i < n; ++i) {
            double left = i > 0 ? ih2 : 0.0, right = i + 1 < n ? ih2 : 0.0;
            J.add(i, i, M[i] + dt * (left + right + m.df(u[i])));
            if (i > 0) J.add(i, i - 1, -dt * left);
            if (i + 1 < n) J.add(i, i + 1, -dt * right);
        }
        if (!J.factor()) return std::nullopt;
        std::vector<double> a(n), b(n, 1.0);
        for (int j = 0; j < n; ++j) a[j] = -R[j];
        J.solve(a);
        J.solve(b);
        double ma = raw::sum(a.data(), n), mb = raw::sum(b.data(), n);
        double dl = -ma / mb;
        for (int j = 0; j < n; ++j) w[j] += a[j] + dl * b[j];
        lambda += dl;
        // The increment must stay mean-free; remove the rounding residue of the bordered solve.
        double mw = raw::sum(w.data(), n) / n;
        for (double& x : w) x -= mw;
    }
    return std::nullopt;
}

template <class Attempt>
Field limit_advance(const Field& u, const Model& m, double dt, double dt_min, double tol, Attempt&& attempt) {
    if (auto r = attempt(u, dt)) {
        if (energy_ch(*r, m) <= energy_ch(u, m) + tol) return *r;
    }
    double sub = 0.5 * dt;
    if (sub < dt_min * (1.0 - 1e-12)) throw StepFailed("limit solver failed down to dt = " + std::to_string(dt));
    Field mid = limit_advance(u, m, sub, dt_min, tol, attempt);
    return limit_advance(mid, m, sub, dt_min, tol, attempt);
}

}  // namespace

Field ch_step(const Field& u, const Model& m, double dt, const LimitOptions& opt) {
    auto at = [&](const Field& x, double d) { return flux_limit_attempt(x, m, d, nullptr, opt); };
    return limit_advance(u, m, dt, dt * std::ldexp(1.0, -10), opt.newton_tol, at);
}

Field vch_step(const Field& u, const Model& m, double dt, const LimitOptions& opt) {
    auto at = [&](const Field& x, double d) {
        std::vector<double> visc(x.size());
        for (int j = 0; j < x.size(); ++j) {
            double a = m.A(x[j]);
            visc[j] = a * a * m.tau(x[j]);
        }
        return flux_limit_attempt(x, m, d, &visc, opt);
    };
    return limit_advance(u, m, dt, dt * std::ldexp(1.0, -10), opt.newton_tol, at);
}

Field mac_step(const Field& u, const Model& m, double dt, const LimitOptions& opt) {
    auto at = [&](const Field& x, double d) { return mac_attempt(x, m, d, opt); };
    return limit_advance(u, m, dt, dt * std::ldexp(1.0, -10), opt.newton_tol, at);
}

Field limit_step(CaseLabel l, const Field& u, const Model& m, double dt, const LimitOptions& opt) {
    switch (l) {
        case CaseLabel::CH: return ch_step(u, m, dt, opt);
        case CaseLabel::vCH: return vch_step(u, m, dt, opt);
        default: return mac_step(u, m, dt, opt);
    }
}

std::vector<Field> run_limit(CaseLabel l, const Field& u0, const Model& m, double dt, int steps,
                             const LimitOptions& opt) {
    std::vector<Field> path;
    path.reserve(steps + 1);
    path.push_back(u0);
    for (int k = 1; k <= steps; ++k) {
        try {
            path.push_back(limit_step(l, path.back(), m, dt, opt));
        } catch (const StepFailed& e) {
            throw StepFailed(case_name(l) + ": " + e.what() + " at step " + std::to_string(k), k);
        }
    }
    return path;
}

State well_prepared(const Field& u0, const ScalingParams& sc) { return gamma_recovery(u0, sc); }

RelaxReport relax_sweep(const Field& u0, const Model& model_limit, const ScalingCase& sc,
                        const std::vector<double>& eps_values, const RelaxConfig& cfg) {
    for (size_t i = 1; i < eps_values.size(); ++i)
        if (!(eps_values[i] < eps_values[i - 1])) throw ValidationError("eps decreasing");
    ScalingCase check = classify_case(sc.gamma, sc.kappa_exp);
    if (check.label != sc.label) throw ValidationError("case label", "does not match (gamma, kappa)");
    if (cfg.samples < 2) throw ValidationError("samples", "need at least 2");

    StepperConfig base;
    base.dt = cfg.dt;
    base.t_end = cfg.t_end;
    base.newton_tol = cfg.newton_tol;
    base.newton_max_iter = cfg.newton_max_iter;
    validate_config(base);
    const int steps = step_count(base);

    LimitOptions lopt{cfg.newton_tol, cfg.newton_max_iter};
    auto limit_future =
        std::async(std::launch::async, [&] { return run_limit(sc.label, u0, model_limit, cfg.dt, steps, lopt); });

    struct EpsRun {
        ScalingParams params;
        Trajectory traj;
    };
    std::vector<std::future<EpsRun>> runs;
    for (double eps : eps_values) {
        runs.push_back(std::async(std::launch::async, [&, eps] {
            ScalingParams p = make_scaling_family(model_limit, eps, sc.gamma, sc.kappa_exp, cfg.perturbation);
            StepperConfig c = base;
            c.scaling = Scaling{eps, sc.gamma, sc.kappa_exp};
            try {
                Trajectory t = run(well_prepared(u0, p), p.model_eps, c);
                return EpsRun{std::move(p), std::move(t)};
            } catch (const StepFailed& e) {
                throw StepFailed("eps = " + std::to_string(eps) + ": " + e.what(), e.step());
            }
        }));
    }
    std::vector<Field> limit = limit_future.get();

    RelaxReport rep;
    rep.scaling_case = sc;
    rep.eps_values = eps_values;
    for (size_t i = 0; i < runs.size(); ++i) {
        EpsRun er = runs[i].get();
        const Model& me = er.params.model_eps;
        const double eps = eps_values[i];
        const double e0 = er.traj.energies.front().total;
        const double bound = eps * std::sqrt(2.0 * e0);

        double ratio = 0.0;
        for (const State& s : er.traj.states) ratio = std::max(ratio, norm_l2(stress_field(s, me)) / bound);

        double su = 0.0, sz = 0.0, gap = 0.0;
        for (int k = 0; k < cfg.samples; ++k) {
            double t = cfg.t_end * k / (cfg.samples - 1);
            int idx = std::clamp(static_cast<int>(std::lround(t / cfg.dt)), 0, steps);
            const State& s = er.traj.states[idx];
            const Field& ul = limit[idx];
            su = std::max(su, norm_l2(s.u - ul));
            sz = std::max(sz, norm_l2(s.z - ul.map([&](double x) { return model_limit.K(x); })));
            gap = std::max(gap, std::abs(er.traj.energies[idx].total - energy_ch(ul, model_limit)));
        }
        rep.sup_t_u_error.push_back(su);
        rep.sup_t_z_error.push_back(sz);
        rep.energy_gap.push_back(gap);
        rep.stress_bound_ratio.push_back(ratio);
        rep.stress_bound_ok.push_back(ratio <= 1.0);
    }
    return rep;
}

double limit_subdifferential_residual(const Field& u, const Field& mu, const Field& xi, const Model& m) {
    require_same_grid(u, mu);
    require_same_grid(u, xi);
    const int n = u.size();
    std::vector<double> lap(n), loc(n), r(n);
    raw::laplacian(u.values().data(), n, u.grid().h(), lap.data());
    for (int j = 0; j < n; ++j) loc[j] = m.f(u[j]) - m.A(u[j]) * xi[j];
    double a = raw::sum(loc.data(), n) / n;
    for (int j = 0; j < n; ++j) r[j] = -lap[j] + loc[j] - a - mu[j];
    return norm_hm1av(subtract_mean(Field(u.grid(), std::move(r))));
}

std::vector<double> limit_inclusion_residuals(CaseLabel l, const std::vector<Field>& path, const Model& m, double dt) {
    std::vector<double> out;
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        const Field& u = path[k];
        Field v = subtract_mean((path[k + 1] - u) * (1.0 / dt));
        Field mu = Field::zeros(u.grid()), xi = Field::zeros(u.grid());
        if (l != CaseLabel::mAC) mu = inv_neumann_laplacian(v) * -1.0;
        if (l != CaseLabel::CH) {
            std::vector<double> x(u.size());
            for (int j = 0; j < u.size(); ++j) x[j] = -m.tau(u[j]) * m.A(u[j]) * v[j];
            xi = Field(u.grid(), std::move(x));
        }
        out.push_back(limit_subdifferential_residual(u, mu, xi, m));
    }
    return out;
}

}  // namespace vps
