#include "vps/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <numbers>

#include "vps/errors.hpp"
#include "vps/limits.hpp"
#include "vps/output.hpp"

namespace vps {

namespace {

double vmax(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

double max_energy_increase(const Trajectory& tr) {
    double m = 0.0;
    for (size_t n = 1; n < tr.energies.size(); ++n) m = std::max(m, tr.energies[n].total - tr.energies[n - 1].total);
    return m;
}

std::string path_in(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

std::vector<ScalingCase> relax_cases(const RunConfig& cfg) {
    if (cfg.cases == "config") return {classify_case(cfg.gamma, cfg.kappa_exp)};
    return {classify_case(0.0, cfg.exponent), classify_case(0.0, 0.0), classify_case(cfg.exponent, 0.0)};
}

void simulate(const RunConfig& cfg, const Model& m) {
    StepperConfig sc = build_stepper(cfg);
    Trajectory tr = run(build_initial(cfg, m), m, sc);
    write_timeseries(path_in(cfg, "timeseries.csv"), tr, m);
    write_snapshots(path_in(cfg, "snapshots.bin"), tr, cfg.snapshot_every);
}

void relax(const RunConfig& cfg, const Model& m) {
    RelaxConfig rc;
    rc.dt = cfg.dt;
    rc.t_end = cfg.T;
    rc.newton_tol = cfg.newton_tol;
    rc.newton_max_iter = cfg.newton_max_iter;
    rc.perturbation = cfg.perturbation;
    rc.samples = cfg.samples;
    Field u0 = build_initial(cfg, m).u;

    CsvWriter csv({"case", "eps", "sup_u_error", "sup_z_error", "energy_gap", "stress_bound_ratio", "stress_bound_ok"});
    for (const ScalingCase& c : relax_cases(cfg)) {
        RelaxReport r = relax_sweep(u0, m, c, cfg.eps, rc);
        for (size_t i = 0; i < r.eps_values.size(); ++i)
            csv.row({case_name(c.label), num(r.eps_values[i]), num(r.sup_t_u_error[i]), num(r.sup_t_z_error[i]),
                     num(r.energy_gap[i]), num(r.stress_bound_ratio[i]), r.stress_bound_ok[i] ? "1" : "0"});
    }
    csv.write(path_in(cfg, "relax_errors.csv"));
}

int verify(const RunConfig& cfg, const Model& m) {
    const Grid g = build_grid(cfg);
    const int n = cfg.verify_samples;
    CsvWriter csv({"suite", "samples", "violations", "statistic", "passed"});
    bool all = true;
    auto add = [&](const std::string& name, int samples, int violations, double stat, bool ok) {
        all = all && ok;
        csv.row({name, std::to_string(samples), std::to_string(violations), num(stat), ok ? "1" : "0"});
    };

    auto sub = std::async(std::launch::async, [&] { return subgradient_suite(m, n, cfg.seed, g); });
    auto mono = std::async(std::launch::async, [&] { return monotonicity_suite(m, n, cfg.seed + 1, g); });
    auto west = std::async(std::launch::async, [&] { return w_estimate_suite(m, n, cfg.seed + 2, g); });
    SuiteReport ip = interpolation_suite(n, cfg.seed + 3, g);

    StepperConfig sc = build_stepper(cfg);
    Trajectory tr = run(build_initial(cfg, m), m, sc);
    std::vector<double> fd = fenchel_defects(tr, m);
    int fd_bad = static_cast<int>(std::count_if(fd.begin(), fd.end(), [](double x) { return x > 1e-10; }));
    double rise = max_energy_increase(tr);

    SuiteReport s = sub.get();
    add("subgradient", s.samples, s.violations, s.statistic, s.violations == 0);
    add("interpolation", ip.samples, ip.violations, ip.statistic, ip.violations == 0);
    SuiteReport mo = mono.get();
    add("monotonicity", mo.samples, mo.violations, mo.statistic, mo.statistic <= kDefaultC1);
    SuiteReport we = west.get();
    add("w-estimate", we.samples, we.violations, we.statistic, std::isfinite(we.statistic));
    add("fenchel", static_cast<int>(fd.size()), fd_bad, vmax(fd), fd_bad == 0);
    add("energy-monotone", static_cast<int>(tr.energies.size()) - 1, rise > 1e-9 ? 1 : 0, rise, rise <= 1e-9);
    csv.write(path_in(cfg, "verify.csv"));
    return all ? 0 : 2;
}

void stability(const RunConfig& cfg, const Model& m) {
    const Grid g = build_grid(cfg);
    State s0 = build_initial(cfg, m);
    const double L = cfg.L;
    const int k = cfg.perturbation_mode;
    Field du = Field::sample(g, [&](double x) { return cfg.perturbation_amplitude * std::cos(k * std::numbers::pi * x / L); });
    du = subtract_mean(du);
    Field dz = (s0.u + du).map(m.K) - s0.z;

    StepperConfig sc = build_stepper(cfg);
    StabilityReport main = stability_harness(s0.u, s0.z, du, dz, m, sc);
    CsvWriter csv({"t", "diff_norm", "gronwall_integrand"});
    for (size_t n = 0; n < main.times.size(); ++n)
        csv.row({num(main.times[n]), num(main.diff_norm[n]), num(main.gronwall_integrand[n])});
    csv.write(path_in(cfg, "stability.csv"));

    CsvWriter sum({"dt", "fitted_C", "applicable"});
    std::vector<double> dts = cfg.dt_list;
    if (std::find(dts.begin(), dts.end(), cfg.dt) == dts.end()) dts.push_back(cfg.dt);
    std::sort(dts.rbegin(), dts.rend());
    for (double dt : dts) {
        StepperConfig c = sc;
        c.dt = dt;
        c.t_end = std::round(cfg.T / dt) * dt;
        StabilityReport r = dt == cfg.dt ? main : stability_harness(s0.u, s0.z, du, dz, m, c);
        sum.row({num(dt), num(r.fitted_C), r.applicable ? "1" : "0"});
    }
    sum.write(path_in(cfg, "stability_summary.csv"));
}

void convergence(const RunConfig& cfg, const Model& m) {
    StepperConfig base = build_stepper(cfg);
    base.t_end = cfg.convergence_T;
    ConvergenceStudy st = convergence_study(build_initial(cfg, m), m, base, cfg.dt_list);

    CsvWriter csv({"dt", "steps", "edb_final", "edb_max", "cauchy", "z_ode_error", "q_residual", "interp_gap",
                   "max_energy_increase"});
    for (size_t i = 0; i < st.dts.size(); ++i)
        csv.row({num(st.dts[i]), std::to_string(st.steps[i]), num(st.edb_final[i]), num(st.edb_max[i]),
                 i < st.cauchy.size() ? num(st.cauchy[i]) : "", num(st.z_ode_error[i]), num(st.q_residual[i]),
                 num(st.interp_gap[i]), num(st.max_energy_increase[i])});
    csv.write(path_in(cfg, "convergence.csv"));

    CsvWriter rates({"quantity", "slope", "intercept"});
    auto fit = [&](const std::string& name, const std::vector<double>& xs, const std::vector<double>& ys) {
        try {
            RateFit r = fit_rate(xs, ys);
            rates.row({name, num(r.slope), num(r.intercept)});
        } catch (const DegenerateInput&) {
            rates.row({name, "nan", "nan"});
        }
    };
    fit("edb", st.dts, st.edb_final);
    std::vector<double> cdt(st.dts.begin(), st.dts.end() - 1);  // coarse member of each pair
    fit("cauchy", cdt, st.cauchy);
    fit("z_ode", st.dts, st.z_ode_error);
    fit("q_residual", st.dts, st.q_residual);
    fit("interp_gap", st.dts, st.interp_gap);
    rates.write(path_in(cfg, "rates.csv"));
}

}  // namespace

ConvergenceStudy convergence_study(const State& initial, const Model& m, const StepperConfig& base,
                                   const std::vector<double>& dts) {
    std::vector<std::future<Trajectory>> jobs;
    for (double dt : dts) {
        StepperConfig c = base;
        c.dt = dt;
        jobs.push_back(std::async(std::launch::async, [c, &initial, &m] { return run(initial, m, c); }));
    }
    std::vector<Trajectory> trs;
    for (auto& j : jobs) trs.push_back(j.get());

    ConvergenceStudy st;
    st.dts = dts;
    for (const Trajectory& tr : trs) {
        std::vector<double> r = edb_residual(tr, m);
        st.edb_final.push_back(std::abs(r.back()));
        st.edb_max.push_back(*std::max_element(r.begin(), r.end()));
        st.steps.push_back(static_cast<int>(tr.states.size()) - 1);

        std::vector<Field> us;
        for (const State& s : tr.states) us.push_back(s.u);
        std::vector<Field> zr = z_ode_reconstruct(us, tr.times, tr.states.front().z, m);
        double ze = 0.0;
        for (size_t n = 0; n < zr.size(); ++n) ze = std::max(ze, norm_linf(tr.states[n].z - zr[n]));
        st.z_ode_error.push_back(ze);

        double qi = 0.0;
        for (double d : original_variables_residual(tr, m)) qi += tr.dt * d;
        st.q_residual.push_back(qi);
        st.interp_gap.push_back(interpolant_gap(tr));
        st.max_energy_increase.push_back(max_energy_increase(tr));
    }
    for (size_t i = 0; i + 1 < trs.size(); ++i) st.cauchy.push_back(cauchy_sup(trs[i], trs[i + 1]));
    return st;
}

int run_experiment(const RunConfig& cfg, const std::string& config_text) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create " + cfg.output_dir + ": " + ec.message());
    write_text(path_in(cfg, "config.ini"), config_text);
    write_text(path_in(cfg, "config.resolved.ini"), dump_config(cfg));

    Model m = build_model(cfg);
    switch (cfg.experiment) {
        case Experiment::Simulate: simulate(cfg, m); return 0;
        case Experiment::Relax: relax(cfg, m); return 0;
        case Experiment::Verify: return verify(cfg, m);
        case Experiment::Stability: stability(cfg, m); return 0;
        case Experiment::Convergence: convergence(cfg, m); return 0;
    }
    return 0;
}

}  // namespace vps
