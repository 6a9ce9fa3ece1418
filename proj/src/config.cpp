#include "vps/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "vps/errors.hpp"

namespace vps {

Experiment parse_experiment(const std::string& s) {
    if (s == "simulate") return Experiment::Simulate;
    if (s == "relax") return Experiment::Relax;
    if (s == "verify") return Experiment::Verify;
    if (s == "stability") return Experiment::Stability;
    if (s == "convergence") return Experiment::Convergence;
    throw ValidationError("experiment", "unknown experiment '" + s + "'");
}

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::Simulate: return "simulate";
        case Experiment::Relax: return "relax";
        case Experiment::Verify: return "verify";
        case Experiment::Stability: return "stability";
        default: return "convergence";
    }
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double to_double(const std::string& v, int line) {
    double x = 0.0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ParseError("not a number: '" + v + "'", line);
    return x;
}

long long to_int(const std::string& v, int line) {
    long long x = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ParseError("not an integer: '" + v + "'", line);
    return x;
}

std::vector<double> to_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), line));
    if (out.empty()) throw ParseError("empty list", line);
    return out;
}

std::string list_str(const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

struct Key {
    std::function<void(RunConfig&, const std::string&, int)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define REAL(field) Key{[](RunConfig& c, const std::string& v, int l) { c.field = to_double(v, l); }, \
                        [](const RunConfig& c) { return fmt(c.field); }}
#define INT(field) Key{[](RunConfig& c, const std::string& v, int l) { c.field = static_cast<int>(to_int(v, l)); }, \
                       [](const RunConfig& c) { return std::to_string(c.field); }}
#define TEXT(field) Key{[](RunConfig& c, const std::string& v, int) { c.field = v; }, \
                        [](const RunConfig& c) { return c.field; }}
#define LIST(field) Key{[](RunConfig& c, const std::string& v, int l) { c.field = to_list(v, l); }, \
                        [](const RunConfig& c) { return list_str(c.field); }}

// Ordered by section so dump_config emits a readable file.
const std::vector<std::pair<std::string, Key>>& keys() {
    static const std::vector<std::pair<std::string, Key>> k = {
        {"experiment", Key{[](RunConfig& c, const std::string& v, int) { c.experiment = parse_experiment(v); },
                           [](const RunConfig& c) { return experiment_name(c.experiment); }}},
        {"seed", Key{[](RunConfig& c, const std::string& v, int l) {
                         long long s = to_int(v, l);
                         if (s < 0) throw ValidationError("seed", "must be nonnegative");
                         c.seed = static_cast<std::uint64_t>(s);
                     },
                     [](const RunConfig& c) { return std::to_string(c.seed); }}},
        {"output_dir", TEXT(output_dir)},
        {"model.potential", TEXT(potential)},
        {"model.response", TEXT(response)},
        {"model.A_const", REAL(A_const)},
        {"model.tau_const", REAL(tau_const)},
        {"grid.L", REAL(L)},
        {"grid.N", INT(N)},
        {"initial.mass", REAL(mass)},
        {"initial.amplitude", REAL(amplitude)},
        {"initial.mode", INT(mode)},
        {"stepper.dt", REAL(dt)},
        {"stepper.T", REAL(T)},
        {"stepper.newton_tol", REAL(newton_tol)},
        {"stepper.newton_max_iter", INT(newton_max_iter)},
        {"stepper.dt_backoff", REAL(dt_backoff)},
        {"scaling.eps", LIST(eps)},
        {"scaling.gamma", REAL(gamma)},
        {"scaling.kappa_exp", REAL(kappa_exp)},
        {"scaling.perturbation", REAL(perturbation)},
        {"scaling.samples", INT(samples)},
        {"scaling.cases", TEXT(cases)},
        {"scaling.exponent", REAL(exponent)},
        {"verify.samples", INT(verify_samples)},
        {"stability.amplitude", REAL(perturbation_amplitude)},
        {"stability.mode", INT(perturbation_mode)},
        {"convergence.dt_list", LIST(dt_list)},
        {"convergence.T", REAL(convergence_T)},
        {"output.snapshot_every", INT(snapshot_every)},
    };
    return k;
}

#undef REAL
#undef INT
#undef TEXT
#undef LIST

const Key* find_key(const std::string& name) {
    for (const auto& [n, k] : keys())
        if (n == name) return &k;
    return nullptr;
}

bool divides(double dt, double T) {
    if (T == 0.0) return true;
    double n = std::round(T / dt);
    return n >= 1 && std::abs(n * dt - T) <= 1e-6 * T;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string raw, section;
    int line = 0;
    std::map<std::string, int> seen;
    while (std::getline(ss, raw)) {
        ++line;
        std::string s = raw;
        size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ParseError("malformed section header", line);
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) throw ParseError("empty section name", line);
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
        std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key", line);
        if (value.empty()) throw ParseError("missing value for '" + key + "'", line);
        std::string full = section.empty() ? key : section + "." + key;
        const Key* k = find_key(full);
        if (!k) throw ParseError("unknown key '" + full + "'", line);
        if (seen.count(full)) throw ParseError("duplicate key '" + full + "'", line);
        seen[full] = line;
        k->set(cfg, value, line);
    }
    validate(cfg);
    return cfg;
}

void validate(const RunConfig& c) {
    if (c.potential != "double_well") throw ValidationError("model.potential", "only double_well is available");
    if (c.response != "asymmetric" && c.response != "constant")
        throw ValidationError("model.response", "expected asymmetric or constant");
    if (c.response == "constant" && !(c.A_const > 0.0 && c.tau_const > 0.0))
        throw ValidationError("A_const, tau_const > 0");
    if (!(c.L > 0.0) || !std::isfinite(c.L)) throw ValidationError("L", "must be positive");
    if (c.N < 4) throw ValidationError("N", "need at least 4 cells");
    if (c.mode < 0) throw ValidationError("initial.mode", "must be nonnegative");
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ValidationError("dt", "must be positive");
    if (!(c.T >= 0.0) || !std::isfinite(c.T)) throw ValidationError("T", "must be nonnegative");
    if (!divides(c.dt, c.T)) throw ValidationError("dt divides T", "T / dt must be an integer");
    if (!(c.newton_tol > 0.0)) throw ValidationError("newton_tol", "must be positive");
    if (c.newton_max_iter < 1) throw ValidationError("newton_max_iter", "must be at least 1");
    if (!(c.dt_backoff > 0.0 && c.dt_backoff < 1.0)) throw ValidationError("dt_backoff", "must lie in (0, 1)");
    if (c.gamma < 0.0 || c.kappa_exp < 0.0) throw ValidationError("gamma, kappa >= 0");
    if (c.gamma * c.kappa_exp != 0.0) throw ValidationError("γ·κ = 0");
    for (size_t i = 0; i < c.eps.size(); ++i) {
        if (!(c.eps[i] > 0.0 && c.eps[i] <= 1.0)) throw ValidationError("eps", "need 0 < eps <= 1");
        if (i > 0 && !(c.eps[i] < c.eps[i - 1])) throw ValidationError("eps decreasing");
    }
    if (!(c.perturbation >= 0.0 && c.perturbation < 1.0)) throw ValidationError("perturbation", "must lie in [0, 1)");
    if (c.cases != "all" && c.cases != "config") throw ValidationError("scaling.cases", "expected all or config");
    if (!(c.exponent > 0.0)) throw ValidationError("scaling.exponent", "must be positive");
    if (c.samples < 2) throw ValidationError("scaling.samples", "need at least 2");
    if (c.verify_samples < 1) throw ValidationError("verify.samples", "need at least 1");
    if (c.perturbation_mode < 1) throw ValidationError("stability.mode", "must be at least 1");
    if (c.dt_list.size() < 3) throw ValidationError("convergence.dt_list", "need at least 3 time steps");
    for (size_t i = 0; i < c.dt_list.size(); ++i) {
        if (!(c.dt_list[i] > 0.0)) throw ValidationError("convergence.dt_list", "must be positive");
        if (i > 0 && !(c.dt_list[i] < c.dt_list[i - 1]))
            throw ValidationError("convergence.dt_list", "must be strictly decreasing");
        if (!divides(c.dt_list[i], c.convergence_T)) throw ValidationError("dt divides T", "in convergence.dt_list");
    }
    if (!(c.convergence_T > 0.0)) throw ValidationError("convergence.T", "must be positive");
    if (c.snapshot_every < 1) throw ValidationError("output.snapshot_every", "must be at least 1");
}

std::string dump_config(const RunConfig& c) {
    std::string out, section;
    for (const auto& [name, k] : keys()) {
        size_t dot = name.find('.');
        std::string sec = dot == std::string::npos ? "" : name.substr(0, dot);
        std::string key = dot == std::string::npos ? name : name.substr(dot + 1);
        if (sec != section) {
            out += "\n[" + sec + "]\n";
            section = sec;
        }
        out += key + " = " + k.get(c) + "\n";
    }
    return out;
}

Model build_model(const RunConfig& c) {
    ResponseSpec r = c.response == "constant" ? constant_response(c.A_const, c.tau_const) : asymmetric_response();
    return make_model(double_well_potential(), r);
}

Grid build_grid(const RunConfig& c) { return Grid(c.L, c.N); }

StepperConfig build_stepper(const RunConfig& c) {
    StepperConfig s;
    s.dt = c.dt;
    s.t_end = c.T;
    s.newton_tol = c.newton_tol;
    s.newton_max_iter = c.newton_max_iter;
    s.dt_backoff = c.dt_backoff;
    return s;
}

State build_initial(const RunConfig& c, const Model& m) {
    return cosine_initial(build_grid(c), m, c.mass, c.amplitude, c.mode);
}

}  // namespace vps
