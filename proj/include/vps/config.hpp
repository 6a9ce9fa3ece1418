#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vps/limits.hpp"
#include "vps/material.hpp"
#include "vps/stepper.hpp"

namespace vps {

enum class Experiment { Simulate, Relax, Verify, Stability, Convergence };

Experiment parse_experiment(const std::string& name);
std::string experiment_name(Experiment e);

struct RunConfig {
    Experiment experiment = Experiment::Simulate;
    std::uint64_t seed = 42;
    std::string output_dir = "out";

    // [model]
    std::string potential = "double_well";
    std::string response = "asymmetric";  // or "constant"
    double A_const = 1.0;
    double tau_const = 1.0;

    // [grid]
    double L = 1.0;
    int N = 256;

    // [initial]  u₀ = mass + amplitude cos(mode πx/L), z₀ = K(u₀)
    double mass = 0.5;
    double amplitude = 0.05;
    int mode = 2;

    // [stepper]
    double dt = 1e-3;
    double T = 0.5;
    double newton_tol = 1e-11;
    int newton_max_iter = 50;
    double dt_backoff = 0.5;

    // [scaling]
    std::vector<double> eps = {0.4, 0.2, 0.1, 0.05};
    double gamma = 0.0;
    double kappa_exp = 0.0;
    double perturbation = 0.1;
    int samples = 16;
    std::string cases = "all";  // "all": CH, vCH, mAC with `exponent`; "config": the (gamma, kappa_exp) case
    double exponent = 2.0;

    // [verify]
    int verify_samples = 1000;

    // [stability]
    double perturbation_amplitude = 1e-2;
    int perturbation_mode = 3;

    // [convergence]
    std::vector<double> dt_list = {4e-3, 2e-3, 1e-3, 5e-4};
    double convergence_T = 0.256;  // 0.25 is not a multiple of 4e-3

    // [output]
    int snapshot_every = 1;
};

/// Flat `key = value` text with `[section]` headers; `#` starts a comment.
RunConfig parse_config(const std::string& text);
/// Throws ValidationError naming the violated invariant.
void validate(const RunConfig& cfg);
/// Every key with its effective value, in the input format.
std::string dump_config(const RunConfig& cfg);

Model build_model(const RunConfig& cfg);
Grid build_grid(const RunConfig& cfg);
StepperConfig build_stepper(const RunConfig& cfg);
State build_initial(const RunConfig& cfg, const Model& model);

}  // namespace vps
