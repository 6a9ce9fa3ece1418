#pragma once

#include <string>
#include <vector>

#include "vps/config.hpp"
#include "vps/diagnostics.hpp"

namespace vps {

/// dt-refinement study on one initial state.
struct ConvergenceStudy {
    std::vector<double> dts;
    std::vector<double> edb_final;      // |r(T)|
    std::vector<double> edb_max;        // max_t r(t), one-sidedness check
    std::vector<int> steps;
    std::vector<double> cauchy;         // sup_t ‖û_dt - û_{dt'}‖_H for consecutive pairs
    std::vector<double> z_ode_error;    // maxₙ ‖zₙ - z_rec(tₙ)‖∞
    std::vector<double> q_residual;     // Σₙ dt dₙ, space-time weak-form defect of the q-equation
    std::vector<double> interp_gap;     // sup_t ‖û - ū‖_H
    std::vector<double> max_energy_increase;
};

ConvergenceStudy convergence_study(const State& initial, const Model& model, const StepperConfig& base,
                                   const std::vector<double>& dts);

/// Runs the configured experiment, writing its files into cfg.output_dir.
/// Returns the process exit status (0 ok, 2 if the verify suites fail).
int run_experiment(const RunConfig& cfg, const std::string& config_text);

}  // namespace vps
