#pragma once

#include <string>
#include <vector>

#include "vps/energy.hpp"
#include "vps/fields.hpp"
#include "vps/material.hpp"
#include "vps/stepper.hpp"

namespace vps {

enum class CaseLabel { CH, vCH, mAC };

struct ScalingCase {
    CaseLabel label;
    double gamma;
    double kappa_exp;
};

/// CH: γ = 0, κ > 0; vCH: γ = κ = 0; mAC: γ > 0, κ = 0.
ScalingCase classify_case(double gamma, double kappa_exp);
std::string case_name(CaseLabel label);
std::string case_signature(CaseLabel label);  // "(0,+)", "(0,0)", "(+,0)"

struct LimitOptions {
    double newton_tol = 1e-11;
    int newton_max_iter = 50;
};

Field ch_step(const Field& u, const Model& model, double dt, const LimitOptions& opt = {});
Field vch_step(const Field& u, const Model& model, double dt, const LimitOptions& opt = {});
Field mac_step(const Field& u, const Model& model, double dt, const LimitOptions& opt = {});
Field limit_step(CaseLabel label, const Field& u, const Model& model, double dt, const LimitOptions& opt = {});

/// States u⁰, ..., u^N of the limit solver.
std::vector<Field> run_limit(CaseLabel label, const Field& u0, const Model& model, double dt, int steps,
                             const LimitOptions& opt = {});

State well_prepared(const Field& u0, const ScalingParams& scaling);

struct RelaxConfig {
    double dt = 1e-3;
    double t_end = 0.1;
    double newton_tol = 1e-11;
    int newton_max_iter = 50;
    double perturbation = 0.1;
    int samples = 16;
};

struct RelaxReport {
    ScalingCase scaling_case;
    std::vector<double> eps_values;
    std::vector<double> sup_t_u_error;
    std::vector<double> sup_t_z_error;
    std::vector<double> energy_gap;
    std::vector<bool> stress_bound_ok;
    std::vector<double> stress_bound_ratio;  // max_t ‖z - K_ε(u)‖ / (ε √(2𝓔_ε(𝐮⁰)))
};

RelaxReport relax_sweep(const Field& u0, const Model& model_limit, const ScalingCase& sc,
                        const std::vector<double>& eps_values, const RelaxConfig& cfg);

/// ‖P₀(-Δu + f(u) - A(u)ξ - ã - μ)‖ in Ĥ⁻¹, ã = ⨍(f(u) - A(u)ξ).
double limit_subdifferential_residual(const Field& u, const Field& mu, const Field& xi, const Model& model);

/// Per-step inclusion residual along a limit path, with (μ, ξ) built from forward differences at uₙ.
std::vector<double> limit_inclusion_residuals(CaseLabel label, const std::vector<Field>& path, const Model& model,
                                              double dt);

}  // namespace vps
