#pragma once

#include <vector>

#include "vps/dissipation.hpp"
#include "vps/energy.hpp"
#include "vps/fields.hpp"
#include "vps/material.hpp"

namespace vps {

struct StepperConfig {
    double dt = 1e-3;
    double t_end = 0.5;
    double newton_tol = 1e-11;
    int newton_max_iter = 50;
    double dt_backoff = 0.5;
    Scaling scaling;
};

/// Throws ValidationError naming the offending field.
void validate_config(const StepperConfig& cfg);
int step_count(const StepperConfig& cfg);

struct StepResult {
    State state;
    Covector covector;
    double diss_increment = 0.0;  // Σ ⟨G v, v⟩ dt over the substeps taken
    int substeps = 1;
    double newton_residual = 0.0;
};

/// z⁺ = [c zₙ + K(u⁺)] / [c + 1] with c = ε^{κ+2} τ(uₙ) / dt.
Field z_update(const Field& u_next, const Field& z_prev, const Field& tau_prev, double dt, const Scaling& sc,
               const Model& model);

StepResult mm_step(const State& s, const Model& model, const StepperConfig& cfg);

struct Trajectory {
    double dt = 0.0;
    Scaling scaling;
    std::vector<double> times;
    std::vector<State> states;
    std::vector<Covector> covectors;  // δ𝓔 at each state
    std::vector<EnergyBreakdown> energies;
    std::vector<double> diss_increments;  // entry n belongs to the step ending at n; entry 0 is 0
    int substeps_taken = 0;
};

Trajectory run(const State& initial, const Model& model, const StepperConfig& cfg);

enum class Interpolant { Affine, LeftConst, RightConst };
State interpolant_eval(const Trajectory& traj, double t, Interpolant kind);

/// Trapezoidal evaluation of the variation-of-constants formula for ż = (K(u) - z)/τ(u).
std::vector<Field> z_ode_reconstruct(const std::vector<Field>& u_path, const std::vector<double>& times,
                                     const Field& z0, const Model& model);

/// u₀ = m + a cos(kπx/L), z₀ = K(u₀).
State cosine_initial(const Grid& grid, const Model& model, double m, double a, int k);

/// Φ(uₙ; w) = 𝓔_ε(w) + (1/(2dt)) ⟨G(uₙ)(w - uₙ), w - uₙ⟩.
double phi_kappa(const State& prev, const State& w, const Model& model, const StepperConfig& cfg);

/// Slow reference: direct descent on Φ in the H metric (tests only).
State minimize_phi_descent(const State& prev, const Model& model, const StepperConfig& cfg, int max_iter,
                           double grad_tol);

}  // namespace vps
