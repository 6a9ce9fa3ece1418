#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "vps/energy.hpp"
#include "vps/fields.hpp"
#include "vps/material.hpp"
#include "vps/stepper.hpp"

namespace vps {

struct RateFit {
    std::vector<double> xs;
    std::vector<double> ys;
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (log x, log y).
RateFit fit_rate(const std::vector<double>& xs, const std::vector<double>& ys);

/// r(tₙ) = 𝓔(𝐮ₙ) - 𝓔(𝐮₀) + Σ_{l≤n} ⟨G v_l, v_l⟩ dt.
std::vector<double> edb_residual(const Trajectory& traj, const Model& model);

/// Relative defect |𝓡(v) + 𝓡*(Gv) - ⟨Gv, v⟩| / ⟨Gv, v⟩ per step (entry n for the step ending at n).
std::vector<double> fenchel_defects(const Trajectory& traj, const Model& model);

/// ‖δ𝓔(𝐮ₙ) + G(𝐮ₙ₋₁)vₙ‖ relative to the size of the terms; reproduces the covector from the velocity.
std::vector<double> covector_mismatch(const Trajectory& traj, const Model& model);

/// ‖zₙ‖∞ ≤ ‖z₀‖∞ + (1/τ_*) Σ dt ‖K(u_l)‖∞ at every state; returns the largest ratio lhs / rhs.
double z_linf_bound_ratio(const Trajectory& traj, const Model& model);

/// sup over the fine grid of ‖û_coarse(t) - û_fine(t)‖_H.
double cauchy_sup(const Trajectory& coarse, const Trajectory& fine);
/// sup_t ‖û(t) - ū(t)‖_H = maxₙ ‖𝐮ₙ₊₁ - 𝐮ₙ‖_H.
double interpolant_gap(const Trajectory& traj);

struct StabilityReport {
    std::vector<double> times;
    std::vector<double> diff_norm;
    std::vector<double> gronwall_integrand;
    double fitted_C = 0.0;
    bool applicable = false;  // false for identical data: diff ≡ 0
};

StabilityReport stability_harness(const Field& u0, const Field& z0, const Field& du, const Field& dz,
                                  const Model& model, const StepperConfig& cfg);

/// Smooth random states with a prescribed mass.
class StateSampler {
public:
    StateSampler(const Grid& grid, std::uint64_t seed);
    Field profile(double amplitude, bool with_constant = false);
    State state(const Model& model, double mass);
    double uniform(double lo, double hi);

private:
    Grid grid_;
    std::mt19937_64 rng_;
};

struct SuiteReport {
    int samples = 0;
    int violations = 0;
    double statistic = 0.0;  // min margin, fitted constant or max ratio depending on the suite
    std::vector<double> values;
};

SuiteReport subgradient_suite(const Model& model, int n_samples, std::uint64_t seed, const Grid& grid);
/// statistic = largest C₁ needed over the sample.
SuiteReport monotonicity_suite(const Model& model, int n_samples, std::uint64_t seed, const Grid& grid);
/// statistic = largest ‖u - m‖_{H²} / (‖(u - m, z)‖_H + ‖δ𝓔(𝐮)‖_{H*}).
SuiteReport w_estimate_suite(const Model& model, int n_samples, std::uint64_t seed, const Grid& grid);
/// Discrete interpolation ‖f‖² ≤ ‖f‖_{H¹}‖f‖_{H⁻¹}; statistic = largest ratio lhs / rhs.
SuiteReport interpolation_suite(int n_samples, std::uint64_t seed, const Grid& grid);

/// Weak-form defect of q̇ = -A(u)u̇ - q/τ(u), q = z - K(u), tested on low cosine modes; one entry per step.
std::vector<double> original_variables_residual(const Trajectory& traj, const Model& model, int n_test = 8);

}  // namespace vps
