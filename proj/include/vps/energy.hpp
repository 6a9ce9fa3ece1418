#pragma once

#include "vps/fields.hpp"
#include "vps/material.hpp"

namespace vps {

struct EnergyBreakdown {
    double gradient_part = 0.0;   // ½∫|∇u|²
    double potential_part = 0.0;  // ∫F(u)
    double stress_part = 0.0;     // ∫(z - K(u))² / (2ε²)
    double total = 0.0;
};

/// Default C₁ for Λ: the largest value the monotonicity suite needed (L = 8, N ≤ 512), rounded up.
/// On L = 1 the suite needs none since π² > β.
inline constexpr double kDefaultC1 = 0.02;

EnergyBreakdown energy(const State& s, const Model& model, double eps = 1.0);
Covector delta_energy(const State& s, const Model& model, double eps = 1.0);
double a_mean(const State& s, const Model& model, double eps = 1.0);

/// ‖z - K(u)‖ in the discrete max norm.
double stress_linf(const State& s, const Model& model);
Field stress_field(const State& s, const Model& model);

double lambda_mod(const State& s, const Model& model);
double Lambda_mod(const State& s, const Model& model, double C1 = kDefaultC1);
double omega_mod(const State& s, const Model& model);

double energy_ch(const Field& u, const Model& model);

/// (u, K_ε(u)).
State gamma_recovery(const Field& u, const ScalingParams& scaling);

}  // namespace vps
