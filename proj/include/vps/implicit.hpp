#pragma once

#include <functional>
#include <vector>

namespace vps {

/// Pointwise local part r(u) of the chemical potential and its derivative g = r'(u).
using LocalPotential = std::function<void(const double* u, double* r, double* g)>;

/// Implicit step written in flux form: u⁺ = uₙ + Δψ with
///   ψ - diag(visc) Δψ - b (-Δu⁺ + r(u⁺)) = 0.
/// Mass is conserved because u⁺ - uₙ is a discrete Laplacian image.
struct FluxStepProblem {
    const std::vector<double>* u_prev = nullptr;
    double h = 0.0;
    double b = 0.0;
    const std::vector<double>* visc = nullptr;  // optional
    LocalPotential local;
    double tol = 1e-11;
    int max_iter = 50;
};

struct FluxStepResult {
    std::vector<double> u;
    std::vector<double> psi;
    bool converged = false;
    int iterations = 0;
    double scaled_residual = 0.0;
};

FluxStepResult solve_flux_step(const FluxStepProblem& p);

}  // namespace vps
