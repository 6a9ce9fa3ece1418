#pragma once

#include <functional>
#include <string>

namespace vps {

using ScalarFn = std::function<double(double)>;

/// Potential part of the material law: F = h - β u²/2 with h convex.
struct PotentialSpec {
    std::string name;
    ScalarFn F, f, df;
    double beta = 0.0;
    double p = 0.0, c1 = 0.0, c2 = 0.0;
};

/// Bulk modulus A, relaxation time τ and (optionally) the primitive K of A.
struct ResponseSpec {
    std::string name;
    ScalarFn A, dA;
    double A_lip = 0.0, A_lo = 0.0, A_hi = 0.0;
    ScalarFn tau, dtau;
    double tau_lip = 0.0, tau_lo = 0.0, tau_hi = 0.0;
    ScalarFn K;  // empty -> tabulated quadrature of A
};

struct Model {
    std::string name;
    ScalarFn F, f, df, h;
    double beta = 0.0;
    ScalarFn A, dA;
    double A_lip = 0.0, A_lo = 0.0, A_hi = 0.0;
    ScalarFn tau, dtau;
    double tau_lip = 0.0, tau_lo = 0.0, tau_hi = 0.0;
    ScalarFn K;
    double p = 0.0, c1 = 0.0, c2 = 0.0;

    double K_inv(double w) const;
};

/// Bounded sampling range used when validating a model.
inline constexpr double kSampleLo = -4.0;
inline constexpr double kSampleHi = 5.0;
inline constexpr int kSampleCount = 10000;

PotentialSpec double_well_potential();
ResponseSpec asymmetric_response();
ResponseSpec constant_response(double a, double t);

/// Assembles and validates a model; throws ValidationError naming the failed check.
Model make_model(const PotentialSpec& pot, const ResponseSpec& resp);
void validate_model(const Model& m);

/// Double well with A ≡ 1, τ ≡ 1.
Model default_double_well();
/// Double well with the tanh-shaped A and τ (the default material).
Model default_asymmetric_A_tau();
/// Double well with A ≡ a, τ ≡ t.
Model constant_model(double a, double t);

double k_inverse(const Model& model, double w);

/// Cubic Hermite table of ∫₀ᵘ A, exact derivative data at the nodes.
ScalarFn tabulated_primitive(const ScalarFn& A);

struct ScalingParams {
    double eps = 1.0;
    double gamma = 0.0;
    double kappa_exp = 0.0;
    double perturbation = 0.0;
    Model model_eps;
    Model model_limit;
    double sup_A_diff = 0.0;    // sup |A_ε - A| on the sample range
    double sup_tau_diff = 0.0;  // sup |τ_ε - τ| on the sample range
};

/// A_ε = A(1 + p ε sin(πu)), τ_ε = τ(1 + p ε cos(πu)), K_ε the primitive of A_ε.
ScalingParams make_scaling_family(const Model& model_limit, double eps, double gamma, double kappa_exp,
                                  double perturbation_size);

}  // namespace vps
