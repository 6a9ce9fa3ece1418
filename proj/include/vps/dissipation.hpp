#pragma once

#include <utility>

#include "vps/fields.hpp"
#include "vps/material.hpp"

namespace vps {

/// ε and the two exponents; the same triple drives energy penalty and metric.
struct Scaling {
    double eps = 1.0;
    double gamma = 0.0;
    double kappa_exp = 0.0;
};

struct DissipationWeights {
    double w_u = 1.0;       // ε^γ
    double w_z_base = 1.0;  // ε^κ
    Field tau_at;           // τ_ε(u) frozen where the scheme evaluates it
    double eps = 1.0;
};

/// Weights with τ evaluated at u.
DissipationWeights make_weights(const Scaling& sc, const Model& model, const Field& u);

Covector apply_G(const DissipationWeights& w, const Field& v, const Field& y);
std::pair<Field, Field> apply_K(const DissipationWeights& w, const Covector& c);

double R_value(const DissipationWeights& w, const Field& v, const Field& y);
double R_star_value(const DissipationWeights& w, const Covector& c);
/// ⟨G(v, y), (v, y)⟩.
double G_pairing(const DissipationWeights& w, const Field& v, const Field& y);

enum class EffectiveKind { CH, vCH, mAC };
double effective_R(EffectiveKind kind, const Model& model, const Field& u, const Field& v);

}  // namespace vps
