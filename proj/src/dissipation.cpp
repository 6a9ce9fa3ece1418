#include "vps/dissipation.hpp"

#include <cmath>

namespace vps {

DissipationWeights make_weights(const Scaling& sc, const Model& m, const Field& u) {
    if (!(sc.eps > 0.0)) throw InvalidArgument("eps must be positive");
    DissipationWeights w{std::pow(sc.eps, sc.gamma), std::pow(sc.eps, sc.kappa_exp),
                         u.map([&m](double x) { return m.tau(x); }), sc.eps};
    return w;
}

Covector apply_G(const DissipationWeights& w, const Field& v, const Field& y) {
    require_same_grid(v, y);
    require_same_grid(v, w.tau_at);
    return Covector{inv_neumann_laplacian(v) * w.w_u, w.tau_at.times(y) * w.w_z_base};
}

std::pair<Field, Field> apply_K(const DissipationWeights& w, const Covector& c) {
    require_same_grid(c.mu, c.xi);
    double m = mean(c.mu);
    if (std::abs(m) > 1e-10 * c.mu.max_abs()) throw NonZeroMean("covector mu must have zero mean");
    Field v = neumann_laplacian(c.mu) * (-1.0 / w.w_u);
    std::vector<double> y(c.xi.size());
    for (int j = 0; j < c.xi.size(); ++j) y[j] = c.xi[j] / (w.w_z_base * w.tau_at[j]);
    return {v, Field(c.xi.grid(), std::move(y))};
}

double G_pairing(const DissipationWeights& w, const Field& v, const Field& y) {
    Covector g = apply_G(w, v, y);
    return inner_l2(g.mu, v) + inner_l2(g.xi, y);
}

double R_value(const DissipationWeights& w, const Field& v, const Field& y) { return 0.5 * G_pairing(w, v, y); }

double R_star_value(const DissipationWeights& w, const Covector& c) {
    auto [v, y] = apply_K(w, c);
    return 0.5 * (inner_l2(c.mu, v) + inner_l2(c.xi, y));
}

double effective_R(EffectiveKind kind, const Model& m, const Field& u, const Field& v) {
    require_same_grid(u, v);
    double ch = 0.0, mac = 0.0;
    double hm1 = norm_hm1av(v);  // also enforces the mean-zero precondition
    if (kind != EffectiveKind::mAC) ch = 0.5 * hm1 * hm1;
    if (kind != EffectiveKind::CH) {
        double s = 0.0;
        for (int j = 0; j < u.size(); ++j) {
            double a = m.A(u[j]);
            s += a * a * m.tau(u[j]) * v[j] * v[j];
        }
        mac = 0.5 * u.grid().h() * s;
    }
    return ch + mac;
}

}  // namespace vps
