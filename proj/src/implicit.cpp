#include "vps/implicit.hpp"

#include <algorithm>
#include <cmath>

#include "vps/banded.hpp"
#include "vps/fields.hpp"

namespace vps {

namespace {

double rms(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s / v.size());
}

// Entries of the reflecting-ghost Laplacian row i (columns i-1, i, i+1).
void lap_row(int i, int n, double ih2, double c[3]) {
    c[0] = i > 0 ? ih2 : 0.0;
    c[2] = i + 1 < n ? ih2 : 0.0;
    c[1] = -(c[0] + c[2]);
}

}  // namespace

FluxStepResult solve_flux_step(const FluxStepProblem& p) {
    const std::vector<double>& un = *p.u_prev;
    const int n = static_cast<int>(un.size());
    const double h = p.h, ih2 = 1.0 / (h * h);
    double visc_max = 0.0;
    if (p.visc)
        for (double m : *p.visc) visc_max = std::max(visc_max, std::abs(m));

    FluxStepResult res;
    std::vector<double> psi(n, 0.0), lap_psi(n), u(n), lap_u(n), r(n), g(n), G(n);

    auto evaluate = [&]() {
        raw::laplacian(psi.data(), n, h, lap_psi.data());
        for (int j = 0; j < n; ++j) u[j] = un[j] + lap_psi[j];
        raw::laplacian(u.data(), n, h, lap_u.data());
        p.local(u.data(), r.data(), g.data());
        for (int j = 0; j < n; ++j) {
            double visc_term = p.visc ? (*p.visc)[j] * lap_psi[j] : 0.0;
            G[j] = psi[j] - visc_term - p.b * (-lap_u[j] + r[j]);
        }
        double scale = p.b * (1.0 + rms(r) + 4.0 * ih2 * rms(u)) + (1.0 + 4.0 * ih2 * visc_max) * rms(psi);
        return rms(G) / scale;
    };

    for (int it = 0; it <= p.max_iter; ++it) {
        double sr = evaluate();
        res.iterations = it;
        res.scaled_residual = sr;
        if (!std::isfinite(sr)) break;
        if (sr <= p.tol) {
            res.converged = true;
            break;
        }
        if (it == p.max_iter) break;

        // J = I - diag(visc + b g) Δ + b Δ².
        BandMatrix J(n, 2, 2);
        for (int i = 0; i < n; ++i) {
            J.add(i, i, 1.0);
            double ci[3];
            lap_row(i, n, ih2, ci);
            double row_scale = (p.visc ? (*p.visc)[i] : 0.0) + p.b * g[i];
            for (int d = 0; d < 3; ++d) {
                int k = i - 1 + d;
                if (ci[d] == 0.0) continue;
                J.add(i, k, -row_scale * ci[d]);
                double ck[3];
                lap_row(k, n, ih2, ck);
                for (int e = 0; e < 3; ++e) {
                    if (ck[e] == 0.0) continue;
                    J.add(i, k - 1 + e, p.b * ci[d] * ck[e]);
                }
            }
        }
        if (!J.factor()) break;
        std::vector<double> delta(n);
        for (int j = 0; j < n; ++j) delta[j] = -G[j];
        J.solve(delta);
        for (int j = 0; j < n; ++j) psi[j] += delta[j];
    }
    res.u = u;
    res.psi = psi;
    return res;
}

}  // namespace vps
