#include "vps/fields.hpp"

#include <cstdio>

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

namespace vps {

Grid::Grid(double length, int n_cells) : length_(length), n_(n_cells), h_(length / n_cells) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw InvalidArgument("grid length must be positive and finite");
    if (n_cells < 4) throw InvalidArgument("grid needs at least 4 cells");
}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), v_(std::move(values)) {
    if (static_cast<int>(v_.size()) != grid_.n_cells())
        throw InvalidArgument("field length " + std::to_string(v_.size()) + " does not match grid N = " +
                              std::to_string(grid_.n_cells()));
    for (double x : v_)
        if (!std::isfinite(x)) throw InvalidArgument("field contains a non-finite value");
}

Field Field::constant(const Grid& grid, double c) {
    return Field(grid, std::vector<double>(grid.n_cells(), c));
}

Field Field::sample(const Grid& grid, const std::function<double(double)>& fn) {
    std::vector<double> v(grid.n_cells());
    for (int j = 0; j < grid.n_cells(); ++j) v[j] = fn(grid.x(j));
    return Field(grid, std::move(v));
}

double Field::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

Field Field::map(const std::function<double(double)>& fn) const {
    std::vector<double> v(v_.size());
    for (size_t j = 0; j < v_.size(); ++j) v[j] = fn(v_[j]);
    return Field(grid_, std::move(v));
}

Field Field::operator+(const Field& o) const {
    require_same_grid(*this, o);
    std::vector<double> v(v_.size());
    for (size_t j = 0; j < v_.size(); ++j) v[j] = v_[j] + o.v_[j];
    return Field(grid_, std::move(v));
}

Field Field::operator-(const Field& o) const {
    require_same_grid(*this, o);
    std::vector<double> v(v_.size());
    for (size_t j = 0; j < v_.size(); ++j) v[j] = v_[j] - o.v_[j];
    return Field(grid_, std::move(v));
}

Field Field::operator-() const { return *this * -1.0; }

Field Field::operator*(double s) const {
    std::vector<double> v(v_.size());
    for (size_t j = 0; j < v_.size(); ++j) v[j] = s * v_[j];
    return Field(grid_, std::move(v));
}

Field Field::times(const Field& o) const {
    require_same_grid(*this, o);
    std::vector<double> v(v_.size());
    for (size_t j = 0; j < v_.size(); ++j) v[j] = v_[j] * o.v_[j];
    return Field(grid_, std::move(v));
}

State make_state(Field u, Field z) {
    require_same_grid(u, z);
    double m = mean(u);
    return State{std::move(u), std::move(z), m};
}

void require_same_grid(const Field& a, const Field& b) {
    if (a.grid() != b.grid()) throw GridMismatch("fields live on different grids");
}

namespace raw {

double sum(const double* f, int n) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += f[j];
    return s;
}

// Flux form: faces carry (f_{j+1} - f_j)/h, boundary fluxes vanish.
void laplacian(const double* f, int n, double h, double* out) {
    double left = 0.0;
    for (int j = 0; j < n; ++j) {
        double right = (j + 1 < n) ? (f[j + 1] - f[j]) / h : 0.0;
        out[j] = (right - left) / h;
        left = right;
    }
}

namespace {

struct DctPlans {
    fftw_plan forward;   // REDFT10
    fftw_plan backward;  // REDFT01
};

std::mutex plan_mutex;
std::map<int, DctPlans>& plan_cache() {
    static std::map<int, DctPlans> cache;
    return cache;
}

const DctPlans& plans_for(int n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> a(n), b(n);
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    DctPlans p;
    p.forward = fftw_plan_r2r_1d(n, a.data(), b.data(), FFTW_REDFT10, flags);
    p.backward = fftw_plan_r2r_1d(n, a.data(), b.data(), FFTW_REDFT01, flags);
    return cache.emplace(n, p).first->second;
}

}  // namespace

void inv_laplacian_dct(const double* f, int n, double h, double* out) {
    const DctPlans& p = plans_for(n);
    std::vector<double> in(f, f + n), coef(n);
    fftw_execute_r2r(p.forward, in.data(), coef.data());
    coef[0] = 0.0;
    for (int k = 1; k < n; ++k) {
        double s = std::sin(k * std::numbers::pi / (2.0 * n));
        coef[k] /= (4.0 / (h * h)) * s * s;
    }
    fftw_execute_r2r(p.backward, coef.data(), out);
    for (int j = 0; j < n; ++j) out[j] /= 2.0 * n;
}

}  // namespace raw

double mean(const Field& f) {
    const Grid& g = f.grid();
    return g.h() * raw::sum(f.values().data(), f.size()) / g.length();
}

Field subtract_mean(const Field& f) {
    double m = mean(f);
    return f.map([m](double x) { return x - m; });
}

Field neumann_laplacian(const Field& f) {
    std::vector<double> out(f.size());
    raw::laplacian(f.values().data(), f.size(), f.grid().h(), out.data());
    return Field(f.grid(), std::move(out));
}

namespace {

void require_mean_zero(const Field& f) {
    double m = mean(f);
    if (std::abs(m) > 1e-10 * f.max_abs())
        {
        char buf[96];
        std::snprintf(buf, sizeof buf, "mean %.3g exceeds 1e-10 * max|f| = %.3g", m, 1e-10 * f.max_abs());
        throw NonZeroMean(buf);
    }
}

std::vector<double> cg_solve(const Field& f) {
    int n = f.size();
    double h = f.grid().h();
    auto project = [n](std::vector<double>& v) {
        double m = raw::sum(v.data(), n) / n;
        for (double& x : v) x -= m;
    };
    std::vector<double> b = f.values();
    project(b);
    std::vector<double> x(n, 0.0), r = b, p = r, ap(n);
    double rr = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
    double bb = rr;
    for (int it = 0; it < 20 * n && rr > 1e-30 * bb; ++it) {
        raw::laplacian(p.data(), n, h, ap.data());
        for (double& v : ap) v = -v;
        double alpha = rr / std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
        for (int j = 0; j < n; ++j) {
            x[j] += alpha * p[j];
            r[j] -= alpha * ap[j];
        }
        double rr_new = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
        for (int j = 0; j < n; ++j) p[j] = r[j] + (rr_new / rr) * p[j];
        rr = rr_new;
    }
    project(x);
    return x;
}

}  // namespace

Field inv_neumann_laplacian(const Field& f, InverseMethod method) {
    require_mean_zero(f);
    if (method == InverseMethod::ConjugateGradient) return Field(f.grid(), cg_solve(f));
    std::vector<double> out(f.size());
    raw::inv_laplacian_dct(f.values().data(), f.size(), f.grid().h(), out.data());
    return Field(f.grid(), std::move(out));
}

double inner_l2(const Field& f, const Field& g) {
    require_same_grid(f, g);
    double s = 0.0;
    for (int j = 0; j < f.size(); ++j) s += f[j] * g[j];
    return f.grid().h() * s;
}

double norm_l2(const Field& f) { return std::sqrt(inner_l2(f, f)); }

double norm_linf(const Field& f) { return f.max_abs(); }

double inner_h1av(const Field& f, const Field& g) {
    require_same_grid(f, g);
    double h = f.grid().h();
    double s = 0.0;
    for (int j = 0; j + 1 < f.size(); ++j) s += (f[j + 1] - f[j]) * (g[j + 1] - g[j]);
    return s / h;
}

double norm_h1av(const Field& f) { return std::sqrt(inner_h1av(f, f)); }

double inner_hm1av(const Field& f, const Field& g) {
    require_same_grid(f, g);
    require_mean_zero(f);
    return inner_l2(inv_neumann_laplacian(g), f);
}

double norm_hm1av(const Field& f) { return std::sqrt(std::max(0.0, inner_hm1av(f, f))); }

double norm_H(const Field& du, const Field& dz) {
    double a = norm_hm1av(du);
    double b = norm_l2(dz);
    return std::sqrt(a * a + b * b);
}

double inner_H(const Field& du1, const Field& dz1, const Field& du2, const Field& dz2) {
    return inner_hm1av(du1, du2) + inner_l2(dz1, dz2);
}

double norm_h2(const Field& f) {
    double a = norm_l2(f), b = norm_h1av(f), c = norm_l2(neumann_laplacian(f));
    return std::sqrt(a * a + b * b + c * c);
}

Field neumann_mode(const Grid& grid, int k) {
    std::vector<double> v(grid.n_cells());
    int n = grid.n_cells();
    for (int j = 0; j < n; ++j) v[j] = std::cos(k * std::numbers::pi * (j + 0.5) / n);
    return Field(grid, std::move(v));
}

double neumann_eigenvalue(const Grid& grid, int k) {
    double s = std::sin(k * std::numbers::pi / (2.0 * grid.n_cells()));
    return 4.0 / (grid.h() * grid.h()) * s * s;
}

}  // namespace vps
