#pragma once

#include <functional>
#include <vector>

#include "vps/errors.hpp"

namespace vps {

/// Uniform cell-centred grid on (0, L) with N cells.
class Grid {
public:
    Grid(double length, int n_cells);

    double length() const { return length_; }
    int n_cells() const { return n_; }
    double h() const { return h_; }
    /// Cell centre x_j = (j + 1/2) h.
    double x(int j) const { return (j + 0.5) * h_; }

    bool operator==(const Grid& o) const { return length_ == o.length_ && n_ == o.n_; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    double length_;
    int n_;
    double h_;
};

/// Immutable vector of cell values on a grid.
class Field {
public:
    Field(const Grid& grid, std::vector<double> values);

    static Field constant(const Grid& grid, double c);
    static Field zeros(const Grid& grid) { return constant(grid, 0.0); }
    static Field sample(const Grid& grid, const std::function<double(double)>& fn);

    const Grid& grid() const { return grid_; }
    int size() const { return grid_.n_cells(); }
    double operator[](int j) const { return v_[j]; }
    const std::vector<double>& values() const { return v_; }
    double max_abs() const;

    /// Pointwise map.
    Field map(const std::function<double(double)>& fn) const;

    Field operator+(const Field& o) const;
    Field operator-(const Field& o) const;
    Field operator-() const;
    Field operator*(double s) const;
    /// Pointwise product.
    Field times(const Field& o) const;

private:
    Grid grid_;
    std::vector<double> v_;
};

inline Field operator*(double s, const Field& f) { return f * s; }

struct State {
    Field u;
    Field z;
    double mass;
};

/// Builds a State recording mean(u) as its mass.
State make_state(Field u, Field z);

struct Covector {
    Field mu;
    Field xi;
};

enum class InverseMethod { CosineTransform, ConjugateGradient };

void require_same_grid(const Field& a, const Field& b);

double mean(const Field& f);
Field subtract_mean(const Field& f);
Field neumann_laplacian(const Field& f);
/// Mean-zero solution w of -Δw = f.
Field inv_neumann_laplacian(const Field& f, InverseMethod method = InverseMethod::CosineTransform);

double inner_l2(const Field& f, const Field& g);
double norm_l2(const Field& f);
double norm_linf(const Field& f);
double inner_h1av(const Field& f, const Field& g);
double norm_h1av(const Field& f);
double inner_hm1av(const Field& f, const Field& g);
double norm_hm1av(const Field& f);
double norm_H(const Field& du, const Field& dz);
double inner_H(const Field& du1, const Field& dz1, const Field& du2, const Field& dz2);
/// ‖f‖² + ‖∇f‖² + ‖Δf‖² with the grid stencils.
double norm_h2(const Field& f);

/// Discrete eigenpair φ_k(j) = cos(kπ(j+1/2)/N) of -Δ.
Field neumann_mode(const Grid& grid, int k);
double neumann_eigenvalue(const Grid& grid, int k);

namespace raw {
// Vector-level kernels on N cells with spacing h, used inside solvers.
void laplacian(const double* f, int n, double h, double* out);
void inv_laplacian_dct(const double* f, int n, double h, double* out);
double sum(const double* f, int n);
}  // namespace raw

}  // namespace vps
