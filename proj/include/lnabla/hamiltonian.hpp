#pragma once

#include <vector>

#include "lnabla/forms.hpp"
#include "lnabla/geometry.hpp"

namespace lnabla {

/// Momenta p^ij_k = dL/dy_ij,k (i <= j) at a point, with the base-point
/// metric data needed by the inversion algorithms. Flattened row order is
/// lexicographic in ((i,j),k), i <= j.
struct MomentaTable {
    int n = 0;
    std::vector<double> p;  // [pair * n + k]
    std::vector<double> y0; // packed metric values
    double rho0 = 1.0;
    Signature sig;

    int rows() const { return sym_pair_count(n) * n; }
    double at(int i, int j, int k) const { return p[static_cast<size_t>(sym_pair_index(n, i, j) * n + k)]; }
    double& ref(int i, int j, int k) { return p[static_cast<size_t>(sym_pair_index(n, i, j) * n + k)]; }
    double y0_at(int i, int j) const { return y0[static_cast<size_t>(sym_pair_index(n, i, j))]; }
};

/// Fiber Hessian d^2 L / dy_ab,c dy_uv,w as a dense square matrix of
/// size n^2(n+1)/2, rows (uv,w) and columns (ab,c) in the same
/// lexicographic pair-major order as MomentaTable.
struct HessianMatrix {
    int n = 0;
    int rows = 0;
    std::vector<double> m;

    double& at(int r, int c) { return m[static_cast<size_t>(r) * rows + c]; }
    double at(int r, int c) const { return m[static_cast<size_t>(r) * rows + c]; }
    static int row_index(int n, int u, int v, int w) { return sym_pair_index(n, u, v) * n + w; }
};

/// Rescaled momenta U_rsq = ((1 + delta_rs)/rho) p^rs_q eps_r eps_s eps_q
/// at an adapted base point, symmetric in (r,s).
struct UpsilonTable {
    int n = 0;
    std::vector<double> u; // dense n^3

    double at(int r, int s, int q) const { return u[static_cast<size_t>((r * n + s) * n + q)]; }
    double& ref(int r, int s, int q) { return u[static_cast<size_t>((r * n + s) * n + q)]; }
};

MomentaTable momenta(const MetricJet& g, const ConnectionJet& nab);

/// Closed-form Hessian from the base-point metric values alone.
HessianMatrix hessian_closed_form(std::span<const double> y0_packed, int n, Signature sig);

/// The same matrix from nested dual-number differentiation of the
/// first-order density.
HessianMatrix hessian_numeric(const MetricJet& g, const ConnectionJet& nab);

struct RegularityResult {
    double det = 0.0;
    bool invertible = false;
};

/// Determinant of the closed-form Hessian. Requires n >= 3: the
/// inversion formulas divide by n - 2.
RegularityResult regularity_check(std::span<const double> y0_packed, int n, Signature sig);

UpsilonTable upsilon_table(const MomentaTable& p);

/// Recovers the first-derivative coordinates from the momenta at an
/// adapted base point (y_ij = eps_i delta_ij, background coefficients
/// vanishing at the point), by the rescaled-momenta elimination.
std::vector<double> legendre_invert_adapted(const MomentaTable& p);

/// General-point inversion: solves p = M(y0) q + b(y0, C(0)) with the
/// closed-form Hessian as M.
std::vector<double> legendre_invert_general(const MomentaTable& p, const MetricJet& g,
                                            const ConnectionJet& nab);

/// H = sum p^ij_k y_ij,k - L at the base point.
double hamiltonian_h(const MetricJet& g, const ConnectionJet& nab);

/// Covariant Hamiltonian attached to the background connection:
/// sum (y_kl,j - (C^a_jk y_al + C^a_jl y_ak)) p^kl_j - L.
double covariant_hamiltonian(const MetricJet& g, const ConnectionJet& nab);

/// Residuals of the canonical equations along the given metric jet.
/// r2 is the kinematic identity d_w y_uv = dH/dp^uv_w (any metric),
/// r1 the dynamic equation sum_k d_k p^ab_k = -dH/dy_ab (solutions only).
/// The _cov pair uses the covariant Hamiltonian and its connection
/// correction terms; with a vanishing background it reproduces the plain
/// pair bit for bit.
struct CanonicalResiduals {
    double r1 = 0.0;
    double r2 = 0.0;
    double r1_cov = 0.0;
    double r2_cov = 0.0;
};

CanonicalResiduals canonical_residuals(const MetricJet& g, const ConnectionJet& nab);

} // namespace lnabla
