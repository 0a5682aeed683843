#pragma once

#include <vector>

#include "lnabla/error.hpp"

namespace lnabla {

/// Row-major dense double matrix. Sizes in this project stay below
/// ~50x50 (the fiber Hessian), so everything here is plain textbook code
/// with partial/diagonal pivoting.
struct DenseMat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    DenseMat() = default;
    DenseMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

struct LuFactors {
    DenseMat lu;
    std::vector<int> perm;
    int sign = 1;
    bool singular = false;
};

LuFactors lu_factor(const DenseMat& m);
std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& rhs);
double lu_det(const LuFactors& f);

/// Congruence diagonalization of a symmetric matrix: returns S and d with
/// S^T A S = diag(d), plus the inertia (Sylvester's law gives the
/// eigenvalue sign counts). Diagnostic utility; also backs signature
/// verification of generated metrics.
struct Congruence {
    DenseMat s;
    std::vector<double> d;
    int n_pos = 0;
    int n_neg = 0;
    int n_zero = 0;
};

Congruence ldlt_congruence(const DenseMat& sym, double zero_tol = 1e-12);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps (ascending).
/// Oracle-grade: simple and reliable for the tiny sizes used in tests.
std::vector<double> jacobi_eigenvalues(DenseMat sym, int max_sweeps = 50);

} // namespace lnabla
