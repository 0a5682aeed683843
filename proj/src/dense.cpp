#include "lnabla/dense.hpp"

#include <algorithm>
#include <cmath>

namespace lnabla {

LuFactors lu_factor(const DenseMat& m) {
    if (m.rows != m.cols) throw StructureError("lu_factor needs a square matrix");
    const int n = m.rows;
    LuFactors f;
    f.lu = m;
    f.perm.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) f.perm[static_cast<size_t>(i)] = i;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(f.lu(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) {
            f.singular = true;
            return f;
        }
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[static_cast<size_t>(k)], f.perm[static_cast<size_t>(piv)]);
            f.sign = -f.sign;
        }
        for (int i = k + 1; i < n; ++i) {
            const double l = f.lu(i, k) / f.lu(k, k);
            f.lu(i, k) = l;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
        }
    }
    return f;
}

std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& rhs) {
    if (f.singular) throw SingularityError("lu_solve on a singular factorization");
    const int n = f.lu.rows;
    std::vector<double> x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = rhs[static_cast<size_t>(f.perm[static_cast<size_t>(i)])];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] /= f.lu(i, i);
    }
    return x;
}

double lu_det(const LuFactors& f) {
    if (f.singular) return 0.0;
    double d = f.sign;
    for (int i = 0; i < f.lu.rows; ++i) d *= f.lu(i, i);
    return d;
}

Congruence ldlt_congruence(const DenseMat& sym, double zero_tol) {
    if (sym.rows != sym.cols) throw StructureError("ldlt_congruence needs a square matrix");
    const int n = sym.rows;
    DenseMat a = sym;
    Congruence out;
    out.s = DenseMat(n, n);
    for (int i = 0; i < n; ++i) out.s(i, i) = 1.0;
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::fabs(a(i, j)));
    const double tol = zero_tol * std::max(1.0, scale);

    auto add_col_row = [&](int dst, int src) {
        // congruence A <- E^T A E with E adding column src to column dst
        for (int i = 0; i < n; ++i) a(i, dst) += a(i, src);
        for (int j = 0; j < n; ++j) a(dst, j) += a(src, j);
        for (int i = 0; i < n; ++i) out.s(i, dst) += out.s(i, src);
    };
    auto swap_col_row = [&](int p, int q) {
        for (int i = 0; i < n; ++i) std::swap(a(i, p), a(i, q));
        for (int j = 0; j < n; ++j) std::swap(a(p, j), a(q, j));
        for (int i = 0; i < n; ++i) std::swap(out.s(i, p), out.s(i, q));
    };

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(a(k, k));
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a(i, i)) > best) {
                best = std::fabs(a(i, i));
                piv = i;
            }
        if (best <= tol) {
            // no usable diagonal: bring a nonzero off-diagonal onto it
            int bi = -1, bj = -1;
            double bv = tol;
            for (int i = k; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (std::fabs(a(i, j)) > bv) {
                        bv = std::fabs(a(i, j));
                        bi = i;
                        bj = j;
                    }
            if (bi < 0) {
                out.n_zero = n - k;
                out.d.resize(static_cast<size_t>(n), 0.0);
                return out;
            }
            add_col_row(bi, bj);
            piv = bi;
        }
        if (piv != k) swap_col_row(piv, k);
        const double d = a(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double l = a(i, k) / d;
            if (l == 0.0) continue;
            for (int j = k; j < n; ++j) a(i, j) -= l * a(k, j);
            for (int j = k; j < n; ++j) a(j, i) -= l * a(j, k);
            for (int r = 0; r < n; ++r) out.s(r, i) -= l * out.s(r, k);
        }
    }
    out.d.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.d[static_cast<size_t>(i)] = a(i, i);
        if (a(i, i) > tol)
            ++out.n_pos;
        else if (a(i, i) < -tol)
            ++out.n_neg;
        else
            ++out.n_zero;
    }
    return out;
}

std::vector<double> jacobi_eigenvalues(DenseMat m, int max_sweeps) {
    if (m.rows != m.cols) throw StructureError("jacobi_eigenvalues needs a square matrix");
    const int n = m.rows;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (m(p, q) == 0.0) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double mip = m(i, p), miq = m(i, q);
                    m(i, p) = c * mip - s * miq;
                    m(i, q) = s * mip + c * miq;
                }
                for (int i = 0; i < n; ++i) {
                    const double mpi = m(p, i), mqi = m(q, i);
                    m(p, i) = c * mpi - s * mqi;
                    m(q, i) = s * mpi + c * mqi;
                }
            }
    }
    std::vector<double> ev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = m(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace lnabla
