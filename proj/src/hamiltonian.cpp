#include "lnabla/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "lnabla/dense.hpp"
#include "lnabla/variational.hpp"

namespace lnabla {

namespace {

void require_regular_dim(int n) {
    if (n < 3) throw DimensionError("the momenta inversion needs n >= 3 (the formulas divide by n - 2)");
}

std::vector<double> packed_inverse(std::span<const double> y0, int n) {
    DenseMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = y0[static_cast<size_t>(sym_pair_index(n, i, j))];
    const LuFactors f = lu_factor(m);
    if (f.singular) throw SingularityError("degenerate base-point metric");
    std::vector<double> inv(static_cast<size_t>(n * n));
    std::vector<double> rhs(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c) {
        rhs.assign(static_cast<size_t>(n), 0.0);
        rhs[static_cast<size_t>(c)] = 1.0;
        const auto col = lu_solve(f, rhs);
        for (int r = 0; r < n; ++r) inv[static_cast<size_t>(r * n + c)] = col[static_cast<size_t>(r)];
    }
    return inv;
}

double packed_det_abs(std::span<const double> y0, int n) {
    DenseMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = y0[static_cast<size_t>(sym_pair_index(n, i, j))];
    return std::fabs(lu_det(lu_factor(m)));
}

/// Momenta as a function of arbitrary coordinate values (not only those
/// of a metric jet): one dual pass per first-derivative coordinate.
std::vector<double> momenta_of_coords(const JetCoords<double>& q, const ConnectionJet& nab) {
    const int n = q.n;
    JetCoords<Dual<double>> d = dualize(q);
    const ConnCoords<Dual<double>> c = lift_conn(nab, d.proto);
    const NablaLocalForm form{&nab};
    std::vector<double> p(static_cast<size_t>(sym_pair_count(n) * n));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                d.y1_ref(i, j, k).d = 1.0;
                p[static_cast<size_t>(sym_pair_index(n, i, j) * n + k)] = form.eval(d, c).d;
                d.y1_ref(i, j, k).d = 0.0;
            }
    return p;
}

} // namespace

MomentaTable momenta(const MetricJet& g, const ConnectionJet& nab) {
    if (nab.n() != g.n()) throw StructureError("momenta dimension mismatch");
    if (g.order() < 1 || nab.order() < 1) throw OrderError("momenta need usable order >= 1");
    const int n = g.n();
    MomentaTable t;
    t.n = n;
    t.sig = g.signature();
    const JetCoords<double> q = point_coords(g, 1);
    t.p = momenta_of_coords(q, nab);
    t.y0.resize(static_cast<size_t>(sym_pair_count(n)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) t.y0[static_cast<size_t>(sym_pair_index(n, i, j))] = g.value(i, j);
    t.rho0 = std::sqrt(packed_det_abs(t.y0, n));
    return t;
}

HessianMatrix hessian_closed_form(std::span<const double> y0_packed, int n, Signature sig) {
    if (static_cast<int>(y0_packed.size()) != sym_pair_count(n))
        throw StructureError("hessian_closed_form: packed metric size mismatch");
    if (sig.n() != n) throw StructureError("hessian_closed_form: signature dimension mismatch");
    const std::vector<double> gi = packed_inverse(y0_packed, n);
    const double rho = std::sqrt(packed_det_abs(y0_packed, n));
    auto y = [&](int i, int j) { return gi[static_cast<size_t>(i * n + j)]; };

    HessianMatrix h;
    h.n = n;
    h.rows = sym_pair_count(n) * n;
    h.m.assign(static_cast<size_t>(h.rows) * h.rows, 0.0);
    for (int u = 0; u < n; ++u)
        for (int v = u; v < n; ++v)
            for (int w = 0; w < n; ++w) {
                const int row = HessianMatrix::row_index(n, u, v, w);
                for (int a = 0; a < n; ++a)
                    for (int b = a; b < n; ++b)
                        for (int c = 0; c < n; ++c) {
                            const int col = HessianMatrix::row_index(n, a, b, c);
                            const double term =
                                y(b, w) * (y(a, u) * y(c, v) + y(a, v) * y(c, u)) +
                                y(a, w) * (y(b, u) * y(c, v) + y(b, v) * y(c, u)) -
                                y(a, b) * (y(c, u) * y(v, w) + y(c, v) * y(u, w)) -
                                y(u, v) * (y(a, w) * y(b, c) + y(a, c) * y(b, w)) -
                                (y(u, a) * y(v, b) + y(u, b) * y(v, a)) * y(w, c) +
                                2.0 * y(a, b) * y(u, v) * y(w, c);
                            const double dab = (a == b) ? 1.0 : 0.0;
                            const double duv = (u == v) ? 1.0 : 0.0;
                            h.at(row, col) = rho * term / ((1.0 + dab) * (1.0 + duv));
                        }
            }
    return h;
}

HessianMatrix hessian_numeric(const MetricJet& g, const ConnectionJet& nab) {
    if (nab.n() != g.n()) throw StructureError("hessian_numeric dimension mismatch");
    const int n = g.n();
    const JetCoords<double> q0 = point_coords(g, 1);
    JetCoords<Dual<Dual<double>>> q = dualize(dualize(q0));
    const ConnCoords<Dual<Dual<double>>> c = lift_conn(nab, q.proto);
    const NablaLocalForm form{&nab};

    HessianMatrix h;
    h.n = n;
    h.rows = sym_pair_count(n) * n;
    h.m.assign(static_cast<size_t>(h.rows) * h.rows, 0.0);
    for (int u = 0; u < n; ++u)
        for (int v = u; v < n; ++v)
            for (int w = 0; w < n; ++w) {
                const int row = HessianMatrix::row_index(n, u, v, w);
                q.y1_ref(u, v, w).d.v = 1.0;
                for (int a = 0; a < n; ++a)
                    for (int b = a; b < n; ++b)
                        for (int cx = 0; cx < n; ++cx) {
                            const int col = HessianMatrix::row_index(n, a, b, cx);
                            if (col < row) continue;
                            q.y1_ref(a, b, cx).v.d = 1.0;
                            const double second = form.eval(q, c).d.d;
                            q.y1_ref(a, b, cx).v.d = 0.0;
                            h.at(row, col) = second;
                            h.at(col, row) = second;
                        }
                q.y1_ref(u, v, w).d.v = 0.0;
            }
    return h;
}

RegularityResult regularity_check(std::span<const double> y0_packed, int n, Signature sig) {
    require_regular_dim(n);
    const HessianMatrix h = hessian_closed_form(y0_packed, n, sig);
    DenseMat m(h.rows, h.rows);
    m.a = h.m;
    RegularityResult out;
    const LuFactors f = lu_factor(m);
    out.det = lu_det(f);
    // Hadamard-style determinant scale: the product of row norms plays
    // the role of scale^N for the threshold.
    double hadamard = 1.0;
    for (int r = 0; r < h.rows; ++r) {
        double s = 0.0;
        for (int c = 0; c < h.rows; ++c) s += h.at(r, c) * h.at(r, c);
        hadamard *= std::sqrt(s);
    }
    out.invertible = !f.singular && std::fabs(out.det) > 1e-10 * std::max(hadamard, 1e-300);
    return out;
}

UpsilonTable upsilon_table(const MomentaTable& p) {
    const int n = p.n;
    UpsilonTable u;
    u.n = n;
    u.u.assign(static_cast<size_t>(n) * n * n, 0.0);
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
            for (int q = 0; q < n; ++q) {
                const double delta = (r == s) ? 1.0 : 0.0;
                u.ref(r, s, q) = (1.0 + delta) / p.rho0 * p.at(r, s, q) * p.sig.sign(r) * p.sig.sign(s) *
                                 p.sig.sign(q);
            }
    return u;
}

std::vector<double> legendre_invert_adapted(const MomentaTable& p) {
    const int n = p.n;
    require_regular_dim(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double expected = (i == j) ? p.sig.sign(i) : 0.0;
            if (std::fabs(p.y0_at(i, j) - expected) > 1e-12)
                throw PreconditionError("legendre_invert_adapted needs an adapted base point");
        }
    const UpsilonTable u = upsilon_table(p);
    auto eps = [&](int i) { return p.sig.sign(i); };

    // trace sums over the rescaled momenta
    std::vector<double> s1(static_cast<size_t>(n), 0.0); // pair (a,a), derivative c
    std::vector<double> s2(static_cast<size_t>(n), 0.0); // pair (a,c), derivative a
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a) {
            s1[static_cast<size_t>(c)] += eps(a) * u.at(a, a, c);
            s2[static_cast<size_t>(c)] += eps(a) * u.at(a, c, a);
        }
    // diagonal-derivative traces V_c = sum eps_a y_aa,c and
    // W_c = sum eps_a y_ca,a solved from the trace equations
    std::vector<double> vtr(static_cast<size_t>(n)), wtr(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c) {
        vtr[static_cast<size_t>(c)] =
            2.0 * s1[static_cast<size_t>(c)] / ((n - 1.0) * (n - 2.0)) - 2.0 * s2[static_cast<size_t>(c)] / (n - 1.0);
        wtr[static_cast<size_t>(c)] = vtr[static_cast<size_t>(c)] - s1[static_cast<size_t>(c)] / (n - 2.0);
    }

    std::vector<double> y1(static_cast<size_t>(sym_pair_count(n) * n), 0.0);
    auto set = [&](int a, int b, int c, double v) {
        y1[static_cast<size_t>(sym_pair_index(n, a, b) * n + c)] = v;
    };
    // pairwise distinct indices
    for (int q = 0; q < n; ++q)
        for (int r = q + 1; r < n; ++r)
            for (int s = 0; s < n; ++s) {
                if (s == q || s == r) continue;
                set(q, r, s, 0.5 * (u.at(r, s, q) + u.at(q, s, r)));
            }
    // y_rr,s with r != s
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
            if (r == s) continue;
            set(r, r, s, u.at(r, s, r) + 0.5 * eps(r) * vtr[static_cast<size_t>(s)]);
        }
    // y_qr,r with q != r
    for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r) {
            if (q == r) continue;
            const double v = 0.5 * (u.at(r, r, q) + u.at(r, q, r)) + 0.25 * eps(r) * vtr[static_cast<size_t>(q)] -
                             0.5 * eps(r) * s1[static_cast<size_t>(q)] / (n - 2.0);
            set(std::min(q, r), std::max(q, r), r, v);
        }
    // y_rr,r
    for (int r = 0; r < n; ++r) set(r, r, r, u.at(r, r, r) + eps(r) * wtr[static_cast<size_t>(r)]);
    return y1;
}

std::vector<double> legendre_invert_general(const MomentaTable& p, const MetricJet& g,
                                            const ConnectionJet& nab) {
    const int n = p.n;
    require_regular_dim(n);
    if (g.n() != n || nab.n() != n) throw StructureError("legendre_invert_general dimension mismatch");
    const HessianMatrix h = hessian_closed_form(p.y0, n, p.sig);

    JetCoords<double> q0 = point_coords(g, 1);
    std::fill(q0.y1.begin(), q0.y1.end(), 0.0);
    const std::vector<double> offset = momenta_of_coords(q0, nab);

    DenseMat m(h.rows, h.rows);
    m.a = h.m;
    const LuFactors f = lu_factor(m);
    if (f.singular) throw SingularityError("singular fiber Hessian in legendre_invert_general");
    std::vector<double> rhs(static_cast<size_t>(h.rows));
    for (int r = 0; r < h.rows; ++r) rhs[static_cast<size_t>(r)] = p.p[static_cast<size_t>(r)] - offset[static_cast<size_t>(r)];
    return lu_solve(f, rhs);
}

double hamiltonian_h(const MetricJet& g, const ConnectionJet& nab) {
    const MomentaTable t = momenta(g, nab);
    const JetCoords<double> q = point_coords(g, 1);
    const int n = g.n();
    double h = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < n; ++k) h += t.at(i, j, k) * q.y1_at(i, j, k);
    return h - NablaLocalForm{&nab}(q);
}

namespace {

double gamma_coeff(const ConnectionJet& nab_, const JetCoords<double>& q_, int k, int l, int j);

} // namespace

double covariant_hamiltonian(const MetricJet& g, const ConnectionJet& nab) {
    const MomentaTable t = momenta(g, nab);
    const JetCoords<double> q = point_coords(g, 1);
    const int n = g.n();
    double h = 0.0;
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l)
            for (int j = 0; j < n; ++j)
                h += (q.y1_at(k, l, j) + gamma_coeff(nab, q, k, l, j)) * t.at(k, l, j);
    return h - NablaLocalForm{&nab}(q);
}

namespace {

double gamma_coeff(const ConnectionJet& nab, const JetCoords<double>& q, int k, int l, int j) {
    const int n = q.n;
    double acc = 0.0;
    for (int a = 0; a < n; ++a)
        acc += nab.value(a, j, k) * q.y_at(a, l) + nab.value(a, j, l) * q.y_at(a, k);
    return -acc;
}

/// d gamma_uv,w / d y_ab for the independent coordinate y_ab (a <= b).
double gamma_coeff_dy(const ConnectionJet& nab, int n, int u, int v, int w, int a, int b) {
    double acc = 0.0;
    for (int c = 0; c < n; ++c) {
        const bool hit_v = (std::min(c, v) == a && std::max(c, v) == b);
        const bool hit_u = (std::min(c, u) == a && std::max(c, u) == b);
        if (hit_v) acc += nab.value(c, w, u);
        if (hit_u) acc += nab.value(c, w, v);
    }
    return -acc;
}

} // namespace

CanonicalResiduals canonical_residuals(const MetricJet& g, const ConnectionJet& nab) {
    const int n = g.n();
    require_regular_dim(n);
    if (g.order() < 2) throw OrderError("canonical_residuals needs metric order >= 2");

    const MomentaTable table = momenta(g, nab);
    const JetCoords<double> q0 = point_coords(g, 1);
    const NablaLocalForm form{&nab};

    // Hamiltonian as a function of (y, p): invert, then assemble. The
    // covariant version adds the connection correction; with a flat
    // background the correction terms are exact zeros and both versions
    // perform identical arithmetic.
    const auto hamiltonians = [&](const std::vector<double>& y_packed,
                                  const std::vector<double>& p_flat) -> std::array<double, 2> {
        JetCoords<double> q = q0;
        q.y = y_packed;
        std::fill(q.y1.begin(), q.y1.end(), 0.0);
        const std::vector<double> offset = momenta_of_coords(q, nab);
        const HessianMatrix hmat = hessian_closed_form(y_packed, n, table.sig);
        DenseMat m(hmat.rows, hmat.rows);
        m.a = hmat.m;
        const LuFactors f = lu_factor(m);
        if (f.singular) throw SingularityError("singular fiber Hessian while differentiating H");
        std::vector<double> rhs(static_cast<size_t>(hmat.rows));
        for (int r = 0; r < hmat.rows; ++r)
            rhs[static_cast<size_t>(r)] = p_flat[static_cast<size_t>(r)] - offset[static_cast<size_t>(r)];
        const std::vector<double> yhat = lu_solve(f, rhs);
        q.y1 = yhat;
        const double lag = form(q);
        double plain = 0.0, cov = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const size_t idx = static_cast<size_t>(sym_pair_index(n, i, j) * n + k);
                    plain += p_flat[idx] * yhat[idx];
                    cov += p_flat[idx] * (yhat[idx] + gamma_coeff(nab, q, i, j, k));
                }
        return {plain - lag, cov - lag};
    };

    CanonicalResiduals out;

    // kinematic equations: d_w y_uv (+ gamma_uv,w) = dH/dp^uv_w
    {
        const double pscale = [&] {
            double s = 1.0;
            for (double v : table.p) s = std::max(s, std::fabs(v));
            return s;
        }();
        const double h = 1e-5 * pscale;
        std::vector<double> p = table.p;
        for (int u = 0; u < n; ++u)
            for (int v = u; v < n; ++v)
                for (int w = 0; w < n; ++w) {
                    const size_t idx = static_cast<size_t>(sym_pair_index(n, u, v) * n + w);
                    const double saved = p[idx];
                    p[idx] = saved + h;
                    const auto hp = hamiltonians(table.y0, p);
                    p[idx] = saved - h;
                    const auto hm = hamiltonians(table.y0, p);
                    p[idx] = saved;
                    const double dplain = (hp[0] - hm[0]) / (2.0 * h);
                    const double dcov = (hp[1] - hm[1]) / (2.0 * h);
                    const double lhs_plain = q0.y1_at(u, v, w);
                    const double lhs_cov = lhs_plain + gamma_coeff(nab, q0, u, v, w);
                    out.r2 = std::max(out.r2, std::fabs(lhs_plain - dplain));
                    out.r2_cov = std::max(out.r2_cov, std::fabs(lhs_cov - dcov));
                }
    }

    // dynamic equations: sum_k d_k p^ab_k (- gamma coupling) = -dH/dy_ab
    {
        // momenta along the section as jets in x
        const JetCoords<JetPoly> qj = jet_coords(g, 1, 1);
        JetCoords<Dual<JetPoly>> qd = dualize(qj);
        const ConnCoords<Dual<JetPoly>> cd = lift_conn(nab, qd.proto);
        const JetPoly one = JetPoly::constant(n, 1, 1.0);
        const JetPoly zero(n, 1);
        std::vector<double> div_p(static_cast<size_t>(sym_pair_count(n)), 0.0);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k) {
                    qd.y1_ref(a, b, k).d = one;
                    const JetPoly pjet = form.eval(qd, cd).d;
                    qd.y1_ref(a, b, k).d = zero;
                    acc += partial(pjet, k).value();
                }
                div_p[static_cast<size_t>(sym_pair_index(n, a, b))] = acc;
            }

        double yscale = 1.0;
        for (double v : table.y0) yscale = std::max(yscale, std::fabs(v));
        const double h = 1e-5 * yscale;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                const size_t idx = static_cast<size_t>(sym_pair_index(n, a, b));
                std::vector<double> y = table.y0;
                y[idx] = table.y0[idx] + h;
                const auto hp = hamiltonians(y, table.p);
                y[idx] = table.y0[idx] - h;
                const auto hm = hamiltonians(y, table.p);
                const double dplain = (hp[0] - hm[0]) / (2.0 * h);
                const double dcov = (hp[1] - hm[1]) / (2.0 * h);

                double coupling = 0.0;
                for (int u = 0; u < n; ++u)
                    for (int v = u; v < n; ++v)
                        for (int w = 0; w < n; ++w)
                            coupling += gamma_coeff_dy(nab, n, u, v, w, a, b) * table.at(u, v, w);

                out.r1 = std::max(out.r1, std::fabs(div_p[idx] + dplain));
                out.r1_cov = std::max(out.r1_cov, std::fabs(div_p[idx] - coupling + dcov));
            }
    }

    return out;
}

} // namespace lnabla
