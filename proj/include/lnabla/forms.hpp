#pragma once

#include <vector>

#include "lnabla/dual.hpp"
#include "lnabla/geometry.hpp"

namespace lnabla {

inline int sym_pair_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
}
inline int sym_pair_count(int n) { return n * (n + 1) / 2; }

/// Values of the fiber coordinates (y_ij, y_ij,k and, when deriv_order is
/// 2, y_ij,kl) along a metric section, in an arbitrary scalar type:
/// doubles for point evaluation, jets for functions of x, duals for
/// derivatives with respect to a single coordinate. Pairs are stored once
/// (i <= j); symmetric access reads the same slot, which is exactly the
/// independent-coordinate convention of the momenta and the Hessian.
template <class S>
struct JetCoords {
    int n = 0;
    int deriv_order = 1;
    S proto{}; // zero exemplar of the scalar space
    std::vector<S> y;
    std::vector<S> y1;
    std::vector<S> y2;

    const S& y_at(int i, int j) const { return y[static_cast<size_t>(sym_pair_index(n, i, j))]; }
    const S& y1_at(int i, int j, int k) const {
        return y1[static_cast<size_t>(sym_pair_index(n, i, j) * n + k)];
    }
    const S& y2_at(int i, int j, int k, int l) const {
        return y2[static_cast<size_t>(sym_pair_index(n, i, j) * sym_pair_count(n) + sym_pair_index(n, k, l))];
    }
    S& y_ref(int i, int j) { return y[static_cast<size_t>(sym_pair_index(n, i, j))]; }
    S& y1_ref(int i, int j, int k) { return y1[static_cast<size_t>(sym_pair_index(n, i, j) * n + k)]; }
    S& y2_ref(int i, int j, int k, int l) {
        return y2[static_cast<size_t>(sym_pair_index(n, i, j) * sym_pair_count(n) + sym_pair_index(n, k, l))];
    }
};

/// Background connection values (coefficients and their x-derivatives)
/// lifted into the scalar type of an evaluation.
template <class S>
struct ConnCoords {
    int n = 0;
    std::vector<S> gamma;  // [i * pairs + pair(j,k)]
    std::vector<S> dgamma; // [(i * pairs + pair(j,k)) * n + l]

    const S& at(int i, int j, int k) const {
        return gamma[static_cast<size_t>(i * sym_pair_count(n) + sym_pair_index(n, j, k))];
    }
    const S& d_at(int i, int j, int k, int l) const {
        return dgamma[static_cast<size_t>((i * sym_pair_count(n) + sym_pair_index(n, j, k)) * n + l)];
    }
};

// --- builders ---

JetCoords<double> point_coords(const MetricJet& g, int deriv_order);
JetCoords<JetPoly> jet_coords(const MetricJet& g, int deriv_order, int jet_order);
ConnCoords<double> point_conn(const ConnectionJet& nab);
ConnCoords<JetPoly> jet_conn(const ConnectionJet& nab, int jet_order);

template <class T>
JetCoords<Dual<T>> dualize(const JetCoords<T>& c) {
    JetCoords<Dual<T>> d;
    d.n = c.n;
    d.deriv_order = c.deriv_order;
    d.proto = Dual<T>(c.proto, c.proto);
    const T zero = zero_like(c.proto);
    d.y.reserve(c.y.size());
    for (const auto& v : c.y) d.y.emplace_back(v, zero);
    d.y1.reserve(c.y1.size());
    for (const auto& v : c.y1) d.y1.emplace_back(v, zero);
    d.y2.reserve(c.y2.size());
    for (const auto& v : c.y2) d.y2.emplace_back(v, zero);
    return d;
}

template <class T>
ConnCoords<Dual<T>> dualize(const ConnCoords<T>& c) {
    ConnCoords<Dual<T>> d;
    d.n = c.n;
    d.gamma.reserve(c.gamma.size());
    for (const auto& v : c.gamma) d.gamma.emplace_back(v, zero_like(v));
    d.dgamma.reserve(c.dgamma.size());
    for (const auto& v : c.dgamma) d.dgamma.emplace_back(v, zero_like(v));
    return d;
}

inline ConnCoords<double> lift_conn(const ConnectionJet& nab, double) { return point_conn(nab); }
inline ConnCoords<JetPoly> lift_conn(const ConnectionJet& nab, const JetPoly& proto) {
    return jet_conn(nab, proto.order());
}
template <class T>
ConnCoords<Dual<T>> lift_conn(const ConnectionJet& nab, const Dual<T>& proto) {
    return dualize(lift_conn(nab, proto.v));
}

// --- generic small linear algebra over the scalar type ---

template <class S>
S det_generic(const std::vector<S>& m, int n, const S& zero) {
    if (n == 1) return m[0];
    if (n == 2) return m[0] * m[3] - m[1] * m[2];
    S acc = zero;
    std::vector<S> sub(static_cast<size_t>((n - 1) * (n - 1)), zero);
    for (int j = 0; j < n; ++j) {
        int t = 0;
        for (int r = 1; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                sub[static_cast<size_t>(t++)] = m[static_cast<size_t>(r * n + c)];
            }
        const S term = m[static_cast<size_t>(j)] * det_generic(sub, n - 1, zero);
        if (j % 2 == 1)
            acc -= term;
        else
            acc += term;
    }
    return acc;
}

template <class S>
std::vector<S> inverse_generic(const std::vector<S>& m, int n, const S& zero) {
    const S det = det_generic(m, n, zero);
    const S dinv = recip_s(det);
    std::vector<S> inv(static_cast<size_t>(n * n), zero);
    if (n == 1) {
        inv[0] = dinv;
        return inv;
    }
    std::vector<S> sub(static_cast<size_t>((n - 1) * (n - 1)), zero);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int t = 0;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0; c < n; ++c) {
                    if (c == j) continue;
                    sub[static_cast<size_t>(t++)] = m[static_cast<size_t>(r * n + c)];
                }
            }
            S cof = det_generic(sub, n - 1, zero);
            if ((i + j) % 2 == 1) cof = -cof;
            inv[static_cast<size_t>(j * n + i)] = cof * dinv;
        }
    return inv;
}

namespace detail_forms {

template <class S>
struct Workspace {
    std::vector<S> ginv; // dense n x n
    std::vector<S> gfun; // G^i_(jk) packed lower pair
    S rho;
};

/// Inverse fiber metric, density and the first-order functions
/// G^i_jk = 1/2 y^{is} (y_js,k + y_ks,j - y_jk,s) shared by both
/// Lagrangian forms.
template <class S>
Workspace<S> prepare(const JetCoords<S>& q) {
    const int n = q.n;
    const S& zero = q.proto;
    Workspace<S> w;
    std::vector<S> dense(static_cast<size_t>(n * n), zero);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dense[static_cast<size_t>(i * n + j)] = q.y_at(i, j);
    S det = det_generic(dense, n, zero);
    const double sign = value_of(det) < 0.0 ? -1.0 : 1.0;
    w.ginv = inverse_generic(dense, n, zero);
    w.rho = sqrt_s(det * sign);
    w.gfun.assign(static_cast<size_t>(n) * sym_pair_count(n), zero);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                S acc = zero;
                for (int s = 0; s < n; ++s)
                    acc += w.ginv[static_cast<size_t>(i * n + s)] *
                           (q.y1_at(j, s, k) + q.y1_at(k, s, j) - q.y1_at(j, k, s));
                w.gfun[static_cast<size_t>(i * sym_pair_count(n) + sym_pair_index(n, j, k))] = acc * 0.5;
            }
    return w;
}

template <class S>
const S& gf(const Workspace<S>& w, int n, int i, int j, int k) {
    return w.gfun[static_cast<size_t>(i * sym_pair_count(n) + sym_pair_index(n, j, k))];
}

} // namespace detail_forms

/// Second-order Einstein-Hilbert Lagrangian in fiber coordinates:
/// rho (y^{ac} y^{bd} - y^{ab} y^{cd}) y_ab,cd plus the first-order
/// remainder built from the G functions.
struct EhCoordForm {
    template <class S>
    S operator()(const JetCoords<S>& q) const {
        if (q.deriv_order < 2) throw OrderError("the Einstein-Hilbert form needs second-order coordinates");
        const int n = q.n;
        const S& zero = q.proto;
        const auto w = detail_forms::prepare(q);
        auto gi = [&](int i, int j) -> const S& { return w.ginv[static_cast<size_t>(i * n + j)]; };

        S second = zero;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d)
                        second += (gi(a, c) * gi(b, d) - gi(a, b) * gi(c, d)) * q.y2_at(a, b, c, d);

        // trace of G over its upper and first lower index
        std::vector<S> gtrace(static_cast<size_t>(n), zero);
        for (int m = 0; m < n; ++m) {
            S acc = zero;
            for (int h = 0; h < n; ++h) acc += detail_forms::gf(w, n, h, h, m);
            gtrace[static_cast<size_t>(m)] = acc;
        }

        S l0 = zero;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                S inner = zero;
                for (int h = 0; h < n; ++h)
                    for (int m = 0; m < n; ++m) {
                        S bracket = zero;
                        for (int r = 0; r < n; ++r)
                            bracket += q.y1_at(m, r, j) * detail_forms::gf(w, n, r, i, h) -
                                       q.y1_at(m, r, h) * detail_forms::gf(w, n, r, i, j);
                        inner += gi(h, m) * bracket;
                    }
                for (int m = 0; m < n; ++m) {
                    inner += detail_forms::gf(w, n, m, i, j) * gtrace[static_cast<size_t>(m)];
                    for (int h = 0; h < n; ++h)
                        inner -= detail_forms::gf(w, n, m, i, h) * detail_forms::gf(w, n, h, j, m);
                }
                l0 += gi(i, j) * inner;
            }

        return w.rho * (second + l0);
    }
};

/// First-order Lagrangian attached to a background symmetric connection:
/// rho y^{jr} { G^a_ji T^i_ra - G^a_ai T^i_rj + G^a_jr C^i_ai
///            - G^a_ir C^i_aj - d_j C^i_ri + d_i C^i_rj },
/// with T = G - C and C the background coefficients. Reads only y and
/// y_,k from the fiber.
struct NablaLocalForm {
    const ConnectionJet* nab = nullptr;

    template <class S>
    S operator()(const JetCoords<S>& q) const {
        const ConnCoords<S> c = lift_conn(*nab, q.proto);
        return eval(q, c);
    }

    template <class S>
    S eval(const JetCoords<S>& q, const ConnCoords<S>& c) const {
        const int n = q.n;
        const S& zero = q.proto;
        const auto w = detail_forms::prepare(q);
        auto gi = [&](int i, int j) -> const S& { return w.ginv[static_cast<size_t>(i * n + j)]; };
        auto g3 = [&](int i, int j, int k) -> const S& { return detail_forms::gf(w, n, i, j, k); };

        // T^i_jk = G^i_jk - C^i_jk
        std::vector<S> tdiff(static_cast<size_t>(n) * sym_pair_count(n), zero);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = j; k < n; ++k)
                    tdiff[static_cast<size_t>(i * sym_pair_count(n) + sym_pair_index(n, j, k))] =
                        g3(i, j, k) - c.at(i, j, k);
        auto td = [&](int i, int j, int k) -> const S& {
            return tdiff[static_cast<size_t>(i * sym_pair_count(n) + sym_pair_index(n, j, k))];
        };

        std::vector<S> gtrace(static_cast<size_t>(n), zero);  // G^a_ai
        std::vector<S> ctrace(static_cast<size_t>(n), zero);  // C^i_ai
        for (int i = 0; i < n; ++i) {
            S ag = zero, ac = zero;
            for (int a = 0; a < n; ++a) {
                ag += g3(a, a, i);
                ac += c.at(a, a, i);
            }
            gtrace[static_cast<size_t>(i)] = ag;
            ctrace[static_cast<size_t>(i)] = ac;
        }

        S total = zero;
        for (int j = 0; j < n; ++j)
            for (int r = 0; r < n; ++r) {
                S inner = zero;
                for (int a = 0; a < n; ++a) {
                    for (int i = 0; i < n; ++i) inner += g3(a, j, i) * td(i, r, a);
                    inner += g3(a, j, r) * ctrace[static_cast<size_t>(a)];
                    for (int i = 0; i < n; ++i) inner -= g3(a, i, r) * c.at(i, a, j);
                }
                for (int i = 0; i < n; ++i) {
                    inner -= gtrace[static_cast<size_t>(i)] * td(i, r, j);
                    inner -= c.d_at(i, r, i, j);
                    inner += c.d_at(i, r, j, i);
                }
                total += gi(j, r) * inner;
            }
        return w.rho * total;
    }
};

} // namespace lnabla
