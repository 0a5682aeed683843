#include "lnabla/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "lnabla/dense.hpp"

namespace lnabla {

SymJetMatrix SymJetMatrix::truncated(int new_order) const {
    SymJetMatrix r(n_, std::min(new_order, order()));
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i].truncated(new_order);
    return r;
}

ConnectionJet ConnectionJet::truncated(int new_order) const {
    ConnectionJet r(n_, std::min(new_order, order()));
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i].truncated(new_order);
    return r;
}

bool ConnectionJet::zero() const {
    for (const auto& c : c_)
        if (max_abs_coeff(c) != 0.0) return false;
    return true;
}

MetricJet::MetricJet(SymJetMatrix g, Signature sig) : g_(std::move(g)), sig_(sig) {
    const int n = g_.n();
    if (n < 2 || n > kMaxDim) throw DimensionError("metric dimension must be in [2, 4]");
    if (sig_.n() != n) throw StructureError("signature does not match the metric dimension");
    DenseMat m0(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!all_finite(g_.at(i, j))) throw StructureError("non-finite metric coefficient");
            m0(i, j) = g_.value(i, j);
        }
    const Congruence c = ldlt_congruence(m0);
    if (c.n_zero > 0) throw SingularityError("metric is degenerate at the base point");
    if (c.n_pos != sig_.plus || c.n_neg != sig_.minus)
        throw StructureError("metric eigenvalue signs do not match the declared signature");
}

void MetricJet::perturb_second_derivative(int a, int b, int c, int d, double delta) {
    int alpha[kMaxDim] = {0, 0, 0, 0};
    alpha[c] += 1;
    alpha[d] += 1;
    const std::span<const int> sp(alpha, static_cast<size_t>(n()));
    JetPoly& comp = g_.at(a, b);
    comp.set_derivative(sp, comp.derivative(sp) + delta);
}

namespace {

// cofactor expansion determinants for n <= 4
JetPoly det_impl(const std::vector<const JetPoly*>& m, int n, int dim, int order) {
    if (n == 1) return *m[0];
    JetPoly acc(dim, order);
    if (n == 2) {
        acc.add_product(*m[0], *m[3]);
        acc.sub_product(*m[1], *m[2]);
        return acc;
    }
    // expand along the first row
    std::vector<const JetPoly*> sub(static_cast<size_t>((n - 1) * (n - 1)));
    for (int j = 0; j < n; ++j) {
        int t = 0;
        for (int r = 1; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                sub[static_cast<size_t>(t++)] = m[static_cast<size_t>(r * n + c)];
            }
        const JetPoly minor = det_impl(sub, n - 1, dim, order);
        if (j % 2 == 0)
            acc.add_product(*m[static_cast<size_t>(j)], minor);
        else
            acc.sub_product(*m[static_cast<size_t>(j)], minor);
    }
    return acc;
}

std::vector<const JetPoly*> view_of(std::span<const JetPoly> m) {
    std::vector<const JetPoly*> v(m.size());
    for (size_t i = 0; i < m.size(); ++i) v[i] = &m[i];
    return v;
}

} // namespace

JetPoly det_dense(std::span<const JetPoly> m, int n) {
    if (static_cast<int>(m.size()) != n * n) throw StructureError("det_dense shape mismatch");
    return det_impl(view_of(m), n, m[0].dim(), m[0].order());
}

std::vector<JetPoly> inverse_dense(std::span<const JetPoly> m, int n) {
    if (static_cast<int>(m.size()) != n * n) throw StructureError("inverse_dense shape mismatch");
    const int dim = m[0].dim();
    const int order = m[0].order();
    const JetPoly det = det_dense(m, n);
    if (det.value() == 0.0) throw SingularityError("inverse of a singular jet matrix");
    const JetPoly dinv = reciprocal(det);
    std::vector<JetPoly> inv(static_cast<size_t>(n * n), JetPoly(dim, order));
    if (n == 1) {
        inv[0] = dinv;
        return inv;
    }
    std::vector<const JetPoly*> sub(static_cast<size_t>((n - 1) * (n - 1)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int t = 0;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0; c < n; ++c) {
                    if (c == j) continue;
                    sub[static_cast<size_t>(t++)] = &m[static_cast<size_t>(r * n + c)];
                }
            }
            JetPoly cof = det_impl(sub, n - 1, dim, order);
            if ((i + j) % 2 == 1) cof *= -1.0;
            // adjugate transposes: inv[j][i] from cofactor(i, j)
            inv[static_cast<size_t>(j * n + i)].add_product(cof, dinv);
        }
    return inv;
}

JetPoly det_jet(const SymJetMatrix& m) {
    const int n = m.n();
    std::vector<const JetPoly*> v(static_cast<size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v[static_cast<size_t>(i * n + j)] = &m.at(i, j);
    return det_impl(v, n, m.at(0, 0).dim(), m.order());
}

SymJetMatrix inverse_metric(const MetricJet& g) {
    const int n = g.n();
    std::vector<JetPoly> dense(static_cast<size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dense[static_cast<size_t>(i * n + j)] = g.at(i, j);
    std::vector<JetPoly> inv = inverse_dense(dense, n);
    SymJetMatrix out(n, g.order());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) out.at(i, j) = inv[static_cast<size_t>(i * n + j)];
    return out;
}

JetPoly volume_density(const MetricJet& g) {
    JetPoly det = det_jet(g.components());
    if (det.value() == 0.0) throw SingularityError("volume density of a degenerate metric");
    if (det.value() < 0.0) det *= -1.0;
    return sqrt_jet(det);
}

ConnectionJet christoffel(const MetricJet& g) {
    const int n = g.n();
    if (g.order() < 1) throw OrderError("christoffel needs metric order >= 1");
    const int m = g.order() - 1;
    const SymJetMatrix ginv = inverse_metric(g).truncated(m);

    // dg[k][(i,j) packed] = d_k g_ij
    std::vector<JetPoly> dg(static_cast<size_t>(n) * (n * (n + 1) / 2));
    auto dgat = [&](int k, int i, int j) -> JetPoly& {
        if (i > j) std::swap(i, j);
        return dg[static_cast<size_t>(k) * (n * (n + 1) / 2) + i * n - i * (i - 1) / 2 + (j - i)];
    };
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) dgat(k, i, j) = partial(g.at(i, j), k);

    ConnectionJet gam(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                JetPoly acc(n, m);
                for (int s = 0; s < n; ++s) {
                    JetPoly bracket = dgat(k, j, s);
                    bracket += dgat(j, k, s);
                    bracket -= dgat(s, j, k);
                    acc.add_product(ginv.at(i, s), bracket);
                }
                acc *= 0.5;
                gam.at(i, j, k) = std::move(acc);
            }
    return gam;
}

std::vector<JetPoly> ricci(const ConnectionJet& gamma) {
    const int n = gamma.n();
    if (gamma.order() < 1) throw OrderError("ricci needs connection order >= 1");
    const int m = gamma.order() - 1;
    std::vector<JetPoly> out(static_cast<size_t>(n * n), JetPoly(n, m));
    ConnectionJet gt = gamma.truncated(m);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            JetPoly& r = out[static_cast<size_t>(j * n + k)];
            for (int i = 0; i < n; ++i) {
                r += partial(gamma.at(i, j, k), i);
                r -= partial(gamma.at(i, i, k), j);
                for (int l = 0; l < n; ++l) {
                    r.add_product(gt.at(l, j, k), gt.at(i, i, l));
                    r.sub_product(gt.at(l, i, k), gt.at(i, j, l));
                }
            }
        }
    return out;
}

JetPoly scalar_curvature(const MetricJet& g) {
    if (g.order() < 2) throw OrderError("scalar_curvature needs metric order >= 2");
    const int n = g.n();
    const int m = g.order() - 2;
    const std::vector<JetPoly> ric = ricci(christoffel(g));
    const SymJetMatrix ginv = inverse_metric(g).truncated(m);
    JetPoly s(n, m);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s.add_product(ginv.at(j, k), ric[static_cast<size_t>(j * n + k)]);
    return s;
}

DiffTensorJet difference_tensor(const MetricJet& g, const ConnectionJet& nab) {
    if (nab.n() != g.n()) throw StructureError("difference_tensor dimension mismatch");
    const ConnectionJet lc = christoffel(g);
    const int m = std::min(lc.order(), nab.order());
    DiffTensorJet t(g.n(), m);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int k = j; k < g.n(); ++k)
                t.at(i, j, k) = lc.at(i, j, k).truncated(m) - nab.at(i, j, k).truncated(m);
    return t;
}

JetPoly pair_scalar_curvature(const MetricJet& g, const ConnectionJet& nab) {
    if (nab.n() != g.n()) throw StructureError("pair_scalar_curvature dimension mismatch");
    if (nab.order() < 1) throw OrderError("pair_scalar_curvature needs connection order >= 1");
    const int n = g.n();
    const int m = std::min(g.order(), nab.order() - 1);
    const SymJetMatrix ginv = inverse_metric(g).truncated(m);
    const ConnectionJet ct = nab.truncated(m);
    JetPoly s(n, m);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            JetPoly term(n, m);
            for (int i = 0; i < n; ++i) {
                term += partial(nab.at(i, j, k), i).truncated(m);
                term -= partial(nab.at(i, i, k), j).truncated(m);
                for (int l = 0; l < n; ++l) {
                    term.add_product(ct.at(l, j, k), ct.at(i, i, l));
                    term.sub_product(ct.at(l, i, k), ct.at(i, j, l));
                }
            }
            s.add_product(ginv.at(j, k), term);
        }
    return s;
}

} // namespace lnabla
