#include "lnabla/lagrangians.hpp"

#include <algorithm>
#include <cmath>

namespace lnabla {

namespace {

// grad of a (2,1) tensor along the Levi-Civita connection, derivative
// index last: (grad T)^h_{ij;k} = d_k T^h_ij + G^h_ka T^a_ij
//                                - G^a_ki T^h_aj - G^a_kj T^h_ia
std::vector<JetPoly> covariant_grad_21(const ConnectionJet& lc, const DiffTensorJet& t, int out_order) {
    const int n = t.n();
    const int np = sym_pair_count(n);
    const ConnectionJet lt = lc.truncated(out_order);
    const DiffTensorJet tt = t.truncated(out_order);
    std::vector<JetPoly> grad(static_cast<size_t>(n) * np * n, JetPoly(n, out_order));
    for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    JetPoly acc = partial(t.at(h, i, j), k).truncated(out_order);
                    for (int a = 0; a < n; ++a) {
                        acc.add_product(lt.at(h, k, a), tt.at(a, i, j));
                        acc.sub_product(lt.at(a, k, i), tt.at(h, a, j));
                        acc.sub_product(lt.at(a, k, j), tt.at(h, i, a));
                    }
                    grad[static_cast<size_t>((h * np + sym_pair_index(n, i, j)) * n + k)] = std::move(acc);
                }
    return grad;
}

JetPoly lprime_geometric_impl(const MetricJet& g, const ConnectionJet& nab) {
    const int n = g.n();
    const ConnectionJet lc = christoffel(g);
    const DiffTensorJet t = difference_tensor(g, nab);
    const int m = t.order() - 1;
    if (m < 0) throw OrderError("l_prime needs usable order >= 2");
    const int np = sym_pair_count(n);
    const std::vector<JetPoly> grad = covariant_grad_21(lc, t, m);
    auto gr = [&](int h, int i, int j, int k) -> const JetPoly& {
        return grad[static_cast<size_t>((h * np + sym_pair_index(n, i, j)) * n + k)];
    };
    const SymJetMatrix ginv = inverse_metric(g).truncated(m);
    // alternate the last two covariant slots, raise the derivative slot,
    // contract both pairs: g^{ki} (grad_k T^j_ij - grad_j T^j_ik)
    JetPoly total(n, m);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            JetPoly alt(n, m);
            for (int j = 0; j < n; ++j) {
                alt += gr(j, i, j, k);
                alt -= gr(j, i, k, j);
            }
            total.add_product(ginv.at(k, i), alt);
        }
    return total;
}

JetPoly lprime_local_impl(const MetricJet& g, const ConnectionJet& nab) {
    const int n = g.n();
    const ConnectionJet lc = christoffel(g);
    const DiffTensorJet t = difference_tensor(g, nab);
    const int m = t.order() - 1;
    if (m < 0) throw OrderError("l_prime needs usable order >= 2");
    const SymJetMatrix ginv = inverse_metric(g).truncated(m);
    const ConnectionJet lt = lc.truncated(m);
    const DiffTensorJet tt = t.truncated(m);

    JetPoly total(n, m);
    for (int j = 0; j < n; ++j)
        for (int r = 0; r < n; ++r) {
            JetPoly inner(n, m);
            for (int i = 0; i < n; ++i) {
                inner += partial(t.at(i, r, i), j).truncated(m);
                inner -= partial(t.at(i, r, j), i).truncated(m);
                for (int a = 0; a < n; ++a) {
                    inner.add_product(lt.at(a, j, i), tt.at(i, r, a));
                    inner.sub_product(lt.at(a, j, r), tt.at(i, a, i));
                    inner.add_product(lt.at(a, i, r), tt.at(i, a, j));
                    inner.sub_product(lt.at(a, a, i), tt.at(i, r, j));
                }
            }
            total.add_product(ginv.at(j, r), inner);
        }
    return total;
}

JetPoly lprime_rewritten_impl(const MetricJet& g, const ConnectionJet& nab) {
    const int n = g.n();
    const int m = std::min(g.order() - 2, nab.order() - 1);
    if (m < 0) throw OrderError("l_prime needs usable order >= 2");
    const SymJetMatrix gi = inverse_metric(g).truncated(m);
    const ConnectionJet ct = nab.truncated(m);

    const int np = sym_pair_count(n);
    std::vector<JetPoly> dg(static_cast<size_t>(np) * n, JetPoly(n, m));
    std::vector<JetPoly> d2g(static_cast<size_t>(np) * np, JetPoly(n, m));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            for (int k = 0; k < n; ++k)
                dg[static_cast<size_t>(sym_pair_index(n, i, j) * n + k)] = partial(g.at(i, j), k).truncated(m);
            for (int k = 0; k < n; ++k)
                for (int l = k; l < n; ++l)
                    d2g[static_cast<size_t>(sym_pair_index(n, i, j) * np + sym_pair_index(n, k, l))] =
                        partial(partial(g.at(i, j), k), l).truncated(m);
        }
    auto dg1 = [&](int i, int j, int k) -> const JetPoly& {
        return dg[static_cast<size_t>(sym_pair_index(n, i, j) * n + k)];
    };
    auto dg2 = [&](int i, int j, int k, int l) -> const JetPoly& {
        return d2g[static_cast<size_t>(sym_pair_index(n, i, j) * np + sym_pair_index(n, k, l))];
    };

    JetPoly total(n, m);

    // second-derivative block: (g^{js} g^{ir} - g^{jr} g^{is}) g_{ri,sj}
    for (int j = 0; j < n; ++j)
        for (int s = 0; s < n; ++s)
            for (int i = 0; i < n; ++i)
                for (int r = 0; r < n; ++r) {
                    JetPoly coeff(n, m);
                    coeff.add_product(gi.at(j, s), gi.at(i, r));
                    coeff.sub_product(gi.at(j, r), gi.at(i, s));
                    total.add_product(coeff, dg2(r, i, s, j));
                }

    // quadratic first-derivative block
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int r = 0; r < n; ++r)
                        for (int s = 0; s < n; ++s) {
                            JetPoly coeff(n, m);
                            {
                                JetPoly c1(n, m);
                                c1.add_product(gi.at(i, r), gi.at(j, b));
                                c1 *= 2.0;
                                c1.sub_product(gi.at(b, i), gi.at(r, j));
                                c1.sub_product(gi.at(b, r), gi.at(i, j));
                                coeff.add_product(c1, gi.at(a, s));
                            }
                            {
                                JetPoly c2(n, m);
                                c2.add_product(gi.at(a, r), gi.at(i, b));
                                c2.add_product(gi.at(b, i), gi.at(r, a));
                                JetPoly c2b(n, m);
                                c2b.add_product(gi.at(i, r), gi.at(a, b));
                                c2b *= 2.0;
                                c2 -= c2b;
                                coeff.add_product(c2, gi.at(j, s));
                            }
                            {
                                JetPoly c3(n, m);
                                c3.add_product(gi.at(s, r), gi.at(j, b));
                                c3.sub_product(gi.at(b, r), gi.at(s, j));
                                coeff.sub_product(c3, gi.at(a, i));
                            }
                            {
                                JetPoly c4(n, m);
                                c4.add_product(gi.at(a, r), gi.at(s, b));
                                c4.sub_product(gi.at(s, r), gi.at(a, b));
                                coeff.sub_product(c4, gi.at(i, j));
                            }
                            JetPoly dd(n, m);
                            dd.add_product(dg1(a, b, j), dg1(r, s, i));
                            JetPoly term(n, m);
                            term.add_product(coeff, dd);
                            total.add_scaled(term, 0.5);
                        }

    // background-derivative block: -g^{jr} (d_j C^i_ri - d_i C^i_rj)
    for (int j = 0; j < n; ++j)
        for (int r = 0; r < n; ++r) {
            JetPoly inner(n, m);
            for (int i = 0; i < n; ++i) {
                inner += partial(nab.at(i, r, i), j).truncated(m);
                inner -= partial(nab.at(i, r, j), i).truncated(m);
            }
            total.sub_product(gi.at(j, r), inner);
        }

    // mixed block
    for (int j = 0; j < n; ++j)
        for (int s = 0; s < n; ++s)
            for (int a = 0; a < n; ++a)
                for (int r = 0; r < n; ++r) {
                    JetPoly c1(n, m);
                    c1.add_product(gi.at(j, s), gi.at(a, r));
                    c1 *= 2.0;
                    c1.sub_product(gi.at(j, r), gi.at(a, s));
                    JetPoly tr(n, m);
                    for (int i = 0; i < n; ++i) tr += ct.at(i, a, i);
                    JetPoly term(n, m);
                    term.add_product(dg1(r, j, s), tr);
                    JetPoly full(n, m);
                    full.add_product(c1, term);
                    total.add_scaled(full, 0.5);
                }
    for (int j = 0; j < n; ++j)
        for (int r = 0; r < n; ++r)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    JetPoly c2(n, m);
                    c2.add_product(gi.at(j, r), gi.at(a, b));
                    JetPoly c2b(n, m);
                    c2b.add_product(gi.at(a, r), gi.at(j, b));
                    c2b *= 2.0;
                    c2 -= c2b;
                    for (int i = 0; i < n; ++i) {
                        JetPoly term(n, m);
                        term.add_product(dg1(a, b, i), ct.at(i, r, j));
                        JetPoly full(n, m);
                        full.add_product(c2, term);
                        total.add_scaled(full, 0.5);
                    }
                }

    return total;
}

} // namespace

LagrangianValue l_eh_christoffel(const MetricJet& g) {
    if (g.order() < 2) throw OrderError("l_eh needs usable order >= 2");
    const int n = g.n();
    const int m = g.order() - 2;
    const ConnectionJet lc = christoffel(g);
    const ConnectionJet lt = lc.truncated(m);
    const SymJetMatrix ginv = inverse_metric(g).truncated(m);
    JetPoly acc(n, m);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            JetPoly term(n, m);
            for (int i = 0; i < n; ++i) {
                term += partial(lc.at(i, j, k), i);
                term -= partial(lc.at(i, i, k), j);
                for (int l = 0; l < n; ++l) {
                    term.add_product(lt.at(l, j, k), lt.at(i, i, l));
                    term.sub_product(lt.at(l, i, k), lt.at(i, j, l));
                }
            }
            acc.add_product(ginv.at(j, k), term);
        }
    JetPoly out(n, m);
    out.add_product(volume_density(g).truncated(m), acc);
    return {std::move(out), Formula::eh_christoffel};
}

LagrangianValue l_eh_jet_coordinates(const MetricJet& g) {
    if (g.order() < 2) throw OrderError("l_eh needs usable order >= 2");
    const JetCoords<JetPoly> q = jet_coords(g, 2, g.order() - 2);
    return {EhCoordForm{}(q), Formula::eh_jet_coords};
}

LagrangianValue l_prime(const MetricJet& g, const ConnectionJet& nab, LPrimeRoute route) {
    if (nab.n() != g.n()) throw StructureError("l_prime dimension mismatch");
    switch (route) {
    case LPrimeRoute::geometric:
        return {lprime_geometric_impl(g, nab), Formula::lprime_geometric};
    case LPrimeRoute::local:
        return {lprime_local_impl(g, nab), Formula::lprime_local};
    case LPrimeRoute::rewritten:
        return {lprime_rewritten_impl(g, nab), Formula::lprime_rewritten};
    }
    throw StructureError("unknown l_prime route");
}

LagrangianValue l_nabla(const MetricJet& g, const ConnectionJet& nab, LNablaRoute route) {
    if (nab.n() != g.n()) throw StructureError("l_nabla dimension mismatch");
    const int n = g.n();
    if (route == LNablaRoute::first_order_local) {
        const int m = std::min(g.order(), nab.order()) - 1;
        if (m < 0) throw OrderError("l_nabla local route needs usable order >= 1");
        const JetCoords<JetPoly> q = jet_coords(g, 1, m);
        const ConnCoords<JetPoly> c = jet_conn(nab, m);
        return {NablaLocalForm{&nab}.eval(q, c), Formula::lnabla_first_order};
    }
    // geometric: rho (s^g + L') with both pieces from their tensor routes
    const JetPoly s = scalar_curvature(g);
    const JetPoly lp = lprime_geometric_impl(g, nab);
    const int m = std::min(s.order(), lp.order());
    JetPoly sum = s.truncated(m) + lp.truncated(m);
    JetPoly out(n, m);
    out.add_product(volume_density(g).truncated(m), sum);
    return {std::move(out), Formula::lnabla_geometric};
}

std::vector<JetPoly> boundary_current(const MetricJet& g, const ConnectionJet& nab) {
    const int n = g.n();
    if (nab.n() != n) throw StructureError("boundary_current dimension mismatch");
    const int m = std::min(g.order() - 1, nab.order());
    if (m < 0) throw OrderError("boundary_current needs usable order >= 1");
    const SymJetMatrix ginv = inverse_metric(g).truncated(m);
    const JetPoly rho = volume_density(g).truncated(m);
    const ConnectionJet ct = nab.truncated(m);

    // coefficient of y_ab,cd in the second-order block, symmetrized over
    // the stored index pairs
    auto eh_coeff = [&](int u, int v, int k, int l) {
        JetPoly acc(n, m);
        const int au[2] = {u, v};
        const int av[2] = {v, u};
        const int ck[2] = {k, l};
        const int cl[2] = {l, k};
        const int nu = (u == v) ? 1 : 2;
        const int nk = (k == l) ? 1 : 2;
        for (int p = 0; p < nu; ++p)
            for (int t = 0; t < nk; ++t) {
                const int a = au[p], b = av[p], c = ck[t], d = cl[t];
                acc.add_product(ginv.at(a, c), ginv.at(b, d));
                acc.sub_product(ginv.at(a, b), ginv.at(c, d));
            }
        JetPoly out(n, m);
        out.add_product(rho, acc);
        return out;
    };

    std::vector<JetPoly> current(static_cast<size_t>(n), JetPoly(n, m));
    for (int i = 0; i < n; ++i) {
        JetPoly comp(n, m);
        for (int c = 0; c < n; ++c)
            for (int r = c; r < n; ++r)
                for (int b = 0; b < n; ++b) {
                    JetPoly factor = partial(g.at(c, r), b).truncated(m);
                    for (int a = 0; a < n; ++a) {
                        factor.sub_product(ct.at(a, b, c), g.at(a, r).truncated(m));
                        factor.sub_product(ct.at(a, b, r), g.at(a, c).truncated(m));
                    }
                    JetPoly coeff = eh_coeff(c, r, i, b);
                    if (i != b) coeff *= 0.5; // 1/(2 - delta_ib)
                    comp.add_product(coeff, factor);
                }
        current[static_cast<size_t>(i)] = std::move(comp);
    }
    return current;
}

double divergence_residual(const MetricJet& g, const ConnectionJet& nab) {
    const double lnv = l_nabla(g, nab, LNablaRoute::first_order_local).value.value();
    const double leh = l_eh_christoffel(g).value.value();
    const std::vector<JetPoly> cur = boundary_current(g, nab);
    double div = 0.0;
    for (int i = 0; i < g.n(); ++i) div += partial(cur[static_cast<size_t>(i)], i).value();
    const double scale = std::max({1.0, std::fabs(leh), std::fabs(lnv)});
    return std::fabs(lnv - (leh - div)) / scale;
}

} // namespace lnabla
