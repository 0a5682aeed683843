#include "lnabla/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "lnabla/lagrangians.hpp"

namespace lnabla {

DiffeoJet DiffeoJet::from_components(DiffeoPoly poly) {
    DiffeoJet d;
    d.n_ = static_cast<int>(poly.components.size());
    const int n = d.n_;
    if (n < 1 || n > kMaxDim) throw DimensionError("diffeo dimension out of range");
    for (const auto& c : poly.components) {
        if (c.dim() != n) throw StructureError("diffeo component dimension mismatch");
        if (c.value() != 0.0) throw PreconditionError("diffeo components must have zero constant term");
    }
    d.components_ = std::move(poly.components);
    d.shift_ = poly.shift.empty() ? std::vector<double>(static_cast<size_t>(n), 0.0) : std::move(poly.shift);
    const int order = d.components_[0].order();

    d.jac_.reserve(static_cast<size_t>(n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) d.jac_.push_back(partial(d.components_[static_cast<size_t>(a)], b));

    // linear part and its inverse
    std::vector<JetPoly> l0(static_cast<size_t>(n * n), JetPoly(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) l0[static_cast<size_t>(a * n + b)] = d.jac_[static_cast<size_t>(a * n + b)].truncated(0);
    const double det0 = det_dense(l0, n).value();
    if (std::fabs(det0) < 1e-8) throw SingularityError("diffeo has a singular linear part");

    // inverse germ by fixed-point iteration: psi = K (y - N(psi)) where
    // phi(x) = L x + N(x); each pass gains at least one correct order
    std::vector<JetPoly> kmat = inverse_dense(
        [&] {
            std::vector<JetPoly> lm(static_cast<size_t>(n * n), JetPoly(n, order));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    // constant jet with the linear coefficient
                    lm[static_cast<size_t>(a * n + b)] =
                        JetPoly::constant(n, order, d.jac_[static_cast<size_t>(a * n + b)].value());
                }
            return lm;
        }(),
        n);

    std::vector<JetPoly> nonlinear(static_cast<size_t>(n), JetPoly(n, order));
    for (int a = 0; a < n; ++a) {
        JetPoly lin(n, order);
        for (int b = 0; b < n; ++b)
            lin += JetPoly::variable(n, order, b) * d.jac_[static_cast<size_t>(a * n + b)].value();
        nonlinear[static_cast<size_t>(a)] = d.components_[static_cast<size_t>(a)] - lin;
    }

    std::vector<JetPoly> psi(static_cast<size_t>(n), JetPoly(n, order));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            psi[static_cast<size_t>(a)] += JetPoly::variable(n, order, b) * kmat[static_cast<size_t>(a * n + b)].value();
    for (int pass = 0; pass < order; ++pass) {
        std::vector<JetPoly> rhs(static_cast<size_t>(n));
        for (int b = 0; b < n; ++b) {
            rhs[static_cast<size_t>(b)] = JetPoly::variable(n, order, b);
            rhs[static_cast<size_t>(b)] -= compose(nonlinear[static_cast<size_t>(b)], psi);
        }
        std::vector<JetPoly> next(static_cast<size_t>(n), JetPoly(n, order));
        for (int a = 0; a < n; ++a) {
            JetPoly acc(n, order);
            for (int b = 0; b < n; ++b)
                acc.add_scaled(rhs[static_cast<size_t>(b)], kmat[static_cast<size_t>(a * n + b)].value());
            next[static_cast<size_t>(a)] = std::move(acc);
        }
        psi = std::move(next);
    }
    d.inverse_ = std::move(psi);

    // sanity: phi o psi = identity through the usable order
    for (int a = 0; a < n; ++a) {
        JetPoly round = compose(d.components_[static_cast<size_t>(a)], d.inverse_);
        round -= JetPoly::variable(n, order, a);
        if (max_abs_coeff(round) > 1e-12)
            throw SingularityError("diffeo inverse germ did not converge");
    }
    return d;
}

MetricJet pullback_metric(const DiffeoJet& phi, const MetricJet& g) {
    const int n = g.n();
    if (phi.n() != n) throw StructureError("pullback dimension mismatch");
    const int m = std::min(g.order(), phi.order()) - 1;
    if (m < 0) throw OrderError("pullback needs usable order >= 1");
    SymJetMatrix pulled(n, m);
    for (int c = 0; c < n; ++c)
        for (int e = c; e < n; ++e) pulled.at(c, e) = compose(g.at(c, e), phi.components()).truncated(m);
    std::vector<JetPoly> jac(static_cast<size_t>(n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) jac[static_cast<size_t>(a * n + b)] = phi.jacobian(a, b).truncated(m);

    SymJetMatrix out(n, m);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            JetPoly acc(n, m);
            for (int c = 0; c < n; ++c)
                for (int e = 0; e < n; ++e) {
                    JetPoly jj(n, m);
                    jj.add_product(jac[static_cast<size_t>(c * n + a)], jac[static_cast<size_t>(e * n + b)]);
                    acc.add_product(pulled.at(c, e), jj);
                }
            out.at(a, b) = std::move(acc);
        }
    return MetricJet(std::move(out), g.signature());
}

ConnectionJet transform_connection(const DiffeoJet& phi, const ConnectionJet& nab) {
    const int n = nab.n();
    if (phi.n() != n) throw StructureError("transform_connection dimension mismatch");
    const int m = std::min({nab.order(), phi.order() - 1}) - 1;
    if (m < 0) throw OrderError("transform_connection needs usable order >= 2");

    std::vector<JetPoly> jac(static_cast<size_t>(n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) jac[static_cast<size_t>(a * n + b)] = phi.jacobian(a, b).truncated(m);
    const std::vector<JetPoly> kmat = inverse_dense(jac, n);

    ConnectionJet pulled(n, m);
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                pulled.at(c, a, b) = compose(nab.at(c, a, b), phi.components()).truncated(m);

    ConnectionJet out(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                JetPoly acc(n, m);
                for (int c = 0; c < n; ++c) {
                    JetPoly bracket = partial(phi.jacobian(c, k), j).truncated(m);
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) {
                            JetPoly jj(n, m);
                            jj.add_product(jac[static_cast<size_t>(a * n + j)], jac[static_cast<size_t>(b * n + k)]);
                            bracket.add_product(pulled.at(c, a, b), jj);
                        }
                    acc.add_product(kmat[static_cast<size_t>(i * n + c)], bracket);
                }
                out.at(i, j, k) = std::move(acc);
            }
    return out;
}

double naturality_residual(const DiffeoJet& phi, const MetricJet& g, const ConnectionJet& nab) {
    const double target = l_prime(g, nab, LPrimeRoute::local).value.value();
    const MetricJet pulled = pullback_metric(phi, g);
    const ConnectionJet moved = transform_connection(phi, nab);
    const double source = l_prime(pulled, moved, LPrimeRoute::local).value.value();
    return std::fabs(target - source) / std::max({1.0, std::fabs(target), std::fabs(source)});
}

PalatiniVariation palatini_variation(const MetricJet& g, const ConnectionJet& a) {
    const int n = g.n();
    if (a.n() != n) throw StructureError("palatini_variation dimension mismatch");
    const int m = std::min(g.order(), a.order()) - 1;
    if (m < 0 || g.order() < 2) throw OrderError("palatini_variation needs usable orders >= (2, 1)");

    const ConnectionJet lc = christoffel(g);
    const int np = sym_pair_count(n);

    // grad A with derivative index last, then alternate/raise/contract
    const ConnectionJet lt = lc.truncated(m);
    const ConnectionJet at_ = a.truncated(m);
    std::vector<JetPoly> grad(static_cast<size_t>(n) * np * n, JetPoly(n, m));
    for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    JetPoly acc = partial(a.at(h, i, j), k).truncated(m);
                    for (int c = 0; c < n; ++c) {
                        acc.add_product(lt.at(h, k, c), at_.at(c, i, j));
                        acc.sub_product(lt.at(c, k, i), at_.at(h, c, j));
                        acc.sub_product(lt.at(c, k, j), at_.at(h, i, c));
                    }
                    grad[static_cast<size_t>((h * np + sym_pair_index(n, i, j)) * n + k)] = std::move(acc);
                }
    auto gr = [&](int h, int i, int j, int k) -> const JetPoly& {
        return grad[static_cast<size_t>((h * np + sym_pair_index(n, i, j)) * n + k)];
    };
    const SymJetMatrix ginv = inverse_metric(g).truncated(m);
    JetPoly contracted(n, m);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            JetPoly alt(n, m);
            for (int j = 0; j < n; ++j) {
                alt += gr(j, i, j, k);
                alt -= gr(j, i, k, j);
            }
            contracted.add_product(ginv.at(k, i), alt);
        }
    PalatiniVariation out{JetPoly(n, m), 0.0};
    out.integrand.add_product(volume_density(g).truncated(m), contracted);

    // divergence form: D_j (rho V^j), V^j = g^{jr} A^i_ri - g^{ir} A^j_ri
    const int mv = std::min(g.order(), a.order());
    const SymJetMatrix gv = inverse_metric(g).truncated(mv);
    const ConnectionJet av = a.truncated(mv);
    const JetPoly rho = volume_density(g).truncated(mv);
    double div = 0.0;
    for (int j = 0; j < n; ++j) {
        JetPoly vj(n, mv);
        for (int r = 0; r < n; ++r)
            for (int i = 0; i < n; ++i) {
                vj.add_product(gv.at(j, r), av.at(i, r, i));
                vj.sub_product(gv.at(i, r), av.at(j, r, i));
            }
        JetPoly rv(n, mv);
        rv.add_product(rho, vj);
        div += partial(rv, j).value();
    }
    const double lhs = out.integrand.value();
    out.div_residual = std::fabs(lhs - div) / std::max({1.0, std::fabs(lhs), std::fabs(div)});
    return out;
}

} // namespace lnabla
