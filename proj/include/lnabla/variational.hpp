#pragma once

#include <vector>

#include "lnabla/forms.hpp"
#include "lnabla/geometry.hpp"

namespace lnabla {

/// Symmetric variational-derivative tensor at the base point (density
/// weight included), packed i <= j, unweighted convention: the variation
/// of the action is the full double sum E_ab dg_ab.
struct ELTensor {
    int n = 0;
    std::vector<double> comp; // packed upper triangle

    explicit ELTensor(int dim) : n(dim), comp(static_cast<size_t>(sym_pair_count(dim)), 0.0) {}
    double& at(int i, int j) { return comp[static_cast<size_t>(sym_pair_index(n, i, j))]; }
    double at(int i, int j) const { return comp[static_cast<size_t>(sym_pair_index(n, i, j))]; }
    double max_abs() const {
        double m = 0.0;
        for (double v : comp) m = std::max(m, std::fabs(v));
        return m;
    }
};

enum class CoordKind { metric, first, second };

/// Names one independent fiber coordinate: y_ij (metric), y_ij,k (first)
/// or y_ij,kl (second), with i <= j and k <= l canonical.
struct CoordId {
    CoordKind kind = CoordKind::metric;
    int i = 0, j = 0;
    int k = 0, l = 0;
};

namespace detail_var {

template <class T>
T& coord_slot(JetCoords<T>& q, const CoordId& id) {
    switch (id.kind) {
    case CoordKind::metric:
        return q.y_ref(id.i, id.j);
    case CoordKind::first:
        return q.y1_ref(id.i, id.j, id.k);
    case CoordKind::second:
        if (q.deriv_order < 2) throw OrderError("second-order coordinate requested from first-order view");
        return q.y2_ref(id.i, id.j, id.k, id.l);
    }
    throw StructureError("bad coordinate id");
}

} // namespace detail_var

/// Derivative of a Lagrangian evaluator with respect to one independent
/// fiber coordinate, by a forward-mode dual pass at the given point.
template <class F>
double lagrangian_partial(const F& lagrangian, const JetCoords<double>& at, const CoordId& id) {
    JetCoords<Dual<double>> q = dualize(at);
    detail_var::coord_slot(q, id).d = 1.0;
    return lagrangian(q).d;
}

/// Euler-Lagrange tensor of a Lagrangian evaluator along a metric jet:
///   E_ab = (1/(2-delta_ab)) [ dL/dy_ab - D_k dL/dy_ab,k
///                             + sum_{k<=l} D_k D_l dL/dy_ab,kl ].
/// Each coordinate partial is realized as a jet in x (dual pass over jet
/// scalars), so the total derivatives are exact jet partials.
/// `lagrangian_order` is 1 or 2 and selects how deep the operator reads.
template <class F>
ELTensor euler_lagrange(const F& lagrangian, const MetricJet& g, int lagrangian_order) {
    const int n = g.n();
    if (lagrangian_order != 1 && lagrangian_order != 2)
        throw StructureError("euler_lagrange supports first- and second-order Lagrangians");
    if (g.order() < 2 + lagrangian_order)
        throw OrderError("euler_lagrange needs metric order >= 2 + order of the Lagrangian");

    const int jet_order = lagrangian_order; // depth of total derivatives taken
    const JetCoords<JetPoly> base = jet_coords(g, lagrangian_order, jet_order);
    JetCoords<Dual<JetPoly>> q = dualize(base);
    const JetPoly zero(n, jet_order);
    const JetPoly one = JetPoly::constant(n, jet_order, 1.0);

    auto partial_jet = [&](const CoordId& id) {
        auto& slot = detail_var::coord_slot(q, id);
        slot.d = one;
        JetPoly out = lagrangian(q).d;
        slot.d = zero;
        return out;
    };

    ELTensor e(n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double acc = partial_jet({CoordKind::metric, a, b, 0, 0}).value();
            for (int k = 0; k < n; ++k) {
                const JetPoly pk = partial_jet({CoordKind::first, a, b, k, 0});
                acc -= partial(pk, k).value();
            }
            if (lagrangian_order == 2)
                for (int k = 0; k < n; ++k)
                    for (int l = k; l < n; ++l) {
                        const JetPoly pkl = partial_jet({CoordKind::second, a, b, k, l});
                        acc += partial(partial(pkl, k), l).value();
                    }
            e.at(a, b) = acc / (a == b ? 1.0 : 2.0);
        }
    return e;
}

/// Convenience wrappers for the two standard densities.
ELTensor euler_lagrange_eh(const MetricJet& g);
ELTensor euler_lagrange_nabla(const MetricJet& g, const ConnectionJet& nab);

/// Einstein tensor density with raised indices from the Ricci tensor of
/// the Levi-Civita connection: rho (R^{ab} - s g^{ab} / 2). The
/// variational derivative of the scalar-curvature density equals this up
/// to one global sign.
ELTensor einstein_tensor_density(const MetricJet& g);

} // namespace lnabla
