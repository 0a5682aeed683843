#pragma once

#include <vector>

#include "lnabla/forms.hpp"
#include "lnabla/geometry.hpp"

namespace lnabla {

/// Which formula produced a Lagrangian value. The engine keeps multiple
/// independent routes to the same scalar and checks them against each
/// other.
enum class Formula {
    eh_christoffel,
    eh_jet_coords,
    lprime_geometric,
    lprime_local,
    lprime_rewritten,
    lnabla_first_order,
    lnabla_geometric,
};

enum class LPrimeRoute { geometric, local, rewritten };
enum class LNablaRoute { first_order_local, geometric };

/// Scalar Lagrangian realized as a jet in x, so total derivatives are
/// plain jet partials.
struct LagrangianValue {
    JetPoly value;
    Formula route;
};

/// Einstein-Hilbert scalar density from the Christoffel symbols:
/// sqrt|det g| g^{jk} { d_i G^i_jk - d_j G^i_ik + G^l_jk G^i_il - G^l_ik G^i_jl }.
LagrangianValue l_eh_christoffel(const MetricJet& g);

/// The same density evaluated through the fiber-coordinate expression
/// (linear second-order part plus the first-order remainder).
LagrangianValue l_eh_jet_coordinates(const MetricJet& g);

/// First-order correction scalar attached to a background connection, by
/// three independent routes: the covariant-derivative construction
/// (alternate the last two covariant slots of grad T, raise, contract),
/// its displayed local expression, and the fully expanded form in the
/// metric and background coefficients alone.
LagrangianValue l_prime(const MetricJet& g, const ConnectionJet& nab, LPrimeRoute route);

/// The first-order equivalent of the Einstein-Hilbert density.
LagrangianValue l_nabla(const MetricJet& g, const ConnectionJet& nab, LNablaRoute route);

/// Current whose total divergence measures the difference between the
/// second-order density and its first-order equivalent.
std::vector<JetPoly> boundary_current(const MetricJet& g, const ConnectionJet& nab);

/// | L_nabla - (L_EH - D_i current^i) | at the base point, normalized by
/// max(1, |L_EH|, |L_nabla|).
double divergence_residual(const MetricJet& g, const ConnectionJet& nab);

} // namespace lnabla
