#pragma once

#include <vector>

#include "lnabla/catalog.hpp"
#include "lnabla/geometry.hpp"

namespace lnabla {

/// Diffeomorphism germ with its Jacobian and inverse germ. Components map
/// displacements from the source base point to displacements from the
/// target base point (the shift is bookkeeping only).
class DiffeoJet {
public:
    static DiffeoJet from_components(DiffeoPoly poly);

    int n() const { return n_; }
    int order() const { return components_[0].order(); }
    const JetPoly& component(int a) const { return components_[static_cast<size_t>(a)]; }
    const JetPoly& inverse_component(int a) const { return inverse_[static_cast<size_t>(a)]; }
    std::span<const JetPoly> components() const { return components_; }
    std::span<const JetPoly> inverse_components() const { return inverse_; }
    /// J^a_b = d phi^a / d x^b, one order below the components.
    const JetPoly& jacobian(int a, int b) const { return jac_[static_cast<size_t>(a * n_ + b)]; }
    const std::vector<double>& shift() const { return shift_; }

private:
    DiffeoJet() = default;

    int n_ = 0;
    std::vector<JetPoly> components_;
    std::vector<JetPoly> inverse_;
    std::vector<JetPoly> jac_;
    std::vector<double> shift_;
};

/// Pullback metric (phi^* g)_ab = (g_cd o phi) J^c_a J^d_b; the result
/// sits at the source base point and its order drops by one (the
/// Jacobian consumes it).
MetricJet pullback_metric(const DiffeoJet& phi, const MetricJet& g);

/// Image of a connection under phi^{-1}: the usual inhomogeneous rule
/// C'^i_jk = K^i_c ((C^c_ab o phi) J^a_j J^b_k + d_j J^c_k), K = J^{-1}.
/// Two orders below the inputs.
ConnectionJet transform_connection(const DiffeoJet& phi, const ConnectionJet& nab);

/// | L'(g, nab) at the target - L'(phi^* g, phi^{-1} nab) at the source |
/// normalized by max(1, both magnitudes).
double naturality_residual(const DiffeoJet& phi, const MetricJet& g, const ConnectionJet& nab);

/// Connection-direction variation of the first-order action: the
/// integrand c(alt_23(grad A))^sharp rho and its residual against the
/// independently derived divergence form D_j(rho V^j),
/// V^j = g^{jr} A^i_ri - g^{ir} A^j_ri. The integrand being an exact
/// divergence means the action does not constrain the connection.
struct PalatiniVariation {
    JetPoly integrand;
    double div_residual = 0.0;
};

PalatiniVariation palatini_variation(const MetricJet& g, const ConnectionJet& a);

} // namespace lnabla
