#include "lnabla/variational.hpp"

namespace lnabla {

ELTensor euler_lagrange_eh(const MetricJet& g) { return euler_lagrange(EhCoordForm{}, g, 2); }

ELTensor euler_lagrange_nabla(const MetricJet& g, const ConnectionJet& nab) {
    return euler_lagrange(NablaLocalForm{&nab}, g, 1);
}

ELTensor einstein_tensor_density(const MetricJet& g) {
    const int n = g.n();
    const std::vector<JetPoly> ric = ricci(christoffel(g));
    const SymJetMatrix ginv = inverse_metric(g);
    const double rho = volume_density(g).value();

    // point values suffice
    std::vector<double> r0(static_cast<size_t>(n * n));
    for (int i = 0; i < n * n; ++i) r0[static_cast<size_t>(i)] = ric[static_cast<size_t>(i)].value();
    double s = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s += ginv.value(j, k) * r0[static_cast<size_t>(j * n + k)];

    ELTensor e(n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double up = 0.0;
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) up += ginv.value(a, c) * ginv.value(b, d) * r0[static_cast<size_t>(c * n + d)];
            e.at(a, b) = rho * (up - 0.5 * s * ginv.value(a, b));
        }
    return e;
}

} // namespace lnabla
