#include "lnabla/forms.hpp"

#include <array>

namespace lnabla {

namespace {
std::array<int, kMaxDim> unit(int n, int k) {
    std::array<int, kMaxDim> a{};
    (void)n;
    a[static_cast<size_t>(k)] = 1;
    return a;
}
std::array<int, kMaxDim> unit2(int n, int k, int l) {
    std::array<int, kMaxDim> a{};
    (void)n;
    a[static_cast<size_t>(k)] += 1;
    a[static_cast<size_t>(l)] += 1;
    return a;
}
} // namespace

JetCoords<double> point_coords(const MetricJet& g, int deriv_order) {
    const int n = g.n();
    if (g.order() < deriv_order) throw OrderError("metric order too low for the requested coordinates");
    JetCoords<double> c;
    c.n = n;
    c.deriv_order = deriv_order;
    c.proto = 0.0;
    const int np = sym_pair_count(n);
    c.y.resize(static_cast<size_t>(np));
    c.y1.resize(static_cast<size_t>(np) * n);
    if (deriv_order >= 2) c.y2.resize(static_cast<size_t>(np) * np);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            c.y_ref(i, j) = g.value(i, j);
            for (int k = 0; k < n; ++k) {
                const auto a = unit(n, k);
                c.y1_ref(i, j, k) = g.at(i, j).derivative(std::span<const int>(a.data(), static_cast<size_t>(n)));
            }
            if (deriv_order >= 2)
                for (int k = 0; k < n; ++k)
                    for (int l = k; l < n; ++l) {
                        const auto a = unit2(n, k, l);
                        c.y2_ref(i, j, k, l) =
                            g.at(i, j).derivative(std::span<const int>(a.data(), static_cast<size_t>(n)));
                    }
        }
    return c;
}

JetCoords<JetPoly> jet_coords(const MetricJet& g, int deriv_order, int jet_order) {
    const int n = g.n();
    if (g.order() < deriv_order + jet_order)
        throw OrderError("metric order too low to realize coordinate jets at the requested order");
    JetCoords<JetPoly> c;
    c.n = n;
    c.deriv_order = deriv_order;
    c.proto = JetPoly(n, jet_order);
    const int np = sym_pair_count(n);
    c.y.assign(static_cast<size_t>(np), c.proto);
    c.y1.assign(static_cast<size_t>(np) * n, c.proto);
    if (deriv_order >= 2) c.y2.assign(static_cast<size_t>(np) * np, c.proto);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            c.y_ref(i, j) = g.at(i, j).truncated(jet_order);
            for (int k = 0; k < n; ++k) c.y1_ref(i, j, k) = partial(g.at(i, j), k).truncated(jet_order);
            if (deriv_order >= 2)
                for (int k = 0; k < n; ++k)
                    for (int l = k; l < n; ++l)
                        c.y2_ref(i, j, k, l) = partial(partial(g.at(i, j), k), l).truncated(jet_order);
        }
    return c;
}

ConnCoords<double> point_conn(const ConnectionJet& nab) {
    const int n = nab.n();
    if (nab.order() < 1) throw OrderError("connection order too low for coordinate lifting");
    ConnCoords<double> c;
    c.n = n;
    const int np = sym_pair_count(n);
    c.gamma.resize(static_cast<size_t>(n) * np);
    c.dgamma.resize(static_cast<size_t>(n) * np * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const size_t base = static_cast<size_t>(i * np + sym_pair_index(n, j, k));
                c.gamma[base] = nab.value(i, j, k);
                for (int l = 0; l < n; ++l) {
                    const auto a = unit(n, l);
                    c.dgamma[base * n + static_cast<size_t>(l)] =
                        nab.at(i, j, k).derivative(std::span<const int>(a.data(), static_cast<size_t>(n)));
                }
            }
    return c;
}

ConnCoords<JetPoly> jet_conn(const ConnectionJet& nab, int jet_order) {
    const int n = nab.n();
    if (nab.order() < jet_order + 1)
        throw OrderError("connection order too low to realize coefficient jets at the requested order");
    ConnCoords<JetPoly> c;
    c.n = n;
    const int np = sym_pair_count(n);
    const JetPoly zero(n, jet_order);
    c.gamma.assign(static_cast<size_t>(n) * np, zero);
    c.dgamma.assign(static_cast<size_t>(n) * np * n, zero);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const size_t base = static_cast<size_t>(i * np + sym_pair_index(n, j, k));
                c.gamma[base] = nab.at(i, j, k).truncated(jet_order);
                for (int l = 0; l < n; ++l)
                    c.dgamma[base * n + static_cast<size_t>(l)] = partial(nab.at(i, j, k), l).truncated(jet_order);
            }
    return c;
}

} // namespace lnabla
