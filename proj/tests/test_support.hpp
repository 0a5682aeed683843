#pragma once

#include <vector>

#include "lnabla/jet.hpp"
#include "lnabla/rng.hpp"

namespace lnabla::test {

/// Random jet with decaying coefficients; constant term in [lo0, hi0].
inline JetPoly random_jet(SplitMix64& rng, int dim, int order, double lo0, double hi0,
                          double amplitude = 0.5, double decay = 0.5) {
    JetPoly j(dim, order);
    const auto& ly = j.layout();
    j[0] = rng.uniform(lo0, hi0);
    for (int r = 1; r < j.size(); ++r) {
        int deg = 0;
        for (int i = 0; i < dim; ++i) deg += ly.mono[static_cast<size_t>(r)][static_cast<size_t>(i)];
        double scale = amplitude;
        for (int k = 0; k < deg; ++k) scale *= decay;
        j[r] = rng.uniform(-scale, scale);
    }
    return j;
}

inline double max_abs_diff(const JetPoly& a, const JetPoly& b) {
    JetPoly d = a - b;
    return max_abs_coeff(d);
}

} // namespace lnabla::test
