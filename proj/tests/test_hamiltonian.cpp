#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "lnabla/catalog.hpp"
#include "lnabla/dense.hpp"
#include "lnabla/hamiltonian.hpp"
#include "lnabla/lagrangians.hpp"
#include "test_support.hpp"

using namespace lnabla;

namespace {

MetricJet rand_metric(int n, std::uint64_t seed, int minus = 0, int order = 4) {
    std::string s = "random_metric(seed=" + std::to_string(seed) + ",minus=" + std::to_string(minus) + ")";
    return make_metric(CatalogSpec::parse(s, n, order));
}

ConnectionJet rand_conn(int n, std::uint64_t seed, int order = 4, bool base_zero = false) {
    std::string s = "random_connection(seed=" + std::to_string(seed) +
                    std::string(base_zero ? ",base_zero=1" : "") + ")";
    return make_connection(CatalogSpec::parse(s, n, order));
}

/// Metric that is adapted at the base point: constant part eps_i
/// delta_ij, derivative coefficients seeded.
MetricJet adapted_metric(int n, Signature sig, std::uint64_t seed, int order = 4) {
    SplitMix64 rng(seed);
    SymJetMatrix g(n, order);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            JetPoly c = test::random_jet(rng, n, order, 0.0, 0.0, 0.35);
            c -= c.value();
            if (i == j) c += sig.sign(i);
            g.at(i, j) = std::move(c);
        }
    return MetricJet(std::move(g), sig);
}

} // namespace

TEST_CASE("dense utilities: factorization, congruence, eigenvalue oracle") {
    SplitMix64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng.next() % 4);
        DenseMat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) a(i, j) = a(j, i) = rng.uniform(-2.0, 2.0);
        const Congruence c = ldlt_congruence(a);
        // S^T A S = diag(d)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = 0.0;
                for (int r = 0; r < n; ++r)
                    for (int s = 0; s < n; ++s) v += c.s(r, i) * a(r, s) * c.s(s, j);
                const double expected = (i == j) ? c.d[static_cast<size_t>(i)] : 0.0;
                CHECK(std::fabs(v - expected) < 1e-10);
            }
        // inertia matches the eigenvalue signs
        const std::vector<double> ev = jacobi_eigenvalues(a);
        int pos = 0, neg = 0;
        for (double e : ev) (e > 0 ? pos : neg)++;
        CHECK(c.n_pos == pos);
        CHECK(c.n_neg == neg);

        const LuFactors f = lu_factor(a);
        double det_ev = 1.0;
        for (double e : ev) det_ev *= e;
        CHECK(lu_det(f) == doctest::Approx(det_ev).epsilon(1e-8));
    }
}

TEST_CASE("momenta vanish on constant data and obey the homogeneity identity") {
    const MetricJet mink = make_metric(CatalogSpec::parse("minkowski", 4, 4));
    const ConnectionJet flat(4, 4);
    const MomentaTable zero = momenta(mink, flat);
    for (double v : zero.p) CHECK(v == 0.0);

    // with a vanishing background the density is quadratic in y_,k:
    // sum p y_, = 2 L
    for (int n : {3, 4}) {
        const MetricJet g = rand_metric(n, 11);
        const ConnectionJet fl(n, 4);
        const MomentaTable t = momenta(g, fl);
        const JetCoords<double> q = point_coords(g, 1);
        double dot = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = 0; k < n; ++k) dot += t.at(i, j, k) * q.y1_at(i, j, k);
        const double l = NablaLocalForm{&fl}(q);
        CHECK(dot == doctest::Approx(2.0 * l).epsilon(1e-11));
    }
}

TEST_CASE("momenta are affine in the first-derivative coordinates") {
    const int n = 3;
    const MetricJet g = rand_metric(n, 13);
    const ConnectionJet nab = rand_conn(n, 113);
    SplitMix64 rng(7);

    JetCoords<double> q = point_coords(g, 1);
    std::vector<double> dir(q.y1.size());
    for (auto& d : dir) d = rng.uniform(-1.0, 1.0);
    const std::vector<double> base = q.y1;

    const auto momenta_at = [&](double t) {
        MetricJet m = g;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    std::array<int, 3> e{};
                    e[static_cast<size_t>(k)] = 1;
                    const size_t idx = static_cast<size_t>(sym_pair_index(n, i, j) * n + k);
                    m.at(i, j).set_derivative(e, base[idx] + t * dir[idx]);
                }
        return momenta(m, nab);
    };
    const MomentaTable p0 = momenta_at(0.0), p1 = momenta_at(1.0), p2 = momenta_at(2.0);
    for (size_t i = 0; i < p0.p.size(); ++i)
        CHECK(std::fabs(p2.p[i] - 2.0 * p1.p[i] + p0.p[i]) < 1e-11);

    // the linear part is independent of the background coefficients
    const ConnectionJet other = rand_conn(n, 114);
    const auto momenta_conn = [&](const ConnectionJet& c, double t) {
        MetricJet m = g;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    std::array<int, 3> e{};
                    e[static_cast<size_t>(k)] = 1;
                    const size_t idx = static_cast<size_t>(sym_pair_index(n, i, j) * n + k);
                    m.at(i, j).set_derivative(e, base[idx] + t * dir[idx]);
                }
        return momenta(m, c);
    };
    const MomentaTable a0 = momenta_conn(nab, 0.0), a1 = momenta_conn(nab, 1.0);
    const MomentaTable b0 = momenta_conn(other, 0.0), b1 = momenta_conn(other, 1.0);
    for (size_t i = 0; i < a0.p.size(); ++i)
        CHECK(std::fabs((a1.p[i] - a0.p[i]) - (b1.p[i] - b0.p[i])) < 1e-11);
}

TEST_CASE("closed-form Hessian entries on the flat 3d point") {
    std::vector<double> y0(static_cast<size_t>(sym_pair_count(3)), 0.0);
    for (int i = 0; i < 3; ++i) y0[static_cast<size_t>(sym_pair_index(3, i, i))] = 1.0;
    const HessianMatrix h = hessian_closed_form(y0, 3, Signature{3, 0});
    const int r00_0 = HessianMatrix::row_index(3, 0, 0, 0);
    CHECK(h.at(r00_0, r00_0) == doctest::Approx(0.0));
    const int r01_2 = HessianMatrix::row_index(3, 0, 1, 2);
    CHECK(h.at(r01_2, r01_2) == doctest::Approx(-1.0));
}

TEST_CASE("Hessian symmetry, route agreement and independence properties") {
    for (int n : {3, 4}) {
        const MetricJet g = rand_metric(n, 21, n == 4 ? 1 : 0);
        const ConnectionJet nab = rand_conn(n, 121);
        const MomentaTable t = momenta(g, nab);
        const HessianMatrix closed = hessian_closed_form(t.y0, n, g.signature());
        const HessianMatrix numeric = hessian_numeric(g, nab);
        REQUIRE(closed.rows == numeric.rows);
        double sym = 0.0, agree = 0.0;
        for (int r = 0; r < closed.rows; ++r)
            for (int c = 0; c < closed.rows; ++c) {
                sym = std::max(sym, std::fabs(closed.at(r, c) - closed.at(c, r)));
                agree = std::max(agree, std::fabs(closed.at(r, c) - numeric.at(r, c)));
            }
        CHECK(sym < 1e-12);
        CHECK(agree < 1e-8);

        // background independence
        const HessianMatrix other = hessian_numeric(g, rand_conn(n, 122));
        double gap = 0.0;
        for (int r = 0; r < closed.rows; ++r)
            for (int c = 0; c < closed.rows; ++c) gap = std::max(gap, std::fabs(numeric.at(r, c) - other.at(r, c)));
        CHECK(gap < 1e-10);

        // first-derivative independence: same base point, different jet
        SplitMix64 rng(31);
        MetricJet g2 = g;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    std::array<int, kMaxDim> e{};
                    e[static_cast<size_t>(k)] = 1;
                    const std::span<const int> sp(e.data(), static_cast<size_t>(n));
                    g2.at(i, j).set_derivative(sp, rng.uniform(-0.5, 0.5));
                }
        const HessianMatrix moved = hessian_numeric(g2, nab);
        gap = 0.0;
        for (int r = 0; r < closed.rows; ++r)
            for (int c = 0; c < closed.rows; ++c) gap = std::max(gap, std::fabs(numeric.at(r, c) - moved.at(r, c)));
        CHECK(gap < 1e-10);
    }
}

TEST_CASE("regularity of the fiber Hessian") {
    std::vector<double> e3(static_cast<size_t>(sym_pair_count(3)), 0.0);
    for (int i = 0; i < 3; ++i) e3[static_cast<size_t>(sym_pair_index(3, i, i))] = 1.0;
    CHECK(regularity_check(e3, 3, Signature{3, 0}).invertible);

    std::vector<double> m4(static_cast<size_t>(sym_pair_count(4)), 0.0);
    for (int i = 0; i < 4; ++i) m4[static_cast<size_t>(sym_pair_index(4, i, i))] = (i < 3) ? 1.0 : -1.0;
    CHECK(regularity_check(m4, 4, Signature{3, 1}).invertible);

    std::vector<double> e2(static_cast<size_t>(sym_pair_count(2)), 0.0);
    for (int i = 0; i < 2; ++i) e2[static_cast<size_t>(sym_pair_index(2, i, i))] = 1.0;
    CHECK_THROWS_AS(regularity_check(e2, 2, Signature{2, 0}), DimensionError);

    for (std::uint64_t seed = 31; seed < 41; ++seed)
        for (int n : {3, 4})
            for (int minus : {0, 1}) {
                const MetricJet g = rand_metric(n, seed, minus);
                const MomentaTable t = momenta(g, ConnectionJet(n, 4));
                CHECK(regularity_check(t.y0, n, g.signature()).invertible);
            }
}

TEST_CASE("rescaled momenta table is symmetric in its leading pair") {
    const MetricJet g = adapted_metric(3, Signature{3, 0}, 41);
    const MomentaTable t = momenta(g, ConnectionJet(3, 4));
    const UpsilonTable u = upsilon_table(t);
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s)
            for (int q = 0; q < 3; ++q) CHECK(u.at(r, s, q) == u.at(s, r, q));
}

TEST_CASE("adapted inversion round trip") {
    // zero momenta map to zero coordinates
    const MetricJet flat = make_metric(CatalogSpec::parse("euclidean", 3, 4));
    MomentaTable z = momenta(flat, ConnectionJet(3, 4));
    for (const double v : legendre_invert_adapted(z)) CHECK(v == 0.0);

    for (int n : {3, 4})
        for (int minus : {0, 1})
            for (std::uint64_t seed = 51; seed < 56; ++seed) {
                const Signature sig{n - minus, minus};
                const MetricJet g = adapted_metric(n, sig, seed);
                const ConnectionJet nab = rand_conn(n, seed + 700, 4, /*base_zero=*/true);
                const MomentaTable t = momenta(g, nab);
                const std::vector<double> got = legendre_invert_adapted(t);
                const JetCoords<double> q = point_coords(g, 1);
                for (size_t i = 0; i < got.size(); ++i) CHECK(std::fabs(got[i] - q.y1[i]) < 1e-10);

                // cross-check against the linear-solve path
                const std::vector<double> general = legendre_invert_general(t, g, nab);
                for (size_t i = 0; i < got.size(); ++i) CHECK(std::fabs(got[i] - general[i]) < 1e-9);
            }
}

TEST_CASE("adapted inversion rejects bad inputs") {
    const MetricJet g = rand_metric(3, 61); // generic base point: not adapted
    const MomentaTable t = momenta(g, ConnectionJet(3, 4));
    CHECK_THROWS_AS(legendre_invert_adapted(t), PreconditionError);

    const MetricJet g2 = adapted_metric(2, Signature{2, 0}, 62);
    const MomentaTable t2 = momenta(g2, ConnectionJet(2, 4));
    CHECK_THROWS_AS(legendre_invert_adapted(t2), DimensionError);
}

TEST_CASE("general inversion round trips at arbitrary points") {
    for (int n : {3, 4})
        for (std::uint64_t seed = 71; seed < 76; ++seed) {
            const MetricJet g = rand_metric(n, seed, (seed % 2) ? 1 : 0);
            const ConnectionJet nab = rand_conn(n, seed + 800);
            const MomentaTable t = momenta(g, nab);
            const std::vector<double> got = legendre_invert_general(t, g, nab);
            const JetCoords<double> q = point_coords(g, 1);
            for (size_t i = 0; i < got.size(); ++i) CHECK(std::fabs(got[i] - q.y1[i]) < 1e-9);
        }

    // closed-form chart: the recovered coordinates are the chart's
    const MetricJet schw = make_metric(CatalogSpec::parse("schwarzschild", 4, 4));
    const ConnectionJet nab = rand_conn(4, 4321);
    const MomentaTable t = momenta(schw, nab);
    const std::vector<double> got = legendre_invert_general(t, schw, nab);
    const JetCoords<double> q = point_coords(schw, 1);
    for (size_t i = 0; i < got.size(); ++i) CHECK(std::fabs(got[i] - q.y1[i]) < 1e-9);
}

TEST_CASE("Hamiltonian values") {
    const MetricJet mink = make_metric(CatalogSpec::parse("minkowski", 4, 4));
    const ConnectionJet flat(4, 4);
    CHECK(hamiltonian_h(mink, flat) == 0.0);

    // vanishing background: H = L by homogeneity
    for (int n : {3, 4}) {
        const MetricJet g = rand_metric(n, 81);
        const ConnectionJet fl(n, 4);
        const double h = hamiltonian_h(g, fl);
        const double l = l_nabla(g, fl, LNablaRoute::first_order_local).value.value();
        CHECK(h == doctest::Approx(l).epsilon(1e-11));
    }

    // definition recomputation from an independently returned table
    const MetricJet g = rand_metric(3, 82);
    const ConnectionJet nab = rand_conn(3, 182);
    const MomentaTable t = momenta(g, nab);
    const JetCoords<double> q = point_coords(g, 1);
    double dot = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            for (int k = 0; k < 3; ++k) dot += t.at(i, j, k) * q.y1_at(i, j, k);
    const double expected = dot - l_nabla(g, nab, LNablaRoute::first_order_local).value.value();
    CHECK(hamiltonian_h(g, nab) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("covariant Hamiltonian identity") {
    // flat background: reduces to the plain Hamiltonian
    const MetricJet g0 = rand_metric(3, 91);
    const ConnectionJet flat(3, 4);
    CHECK(covariant_hamiltonian(g0, flat) == hamiltonian_h(g0, flat));

    // H_cov = L - 2 rho s^{g,nabla}
    for (int n : {3, 4})
        for (std::uint64_t seed = 92; seed < 97; ++seed) {
            const MetricJet g = rand_metric(n, seed, (seed % 2) ? 1 : 0);
            const ConnectionJet nab = rand_conn(n, seed + 900);
            const double lhs = covariant_hamiltonian(g, nab);
            const double l = l_nabla(g, nab, LNablaRoute::first_order_local).value.value();
            const double rho = volume_density(g).value();
            const double s = pair_scalar_curvature(g, nab).value();
            const double scale = std::max({1.0, std::fabs(lhs), std::fabs(l)});
            CHECK(std::fabs(lhs - (l - 2.0 * rho * s)) < 1e-9 * scale);
        }

    // Levi-Civita background: the pair curvature is the metric one
    const MetricJet g = rand_metric(3, 98);
    const ConnectionJet lc = make_connection(CatalogSpec::parse("levi_civita_of(random_metric(seed=98))", 3, 4));
    const double lhs = covariant_hamiltonian(g, lc);
    const double l = l_nabla(g, lc, LNablaRoute::first_order_local).value.value();
    const double rho = volume_density(g).value();
    const double s = scalar_curvature(g).value();
    CHECK(std::fabs(lhs - (l - 2.0 * rho * s)) < 1e-9 * std::max(1.0, std::fabs(lhs)));
}

TEST_CASE("canonical equation residuals") {
    // kinematic identity holds for any metric
    for (std::uint64_t seed = 101; seed < 104; ++seed) {
        const MetricJet g = rand_metric(3, seed);
        const CanonicalResiduals r = canonical_residuals(g, ConnectionJet(3, 4));
        CHECK(r.r2 <= 1e-6);
        // vanishing background: both versions coincide bit for bit
        CHECK(r.r1 == r.r1_cov);
        CHECK(r.r2 == r.r2_cov);
    }

    // dynamic equation holds along a solution
    const MetricJet schw = make_metric(CatalogSpec::parse("schwarzschild", 4, 4));
    const CanonicalResiduals r = canonical_residuals(schw, ConnectionJet(4, 4));
    CHECK(r.r1 <= 1e-5);
    CHECK(r.r2 <= 1e-6);
    CHECK(r.r1 == r.r1_cov);
    CHECK(r.r2 == r.r2_cov);

    // nontrivial background: both formulations agree on the residuals
    const MetricJet g = rand_metric(3, 105);
    const ConnectionJet nab = rand_conn(3, 205);
    const CanonicalResiduals rc = canonical_residuals(g, nab);
    CHECK(std::fabs(rc.r2 - rc.r2_cov) < 1e-8);
    CHECK(std::fabs(rc.r1 - rc.r1_cov) < 1e-6 * std::max(1.0, rc.r1));
}
