#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "lnabla/catalog.hpp"
#include "lnabla/dense.hpp"
#include "lnabla/geometry.hpp"
#include "test_support.hpp"

using namespace lnabla;
using lnabla::test::max_abs_diff;

namespace {

std::vector<double> unpack_sym(const std::vector<double>& packed, int n) {
    std::vector<double> full(static_cast<size_t>(n * n));
    int t = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            full[static_cast<size_t>(i * n + j)] = packed[static_cast<size_t>(t)];
            full[static_cast<size_t>(j * n + i)] = packed[static_cast<size_t>(t)];
            ++t;
        }
    return full;
}

std::vector<double> dense_inverse(const std::vector<double>& m, int n) {
    DenseMat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = m[static_cast<size_t>(i * n + j)];
    const LuFactors f = lu_factor(a);
    std::vector<double> inv(static_cast<size_t>(n * n));
    std::vector<double> rhs(static_cast<size_t>(n), 0.0);
    for (int c = 0; c < n; ++c) {
        rhs.assign(static_cast<size_t>(n), 0.0);
        rhs[static_cast<size_t>(c)] = 1.0;
        const std::vector<double> col = lu_solve(f, rhs);
        for (int r = 0; r < n; ++r) inv[static_cast<size_t>(r * n + c)] = col[static_cast<size_t>(r)];
    }
    return inv;
}

/// Scalar curvature at the base point from central finite differences of
/// the metric's component functions; fully independent of the jet path.
double fd_scalar_curvature(const CatalogSpec& spec, double h = 1e-4) {
    const int n = spec.dim;
    std::vector<double> x(static_cast<size_t>(n), 0.0);
    auto g_at = [&](const std::vector<double>& p) { return unpack_sym(eval_metric(spec, p), n); };
    const std::vector<double> g0 = g_at(x);

    auto idx = [n](int i, int j) { return static_cast<size_t>(i * n + j); };
    std::vector<std::vector<double>> dg(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::vector<double> xp = x, xm = x;
        xp[static_cast<size_t>(k)] += h;
        xm[static_cast<size_t>(k)] -= h;
        const auto gp = g_at(xp), gm = g_at(xm);
        dg[static_cast<size_t>(k)].resize(static_cast<size_t>(n * n));
        for (int i = 0; i < n * n; ++i)
            dg[static_cast<size_t>(k)][static_cast<size_t>(i)] =
                (gp[static_cast<size_t>(i)] - gm[static_cast<size_t>(i)]) / (2.0 * h);
    }
    std::vector<std::vector<double>> d2g(static_cast<size_t>(n * n));
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            auto& out = d2g[static_cast<size_t>(k * n + l)];
            out.resize(static_cast<size_t>(n * n));
            if (k == l) {
                std::vector<double> xp = x, xm = x;
                xp[static_cast<size_t>(k)] += h;
                xm[static_cast<size_t>(k)] -= h;
                const auto gp = g_at(xp), gm = g_at(xm);
                for (int i = 0; i < n * n; ++i)
                    out[static_cast<size_t>(i)] = (gp[static_cast<size_t>(i)] - 2.0 * g0[static_cast<size_t>(i)] +
                                                   gm[static_cast<size_t>(i)]) /
                                                  (h * h);
            } else {
                std::vector<double> xpp = x, xpm = x, xmp = x, xmm = x;
                xpp[static_cast<size_t>(k)] += h;
                xpp[static_cast<size_t>(l)] += h;
                xpm[static_cast<size_t>(k)] += h;
                xpm[static_cast<size_t>(l)] -= h;
                xmp[static_cast<size_t>(k)] -= h;
                xmp[static_cast<size_t>(l)] += h;
                xmm[static_cast<size_t>(k)] -= h;
                xmm[static_cast<size_t>(l)] -= h;
                const auto gpp = g_at(xpp), gpm = g_at(xpm), gmp = g_at(xmp), gmm = g_at(xmm);
                for (int i = 0; i < n * n; ++i)
                    out[static_cast<size_t>(i)] =
                        (gpp[static_cast<size_t>(i)] - gpm[static_cast<size_t>(i)] - gmp[static_cast<size_t>(i)] +
                         gmm[static_cast<size_t>(i)]) /
                        (4.0 * h * h);
            }
        }

    const std::vector<double> ginv = dense_inverse(g0, n);
    // d(g^{-1})_k = -ginv dg_k ginv
    std::vector<std::vector<double>> dginv(static_cast<size_t>(n),
                                           std::vector<double>(static_cast<size_t>(n * n), 0.0));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        acc += ginv[idx(i, a)] * dg[static_cast<size_t>(k)][idx(a, b)] * ginv[idx(b, j)];
                dginv[static_cast<size_t>(k)][idx(i, j)] = -acc;
            }

    auto gamma = [&](int i, int j, int k) {
        double acc = 0.0;
        for (int s = 0; s < n; ++s)
            acc += ginv[idx(i, s)] * (dg[static_cast<size_t>(k)][idx(j, s)] + dg[static_cast<size_t>(j)][idx(k, s)] -
                                      dg[static_cast<size_t>(s)][idx(j, k)]);
        return 0.5 * acc;
    };
    auto dgamma = [&](int l, int i, int j, int k) {
        double acc = 0.0;
        for (int s = 0; s < n; ++s) {
            acc += dginv[static_cast<size_t>(l)][idx(i, s)] *
                   (dg[static_cast<size_t>(k)][idx(j, s)] + dg[static_cast<size_t>(j)][idx(k, s)] -
                    dg[static_cast<size_t>(s)][idx(j, k)]);
            acc += ginv[idx(i, s)] *
                   (d2g[static_cast<size_t>(l * n + k)][idx(j, s)] + d2g[static_cast<size_t>(l * n + j)][idx(k, s)] -
                    d2g[static_cast<size_t>(l * n + s)][idx(j, k)]);
        }
        return 0.5 * acc;
    };

    double s = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double ric = 0.0;
            for (int i = 0; i < n; ++i) {
                ric += dgamma(i, i, j, k) - dgamma(j, i, i, k);
                for (int l = 0; l < n; ++l) ric += gamma(l, j, k) * gamma(i, i, l) - gamma(l, i, k) * gamma(i, j, l);
            }
            s += ginv[idx(j, k)] * ric;
        }
    return s;
}

} // namespace

TEST_CASE("minkowski is the constant diagonal jet with time last") {
    const CatalogSpec spec = CatalogSpec::parse("minkowski", 4, 4);
    const MetricJet g = make_metric(spec);
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const double expected = (i == j) ? (i < 3 ? 1.0 : -1.0) : 0.0;
            CHECK(max_abs_diff(g.at(i, j), JetPoly::constant(4, 4, expected)) == 0.0);
        }
    CHECK(max_abs_coeff(scalar_curvature(g)) == 0.0);
}

TEST_CASE("schwarzschild chart values at the default base point") {
    const CatalogSpec spec = CatalogSpec::parse("schwarzschild(m=1, r0=3)", 4, 4);
    const MetricJet g = make_metric(spec);
    CHECK(g.value(3, 3) == doctest::Approx(-1.0 / 3.0)); // -(1 - 2m/r) at r = 3
    CHECK(g.value(0, 0) == doctest::Approx(3.0));
    CHECK(g.value(1, 1) == doctest::Approx(9.0));
}

TEST_CASE("schwarzschild is vacuum: scalar curvature vanishes") {
    const CatalogSpec spec = CatalogSpec::parse("schwarzschild", 4, 4);
    const JetPoly s = scalar_curvature(make_metric(spec));
    CHECK(max_abs_coeff(s) < 1e-9);
}

TEST_CASE("de sitter scalar curvature is n(n-1)H^2") {
    for (int n : {3, 4}) {
        const CatalogSpec spec = CatalogSpec::parse("de_sitter(hubble=0.5)", n, 4);
        const JetPoly s = scalar_curvature(make_metric(spec));
        const double expected = n * (n - 1) * 0.25;
        CHECK(std::fabs(s.value() - expected) / expected < 1e-8);
        JetPoly dev = s;
        dev -= s.value();
        CHECK(max_abs_coeff(dev) < 1e-8); // constant curvature
    }
}

TEST_CASE("finite-difference curvature oracle agrees with the jet path") {
    const std::array<std::pair<const char*, int>, 5> cases{{
        {"schwarzschild(m=1,r0=3)", 4},
        {"de_sitter(hubble=0.7,t0=1.3)", 3},
        {"polar_flat", 3},
        {"random_metric(seed=5)", 3},
        {"random_metric(seed=9,minus=1)", 4},
    }};
    for (const auto& [text, n] : cases) {
        CAPTURE(text);
        const CatalogSpec spec = CatalogSpec::parse(text, n, 4);
        const double jet_value = scalar_curvature(make_metric(spec)).value();
        const double fd_value = fd_scalar_curvature(spec);
        CHECK(std::fabs(jet_value - fd_value) <= 1e-6 * std::max(1.0, std::fabs(jet_value)));
    }
}

TEST_CASE("random metric generation is bit-reproducible and signature-checked") {
    const CatalogSpec spec = CatalogSpec::parse("random_metric(seed=42,minus=1)", 4, 4);
    const MetricJet a = make_metric(spec);
    const MetricJet b = make_metric(spec);
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) CHECK(a.at(i, j) == b.at(i, j));
    CHECK(a.signature() == Signature{3, 1});

    // an over-large perturbation that destroys the signature is rejected
    const CatalogSpec bad = CatalogSpec::parse("random_metric(seed=7,amplitude=40.0)", 3, 4);
    CHECK_THROWS_AS(make_metric(bad), StructureError);
}

TEST_CASE("connection generators") {
    const CatalogSpec flat = CatalogSpec::parse("flat_connection", 3, 4);
    CHECK(make_connection(flat).zero());

    const CatalogSpec lc_flat = CatalogSpec::parse("levi_civita_of(minkowski)", 4, 4);
    const ConnectionJet c = make_connection(lc_flat);
    CHECK(c.zero());
    CHECK(c.order() == 4); // the referenced metric is generated one order higher

    const CatalogSpec lc_schw = CatalogSpec::parse("levi_civita_of(schwarzschild(m=1))", 4, 4);
    const ConnectionJet cs = make_connection(lc_schw);
    CHECK(cs.order() == 4);
    CHECK(!cs.zero());

    const CatalogSpec rnd = CatalogSpec::parse("random_connection(seed=3)", 3, 4);
    const ConnectionJet r1 = make_connection(rnd);
    const ConnectionJet r2 = make_connection(rnd);
    CHECK(r1.at(0, 1, 2) == r2.at(0, 1, 2));
    CHECK(!r1.zero());

    const CatalogSpec rz = CatalogSpec::parse("random_connection(seed=3,base_zero=1)", 3, 4);
    const ConnectionJet z = make_connection(rz);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = j; k < 3; ++k) CHECK(z.value(i, j, k) == 0.0);
}

TEST_CASE("diffeo generator") {
    const CatalogSpec scaling = CatalogSpec::parse("random_diffeo(scale=2,linear=0,quad=0)", 3, 4);
    const DiffeoPoly d = make_diffeo(scaling);
    REQUIRE(d.components.size() == 3);
    for (int a = 0; a < 3; ++a) {
        CHECK(d.components[static_cast<size_t>(a)].value() == 0.0);
        CHECK(max_abs_diff(d.components[static_cast<size_t>(a)], 2.0 * JetPoly::variable(3, 4, a)) == 0.0);
    }

    const CatalogSpec rnd = CatalogSpec::parse("random_diffeo(seed=11)", 4, 4);
    const DiffeoPoly r1 = make_diffeo(rnd);
    const DiffeoPoly r2 = make_diffeo(rnd);
    for (int a = 0; a < 4; ++a) CHECK(r1.components[static_cast<size_t>(a)] == r2.components[static_cast<size_t>(a)]);
}

TEST_CASE("spec parsing and errors") {
    CHECK_THROWS_AS(CatalogSpec::parse("unknown_kind", 3, 4), UsageError);
    CHECK_THROWS_AS(CatalogSpec::parse("random_metric(bogus=1)", 3, 4), UsageError);
    CHECK_THROWS_AS(CatalogSpec::parse("random_metric(seed=abc)", 3, 4), UsageError);
    CHECK_THROWS_AS(CatalogSpec::parse("random_metric(seed=1", 3, 4), UsageError);
    CHECK_THROWS_AS(CatalogSpec::parse("levi_civita_of()", 4, 4), UsageError);
    CHECK_THROWS_AS(CatalogSpec::parse("random_metric(seed)", 3, 4), UsageError);
    CHECK_THROWS_AS(CatalogSpec::parse("schwarzschild", 3, 4), UsageError);
    CHECK_THROWS_AS(make_metric(CatalogSpec::parse("schwarzschild(m=1,r0=1.5)", 4, 4)), PreconditionError);
    CHECK_THROWS_AS(make_metric(CatalogSpec::parse("de_sitter(t0=0)", 3, 4)), PreconditionError);

    const CatalogSpec s = CatalogSpec::parse("  random_metric( seed=6 , amplitude=0.1 )  ", 3, 4);
    CHECK(s.param("seed") == 6.0);
    CHECK(s.param("amplitude") == 0.1);
    CHECK(s.param("decay") == 0.5); // default survives
    CHECK(s.to_string() == "random_metric(adapted=0,amplitude=0.1,decay=0.5,minus=0,seed=6)");

    const CatalogSpec lc = CatalogSpec::parse("levi_civita_of(schwarzschild(m=2))", 4, 4);
    REQUIRE(lc.ref != nullptr);
    CHECK(lc.ref->param("m") == 2.0);
    CHECK(lc.to_string().find("schwarzschild") != std::string::npos);

    CHECK_FALSE(catalog_listing().empty());
}
