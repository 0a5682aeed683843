#include "lnabla/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lnabla/catalog.hpp"
#include "lnabla/covariance.hpp"
#include "lnabla/dense.hpp"
#include "lnabla/hamiltonian.hpp"
#include "lnabla/lagrangians.hpp"
#include "lnabla/rng.hpp"
#include "lnabla/variational.hpp"

namespace lnabla {

namespace {

constexpr std::uint64_t kSeedMask = (1ULL << 48) - 1; // keep seeds exact in spec strings

struct Task {
    std::string label;
    std::function<std::vector<CheckReport>()> fn;
};

/// Per-case context: derived seeds and resolved generator specs.
struct Case {
    int n = 0;
    int order = 4;
    double tol_mult = 1.0;
    std::uint64_t seed = 0;
    std::string metric_spec;
    std::string conn_spec;
    std::string diffeo_spec;

    CheckReport report(const std::string& suite, const std::string& check, double residual,
                       double tolerance) const {
        CheckReport r;
        r.suite = suite;
        r.check = check;
        r.inputs.metric = metric_spec;
        r.inputs.connection = conn_spec;
        r.inputs.diffeo = diffeo_spec;
        r.inputs.seed = seed;
        r.inputs.n = n;
        r.inputs.order = order;
        if (!metric_spec.empty())
            r.inputs.base_point = CatalogSpec::parse(metric_spec, n, order).base_point();
        else
            r.inputs.base_point.assign(static_cast<size_t>(n), 0.0);
        r.residual = residual;
        r.tolerance = tolerance * tol_mult;
        r.pass = residual <= r.tolerance;
        return r;
    }
};

std::string inject_seed(const std::string& tmpl, int n, int order, std::uint64_t seed, int minus) {
    CatalogSpec spec = CatalogSpec::parse(tmpl, n, order);
    if (spec.params.count("seed")) spec.params["seed"] = static_cast<double>(seed & kSeedMask);
    // only the default template alternates the signature per case
    if (tmpl == "random_metric") spec.params["minus"] = minus;
    return spec.to_string();
}

struct SuiteBuilder {
    const VerifyConfig& cfg;
    int suite_id;
    std::string suite;
    std::vector<Task>& tasks;

    Case case_for(int n, int idx, bool adapted_metric = false, bool base_zero_conn = false,
                  bool with_diffeo = false, double diffeo_quad = 0.1) const {
        Case c;
        c.n = n;
        c.order = cfg.order;
        c.tol_mult = cfg.tol_mult;
        c.seed = mix_seed(mix_seed(mix_seed(cfg.seed_base, static_cast<std::uint64_t>(suite_id + 1)),
                                   static_cast<std::uint64_t>(n)),
                          static_cast<std::uint64_t>(idx + 1)) &
                 kSeedMask;
        const int minus = static_cast<int>(c.seed % 2);
        std::string mt = cfg.metric_spec;
        if (adapted_metric && mt == "random_metric") mt += "(adapted=1)";
        c.metric_spec = inject_seed(mt, n, cfg.order, mix_seed(c.seed, 1), minus);
        std::string ct = cfg.connection_spec;
        if (base_zero_conn && ct == "random_connection") ct += "(base_zero=1)";
        c.conn_spec = inject_seed(ct, n, cfg.order, mix_seed(c.seed, 2), 0);
        if (with_diffeo) {
            std::string dt = cfg.diffeo_spec;
            if (dt == "random_diffeo") dt += "(quad=" + format_double(diffeo_quad) + ")";
            c.diffeo_spec = inject_seed(dt, n, cfg.order, mix_seed(c.seed, 3), 0);
        }
        return c;
    }

    void add(std::string label, std::function<std::vector<CheckReport>()> fn) const {
        tasks.push_back({std::move(label), std::move(fn)});
    }

    std::string label(const Case& c) const {
        return suite + " n=" + std::to_string(c.n) + " seed=" + std::to_string(c.seed);
    }
};

MetricJet case_metric(const Case& c) { return make_metric(CatalogSpec::parse(c.metric_spec, c.n, c.order)); }
ConnectionJet case_conn(const Case& c) {
    return make_connection(CatalogSpec::parse(c.conn_spec, c.n, c.order));
}
DiffeoJet case_diffeo(const Case& c) {
    return DiffeoJet::from_components(make_diffeo(CatalogSpec::parse(c.diffeo_spec, c.n, c.order)));
}

double rel_gap(double a, double b) { return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)}); }

// ---------------------------------------------------------------- lemma1

void build_lemma1(const SuiteBuilder& b) {
    for (int n : b.cfg.dims)
        for (int idx = 0; idx < b.cfg.seeds; ++idx) {
            Case c = b.case_for(n, idx);
            c.order = 2; // value checks only consume two derivative levels
            c.metric_spec = inject_seed(b.cfg.metric_spec, n, 2, mix_seed(c.seed, 1),
                                        static_cast<int>(c.seed % 2));
            c.conn_spec = inject_seed(b.cfg.connection_spec, n, 2, mix_seed(c.seed, 2), 0);
            b.add(b.label(c), [c, suite = b.suite] {
                const MetricJet g = case_metric(c);
                const ConnectionJet nab = case_conn(c);
                const double base_geo = l_nabla(g, nab, LNablaRoute::geometric).value.value();
                const double base_local = l_nabla(g, nab, LNablaRoute::first_order_local).value.value();
                const double rho_s = l_eh_christoffel(g).value.value();
                const double scale = std::max({1.0, std::fabs(rho_s), std::fabs(base_geo - rho_s)});
                double worst = 0.0;
                for (const double delta : {1e-2, -1e-2})
                    for (int a = 0; a < c.n; ++a)
                        for (int bb = a; bb < c.n; ++bb)
                            for (int k = 0; k < c.n; ++k)
                                for (int l = k; l < c.n; ++l) {
                                    MetricJet p = g;
                                    p.perturb_second_derivative(a, bb, k, l, delta);
                                    const double geo = l_nabla(p, nab, LNablaRoute::geometric).value.value();
                                    worst = std::max(worst, std::fabs(geo - base_geo) / scale);
                                    const double local =
                                        l_nabla(p, nab, LNablaRoute::first_order_local).value.value();
                                    if (local != base_local) worst = std::max(worst, std::fabs(local - base_local));
                                }
                return std::vector<CheckReport>{c.report(suite, "first_order_perturbation", worst, 1e-12)};
            });
        }
}

// ---------------------------------------------------------------- lemma2

void build_lemma2(const SuiteBuilder& b) {
    for (int n : b.cfg.dims)
        for (int idx = 0; idx < b.cfg.seeds; ++idx) {
            const Case c = b.case_for(n, idx);
            b.add(b.label(c), [c, suite = b.suite] {
                std::vector<CheckReport> out;
                out.push_back(c.report(suite, "divergence_identity",
                                       divergence_residual(case_metric(c), case_conn(c)), 1e-9));
                if (c.n == 4) {
                    Case s = c;
                    s.metric_spec = "schwarzschild(m=1,r0=3,theta0=" + format_double(3.14159265358979323846 / 3.0) + ")";
                    out.push_back(s.report(suite, "divergence_identity_schwarzschild",
                                           divergence_residual(case_metric(s), case_conn(s)), 1e-9));
                }
                return out;
            });
        }
}

// ---------------------------------------------------------- el_equivalence

void build_el_equivalence(const SuiteBuilder& b) {
    for (int n : b.cfg.dims) {
        if (n == 4) {
            Case c = b.case_for(n, 0);
            c.metric_spec = "schwarzschild(m=1,r0=3,theta0=" + format_double(3.14159265358979323846 / 3.0) + ")";
            c.conn_spec.clear();
            c.seed = 0;
            b.add(b.label(c), [c, suite = b.suite] {
                const ELTensor e = euler_lagrange_eh(case_metric(c));
                return std::vector<CheckReport>{c.report(suite, "el_vacuum_schwarzschild", e.max_abs(), 1e-7)};
            });
        }
        for (int idx = 0; idx < b.cfg.seeds; ++idx) {
            const Case c = b.case_for(n, idx);
            b.add(b.label(c), [c, suite = b.suite] {
                const MetricJet g = case_metric(c);
                const ConnectionJet nab = case_conn(c);
                const ELTensor eh = euler_lagrange_eh(g);
                const ELTensor fo = euler_lagrange_nabla(g, nab);
                double gap = 0.0;
                for (size_t i = 0; i < eh.comp.size(); ++i)
                    gap = std::max(gap, std::fabs(eh.comp[i] - fo.comp[i]));
                const double scale = std::max(1.0, eh.max_abs());

                const ELTensor einstein = einstein_tensor_density(g);
                double oracle = 0.0;
                for (size_t i = 0; i < eh.comp.size(); ++i)
                    oracle = std::max(oracle, std::fabs(eh.comp[i] + einstein.comp[i])); // kappa = -1
                const double oscale = std::max(1.0, einstein.max_abs());

                std::vector<CheckReport> out;
                out.push_back(c.report(suite, "el_agreement", gap / scale, 1e-7));
                out.push_back(c.report(suite, "el_einstein_oracle", oracle / oscale, 1e-7));
                return out;
            });
        }
    }
}

// -------------------------------------------------------------- regularity

void build_regularity(const SuiteBuilder& b) {
    {
        Case c;
        c.n = 2;
        c.order = b.cfg.order;
        c.tol_mult = b.cfg.tol_mult;
        b.add(b.label(c), [c, suite = b.suite] {
            std::vector<double> e2(static_cast<size_t>(sym_pair_count(2)), 0.0);
            e2[0] = e2[static_cast<size_t>(sym_pair_index(2, 1, 1))] = 1.0;
            double residual = 1.0;
            try {
                (void)regularity_check(e2, 2, Signature{2, 0});
            } catch (const DimensionError&) {
                residual = 0.0;
            }
            return std::vector<CheckReport>{c.report(suite, "dimension_two_rejected", residual, 0.0)};
        });
    }
    for (int n : b.cfg.dims)
        for (int idx = 0; idx < b.cfg.seeds; ++idx)
            for (int minus : {0, 1}) {
                Case c = b.case_for(n, idx);
                CatalogSpec ms = CatalogSpec::parse(c.metric_spec, n, c.order);
                if (ms.params.count("minus")) ms.params["minus"] = minus;
                c.metric_spec = ms.to_string();
                const char* tag = minus == 0 ? "riemannian" : "lorentzian";
                b.add(b.label(c), [c, tag, suite = b.suite] {
                    const MetricJet g = case_metric(c);
                    const ConnectionJet nab = case_conn(c);
                    const MomentaTable t = momenta(g, nab);
                    const HessianMatrix closed = hessian_closed_form(t.y0, c.n, g.signature());
                    const HessianMatrix numeric = hessian_numeric(g, nab);
                    double agree = 0.0, sym = 0.0;
                    for (int r = 0; r < closed.rows; ++r)
                        for (int col = 0; col < closed.rows; ++col) {
                            agree = std::max(agree, std::fabs(closed.at(r, col) - numeric.at(r, col)));
                            sym = std::max(sym, std::fabs(closed.at(r, col) - closed.at(col, r)));
                        }
                    const RegularityResult reg = regularity_check(t.y0, c.n, g.signature());
                    const double det_resid =
                        (reg.invertible && std::fabs(reg.det) > 1e-10) ? 0.0 : 1e-10 - std::fabs(reg.det);

                    std::vector<CheckReport> out;
                    out.push_back(c.report(suite, std::string("hessian_agreement_") + tag, agree, 1e-8));
                    out.push_back(c.report(suite, std::string("hessian_symmetry_") + tag, sym, 1e-12));
                    out.push_back(c.report(suite, std::string("hessian_det_") + tag, det_resid, 0.0));
                    return out;
                });
            }
}

// ---------------------------------------------------------------- legendre

void build_legendre(const SuiteBuilder& b) {
    for (int n : b.cfg.dims)
        for (int idx = 0; idx < b.cfg.seeds; ++idx) {
            const Case adapted = b.case_for(n, idx, /*adapted=*/true, /*base_zero=*/true);
            b.add(b.label(adapted), [adapted, suite = b.suite] {
                const MetricJet g = case_metric(adapted);
                const ConnectionJet nab = case_conn(adapted);
                const MomentaTable t = momenta(g, nab);
                const std::vector<double> via_adapted = legendre_invert_adapted(t);
                const std::vector<double> via_general = legendre_invert_general(t, g, nab);
                const JetCoords<double> q = point_coords(g, 1);
                double round_trip = 0.0, cross = 0.0;
                for (size_t i = 0; i < via_adapted.size(); ++i) {
                    round_trip = std::max(round_trip, std::fabs(via_adapted[i] - q.y1[i]));
                    cross = std::max(cross, std::fabs(via_adapted[i] - via_general[i]));
                }
                std::vector<CheckReport> out;
                out.push_back(adapted.report(suite, "adapted_round_trip", round_trip, 1e-10));
                out.push_back(adapted.report(suite, "adapted_vs_general", cross, 1e-9));
                return out;
            });

            const Case generic = b.case_for(n, idx + (1 << 20));
            b.add(b.label(generic), [generic, suite = b.suite] {
                const MetricJet g = case_metric(generic);
                const ConnectionJet nab = case_conn(generic);
                const MomentaTable t = momenta(g, nab);
                const std::vector<double> got = legendre_invert_general(t, g, nab);
                const JetCoords<double> q = point_coords(g, 1);
                double round_trip = 0.0;
                for (size_t i = 0; i < got.size(); ++i)
                    round_trip = std::max(round_trip, std::fabs(got[i] - q.y1[i]));
                return std::vector<CheckReport>{generic.report(suite, "general_round_trip", round_trip, 1e-9)};
            });
        }
}

// ------------------------------------------------- covariant_hamiltonian

double covariant_identity_residual(const MetricJet& g, const ConnectionJet& nab) {
    const double lhs = covariant_hamiltonian(g, nab);
    const double l = l_nabla(g, nab, LNablaRoute::first_order_local).value.value();
    const double rho = volume_density(g).value();
    const double s = pair_scalar_curvature(g, nab).value();
    return std::fabs(lhs - (l - 2.0 * rho * s)) / std::max({1.0, std::fabs(lhs), std::fabs(l)});
}

void build_covariant_hamiltonian(const SuiteBuilder& b) {
    for (int n : b.cfg.dims) {
        // closed-form catalog pairs
        std::vector<std::string> metrics = {"minkowski", "euclidean", "de_sitter", "polar_flat"};
        if (n == 4) metrics.push_back("schwarzschild");
        for (const auto& mname : metrics) {
            Case c = b.case_for(n, 0);
            c.seed = 0;
            c.metric_spec = CatalogSpec::parse(mname, n, b.cfg.order).to_string();
            const std::vector<std::pair<std::string, std::string>> conns = {
                {"flat", "flat_connection"},
                {"levi_civita", "levi_civita_of(" + c.metric_spec + ")"},
                {"random", "random_connection(seed=1)"},
            };
            for (const auto& [ctag, cname] : conns) {
                Case cc = c;
                cc.conn_spec = cname;
                const std::string check = "identity_catalog:" + mname + "+" + ctag;
                b.add(b.label(cc), [cc, check, suite = b.suite] {
                    const double r = covariant_identity_residual(case_metric(cc), case_conn(cc));
                    return std::vector<CheckReport>{cc.report(suite, check, r, 1e-9)};
                });
            }
        }
        for (int idx = 0; idx < b.cfg.seeds; ++idx) {
            const Case c = b.case_for(n, idx);
            b.add(b.label(c), [c, suite = b.suite] {
                const double r = covariant_identity_residual(case_metric(c), case_conn(c));
                return std::vector<CheckReport>{c.report(suite, "identity_random", r, 1e-9)};
            });
        }
    }
}

// --------------------------------------------------------------- canonical

void build_canonical(const SuiteBuilder& b) {
    for (int n : b.cfg.dims) {
        if (n == 4) {
            Case c = b.case_for(n, 0);
            c.seed = 0;
            c.metric_spec = "schwarzschild(m=1,r0=3,theta0=" + format_double(3.14159265358979323846 / 3.0) + ")";
            c.conn_spec = "flat_connection";
            b.add(b.label(c), [c, suite = b.suite] {
                const CanonicalResiduals r = canonical_residuals(case_metric(c), case_conn(c));
                return std::vector<CheckReport>{c.report(suite, "dynamic_r1_schwarzschild", r.r1, 1e-5)};
            });
        }
        for (int idx = 0; idx < b.cfg.seeds; ++idx) {
            const Case c = b.case_for(n, idx);
            b.add(b.label(c), [c, suite = b.suite] {
                std::vector<CheckReport> out;
                Case flat = c;
                flat.conn_spec = "flat_connection";
                const CanonicalResiduals rf = canonical_residuals(case_metric(flat), case_conn(flat));
                out.push_back(flat.report(suite, "kinematic_r2", rf.r2, 1e-6));
                const double bitwise =
                    (rf.r1 == rf.r1_cov && rf.r2 == rf.r2_cov) ? 0.0 : std::fabs(rf.r1 - rf.r1_cov) +
                                                                           std::fabs(rf.r2 - rf.r2_cov) + 1.0;
                out.push_back(flat.report(suite, "flat_background_bitwise", bitwise, 0.0));

                const CanonicalResiduals rb = canonical_residuals(case_metric(c), case_conn(c));
                out.push_back(c.report(suite, "kinematic_r2_background", rb.r2, 1e-6));
                out.push_back(c.report(suite, "covariant_agreement",
                                       std::fabs(rb.r2 - rb.r2_cov) + std::fabs(rb.r1 - rb.r1_cov) /
                                                                          std::max(1.0, rb.r1),
                                       1e-7));
                return out;
            });
        }
    }
}

// -------------------------------------------------------------- naturality

void build_naturality(const SuiteBuilder& b) {
    for (int n : b.cfg.dims)
        for (int idx = 0; idx < b.cfg.seeds; ++idx) {
            const Case c = b.case_for(n, idx, false, false, /*with_diffeo=*/true);
            b.add(b.label(c), [c, b, suite = b.suite] {
                const MetricJet g = case_metric(c);
                const ConnectionJet nab = case_conn(c);
                const DiffeoJet curved = case_diffeo(c);
                std::vector<CheckReport> out;
                out.push_back(
                    c.report(suite, "correction_scalar_nonlinear", naturality_residual(curved, g, nab), 1e-8));

                Case lin = c;
                lin.diffeo_spec = inject_seed(b.cfg.diffeo_spec == "random_diffeo"
                                                  ? std::string("random_diffeo(quad=0)")
                                                  : b.cfg.diffeo_spec,
                                              c.n, c.order, mix_seed(c.seed, 4), 0);
                out.push_back(lin.report(suite, "correction_scalar_linear",
                                         naturality_residual(case_diffeo(lin), g, nab), 1e-9));

                // density transformation through the curved map
                DenseMat j0(c.n, c.n);
                for (int a = 0; a < c.n; ++a)
                    for (int bb = 0; bb < c.n; ++bb) j0(a, bb) = curved.jacobian(a, bb).value();
                const double detj = std::fabs(lu_det(lu_factor(j0)));
                const double lhs = volume_density(pullback_metric(curved, g)).value();
                const double rhs = detj * volume_density(g).value();
                out.push_back(c.report(suite, "density_jacobian",
                                       std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)), 1e-10));
                return out;
            });
        }
}

// ---------------------------------------------------------------- palatini

void build_palatini(const SuiteBuilder& b) {
    for (int n : b.cfg.dims)
        for (int idx = 0; idx < b.cfg.seeds; ++idx) {
            const Case c = b.case_for(n, idx);
            b.add(b.label(c), [c, suite = b.suite] {
                const PalatiniVariation v = palatini_variation(case_metric(c), case_conn(c));
                return std::vector<CheckReport>{c.report(suite, "divergence_form", v.div_residual, 1e-9)};
            });
        }
}

// --------------------------------------------------------- geometry_oracles

void build_geometry_oracles(const SuiteBuilder& b) {
    for (int n : b.cfg.dims) {
        {
            Case c = b.case_for(n, 0);
            c.seed = 0;
            c.conn_spec.clear();
            b.add(b.label(c), [c, suite = b.suite] {
                std::vector<CheckReport> out;
                if (c.n == 4) {
                    Case s = c;
                    s.metric_spec =
                        "schwarzschild(m=1,r0=3,theta0=" + format_double(3.14159265358979323846 / 3.0) + ")";
                    out.push_back(s.report(suite, "vacuum_schwarzschild",
                                           max_abs_coeff(scalar_curvature(case_metric(s))), 1e-9));
                }
                Case d = c;
                d.metric_spec = "de_sitter(hubble=0.5,t0=1)";
                const double sval = scalar_curvature(case_metric(d)).value();
                const double expected = c.n * (c.n - 1) * 0.25;
                out.push_back(d.report(suite, "de_sitter_curvature",
                                       std::fabs(sval - expected) / expected, 1e-8));
                Case f = c;
                f.metric_spec = "polar_flat";
                out.push_back(f.report(suite, "flat_curvature",
                                       max_abs_coeff(scalar_curvature(case_metric(f))), 1e-12));
                return out;
            });
        }
        for (int idx = 0; idx < b.cfg.seeds; ++idx) {
            const Case c = b.case_for(n, idx);
            b.add(b.label(c), [c, suite = b.suite] {
                const MetricJet g = case_metric(c);
                const ConnectionJet nab = case_conn(c);
                const int n_ = c.n;
                std::vector<CheckReport> out;

                // D_i rho = (rho/2) y^{rs} d_i g_rs
                {
                    const JetPoly rho = volume_density(g);
                    const SymJetMatrix inv = inverse_metric(g).truncated(rho.order() - 1);
                    const JetPoly rho1 = rho.truncated(rho.order() - 1);
                    double worst = 0.0;
                    for (int i = 0; i < n_; ++i) {
                        JetPoly rhs(n_, rho1.order());
                        for (int r = 0; r < n_; ++r)
                            for (int s = 0; s < n_; ++s) {
                                JetPoly t(n_, rho1.order());
                                t.add_product(inv.at(r, s), partial(g.at(r, s), i).truncated(rho1.order()));
                                rhs.add_product(t, rho1);
                            }
                        rhs *= 0.5;
                        rhs -= partial(rho, i);
                        worst = std::max(worst, max_abs_coeff(rhs));
                    }
                    out.push_back(c.report(suite, "density_derivative_identity",
                                           worst / std::max(1.0, max_abs_coeff(rho)), 1e-11));
                }
                // metric compatibility of the Levi-Civita coefficients
                {
                    const ConnectionJet lc = christoffel(g);
                    const int m = lc.order();
                    double worst = 0.0;
                    for (int k = 0; k < n_; ++k)
                        for (int i = 0; i < n_; ++i)
                            for (int j = i; j < n_; ++j) {
                                JetPoly cov = partial(g.at(i, j), k);
                                for (int a = 0; a < n_; ++a) {
                                    cov.sub_product(lc.at(a, k, i), g.at(a, j).truncated(m));
                                    cov.sub_product(lc.at(a, k, j), g.at(a, i).truncated(m));
                                }
                                worst = std::max(worst, max_abs_coeff(cov));
                            }
                    out.push_back(c.report(suite, "metricity", worst, 1e-12));
                }
                out.push_back(c.report(suite, "pair_scalar_consistency",
                                       rel_gap(pair_scalar_curvature(g, christoffel(g)).value(),
                                               scalar_curvature(g).value()),
                                       1e-11));
                out.push_back(c.report(suite, "eh_route_agreement",
                                       rel_gap(l_eh_christoffel(g).value.value(),
                                               l_eh_jet_coordinates(g).value.value()),
                                       1e-10));
                {
                    const double a = l_prime(g, nab, LPrimeRoute::geometric).value.value();
                    const double l = l_prime(g, nab, LPrimeRoute::local).value.value();
                    const double r = l_prime(g, nab, LPrimeRoute::rewritten).value.value();
                    const double worst = std::max({rel_gap(a, l), rel_gap(l, r), rel_gap(a, r)});
                    out.push_back(c.report(suite, "correction_route_agreement", worst, 1e-10));
                }
                out.push_back(c.report(suite, "equivalent_route_agreement",
                                       rel_gap(l_nabla(g, nab, LNablaRoute::first_order_local).value.value(),
                                               l_nabla(g, nab, LNablaRoute::geometric).value.value()),
                                       1e-10));
                return out;
            });
        }
    }
}

using Builder = void (*)(const SuiteBuilder&);

const std::vector<std::pair<std::string, Builder>>& builders() {
    static const std::vector<std::pair<std::string, Builder>> table = {
        {"lemma1", build_lemma1},
        {"lemma2", build_lemma2},
        {"el_equivalence", build_el_equivalence},
        {"regularity", build_regularity},
        {"legendre", build_legendre},
        {"covariant_hamiltonian", build_covariant_hamiltonian},
        {"canonical", build_canonical},
        {"naturality", build_naturality},
        {"palatini", build_palatini},
        {"geometry_oracles", build_geometry_oracles},
    };
    return table;
}

std::vector<Task> build_tasks(const VerifyConfig& cfg) {
    std::vector<std::string> wanted = cfg.suites;
    if (wanted.empty())
        for (const auto& [name, fn] : builders()) wanted.push_back(name);
    for (const auto& w : wanted) {
        bool known = false;
        for (const auto& [name, fn] : builders()) known = known || name == w;
        if (!known) throw UsageError("unknown suite: " + w);
    }
    for (int n : cfg.dims)
        if (n < 3 || n > 4) throw UsageError("verification dims must be 3 or 4");
    // the variational operator reads two derivative levels past the
    // Lagrangian, and referenced Levi-Civita connections need one more
    if (cfg.order < 4 || cfg.order > 5) throw UsageError("verification suites support order 4 or 5");

    std::vector<Task> tasks;
    int suite_id = 0;
    for (const auto& [name, fn] : builders()) {
        if (std::find(wanted.begin(), wanted.end(), name) != wanted.end())
            fn(SuiteBuilder{cfg, suite_id, name, tasks});
        ++suite_id;
    }
    return tasks;
}

SuiteRun run_tasks(const VerifyConfig& cfg, bool parallel) {
    std::vector<Task> tasks = build_tasks(cfg);
    std::vector<std::vector<CheckReport>> slots(tasks.size());
    std::vector<std::string> faults(tasks.size());

    const auto run_one = [&](size_t i) {
        const auto start = std::chrono::steady_clock::now();
        try {
            slots[i] = tasks[i].fn();
        } catch (const std::exception& e) {
            faults[i] = tasks[i].label + ": " + e.what();
            return;
        }
        const auto stop = std::chrono::steady_clock::now();
        if (cfg.timing) {
            const double ms = std::chrono::duration<double, std::milli>(stop - start).count();
            for (auto& r : slots[i]) r.runtime_ms = ms / static_cast<double>(slots[i].size());
        }
    };

    if (parallel) {
#ifdef _OPENMP
        const int nthreads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
        for (size_t i = 0; i < tasks.size(); ++i) run_one(i);
#else
        for (size_t i = 0; i < tasks.size(); ++i) run_one(i);
#endif
    } else {
        for (size_t i = 0; i < tasks.size(); ++i) run_one(i);
    }

    SuiteRun out;
    for (auto& s : slots)
        for (auto& r : s) out.reports.push_back(std::move(r));
    for (auto& f : faults)
        if (!f.empty()) out.faults.push_back(std::move(f));
    sort_reports(out.reports);
    return out;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, fn] : builders()) v.push_back(name);
        return v;
    }();
    return names;
}

SuiteRun run_suites(const VerifyConfig& cfg) { return run_tasks(cfg, true); }

SuiteRun run_suites_serial(const VerifyConfig& cfg) { return run_tasks(cfg, false); }

} // namespace lnabla
