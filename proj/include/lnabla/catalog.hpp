#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lnabla/geometry.hpp"

namespace lnabla {

enum class CatalogKind {
    minkowski,
    euclidean,
    schwarzschild,
    de_sitter,
    polar_flat,
    random_metric,
    flat_connection,
    levi_civita_of,
    random_connection,
    random_diffeo,
};

std::string_view kind_name(CatalogKind k);

/// Reproducible generator description for metric jets, connection jets
/// and diffeomorphism jets. Parsed from strings of the form
/// "kind(param=value, ...)"; `levi_civita_of` takes a nested metric spec
/// instead of parameters.
struct CatalogSpec {
    CatalogKind kind = CatalogKind::euclidean;
    int dim = 4;
    int order = 4;
    std::map<std::string, double> params;
    std::shared_ptr<const CatalogSpec> ref; // metric spec for levi_civita_of

    /// Parses `text`, filling unspecified parameters with the kind's
    /// defaults. Unknown kinds or parameters raise UsageError.
    static CatalogSpec parse(std::string_view text, int dim, int order);

    /// Canonical string form (sorted parameters, shortest float
    /// round-trip); stable across runs for report output.
    std::string to_string() const;

    double param(const std::string& name) const;
    Signature signature() const;
    std::vector<double> base_point() const;
};

MetricJet make_metric(const CatalogSpec& spec);
ConnectionJet make_connection(const CatalogSpec& spec);

/// Polynomial diffeomorphism germ: components have zero constant term;
/// the base-point shift is kept separately.
struct DiffeoPoly {
    std::vector<JetPoly> components;
    std::vector<double> shift;
};

DiffeoPoly make_diffeo(const CatalogSpec& spec);

/// Point evaluation of the metric's component functions at displacement
/// x from the base point (independent of the jet path for closed-form
/// kinds; polynomial evaluation for random metrics). Used by
/// finite-difference oracles. Packed upper triangle, row-major.
std::vector<double> eval_metric(const CatalogSpec& spec, std::span<const double> x);

/// One line per generator kind: name, parameters, defaults.
std::vector<std::string> catalog_listing();

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

} // namespace lnabla
