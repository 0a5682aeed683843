#include "lnabla/catalog.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "lnabla/dense.hpp"
#include "lnabla/dual.hpp"
#include "lnabla/rng.hpp"

namespace lnabla {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ParamDef {
    const char* name;
    double value;
};

struct KindInfo {
    CatalogKind kind;
    const char* name;
    std::vector<ParamDef> defaults;
    const char* note;
};

const std::vector<KindInfo>& kind_table() {
    static const std::vector<KindInfo> table = {
        {CatalogKind::minkowski, "minkowski", {}, "flat, signature (n-1,1), time last"},
        {CatalogKind::euclidean, "euclidean", {}, "flat, signature (n,0)"},
        {CatalogKind::schwarzschild,
         "schwarzschild",
         {{"m", 1.0}, {"r0", 3.0}, {"theta0", kPi / 3.0}},
         "vacuum black hole chart (r,theta,phi,t); n = 4, r0 > 2m"},
        {CatalogKind::de_sitter,
         "de_sitter",
         {{"hubble", 0.5}, {"t0", 1.0}},
         "conformally flat slicing, scalar curvature n(n-1)H^2"},
        {CatalogKind::polar_flat, "polar_flat", {}, "flat metric diag(1,(1+x1)^2,1,...)"},
        {CatalogKind::random_metric,
         "random_metric",
         {{"seed", 1.0}, {"amplitude", 0.2}, {"decay", 0.5}, {"minus", 0.0}, {"adapted", 0.0}},
         "signature template plus seeded polynomial perturbation; adapted=1 pins the base-point "
         "values to the signature template"},
        {CatalogKind::flat_connection, "flat_connection", {}, "all coefficients zero"},
        {CatalogKind::levi_civita_of, "levi_civita_of", {}, "christoffel symbols of a nested metric spec"},
        {CatalogKind::random_connection,
         "random_connection",
         {{"seed", 1.0}, {"amplitude", 0.3}, {"decay", 0.5}, {"base_zero", 0.0}},
         "seeded symmetric coefficients; base_zero=1 clears values at the base point"},
        {CatalogKind::random_diffeo,
         "random_diffeo",
         {{"seed", 1.0}, {"scale", 1.0}, {"linear", 0.2}, {"quad", 0.1}},
         "degree-2 polynomial map with invertible linear part"},
    };
    return table;
}

const KindInfo& info_of(CatalogKind k) {
    for (const auto& i : kind_table())
        if (i.kind == k) return i;
    throw UsageError("unknown catalog kind");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

int pack_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
}

// Closed-form component functions evaluated with generic scalar
// arithmetic; the same code produces Taylor jets (S = JetPoly) and plain
// point values for finite-difference oracles (S = double).
template <class S>
std::vector<S> closed_form_components(const CatalogSpec& spec, std::span<const S> x, const S& zero) {
    const int n = spec.dim;
    std::vector<S> g(static_cast<size_t>(n * (n + 1) / 2), zero);
    auto at = [&](int i, int j) -> S& { return g[static_cast<size_t>(pack_index(n, i, j))]; };
    switch (spec.kind) {
    case CatalogKind::minkowski:
    case CatalogKind::euclidean: {
        const Signature sig = spec.signature();
        for (int i = 0; i < n; ++i) at(i, i) = zero + sig.sign(i);
        break;
    }
    case CatalogKind::polar_flat: {
        for (int i = 0; i < n; ++i) at(i, i) = zero + 1.0;
        const S f = x[0] + 1.0;
        at(1, 1) = f * f;
        break;
    }
    case CatalogKind::schwarzschild: {
        const double m = spec.param("m");
        const S r = x[0];
        const S sin_theta = sin_s(x[1]);
        const S lapse = 1.0 - 2.0 * m * recip_s(r);
        at(0, 0) = recip_s(lapse);
        at(1, 1) = r * r;
        at(2, 2) = r * r * sin_theta * sin_theta;
        at(3, 3) = -lapse;
        break;
    }
    case CatalogKind::de_sitter: {
        const double h = spec.param("hubble");
        const S t = x[static_cast<size_t>(n - 1)];
        const S conf = recip_s(h * h * t * t);
        for (int i = 0; i < n - 1; ++i) at(i, i) = conf;
        at(n - 1, n - 1) = -conf;
        break;
    }
    default:
        throw StructureError("not a closed-form metric kind");
    }
    return g;
}

// One stream per component, coefficients drawn in graded rank order:
// the same seed at a higher truncation order extends the same function,
// so "the same metric, one order higher" is well defined.
JetPoly random_poly(std::uint64_t component_seed, int dim, int order, double amplitude, double decay) {
    SplitMix64 rng(component_seed);
    JetPoly j(dim, order);
    const auto& ly = j.layout();
    for (int r = 0; r < j.size(); ++r) {
        int deg = 0;
        for (int i = 0; i < dim; ++i) deg += ly.mono[static_cast<size_t>(r)][static_cast<size_t>(i)];
        double a = amplitude;
        for (int k = 0; k < deg; ++k) a *= decay;
        j[r] = rng.uniform(-a, a);
    }
    return j;
}

} // namespace

std::string_view kind_name(CatalogKind k) { return info_of(k).name; }

double CatalogSpec::param(const std::string& name) const {
    const auto it = params.find(name);
    if (it == params.end()) throw StructureError("missing catalog parameter: " + name);
    return it->second;
}

Signature CatalogSpec::signature() const {
    switch (kind) {
    case CatalogKind::minkowski:
    case CatalogKind::schwarzschild:
    case CatalogKind::de_sitter:
        return Signature{dim - 1, 1};
    case CatalogKind::random_metric: {
        const int minus = static_cast<int>(param("minus"));
        return Signature{dim - minus, minus};
    }
    default:
        return Signature{dim, 0};
    }
}

std::vector<double> CatalogSpec::base_point() const {
    std::vector<double> p(static_cast<size_t>(dim), 0.0);
    if (kind == CatalogKind::schwarzschild) {
        p[0] = param("r0");
        p[1] = param("theta0");
    } else if (kind == CatalogKind::de_sitter) {
        p[static_cast<size_t>(dim - 1)] = param("t0");
    }
    return p;
}

CatalogSpec CatalogSpec::parse(std::string_view text, int dim, int order) {
    text = trim(text);
    std::string_view name = text;
    std::string_view args;
    const auto paren = text.find('(');
    if (paren != std::string_view::npos) {
        if (text.back() != ')') throw UsageError("unbalanced parentheses in catalog spec");
        name = trim(text.substr(0, paren));
        args = text.substr(paren + 1, text.size() - paren - 2);
    }
    const KindInfo* info = nullptr;
    for (const auto& k : kind_table())
        if (name == k.name) info = &k;
    if (!info) throw UsageError("unknown catalog kind: " + std::string(name));

    CatalogSpec spec;
    spec.kind = info->kind;
    spec.dim = dim;
    spec.order = order;
    for (const auto& d : info->defaults) spec.params[d.name] = d.value;

    if (spec.kind == CatalogKind::levi_civita_of) {
        const std::string_view inner = trim(args);
        if (inner.empty()) throw UsageError("levi_civita_of needs a nested metric spec");
        spec.ref = std::make_shared<CatalogSpec>(parse(inner, dim, order));
        return spec;
    }

    std::string_view rest = args;
    while (!trim(rest).empty()) {
        const auto comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        item = trim(item);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw UsageError("catalog parameter must be name=value: " + std::string(item));
        const std::string key(trim(item.substr(0, eq)));
        const std::string_view val = trim(item.substr(eq + 1));
        if (spec.params.find(key) == spec.params.end())
            throw UsageError("unknown parameter '" + key + "' for " + std::string(name));
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
        if (ec != std::errc{} || ptr != val.data() + val.size())
            throw UsageError("bad numeric value for parameter '" + key + "'");
        spec.params[key] = v;
    }
    if (spec.kind == CatalogKind::schwarzschild && dim != 4)
        throw UsageError("schwarzschild requires n = 4");
    return spec;
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string CatalogSpec::to_string() const {
    std::string out{kind_name(kind)};
    if (kind == CatalogKind::levi_civita_of) {
        out += '(';
        out += ref ? ref->to_string() : std::string("?");
        out += ')';
        return out;
    }
    if (params.empty()) return out;
    out += '(';
    bool first = true;
    for (const auto& [k, v] : params) { // std::map iterates in sorted key order
        if (!first) out += ',';
        first = false;
        out += k;
        out += '=';
        out += format_double(v);
    }
    out += ')';
    return out;
}

MetricJet make_metric(const CatalogSpec& spec) {
    const int n = spec.dim;
    const Signature sig = spec.signature();

    if (spec.kind == CatalogKind::random_metric) {
        const auto seed = static_cast<std::uint64_t>(spec.param("seed"));
        const double amplitude = spec.param("amplitude");
        const double decay = spec.param("decay");
        const bool adapted = spec.param("adapted") != 0.0;
        SymJetMatrix g(n, spec.order);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                g.at(i, j) = random_poly(mix_seed(seed, static_cast<std::uint64_t>(pack_index(n, i, j))), n,
                                         spec.order, amplitude, decay);
                if (adapted) g.at(i, j) -= g.at(i, j).value();
                if (i == j) g.at(i, i) += sig.sign(i);
            }
        return MetricJet(std::move(g), sig); // ctor re-checks the signature survived
    }

    if (spec.kind == CatalogKind::schwarzschild) {
        const double m = spec.param("m");
        if (!(spec.param("r0") > 2.0 * m))
            throw PreconditionError("schwarzschild base point must satisfy r0 > 2m");
        if (std::sin(spec.param("theta0")) == 0.0)
            throw PreconditionError("schwarzschild base point must avoid the axis");
    }
    if (spec.kind == CatalogKind::de_sitter) {
        if (spec.param("t0") == 0.0) throw PreconditionError("de_sitter base point must have t0 != 0");
        if (spec.param("hubble") == 0.0) throw PreconditionError("de_sitter needs hubble != 0");
    }

    const std::vector<double> base = spec.base_point();
    std::vector<JetPoly> x;
    for (int i = 0; i < n; ++i)
        x.push_back(JetPoly::variable(n, spec.order, i, base[static_cast<size_t>(i)]));
    const JetPoly zero(n, spec.order);
    std::vector<JetPoly> comps = closed_form_components<JetPoly>(spec, x, zero);
    SymJetMatrix g(n, spec.order);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) g.at(i, j) = comps[static_cast<size_t>(pack_index(n, i, j))];
    return MetricJet(std::move(g), sig);
}

std::vector<double> eval_metric(const CatalogSpec& spec, std::span<const double> x) {
    const int n = spec.dim;
    if (static_cast<int>(x.size()) != n) throw StructureError("eval_metric point dimension mismatch");
    if (spec.kind == CatalogKind::random_metric) {
        const MetricJet g = make_metric(spec);
        std::vector<double> out(static_cast<size_t>(n * (n + 1) / 2));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                out[static_cast<size_t>(pack_index(n, i, j))] = evaluate(g.at(i, j), x);
        return out;
    }
    const std::vector<double> base = spec.base_point();
    std::vector<double> pt(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pt[static_cast<size_t>(i)] = base[static_cast<size_t>(i)] + x[static_cast<size_t>(i)];
    return closed_form_components<double>(spec, pt, 0.0);
}

ConnectionJet make_connection(const CatalogSpec& spec) {
    const int n = spec.dim;
    switch (spec.kind) {
    case CatalogKind::flat_connection:
        return ConnectionJet(n, spec.order);
    case CatalogKind::levi_civita_of: {
        if (!spec.ref) throw StructureError("levi_civita_of without a referenced metric");
        CatalogSpec m = *spec.ref;
        m.order = spec.order + 1; // christoffel consumes one order
        return christoffel(make_metric(m));
    }
    case CatalogKind::random_connection: {
        const auto seed = static_cast<std::uint64_t>(spec.param("seed"));
        const double amplitude = spec.param("amplitude");
        const double decay = spec.param("decay");
        ConnectionJet c(n, spec.order);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = j; k < n; ++k)
                    c.at(i, j, k) = random_poly(
                        mix_seed(seed, static_cast<std::uint64_t>(i * n * n + pack_index(n, j, k))), n,
                        spec.order, amplitude, decay);
        if (spec.param("base_zero") != 0.0)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = j; k < n; ++k) c.at(i, j, k) -= c.value(i, j, k);
        return c;
    }
    default:
        throw UsageError("not a connection kind: " + std::string(kind_name(spec.kind)));
    }
}

DiffeoPoly make_diffeo(const CatalogSpec& spec) {
    if (spec.kind != CatalogKind::random_diffeo)
        throw UsageError("not a diffeomorphism kind: " + std::string(kind_name(spec.kind)));
    const int n = spec.dim;
    const double scale = spec.param("scale");
    const double lin = spec.param("linear");
    const double quad = spec.param("quad");
    SplitMix64 rng(static_cast<std::uint64_t>(spec.param("seed")));

    for (int attempt = 0; attempt < 100; ++attempt) {
        DenseMat l(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) l(a, b) = (a == b ? scale : 0.0) + rng.uniform(-lin, lin);
        if (std::fabs(lu_det(lu_factor(l))) < 0.1) continue;

        DiffeoPoly d;
        d.shift.assign(static_cast<size_t>(n), 0.0);
        for (int a = 0; a < n; ++a) {
            JetPoly comp(n, spec.order);
            for (int b = 0; b < n; ++b) {
                int alpha[kMaxDim] = {0, 0, 0, 0};
                alpha[b] = 1;
                comp.set_coeff(std::span<const int>(alpha, static_cast<size_t>(n)), l(a, b));
            }
            if (spec.order >= 2)
                for (int b = 0; b < n; ++b)
                    for (int c = b; c < n; ++c) {
                        int alpha[kMaxDim] = {0, 0, 0, 0};
                        alpha[b] += 1;
                        alpha[c] += 1;
                        comp.set_coeff(std::span<const int>(alpha, static_cast<size_t>(n)),
                                       rng.uniform(-quad, quad));
                    }
            d.components.push_back(std::move(comp));
        }
        return d;
    }
    throw PreconditionError("random_diffeo could not draw an invertible linear part");
}

std::vector<std::string> catalog_listing() {
    std::vector<std::string> out;
    for (const auto& k : kind_table()) {
        std::string line{k.name};
        if (!k.defaults.empty() || k.kind == CatalogKind::levi_civita_of) {
            line += '(';
            if (k.kind == CatalogKind::levi_civita_of) {
                line += "<metric spec>";
            } else {
                bool first = true;
                for (const auto& d : k.defaults) {
                    if (!first) line += ", ";
                    first = false;
                    line += d.name;
                    line += '=';
                    line += format_double(d.value);
                }
            }
            line += ')';
        }
        line += "  -- ";
        line += k.note;
        out.push_back(std::move(line));
    }
    return out;
}

} // namespace lnabla
