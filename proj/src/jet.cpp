#include "lnabla/jet.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

namespace lnabla {
namespace detail {
namespace {

void enumerate_degree(int dim, int degree, std::array<std::uint8_t, kMaxDim>& cur, int pos,
                      std::vector<std::array<std::uint8_t, kMaxDim>>& out) {
    if (pos == dim - 1) {
        cur[pos] = static_cast<std::uint8_t>(degree);
        out.push_back(cur);
        return;
    }
    for (int e = degree; e >= 0; --e) {
        cur[pos] = static_cast<std::uint8_t>(e);
        enumerate_degree(dim, degree - e, cur, pos + 1, out);
    }
}

Layout build_layout(int dim, int order) {
    Layout ly;
    ly.dim = dim;
    ly.order = order;
    std::array<std::uint8_t, kMaxDim> cur{};
    for (int d = 0; d <= order; ++d) {
        ly.degree_offset.push_back(static_cast<int>(ly.mono.size()));
        enumerate_degree(dim, d, cur, 0, ly.mono);
    }
    ly.degree_offset.push_back(static_cast<int>(ly.mono.size()));

    ly.rank_table.assign(std::size_t{1} << (3 * dim), -1);
    for (std::size_t r = 0; r < ly.mono.size(); ++r) {
        int p = 0;
        for (int i = 0; i < dim; ++i) p |= ly.mono[r][i] << (3 * i);
        ly.rank_table[static_cast<std::size_t>(p)] = static_cast<std::int16_t>(r);
    }

    auto degree_of = [&](std::size_t r) {
        int d = 0;
        for (int i = 0; i < dim; ++i) d += ly.mono[r][i];
        return d;
    };
    for (std::size_t a = 0; a < ly.mono.size(); ++a) {
        const int da = degree_of(a);
        for (std::size_t b = a; b < ly.mono.size(); ++b) {
            if (da + degree_of(b) > order) continue;
            int p = 0;
            for (int i = 0; i < dim; ++i) p |= (ly.mono[a][i] + ly.mono[b][i]) << (3 * i);
            const auto entry = Layout::Prod{static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                                            static_cast<std::uint16_t>(ly.rank_table[static_cast<std::size_t>(p)])};
            (a == b ? ly.prod_diag : ly.prod_off).push_back(entry);
        }
    }
    return ly;
}

} // namespace

const Layout& layout(int dim, int order) {
    if (dim < 1 || dim > kMaxDim) throw DimensionError("jet dimension must be in [1, 4]");
    if (order < 0 || order > kMaxOrder) throw OrderError("jet order must be in [0, 6]");
    static const auto table = [] {
        auto t = std::make_unique<std::array<Layout, kMaxDim * (kMaxOrder + 1)>>();
        for (int d = 1; d <= kMaxDim; ++d)
            for (int o = 0; o <= kMaxOrder; ++o) (*t)[(d - 1) * (kMaxOrder + 1) + o] = build_layout(d, o);
        return t;
    }();
    return (*table)[(dim - 1) * (kMaxOrder + 1) + order];
}

} // namespace detail

JetPoly JetPoly::variable(int dim, int order, int axis, double base) {
    if (axis < 0 || axis >= dim) throw StructureError("variable axis out of range");
    JetPoly j(dim, order);
    j.c_[0] = base;
    if (order >= 1) {
        int alpha[kMaxDim] = {0, 0, 0, 0};
        alpha[axis] = 1;
        j.c_[j.ly_->rank(std::span<const int>(alpha, static_cast<size_t>(dim)))] = 1.0;
    }
    return j;
}

void JetPoly::require_same_space(const JetPoly& o) const {
    if (!ly_ || !o.ly_) throw StructureError("operation on an empty jet");
    if (ly_->dim != o.ly_->dim) throw StructureError("jet dimension mismatch");
    if (ly_->order != o.ly_->order) throw StructureError("jet order mismatch");
}

double JetPoly::coeff(std::span<const int> alpha) const {
    if (static_cast<int>(alpha.size()) != dim()) throw StructureError("multi-index length mismatch");
    for (int i = 0; i < dim(); ++i)
        if (alpha[i] < 0) throw StructureError("negative exponent");
    const int r = ly_->rank(alpha);
    return r < 0 ? 0.0 : c_[r];
}

void JetPoly::set_coeff(std::span<const int> alpha, double v) {
    if (static_cast<int>(alpha.size()) != dim()) throw StructureError("multi-index length mismatch");
    const int r = ly_->rank(alpha);
    if (r < 0) throw OrderError("multi-index beyond truncation order");
    if (!std::isfinite(v)) throw StructureError("non-finite coefficient");
    c_[r] = v;
}

namespace {
double factorial_of(std::span<const int> alpha) {
    double f = 1.0;
    for (int e : alpha)
        for (int k = 2; k <= e; ++k) f *= k;
    return f;
}
} // namespace

double JetPoly::derivative(std::span<const int> alpha) const {
    return coeff(alpha) * factorial_of(alpha);
}

void JetPoly::set_derivative(std::span<const int> alpha, double v) {
    set_coeff(alpha, v / factorial_of(alpha));
}

JetPoly JetPoly::truncated(int new_order) const {
    if (!ly_) throw StructureError("truncating an empty jet");
    if (new_order > order()) throw OrderError("cannot raise a jet's truncation order");
    if (new_order == order()) return *this;
    JetPoly r(dim(), new_order);
    // graded storage: lower degrees are a prefix
    std::memcpy(r.c_.data(), c_.data(), sizeof(double) * static_cast<size_t>(r.size()));
    return r;
}

JetPoly& JetPoly::operator+=(const JetPoly& o) {
    require_same_space(o);
    for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
    return *this;
}

JetPoly& JetPoly::operator-=(const JetPoly& o) {
    require_same_space(o);
    for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

JetPoly& JetPoly::operator*=(double s) {
    for (int i = 0; i < size(); ++i) c_[i] *= s;
    return *this;
}

void JetPoly::add_scaled(const JetPoly& a, double s) {
    require_same_space(a);
    for (int i = 0; i < size(); ++i) c_[i] += s * a.c_[i];
}

void JetPoly::add_product(const JetPoly& a, const JetPoly& b) {
    require_same_space(a);
    require_same_space(b);
    const double* pa = a.c_.data();
    const double* pb = b.c_.data();
    double* pc = c_.data();
    for (const auto& e : ly_->prod_off) pc[e.c] += pa[e.a] * pb[e.b] + pa[e.b] * pb[e.a];
    for (const auto& e : ly_->prod_diag) pc[e.c] += pa[e.a] * pb[e.a];
}

void JetPoly::sub_product(const JetPoly& a, const JetPoly& b) {
    require_same_space(a);
    require_same_space(b);
    const double* pa = a.c_.data();
    const double* pb = b.c_.data();
    double* pc = c_.data();
    for (const auto& e : ly_->prod_off) pc[e.c] -= pa[e.a] * pb[e.b] + pa[e.b] * pb[e.a];
    for (const auto& e : ly_->prod_diag) pc[e.c] -= pa[e.a] * pb[e.a];
}

JetPoly operator*(const JetPoly& a, const JetPoly& b) {
    JetPoly r(a.dim(), a.order());
    r.add_product(a, b);
    return r;
}

JetPoly operator-(double s, const JetPoly& a) {
    JetPoly r = -a;
    r += s;
    return r;
}

JetPoly operator-(const JetPoly& a) {
    JetPoly r = a;
    r *= -1.0;
    return r;
}

bool JetPoly::operator==(const JetPoly& o) const {
    if (!ly_ || !o.ly_) return ly_ == o.ly_;
    if (ly_ != o.ly_) return false;
    for (int i = 0; i < size(); ++i)
        if (c_[i] != o.c_[i]) return false;
    return true;
}

JetPoly reciprocal(const JetPoly& a) {
    if (!a.valid()) throw StructureError("reciprocal of an empty jet");
    if (a.value() == 0.0) throw SingularityError("reciprocal of a jet with zero constant term");
    JetPoly r = JetPoly::constant(a.dim(), a.order(), 1.0 / a.value());
    // Newton iteration r <- r (2 - a r); the correct order doubles per step.
    int steps = 0;
    for (int reach = 1; reach <= a.order(); reach *= 2) ++steps;
    for (int k = 0; k < steps; ++k) {
        JetPoly ar(a.dim(), a.order());
        ar.add_product(a, r);
        JetPoly t = 2.0 - ar;
        JetPoly next(a.dim(), a.order());
        next.add_product(r, t);
        r = next;
    }
    return r;
}

JetPoly sqrt_jet(const JetPoly& a) {
    if (!a.valid()) throw StructureError("square root of an empty jet");
    if (!(a.value() > 0.0)) throw SingularityError("square root of a jet with nonpositive constant term");
    JetPoly s = JetPoly::constant(a.dim(), a.order(), std::sqrt(a.value()));
    int steps = 1;
    for (int reach = 1; reach <= a.order(); reach *= 2) ++steps;
    for (int k = 0; k < steps; ++k) {
        JetPoly t(a.dim(), a.order());
        t.add_product(a, reciprocal(s));
        t += s;
        t *= 0.5;
        s = t;
    }
    return s;
}

namespace {

// sin/cos of a zero-constant-term jet by truncated series.
void sin_cos_nilpotent(const JetPoly& u, JetPoly& s, JetPoly& c) {
    const int dim = u.dim();
    const int order = u.order();
    s = JetPoly(dim, order);
    c = JetPoly::constant(dim, order, 1.0);
    JetPoly power = JetPoly::constant(dim, order, 1.0);
    double fact = 1.0;
    for (int k = 1; k <= order; ++k) {
        JetPoly next(dim, order);
        next.add_product(power, u);
        power = next;
        fact *= k;
        const double coeff = 1.0 / fact;
        switch (k % 4) {
        case 1: s.add_scaled(power, coeff); break;
        case 2: c.add_scaled(power, -coeff); break;
        case 3: s.add_scaled(power, -coeff); break;
        case 0: c.add_scaled(power, coeff); break;
        }
    }
}

} // namespace

JetPoly sin_jet(const JetPoly& a) {
    JetPoly u = a;
    u -= a.value();
    JetPoly s, c;
    sin_cos_nilpotent(u, s, c);
    JetPoly r(a.dim(), a.order());
    r.add_scaled(s, std::cos(a.value()));
    r.add_scaled(c, std::sin(a.value()));
    return r;
}

JetPoly cos_jet(const JetPoly& a) {
    JetPoly u = a;
    u -= a.value();
    JetPoly s, c;
    sin_cos_nilpotent(u, s, c);
    JetPoly r(a.dim(), a.order());
    r.add_scaled(c, std::cos(a.value()));
    r.add_scaled(s, -std::sin(a.value()));
    return r;
}

JetPoly partial(const JetPoly& a, int axis) {
    if (!a.valid()) throw StructureError("partial of an empty jet");
    if (axis < 0 || axis >= a.dim()) throw StructureError("partial axis out of range");
    if (a.order() == 0) throw OrderError("partial would consume more order than the jet carries");
    JetPoly r(a.dim(), a.order() - 1);
    const auto& in = a.layout();
    const auto& out = r.layout();
    int alpha[kMaxDim];
    for (int t = 0; t < out.size(); ++t) {
        for (int i = 0; i < a.dim(); ++i) alpha[i] = out.mono[static_cast<size_t>(t)][static_cast<size_t>(i)];
        alpha[axis] += 1;
        const int src = in.rank(std::span<const int>(alpha, static_cast<size_t>(a.dim())));
        r[t] = a[src] * alpha[axis];
    }
    return r;
}

JetPoly compose(const JetPoly& a, std::span<const JetPoly> subs) {
    if (!a.valid()) throw StructureError("compose of an empty jet");
    if (static_cast<int>(subs.size()) != a.dim())
        throw StructureError("compose needs one substitution per variable");
    for (const auto& s : subs) {
        if (!s.valid()) throw StructureError("empty substitution jet");
        if (s.dim() != subs[0].dim() || s.order() != subs[0].order())
            throw StructureError("substitution jets must share a space");
        if (s.value() != 0.0)
            throw PreconditionError("substitution jet has a nonzero constant term (base points must correspond)");
    }
    const int rdim = subs[0].dim();
    const int rorder = std::min(a.order(), subs[0].order());
    JetPoly result(rdim, rorder);

    // powers[i][e] = subs[i]^e truncated to the result order
    std::vector<std::vector<JetPoly>> powers(static_cast<size_t>(a.dim()));
    for (int i = 0; i < a.dim(); ++i) {
        powers[static_cast<size_t>(i)].push_back(JetPoly::constant(rdim, rorder, 1.0));
        const JetPoly si = subs[static_cast<size_t>(i)].truncated(rorder);
        for (int e = 1; e <= a.order(); ++e) {
            JetPoly next(rdim, rorder);
            next.add_product(powers[static_cast<size_t>(i)].back(), si);
            powers[static_cast<size_t>(i)].push_back(std::move(next));
        }
    }

    const auto& ly = a.layout();
    for (int r = 0; r < a.size(); ++r) {
        const double cv = a[r];
        if (cv == 0.0) continue;
        int degree = 0;
        for (int i = 0; i < a.dim(); ++i) degree += ly.mono[static_cast<size_t>(r)][static_cast<size_t>(i)];
        // zero-constant substitutions: a degree-d monomial only feeds degrees >= d
        if (degree > rorder) continue;
        JetPoly term = JetPoly::constant(rdim, rorder, cv);
        for (int i = 0; i < a.dim(); ++i) {
            const int e = ly.mono[static_cast<size_t>(r)][static_cast<size_t>(i)];
            if (e == 0) continue;
            JetPoly next(rdim, rorder);
            next.add_product(term, powers[static_cast<size_t>(i)][static_cast<size_t>(e)]);
            term = std::move(next);
        }
        result += term;
    }
    return result;
}

double evaluate(const JetPoly& a, std::span<const double> x) {
    if (static_cast<int>(x.size()) != a.dim()) throw StructureError("evaluation point dimension mismatch");
    const auto& ly = a.layout();
    double total = 0.0;
    for (int r = 0; r < a.size(); ++r) {
        double m = a[r];
        if (m == 0.0) continue;
        for (int i = 0; i < a.dim(); ++i)
            for (int e = 0; e < ly.mono[static_cast<size_t>(r)][static_cast<size_t>(i)]; ++e)
                m *= x[static_cast<size_t>(i)];
        total += m;
    }
    return total;
}

double max_abs_coeff(const JetPoly& a) {
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i]));
    return m;
}

bool all_finite(const JetPoly& a) {
    for (int i = 0; i < a.size(); ++i)
        if (!std::isfinite(a[i])) return false;
    return true;
}

} // namespace lnabla
