#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "lnabla/error.hpp"

namespace lnabla {

inline constexpr int kMaxDim = 4;
inline constexpr int kMaxOrder = 6;

namespace detail {

/// Coefficient buffer with inline storage for the common small truncation
/// spaces (<= 35 coefficients covers every space with dim <= 4, order <= 3
/// and dim <= 3, order <= 4). Larger spaces spill to the heap.
class CoeffVec {
public:
    static constexpr int kInline = 35;

    CoeffVec() = default;
    explicit CoeffVec(int n) { assign_zero(n); }
    CoeffVec(const CoeffVec& o) { copy_from(o); }
    CoeffVec(CoeffVec&& o) noexcept { move_from(std::move(o)); }
    CoeffVec& operator=(const CoeffVec& o) {
        if (this != &o) { release(); copy_from(o); }
        return *this;
    }
    CoeffVec& operator=(CoeffVec&& o) noexcept {
        if (this != &o) { release(); move_from(std::move(o)); }
        return *this;
    }
    ~CoeffVec() { release(); }

    void assign_zero(int n) {
        release();
        size_ = n;
        if (n > kInline) heap_ = new double[n];
        std::memset(data(), 0, sizeof(double) * static_cast<size_t>(n));
    }

    int size() const { return size_; }
    double* data() { return heap_ ? heap_ : inline_.data(); }
    const double* data() const { return heap_ ? heap_ : inline_.data(); }
    double operator[](int i) const { return data()[i]; }
    double& operator[](int i) { return data()[i]; }

private:
    void release() {
        delete[] heap_;
        heap_ = nullptr;
        size_ = 0;
    }
    void copy_from(const CoeffVec& o) {
        size_ = o.size_;
        if (size_ > kInline) heap_ = new double[size_];
        std::memcpy(data(), o.data(), sizeof(double) * static_cast<size_t>(size_));
    }
    void move_from(CoeffVec&& o) noexcept {
        size_ = o.size_;
        heap_ = o.heap_;
        if (!heap_) inline_ = o.inline_;
        o.heap_ = nullptr;
        o.size_ = 0;
    }

    std::array<double, kInline> inline_{};
    double* heap_ = nullptr;
    int size_ = 0;
};

/// Static description of one truncation space: the graded-lexicographic
/// monomial basis for a given (dim, order), rank lookup by packed
/// exponents, and the flat list of in-range monomial products used by the
/// multiplication kernel.
struct Layout {
    int dim = 0;
    int order = 0;
    std::vector<std::array<std::uint8_t, kMaxDim>> mono;
    std::vector<int> degree_offset; // degree_offset[d] = first rank of degree d
    std::vector<std::int16_t> rank_table; // packed exponents -> rank, -1 if absent
    struct Prod {
        std::uint16_t a, b, c;
    };
    // Unordered monomial pairs a < b plus the diagonal list; keeping the
    // two cross terms of a pair fused makes multiplication bit-exactly
    // commutative.
    std::vector<Prod> prod_off;
    std::vector<Prod> prod_diag;

    int size() const { return static_cast<int>(mono.size()); }
    int pack(std::span<const int> alpha) const {
        int p = 0;
        for (int i = 0; i < dim; ++i) p |= alpha[i] << (3 * i);
        return p;
    }
    int rank(std::span<const int> alpha) const {
        int total = 0;
        for (int i = 0; i < dim; ++i) total += alpha[i];
        if (total > order) return -1;
        return rank_table[pack(alpha)];
    }
};

const Layout& layout(int dim, int order);

} // namespace detail

/// Truncated multivariate Taylor polynomial at a base point: the scalar
/// value type of the whole engine. `order` is the usable truncation
/// degree; taking a partial derivative consumes one degree. Coefficients
/// are stored densely in graded-lexicographic monomial order, so degrees
/// <= k always occupy a prefix of the buffer.
class JetPoly {
public:
    JetPoly() = default;
    JetPoly(int dim, int order) : ly_(&detail::layout(dim, order)), c_(ly_->size()) {}

    static JetPoly constant(int dim, int order, double v) {
        JetPoly j(dim, order);
        j.c_[0] = v;
        return j;
    }

    /// base + x_axis as a jet (the coordinate function shifted to the
    /// base point).
    static JetPoly variable(int dim, int order, int axis, double base = 0.0);

    bool valid() const { return ly_ != nullptr; }
    int dim() const { return ly_->dim; }
    int order() const { return ly_->order; }
    int size() const { return c_.size(); }

    double value() const { return c_[0]; }
    double operator[](int rank) const { return c_[rank]; }
    double& operator[](int rank) { return c_[rank]; }

    double coeff(std::span<const int> alpha) const;
    void set_coeff(std::span<const int> alpha, double v);

    /// Partial-derivative value at the base point: coeff(alpha) * alpha!.
    double derivative(std::span<const int> alpha) const;
    void set_derivative(std::span<const int> alpha, double v);

    JetPoly truncated(int new_order) const;

    JetPoly& operator+=(const JetPoly& o);
    JetPoly& operator-=(const JetPoly& o);
    JetPoly& operator*=(const JetPoly& o) { *this = *this * o; return *this; }
    JetPoly& operator*=(double s);
    JetPoly& operator+=(double s) { c_[0] += s; return *this; }
    JetPoly& operator-=(double s) { c_[0] -= s; return *this; }

    /// this += a * b (truncated product), without a temporary.
    void add_product(const JetPoly& a, const JetPoly& b);
    /// this -= a * b.
    void sub_product(const JetPoly& a, const JetPoly& b);
    /// this += s * a.
    void add_scaled(const JetPoly& a, double s);

    friend JetPoly operator+(const JetPoly& a, const JetPoly& b) {
        JetPoly r = a;
        r += b;
        return r;
    }
    friend JetPoly operator-(const JetPoly& a, const JetPoly& b) {
        JetPoly r = a;
        r -= b;
        return r;
    }
    friend JetPoly operator*(const JetPoly& a, const JetPoly& b);
    friend JetPoly operator*(const JetPoly& a, double s) {
        JetPoly r = a;
        r *= s;
        return r;
    }
    friend JetPoly operator*(double s, const JetPoly& a) { return a * s; }
    friend JetPoly operator+(const JetPoly& a, double s) {
        JetPoly r = a;
        r += s;
        return r;
    }
    friend JetPoly operator+(double s, const JetPoly& a) { return a + s; }
    friend JetPoly operator-(const JetPoly& a, double s) {
        JetPoly r = a;
        r -= s;
        return r;
    }
    friend JetPoly operator-(double s, const JetPoly& a);
    friend JetPoly operator-(const JetPoly& a);

    bool operator==(const JetPoly& o) const;

    const detail::Layout& layout() const { return *ly_; }

private:
    void require_same_space(const JetPoly& o) const;

    const detail::Layout* ly_ = nullptr;
    detail::CoeffVec c_;
};

/// Multiplicative inverse through the truncation order. Requires a
/// nonzero constant term.
JetPoly reciprocal(const JetPoly& a);

/// Square root through the truncation order. Requires a positive
/// constant term.
JetPoly sqrt_jet(const JetPoly& a);

JetPoly sin_jet(const JetPoly& a);
JetPoly cos_jet(const JetPoly& a);

/// Formal partial derivative; the result's order drops by one.
JetPoly partial(const JetPoly& a, int axis);

/// Truncated composition a(subs[0], ..., subs[dim-1]). Every substituted
/// jet must have a zero constant term (base points correspond).
JetPoly compose(const JetPoly& a, std::span<const JetPoly> subs);

/// Polynomial evaluation of the stored truncation at a displacement x
/// from the base point.
double evaluate(const JetPoly& a, std::span<const double> x);

double max_abs_coeff(const JetPoly& a);
bool all_finite(const JetPoly& a);

} // namespace lnabla
