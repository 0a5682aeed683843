#pragma once

#include <cmath>

#include "lnabla/jet.hpp"

namespace lnabla {

/// Forward-mode dual number over an arbitrary coefficient scalar. With
/// T = double it differentiates point evaluations; with T = JetPoly the
/// derivative channel is itself a jet in x, which realizes partial
/// derivatives of a Lagrangian as functions along a section; nesting
/// Dual<Dual<double>> yields second derivatives.
template <class T>
struct Dual {
    T v{};
    T d{};

    Dual() = default;
    Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}
};

// --- generic scalar helpers shared by the coordinate-form evaluators ---

inline double value_of(double x) { return x; }
inline double value_of(const JetPoly& x) { return x.value(); }
template <class T>
double value_of(const Dual<T>& x) {
    return value_of(x.v);
}

inline double zero_like(double) { return 0.0; }
inline JetPoly zero_like(const JetPoly& x) { return JetPoly(x.dim(), x.order()); }
template <class T>
Dual<T> zero_like(const Dual<T>& x) {
    return Dual<T>(zero_like(x.v), zero_like(x.v));
}

inline double one_like(double) { return 1.0; }
inline JetPoly one_like(const JetPoly& x) { return JetPoly::constant(x.dim(), x.order(), 1.0); }
template <class T>
Dual<T> one_like(const Dual<T>& x) {
    return Dual<T>(one_like(x.v), zero_like(x.v));
}

inline double recip_s(double x) { return 1.0 / x; }
inline JetPoly recip_s(const JetPoly& x) { return reciprocal(x); }

inline double sqrt_s(double x) { return std::sqrt(x); }
inline JetPoly sqrt_s(const JetPoly& x) { return sqrt_jet(x); }

inline double sin_s(double x) { return std::sin(x); }
inline JetPoly sin_s(const JetPoly& x) { return sin_jet(x); }
inline double cos_s(double x) { return std::cos(x); }
inline JetPoly cos_s(const JetPoly& x) { return cos_jet(x); }

// --- dual arithmetic ---

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
    return {a.v + b.v, a.d + b.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
    return {a.v - b.v, a.d - b.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& a) {
    return {-a.v, -a.d};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
    return {a.v * b.v, a.v * b.d + a.d * b.v};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, double s) {
    return {a.v * s, a.d * s};
}
template <class T>
Dual<T> operator*(double s, const Dual<T>& a) {
    return a * s;
}
template <class T>
Dual<T> operator+(const Dual<T>& a, double s) {
    return {a.v + s, a.d};
}
template <class T>
Dual<T> operator+(double s, const Dual<T>& a) {
    return a + s;
}
template <class T>
Dual<T> operator-(const Dual<T>& a, double s) {
    return {a.v - s, a.d};
}
template <class T>
Dual<T> operator-(double s, const Dual<T>& a) {
    return {s - a.v, -a.d};
}
template <class T>
Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) {
    a.v += b.v;
    a.d += b.d;
    return a;
}
template <class T>
Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) {
    a.v -= b.v;
    a.d -= b.d;
    return a;
}

template <class T>
Dual<T> recip_s(const Dual<T>& a) {
    T rv = recip_s(a.v);
    T r2 = rv * rv;
    return {std::move(rv), -(a.d * r2)};
}

template <class T>
Dual<T> sqrt_s(const Dual<T>& a) {
    T s = sqrt_s(a.v);
    T half_inv = recip_s(s + s);
    return {std::move(s), a.d * half_inv};
}

} // namespace lnabla
