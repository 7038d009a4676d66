// SPDX-License-Identifier: Apache-2.0
#pragma once

// Forward-mode scalar carrying a dense derivative vector. Every loss in this
// library is built from +, -, *, /, sqrt, exp, log1p and order comparisons,
// so propagating tangents through these operators yields exact gradients.
// Ties in min/max take the first argument (lowest index), matching the
// documented subgradient convention.

#include <cmath>
#include <cstddef>
#include <vector>

namespace mgiou {

struct Dual {
    double v = 0.0;
    std::vector<double> d;  // empty means "constant": all partials zero

    Dual() = default;
    Dual(double value) : v(value) {}
    Dual(double value, std::vector<double> grad) : v(value), d(std::move(grad)) {}

    // Seed variable i of n with unit tangent.
    static Dual var(double value, std::size_t i, std::size_t n) {
        Dual r(value);
        r.d.assign(n, 0.0);
        r.d[i] = 1.0;
        return r;
    }
};

namespace detail {
inline void axpy(std::vector<double>& out, double a, const std::vector<double>& x) {
    if (x.empty()) return;
    if (out.empty()) out.assign(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += a * x[i];
}
}  // namespace detail

inline Dual operator+(const Dual& a, const Dual& b) {
    Dual r(a.v + b.v);
    detail::axpy(r.d, 1.0, a.d);
    detail::axpy(r.d, 1.0, b.d);
    return r;
}
inline Dual operator-(const Dual& a, const Dual& b) {
    Dual r(a.v - b.v);
    detail::axpy(r.d, 1.0, a.d);
    detail::axpy(r.d, -1.0, b.d);
    return r;
}
inline Dual operator-(const Dual& a) {
    Dual r(-a.v);
    detail::axpy(r.d, -1.0, a.d);
    return r;
}
inline Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.v * b.v);
    detail::axpy(r.d, b.v, a.d);
    detail::axpy(r.d, a.v, b.d);
    return r;
}
inline Dual operator/(const Dual& a, const Dual& b) {
    Dual r(a.v / b.v);
    detail::axpy(r.d, 1.0 / b.v, a.d);
    detail::axpy(r.d, -a.v / (b.v * b.v), b.d);
    return r;
}

inline Dual& operator+=(Dual& a, const Dual& b) { a = a + b; return a; }
inline Dual& operator-=(Dual& a, const Dual& b) { a = a - b; return a; }
inline Dual& operator*=(Dual& a, const Dual& b) { a = a * b; return a; }
inline Dual& operator/=(Dual& a, const Dual& b) { a = a / b; return a; }

inline bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
inline bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
inline bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
inline bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }

inline Dual sqrt(const Dual& a) {
    double s = std::sqrt(a.v);
    Dual r(s);
    detail::axpy(r.d, 0.5 / s, a.d);
    return r;
}
inline Dual exp(const Dual& a) {
    double e = std::exp(a.v);
    Dual r(e);
    detail::axpy(r.d, e, a.d);
    return r;
}
inline Dual log(const Dual& a) {
    Dual r(std::log(a.v));
    detail::axpy(r.d, 1.0 / a.v, a.d);
    return r;
}
inline Dual sin(const Dual& a) {
    Dual r(std::sin(a.v));
    detail::axpy(r.d, std::cos(a.v), a.d);
    return r;
}
inline Dual cos(const Dual& a) {
    Dual r(std::cos(a.v));
    detail::axpy(r.d, -std::sin(a.v), a.d);
    return r;
}
inline Dual log1p(const Dual& a) {
    Dual r(std::log1p(a.v));
    detail::axpy(r.d, 1.0 / (1.0 + a.v), a.d);
    return r;
}

// Extract the plain value from either scalar type.
inline double scalar_value(double x) { return x; }
inline double scalar_value(const Dual& x) { return x.v; }

// min/max with first-argument-wins tie breaking; usable for double and Dual.
template <class T>
const T& vmin(const T& a, const T& b) {
    return scalar_value(b) < scalar_value(a) ? b : a;
}
template <class T>
const T& vmax(const T& a, const T& b) {
    return scalar_value(b) > scalar_value(a) ? b : a;
}

// max(0, x) hinge with zero subgradient at the kink.
template <class T>
T relu(const T& x) {
    return scalar_value(x) > 0.0 ? x : T(0.0);
}

// ln(1 + e^x), overflow-safe.
inline double softplus(double x) {
    return std::fmax(x, 0.0) + std::log1p(std::exp(-std::fabs(x)));
}
inline Dual softplus(const Dual& x) {
    Dual r(softplus(x.v));
    detail::axpy(r.d, 1.0 / (1.0 + std::exp(-x.v)), x.d);
    return r;
}

}  // namespace mgiou
