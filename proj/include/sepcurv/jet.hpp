#pragma once

#include <cmath>

namespace sepcurv {

/// Value, first and second derivative of a scalar function at a point.
/// Arithmetic propagates all three exactly by the Leibniz and chain rules.
struct Jet2 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }
    static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }

    bool is_finite() const { return std::isfinite(v) && std::isfinite(d1) && std::isfinite(d2); }

    friend bool operator==(const Jet2&, const Jet2&) = default;
};

constexpr Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }

constexpr Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
constexpr Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }

constexpr Jet2 operator*(const Jet2& a, const Jet2& b)
{
    // Grouped so that a * b and b * a round identically.
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, (a.d2 * b.v + a.v * b.d2) + 2.0 * a.d1 * b.d1};
}

constexpr Jet2 operator/(const Jet2& a, const Jet2& b)
{
    const double q = a.v / b.v;
    const double q1 = (a.d1 - q * b.d1) / b.v;
    const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
    return {q, q1, q2};
}

constexpr Jet2 operator+(const Jet2& a, double c) { return {a.v + c, a.d1, a.d2}; }
constexpr Jet2 operator+(double c, const Jet2& a) { return a + c; }
constexpr Jet2 operator-(const Jet2& a, double c) { return {a.v - c, a.d1, a.d2}; }
constexpr Jet2 operator-(double c, const Jet2& a) { return {c - a.v, -a.d1, -a.d2}; }
constexpr Jet2 operator*(const Jet2& a, double c) { return {a.v * c, a.d1 * c, a.d2 * c}; }
constexpr Jet2 operator*(double c, const Jet2& a) { return a * c; }
constexpr Jet2 operator/(const Jet2& a, double c) { return {a.v / c, a.d1 / c, a.d2 / c}; }

/// Compose an outer function g with the inner jet, given g(u), g'(u), g''(u) at u = a.v.
constexpr Jet2 compose(const Jet2& a, double g0, double g1, double g2)
{
    return {g0, g1 * a.d1, g2 * a.d1 * a.d1 + g1 * a.d2};
}

inline Jet2 exp(const Jet2& a)
{
    const double e = std::exp(a.v);
    return compose(a, e, e, e);
}

// Caller checks a.v > 0.
inline Jet2 log(const Jet2& a) { return compose(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }

inline Jet2 sin(const Jet2& a)
{
    const double s = std::sin(a.v);
    return compose(a, s, std::cos(a.v), -s);
}

inline Jet2 cos(const Jet2& a)
{
    const double c = std::cos(a.v);
    return compose(a, c, -std::sin(a.v), -c);
}

/// a^p for a constant exponent. Terms with a zero coefficient are dropped so that
/// integer powers stay finite at a = 0 (e.g. x^1, x^2 at the origin).
inline Jet2 pow(const Jet2& a, double p)
{
    if (p == 0.0) {
        return Jet2::constant(1.0);
    }
    const double g0 = std::pow(a.v, p);
    const double g1 = p * std::pow(a.v, p - 1.0);
    const double c2 = p * (p - 1.0);
    const double g2 = c2 == 0.0 ? 0.0 : c2 * std::pow(a.v, p - 2.0);
    return compose(a, g0, g1, g2);
}

} // namespace sepcurv
