#pragma once

// Test-only reference computations. Nothing here calls the jet arithmetic or the
// closed-form curvature code; the values are built from plain function values.

#include "sepcurv/funcalc.hpp"
#include "sepcurv/geometry.hpp"
#include "sepcurv/random.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepcurv::testing {

/// Plain value of an expression tree in extended precision.
inline long double eval_value(const Expr& e, long double x)
{
    switch (e.op) {
    case Op::Number:
        return e.value;
    case Op::Var:
        return x;
    case Op::Add:
        return eval_value(e.args[0], x) + eval_value(e.args[1], x);
    case Op::Sub:
        return eval_value(e.args[0], x) - eval_value(e.args[1], x);
    case Op::Mul:
        return eval_value(e.args[0], x) * eval_value(e.args[1], x);
    case Op::Div:
        return eval_value(e.args[0], x) / eval_value(e.args[1], x);
    case Op::Neg:
        return -eval_value(e.args[0], x);
    case Op::Pow:
        return std::pow(eval_value(e.args[0], x), static_cast<long double>(e.value));
    case Op::Exp:
        return std::exp(eval_value(e.args[0], x));
    case Op::Log:
        return std::log(eval_value(e.args[0], x));
    case Op::Sin:
        return std::sin(eval_value(e.args[0], x));
    case Op::Cos:
        return std::cos(eval_value(e.args[0], x));
    }
    throw std::logic_error("unhandled node");
}

struct FdDerivatives {
    double d1;
    double d2;
};

/// Central differences with step h = 1e-5 * max(1, |x|), evaluated in long double.
inline FdDerivatives central_differences(const Expr& e, double x)
{
    const long double h = 1e-5L * std::max(1.0L, std::abs(static_cast<long double>(x)));
    const long double fp = eval_value(e, x + h);
    const long double f0 = eval_value(e, x);
    const long double fm = eval_value(e, x - h);
    return {static_cast<double>((fp - fm) / (2 * h)), static_cast<double>((fp - 2 * f0 + fm) / (h * h))};
}

/// |a - b| / max(1, |b|).
inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

/// Gradient of F = sum f_k(x_k) by long-double central differences.
inline Eigen::VectorXd fd_gradient(const SeparableSurface& s, const Eigen::VectorXd& x)
{
    Eigen::VectorXd g(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const Expr& e = s.function(static_cast<std::size_t>(k)).ast();
        const long double xk = x[k];
        const long double h = 1e-7L * std::max(1.0L, std::abs(xk));
        g[k] = static_cast<double>((eval_value(e, xk + h) - eval_value(e, xk - h)) / (2 * h));
    }
    return g;
}

inline Eigen::VectorXd fd_normal(const SeparableSurface& s, const Eigen::VectorXd& x)
{
    const Eigen::VectorXd g = fd_gradient(s, x);
    return g / g.norm();
}

/// Sectional curvature of span{u, w} from the Gauss equation, with the second fundamental
/// form II(a, b) = -<dN(a), b> obtained by differencing the unit normal field.
inline double brute_force_sectional(const SeparableSurface& s, const Eigen::VectorXd& p, const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& w)
{
    const Eigen::VectorXd e1 = u.normalized();
    const Eigen::VectorXd e2 = (w - w.dot(e1) * e1).normalized();
    const double h = 1e-4;
    auto dN = [&](const Eigen::VectorXd& a) {
        return Eigen::VectorXd((fd_normal(s, p + h * a) - fd_normal(s, p - h * a)) / (2 * h));
    };
    const Eigen::VectorXd dn1 = dN(e1);
    const Eigen::VectorXd dn2 = dN(e2);
    const double ii11 = -dn1.dot(e1);
    const double ii22 = -dn2.dot(e2);
    const double ii12 = -0.5 * (dn1.dot(e2) + dn2.dot(e1));
    return ii11 * ii22 - ii12 * ii12;
}

/// Random single-variable test functions with their natural domains. `monotone` asks for a
/// strictly increasing function usable as the height coordinate.
struct RandomFunction {
    Function1D f;
    Interval sample_range;
};

inline RandomFunction random_function(Rng& rng, bool monotone)
{
    auto c = [&](double lo, double hi) { return format_real(rng.uniform(lo, hi)); };
    const Interval whole = Interval::whole();
    const Interval positive{0.0, std::numeric_limits<double>::infinity()};
    if (monotone) {
        switch (rng.next() % 3) {
        case 0:
            return {parse_function(c(0.5, 2) + "*x + " + c(0.05, 0.5) + "*x^3"), {-2, 2}};
        case 1:
            return {parse_function(c(0.3, 1.5) + "*exp(" + c(0.2, 0.8) + "*x)"), {-2, 2}};
        default:
            return {parse_function(c(0.5, 2) + "*log(x) + " + c(0.1, 0.5) + "*x"), {0.5, 2}};
        }
    }
    switch (rng.next() % 6) {
    case 0:
        return {parse_function(c(-2, 2) + "*x^3 + " + c(-2, 2) + "*x^2 + " + c(-2, 2) + "*x", whole), {-2, 2}};
    case 1:
        return {parse_function(c(-2, 2) + "*log(x + " + c(0.1, 1) + ")", Interval{-0.1, positive.hi}), {0.5, 2}};
    case 2:
        return {parse_function(c(-1, 1) + "*exp(" + c(-1, 1) + "*x)", whole), {-1.5, 1.5}};
    case 3:
        return {parse_function(c(-2, 2) + "*sin(x) + " + c(-1, 1) + "*x", whole), {-2, 2}};
    case 4:
        return {parse_function(c(0.5, 2) + "*x^0.5 + " + c(-1, 1) + "*x^2", positive), {0.5, 2}};
    default:
        return {parse_function(c(-2, 2) + "*x^2 - " + c(0.1, 1) + "/x", positive), {0.5, 2}};
    }
}

/// A random separable surface with a monotone height function, plus a sampling box.
struct RandomSurface {
    SeparableSurface surface;
    SamplingBox box;
};

inline RandomSurface random_surface(Rng& rng, std::size_t n)
{
    std::vector<Function1D> funcs;
    SamplingBox box;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        auto r = random_function(rng, false);
        funcs.push_back(r.f);
        box.ranges.push_back(r.sample_range);
    }
    auto h = random_function(rng, true);
    funcs.push_back(h.f);
    SeparableSurface s(std::move(funcs));
    // Widen the height bracket until it holds the root; monotone height functions make this safe.
    const bool log_height = h.sample_range.lo > 0;
    box.bracket = log_height ? Interval{1e-8, 1e8} : Interval{-40, 40};
    return {std::move(s), std::move(box)};
}

} // namespace sepcurv::testing
