#include "sepcurv/families.hpp"

#include "sepcurv/error.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sepcurv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string shifted(double mu)
{
    if (mu == 0.0) {
        return "x";
    }
    return mu > 0.0 ? "x + " + format_real(mu) : "x - " + format_real(-mu);
}

std::string plus_constant(double b)
{
    if (b == 0.0) {
        return "";
    }
    return b > 0.0 ? " + " + format_real(b) : " - " + format_real(-b);
}

std::string scaled(double c, const std::string& term)
{
    if (c == 1.0) {
        return term;
    }
    if (c == -1.0) {
        return "-" + term;
    }
    return format_real(c) + "*" + term;
}

std::vector<double> shifts_or_zero(const std::vector<double>& shifts, std::size_t n)
{
    if (shifts.empty()) {
        return std::vector<double>(n, 0.0);
    }
    if (shifts.size() != n) {
        throw std::invalid_argument("expected one shift per coordinate");
    }
    return shifts;
}

Function1D log_term(double coeff, double mu, double beta)
{
    return parse_function(scaled(coeff, "log(" + shifted(mu) + ")") + plus_constant(beta), Interval{0.0 - mu, kInf});
}

// A few interior points of an interval, for probing whether a profile bends anywhere.
std::vector<double> probe_points(const Interval& d)
{
    const bool lo_finite = std::isfinite(d.lo);
    const bool hi_finite = std::isfinite(d.hi);
    if (lo_finite && hi_finite) {
        std::vector<double> out;
        for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            out.push_back(d.lo + t * (d.hi - d.lo));
        }
        return out;
    }
    if (lo_finite) {
        return {d.lo + 0.1, d.lo + 0.5, d.lo + 1.0, d.lo + 2.0, d.lo + 5.0};
    }
    if (hi_finite) {
        return {d.hi - 0.1, d.hi - 0.5, d.hi - 1.0, d.hi - 2.0, d.hi - 5.0};
    }
    return {-2.0, -1.0, -0.5, 0.3, 1.0, 2.0};
}

Interval inner_range(const Interval& d)
{
    const bool lo_finite = std::isfinite(d.lo);
    const bool hi_finite = std::isfinite(d.hi);
    if (lo_finite && hi_finite) {
        const double w = d.hi - d.lo;
        return {d.lo + 0.1 * w, d.hi - 0.1 * w};
    }
    if (lo_finite) {
        return {d.lo + 0.5, d.lo + 2.0};
    }
    if (hi_finite) {
        return {d.hi - 2.0, d.hi - 0.5};
    }
    return {-2.0, 2.0};
}

// Height bracket for x_n + mu_n = A sqrt(prod(x_i + mu_i)) with every factor in [0.5, 2].
Interval sqrt_product_bracket(double A, std::size_t n, double mu_n)
{
    const double half = static_cast<double>(n - 1) / 2.0;
    return {-mu_n + 0.5 * A * std::pow(0.5, half), -mu_n + 2.0 * A * std::pow(2.0, half)};
}

} // namespace

FamilyKind kind_of(const FamilySpec& spec) { return static_cast<FamilyKind>(spec.index()); }

std::string to_string(FamilyKind kind)
{
    switch (kind) {
    case FamilyKind::Hyperplane:
        return "hyperplane";
    case FamilyKind::Cylinder:
        return "cylinder";
    case FamilyKind::CobbDouglasSqrt:
        return "cobb_douglas_sqrt";
    case FamilyKind::Hypersphere:
        return "hypersphere";
    case FamilyKind::LogODE:
        return "log_ode";
    }
    return "unknown";
}

std::optional<FamilyKind> parse_family_kind(std::string_view name)
{
    for (auto kind : {FamilyKind::Hyperplane, FamilyKind::Cylinder, FamilyKind::CobbDouglasSqrt,
                      FamilyKind::Hypersphere, FamilyKind::LogODE}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

SeparableSurface make_hyperplane(const std::vector<double>& coeffs, double offset)
{
    if (coeffs.size() < 3) {
        throw std::invalid_argument("hyperplane needs n >= 3 coefficients");
    }
    bool any = false;
    for (double c : coeffs) {
        any = any || c != 0.0;
    }
    if (!any) {
        throw std::invalid_argument("hyperplane coefficients are all zero");
    }
    if (coeffs.back() == 0.0) {
        throw std::invalid_argument("hyperplane coefficient at the height coordinate must be nonzero");
    }
    std::vector<Function1D> funcs;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double b = k + 1 == coeffs.size() ? offset : 0.0;
        funcs.push_back(parse_function(format_real(coeffs[k]) + "*x" + plus_constant(b)));
    }
    return SeparableSurface(std::move(funcs));
}

SeparableSurface make_cylinder(const CylinderSpec& spec)
{
    const std::size_t n = spec.n;
    if (n < 3) {
        throw std::invalid_argument("cylinder needs n >= 3");
    }
    if (spec.lin.size() != n) {
        throw std::invalid_argument("cylinder needs one linear coefficient per coordinate");
    }
    if (spec.slot + 1 >= n) {
        throw std::invalid_argument("cylinder profile slot must be a tangent coordinate");
    }
    if (spec.lin.back() == 0.0) {
        throw std::invalid_argument("cylinder coefficient at the height coordinate must be nonzero");
    }
    bool bends = false;
    for (double x : probe_points(spec.profile.domain())) {
        try {
            bends = bends || spec.profile.eval(x).d2 != 0.0;
        } catch (const Error&) {
        }
    }
    if (!bends) {
        throw std::invalid_argument("cylinder profile must have a nonzero second derivative somewhere");
    }
    std::vector<Function1D> funcs;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == spec.slot) {
            funcs.push_back(spec.profile);
        } else {
            const double b = k + 1 == n ? spec.offset : 0.0;
            funcs.push_back(parse_function(format_real(spec.lin[k]) + "*x" + plus_constant(b)));
        }
    }
    return SeparableSurface(std::move(funcs));
}

SeparableSurface make_cylinder(const Function1D& profile, std::size_t n, const std::vector<double>& lin)
{
    return make_cylinder(CylinderSpec{profile, n, lin, 0.0, 0});
}

SeparableSurface make_log_ode(double lambda, const std::vector<double>& shifts, const std::vector<double>& betas)
{
    if (lambda == 0.0 || !std::isfinite(lambda)) {
        throw std::invalid_argument("log family needs a finite nonzero lambda");
    }
    const std::size_t n = shifts.size();
    if (n < 3 || betas.size() != n) {
        throw std::invalid_argument("log family needs n >= 3 shifts and betas");
    }
    std::vector<Function1D> funcs;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        funcs.push_back(log_term(-lambda, shifts[k], betas[k]));
    }
    funcs.push_back(log_term(2.0 * lambda, shifts[n - 1], betas[n - 1]));
    return SeparableSurface(std::move(funcs));
}

SeparableSurface make_cobb_douglas_sqrt(double A, std::size_t n, const std::vector<double>& shifts)
{
    if (!(A > 0.0) || !std::isfinite(A)) {
        throw std::invalid_argument("Cobb-Douglas constant A must be positive");
    }
    if (n < 3) {
        throw std::invalid_argument("Cobb-Douglas family needs n >= 3");
    }
    // lambda = 1 and beta_i = 0 for i < n leave beta_n = -2 log A, so that A = exp(-sum beta / 2).
    std::vector<double> betas(n, 0.0);
    betas.back() = -2.0 * std::log(A);
    return make_log_ode(1.0, shifts_or_zero(shifts, n), betas);
}

SeparableSurface make_cobb_douglas(double A, const std::vector<double>& alphas, const std::vector<double>& shifts)
{
    if (!(A > 0.0)) {
        throw std::invalid_argument("Cobb-Douglas constant A must be positive");
    }
    const std::size_t n = alphas.size() + 1;
    if (n < 3) {
        throw std::invalid_argument("Cobb-Douglas family needs n >= 3");
    }
    const auto mu = shifts_or_zero(shifts, n);
    std::vector<Function1D> funcs;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (!(alphas[k] > 0.0)) {
            throw std::invalid_argument("Cobb-Douglas exponents must be positive");
        }
        funcs.push_back(log_term(-alphas[k], mu[k], 0.0));
    }
    funcs.push_back(log_term(1.0, mu[n - 1], -std::log(A)));
    return SeparableSurface(std::move(funcs));
}

SeparableSurface make_hypersphere(const std::vector<double>& center, double radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("hypersphere radius must be positive");
    }
    if (center.size() < 3) {
        throw std::invalid_argument("hypersphere needs n >= 3");
    }
    std::vector<Function1D> funcs;
    for (std::size_t k = 0; k < center.size(); ++k) {
        const std::string base = center[k] == 0.0 ? "x^2" : "(" + shifted(-center[k]) + ")^2";
        const double b = k + 1 == center.size() ? -radius * radius : 0.0;
        funcs.push_back(parse_function(base + plus_constant(b)));
    }
    return SeparableSurface(std::move(funcs));
}

SeparableSurface make_family(const FamilySpec& spec)
{
    struct Visitor {
        SeparableSurface operator()(const HyperplaneSpec& s) const { return make_hyperplane(s.coeffs, s.offset); }
        SeparableSurface operator()(const CylinderSpec& s) const { return make_cylinder(s); }
        SeparableSurface operator()(const CobbDouglasSqrtSpec& s) const
        {
            return make_cobb_douglas_sqrt(s.A, s.n, s.shifts);
        }
        SeparableSurface operator()(const HypersphereSpec& s) const { return make_hypersphere(s.center, s.radius); }
        SeparableSurface operator()(const LogOdeSpec& s) const { return make_log_ode(s.lambda, s.shifts, s.betas); }
    };
    return std::visit(Visitor{}, spec);
}

std::vector<double> log_ode_lambdas(std::size_t n, double lambda)
{
    std::vector<double> out(n, lambda);
    if (n > 0) {
        out.back() = -2.0 * lambda;
    }
    return out;
}

double ode_residual_subcase21(const Function1D& f, double lambda_k, double x)
{
    if (lambda_k == 0.0) {
        throw std::invalid_argument("lambda_k must be nonzero");
    }
    const Jet2 j = f.eval(x);
    return j.d2 - j.d1 * j.d1 / lambda_k;
}

double expected_curvature(const FamilySpec& spec)
{
    if (const auto* sphere = std::get_if<HypersphereSpec>(&spec)) {
        return 1.0 / (sphere->radius * sphere->radius);
    }
    return 0.0;
}

std::size_t dimension_of(const FamilySpec& spec)
{
    struct Visitor {
        std::size_t operator()(const HyperplaneSpec& s) const { return s.coeffs.size(); }
        std::size_t operator()(const CylinderSpec& s) const { return s.n; }
        std::size_t operator()(const CobbDouglasSqrtSpec& s) const { return s.n; }
        std::size_t operator()(const HypersphereSpec& s) const { return s.center.size(); }
        std::size_t operator()(const LogOdeSpec& s) const { return s.shifts.size(); }
    };
    return std::visit(Visitor{}, spec);
}

SamplingBox default_sampling_box(const FamilySpec& spec)
{
    const std::size_t n = dimension_of(spec);
    SamplingBox box;
    switch (kind_of(spec)) {
    case FamilyKind::Hyperplane: {
        const auto& s = std::get<HyperplaneSpec>(spec);
        box.ranges.assign(n - 1, Interval{-2.0, 2.0});
        double bound = std::abs(s.offset);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            bound += 2.0 * std::abs(s.coeffs[k]);
        }
        bound = bound / std::abs(s.coeffs.back()) + 1.0;
        box.bracket = {-bound, bound};
        break;
    }
    case FamilyKind::Cylinder: {
        const auto& s = std::get<CylinderSpec>(spec);
        box.ranges.assign(n - 1, Interval{-2.0, 2.0});
        box.ranges[s.slot] = inner_range(s.profile.domain());
        box.bracket = {-1e6, 1e6};
        break;
    }
    case FamilyKind::CobbDouglasSqrt: {
        const auto& s = std::get<CobbDouglasSqrtSpec>(spec);
        const auto mu = shifts_or_zero(s.shifts, n);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            box.ranges.push_back({-mu[k] + 0.5, -mu[k] + 2.0});
        }
        box.bracket = sqrt_product_bracket(s.A, n, mu.back());
        break;
    }
    case FamilyKind::Hypersphere: {
        const auto& s = std::get<HypersphereSpec>(spec);
        const double half_width = 0.9 * s.radius / std::sqrt(static_cast<double>(n - 1));
        for (std::size_t k = 0; k + 1 < n; ++k) {
            box.ranges.push_back({s.center[k] - half_width, s.center[k] + half_width});
        }
        box.bracket = {s.center.back(), s.center.back() + s.radius};
        break;
    }
    case FamilyKind::LogODE: {
        const auto& s = std::get<LogOdeSpec>(spec);
        double beta_sum = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            box.ranges.push_back({-s.shifts[k] + 0.5, -s.shifts[k] + 2.0});
        }
        for (double b : s.betas) {
            beta_sum += b;
        }
        box.bracket = sqrt_product_bracket(std::exp(-beta_sum / (2.0 * s.lambda)), n, s.shifts.back());
        break;
    }
    }
    return box;
}

} // namespace sepcurv
