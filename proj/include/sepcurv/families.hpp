#pragma once

#include "sepcurv/funcalc.hpp"
#include "sepcurv/geometry.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sepcurv {

// Generators for the separable hypersurfaces of constant sectional curvature. Every generator
// puts the height on the last coordinate.

/// sum_k lambda_k x_k + offset = 0.
struct HyperplaneSpec {
    std::vector<double> coeffs;
    double offset = 0.0;
};

/// f_slot = profile, the remaining tangent coordinates affine, f_n = lin[n-1] x + offset.
/// lin has n entries; lin[slot] is ignored.
struct CylinderSpec {
    Function1D profile;
    std::size_t n = 0;
    std::vector<double> lin;
    double offset = 0.0;
    std::size_t slot = 0;
};

/// x_n + mu_n = A sqrt((x_1 + mu_1) ... (x_{n-1} + mu_{n-1})). Empty shifts means all zero.
struct CobbDouglasSqrtSpec {
    double A = 1.0;
    std::size_t n = 0;
    std::vector<double> shifts;
};

/// |x - center| = radius.
struct HypersphereSpec {
    std::vector<double> center;
    double radius = 1.0;
};

/// f_i = -lambda log(x_i + mu_i) + beta_i for i < n and f_n = 2 lambda log(x_n + mu_n) + beta_n.
struct LogOdeSpec {
    double lambda = 1.0;
    std::vector<double> shifts;
    std::vector<double> betas;
};

using FamilySpec = std::variant<HyperplaneSpec, CylinderSpec, CobbDouglasSqrtSpec, HypersphereSpec, LogOdeSpec>;

enum class FamilyKind { Hyperplane, Cylinder, CobbDouglasSqrt, Hypersphere, LogODE };

FamilyKind kind_of(const FamilySpec& spec);
std::string to_string(FamilyKind kind);
std::optional<FamilyKind> parse_family_kind(std::string_view name);

SeparableSurface make_hyperplane(const std::vector<double>& coeffs, double offset = 0.0);
SeparableSurface make_cylinder(const CylinderSpec& spec);
SeparableSurface make_cylinder(const Function1D& profile, std::size_t n, const std::vector<double>& lin);
SeparableSurface make_cobb_douglas_sqrt(double A, std::size_t n, const std::vector<double>& shifts = {});
SeparableSurface make_hypersphere(const std::vector<double>& center, double radius);
SeparableSurface make_log_ode(double lambda, const std::vector<double>& shifts, const std::vector<double>& betas);
SeparableSurface make_family(const FamilySpec& spec);

/// Cobb-Douglas graph x_n + mu_n = A prod (x_i + mu_i)^alpha_i with arbitrary exponents. Only the
/// all-1/2 case is flat; other exponents serve as negative controls.
SeparableSurface make_cobb_douglas(double A, const std::vector<double>& alphas, const std::vector<double>& shifts = {});

/// The per-coordinate constants lambda_k of f_k'' = f_k'^2 / lambda_k for the log solutions:
/// lambda for every tangent coordinate and -2 lambda for the height.
std::vector<double> log_ode_lambdas(std::size_t n, double lambda);

/// f''(x) - f'(x)^2 / lambda_k. Throws std::invalid_argument if lambda_k == 0.
double ode_residual_subcase21(const Function1D& f, double lambda_k, double x);

/// The sectional curvature every point of the family should have.
double expected_curvature(const FamilySpec& spec);

std::size_t dimension_of(const FamilySpec& spec);

/// A sampling box that stays inside the domains and brackets the height root of the family.
SamplingBox default_sampling_box(const FamilySpec& spec);

} // namespace sepcurv
