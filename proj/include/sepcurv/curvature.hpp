#pragma once

#include "sepcurv/geometry.hpp"
#include "sepcurv/random.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sepcurv {

/// Minimum ||u ^ w|| for a plane section to count as non-degenerate.
inline constexpr double kPlaneIndependenceTol = 1e-10;

/// Tangency tolerance on <u, N>, relative to max(1, ||u||).
inline constexpr double kTangencyTol = 1e-10;

/// Default agreement tolerance between the closed form and the oracle, relative to max(1, |K|).
inline constexpr double kEquivalenceTol = 1e-9;

/// Default threshold on max - min for a "constant" verdict.
inline constexpr double kDefaultConstancyTol = 1e-7;

/// Two tangent vectors spanning a plane; need not be orthonormal.
struct PlaneSection {
    Eigen::VectorXd u;
    Eigen::VectorXd w;
};

using CoordinatePair = std::pair<std::size_t, std::size_t>;

/// ||u ^ w|| = sqrt(|u|^2 |w|^2 - <u,w>^2).
double wedge_norm(const Eigen::VectorXd& u, const Eigen::VectorXd& w);

/// Closed-form curvature of the plane spanned by X_i, X_j. Indices are 0-based, distinct, and
/// different from the height index; the result does not depend on their order.
double sectional_special(const SeparableSurface& s, const SurfacePoint& p, std::size_t i, std::size_t j);

/// Curvature of an arbitrary tangent plane from the implicit-surface Gauss equation
/// K = (H(X,X) H(Y,Y) - H(X,Y)^2) / ||grad F||^2 on an orthonormalized basis {X, Y}.
/// Throws std::invalid_argument if the plane is degenerate or not tangent.
double sectional_oracle(const SeparableSurface& s, const SurfacePoint& p, const PlaneSection& sec);

/// Plane spanned by the explicit coordinate tangent vectors X_i, X_j.
PlaneSection coordinate_plane(const SeparableSurface& s, const SurfacePoint& p, std::size_t i, std::size_t j);

/// Random tangent plane: two random n-vectors projected onto T_pM and orthonormalized.
/// Resamples up to 100 times on a degenerate draw.
PlaneSection random_tangent_plane(const SeparableSurface& s, const SurfacePoint& p, Rng& rng);

/// Numerator of the closed form: f_i'^2 f_j'' f_h'' + f_j'^2 f_i'' f_h'' + f_h'^2 f_i'' f_j''.
double flatness_residual(const SeparableSurface& s, const SurfacePoint& p, std::size_t i, std::size_t j);

/// With X_k = f_k'^2 and X_k' = 2 f_k'':
/// K0 (X_i + X_j + X_h) sum_k X_k - (X_i X_j' X_h' + X_j X_i' X_h' + X_h X_i' X_j').
/// Vanishes exactly when the (i, j) section has curvature K0 / 4.
double constk_residual(const SeparableSurface& s, const SurfacePoint& p, std::size_t i, std::size_t j, double k0);

struct ScanPolicy {
    std::size_t oblique_planes = 0;
    std::uint64_t seed = 0;
    double constancy_tol = kDefaultConstancyTol;
    double equivalence_tol = kEquivalenceTol;
    /// When set, every coordinate-pair sample also carries constk_residual(.., k0).
    std::optional<double> k0;
    unsigned threads = 1;
};

struct CurvatureSample {
    std::size_t point_index = 0;
    std::optional<CoordinatePair> pair;
    std::optional<PlaneSection> plane;
    std::optional<double> k_special;
    double k_oracle = 0.0;
    std::optional<double> residual_flat;
    std::optional<double> residual_constk;
    /// |k_special - k_oracle| within equivalence_tol (true when k_special is absent).
    bool equivalent = true;

    /// The value used for the constancy statistics.
    double k() const { return k_special.value_or(k_oracle); }
};

struct PointFailure {
    std::size_t point_index = 0;
    std::string reason;
};

enum class Verdict { Constant, NonConstant, Undetermined };

std::string to_string(Verdict v);

struct CurvatureReport {
    std::uint64_t seed = 0;
    double constancy_tol = kDefaultConstancyTol;
    std::vector<SurfacePoint> points;
    std::vector<CurvatureSample> samples;
    std::vector<PointFailure> failures;
    std::size_t count = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double spread = 0.0;
    std::size_t flagged = 0;
    Verdict verdict = Verdict::Undetermined;

    /// Mean curvature when the verdict is Constant.
    std::optional<double> estimate() const
    {
        return verdict == Verdict::Constant ? std::optional<double>(mean) : std::nullopt;
    }
};

/// Evaluate every coordinate pair (and policy.oblique_planes random planes) at each point and
/// summarize. Per-point failures are recorded, not thrown. Output is independent of policy.threads.
CurvatureReport scan_constancy(const SeparableSurface& s, std::span<const SurfacePoint> points,
                               const ScanPolicy& policy);

} // namespace sepcurv
