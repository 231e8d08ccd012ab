#pragma once

#include "sepcurv/funcalc.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sepcurv {

/// Lower bound on ||grad F|| and |f'_height|; points below either are rejected.
inline constexpr double kRegularityThreshold = 1e-8;

/// Relative tolerance on |sum f_k(x_k)| for a point to count as on the surface.
inline constexpr double kOnSurfaceRelTol = 1e-12;

inline constexpr int kMaxRootIterations = 200;

/// The level set f_1(x_1) + ... + f_n(x_n) = 0. Coordinate `height` is the one solved for;
/// indices are 0-based throughout the library.
class SeparableSurface {
public:
    static constexpr std::size_t kLastCoordinate = static_cast<std::size_t>(-1);

    /// `height` defaults to the last coordinate.
    explicit SeparableSurface(std::vector<Function1D> funcs, std::size_t height = kLastCoordinate);

    std::size_t dimension() const { return funcs_.size(); }
    std::size_t height() const { return height_; }
    const Function1D& function(std::size_t k) const { return funcs_.at(k); }
    const std::vector<Function1D>& functions() const { return funcs_; }

    /// Coordinates other than the height, in increasing order.
    const std::vector<std::size_t>& tangent_indices() const { return tangent_; }

    /// Jets of every f_k at the matching coordinate of x.
    std::vector<Jet2> jets(const Eigen::VectorXd& x) const;

private:
    std::vector<Function1D> funcs_;
    std::size_t height_;
    std::vector<std::size_t> tangent_;
};

/// A point on the surface together with its residual |sum f_k(x_k)|.
struct SurfacePoint {
    Eigen::VectorXd coords;
    double residual = 0.0;
};

/// kOnSurfaceRelTol * max(1, sum_k |f_k(x_k)|).
double on_surface_tolerance(std::span<const Jet2> jets);

/// Validate that `coords` lies on the surface. Throws DomainError if off the surface or outside a domain.
SurfacePoint make_surface_point(const SeparableSurface& s, const Eigen::VectorXd& coords);

/// Solve for the height coordinate given the others (ordered as tangent_indices()) by bracketed
/// Newton with bisection fallback. Throws RootError or RegularityError.
SurfacePoint solve_height(const SeparableSurface& s, const Eigen::VectorXd& partial, Interval bracket);

/// Throws RegularityError if ||grad F|| or |f'_height| falls below kRegularityThreshold.
void check_regular(const SeparableSurface& s, std::span<const Jet2> jets);

Eigen::VectorXd gradient(const SeparableSurface& s, const SurfacePoint& p);

/// grad F / ||grad F||, never flipped.
Eigen::VectorXd unit_normal(const SeparableSurface& s, const SurfacePoint& p);

/// Coordinate tangent frame X_i = e_i - (f'_i / f'_h) e_h, with metric and second fundamental form
/// from their closed forms. Matrices are indexed by position in tangent_indices().
struct TangentFrame {
    std::vector<Eigen::VectorXd> basis;
    Eigen::VectorXd normal;
    Eigen::MatrixXd gram;
    Eigen::MatrixXd second_form;
};

TangentFrame tangent_frame(const SeparableSurface& s, const SurfacePoint& p);

/// Where to draw random points: one range per tangent coordinate plus the height bracket.
struct SamplingBox {
    std::vector<Interval> ranges;
    Interval bracket;
};

struct SampleSet {
    std::vector<SurfacePoint> points;
    std::size_t rejected = 0;
    std::vector<std::string> rejection_reasons;
};

/// Draw `count` regular surface points. Draws whose height solve fails are rejected and
/// redrawn, up to count * max_draw_factor draws in total.
SampleSet sample_surface(const SeparableSurface& s, const SamplingBox& box, std::size_t count, std::uint64_t seed,
                         std::size_t max_draw_factor = 100);

} // namespace sepcurv
