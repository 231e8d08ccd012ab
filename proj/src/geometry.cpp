#include "sepcurv/geometry.hpp"

#include "sepcurv/error.hpp"
#include "sepcurv/random.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace sepcurv {

SeparableSurface::SeparableSurface(std::vector<Function1D> funcs, std::size_t height)
    : funcs_(std::move(funcs)), height_(height == kLastCoordinate ? funcs_.size() - 1 : height)
{
    if (funcs_.size() < 3) {
        throw std::invalid_argument("a separable hypersurface needs n >= 3 functions");
    }
    if (height_ >= funcs_.size()) {
        throw std::invalid_argument("height index out of range");
    }
    for (std::size_t k = 0; k < funcs_.size(); ++k) {
        if (k != height_) {
            tangent_.push_back(k);
        }
    }
}

std::vector<Jet2> SeparableSurface::jets(const Eigen::VectorXd& x) const
{
    if (static_cast<std::size_t>(x.size()) != funcs_.size()) {
        throw std::invalid_argument("point dimension does not match surface dimension");
    }
    std::vector<Jet2> out;
    out.reserve(funcs_.size());
    for (std::size_t k = 0; k < funcs_.size(); ++k) {
        out.push_back(funcs_[k].eval(x[static_cast<Eigen::Index>(k)]));
    }
    return out;
}

double on_surface_tolerance(std::span<const Jet2> jets)
{
    double scale = 0.0;
    for (const auto& j : jets) {
        scale += std::abs(j.v);
    }
    return kOnSurfaceRelTol * std::max(1.0, scale);
}

namespace {

double level_value(std::span<const Jet2> jets)
{
    double sum = 0.0;
    for (const auto& j : jets) {
        sum += j.v;
    }
    return sum;
}

} // namespace

SurfacePoint make_surface_point(const SeparableSurface& s, const Eigen::VectorXd& coords)
{
    const auto jets = s.jets(coords);
    const double residual = std::abs(level_value(jets));
    if (residual > on_surface_tolerance(jets)) {
        throw DomainError("point is off the surface (|F| = " + std::to_string(residual) + ")");
    }
    return {coords, residual};
}

void check_regular(const SeparableSurface& s, std::span<const Jet2> jets)
{
    double norm2 = 0.0;
    for (const auto& j : jets) {
        norm2 += j.d1 * j.d1;
    }
    if (!(std::sqrt(norm2) >= kRegularityThreshold)) {
        throw RegularityError("gradient norm " + format_real(std::sqrt(norm2)) + " below regularity threshold " +
                              format_real(kRegularityThreshold));
    }
    if (!(std::abs(jets[s.height()].d1) >= kRegularityThreshold)) {
        throw RegularityError("|f" + std::to_string(s.height() + 1) + "'| = " + format_real(std::abs(jets[s.height()].d1)) +
                              " below regularity threshold " + format_real(kRegularityThreshold));
    }
}

SurfacePoint solve_height(const SeparableSurface& s, const Eigen::VectorXd& partial, Interval bracket)
{
    const auto& tangent = s.tangent_indices();
    if (static_cast<std::size_t>(partial.size()) != tangent.size()) {
        throw std::invalid_argument("partial point must have n-1 coordinates");
    }
    const Function1D& fh = s.function(s.height());
    if (!bracket.is_valid() || !fh.domain().contains(bracket.lo) || !fh.domain().contains(bracket.hi)) {
        throw RootError("height bracket must be a non-empty interval inside the height function's domain");
    }

    Eigen::VectorXd x(static_cast<Eigen::Index>(s.dimension()));
    double target = 0.0;
    double others_scale = 0.0;
    for (std::size_t t = 0; t < tangent.size(); ++t) {
        const double xk = partial[static_cast<Eigen::Index>(t)];
        x[static_cast<Eigen::Index>(tangent[t])] = xk;
        const double v = s.function(tangent[t]).eval(xk).v;
        target -= v;
        others_scale += std::abs(v);
    }

    auto g = [&](double y) { return fh.eval(y).v - target; };
    // A few extra Newton steps once inside tolerance, kept only while |g| keeps dropping.
    auto polish = [&](double y, double gy, double slope, double lo, double hi) {
        for (int k = 0; k < 3 && gy != 0.0 && slope != 0.0; ++k) {
            const double next = y - gy / slope;
            if (!(next >= lo && next <= hi) || next == y) {
                break;
            }
            const Jet2 j = fh.eval(next);
            const double gn = j.v - target;
            if (!(std::abs(gn) < std::abs(gy))) {
                break;
            }
            y = next;
            gy = gn;
            slope = j.d1;
        }
        return y;
    };
    double a = bracket.lo;
    double b = bracket.hi;
    double ga = g(a);
    const double gb = g(b);
    double root = 0.0;
    bool done = false;
    if (ga == 0.0) {
        root = a;
        done = true;
    } else if (gb == 0.0) {
        root = b;
        done = true;
    } else if (std::signbit(ga) == std::signbit(gb)) {
        throw RootError("no sign change of the height equation in the bracket");
    }

    double y = 0.5 * (a + b);
    for (int iter = 0; !done && iter < kMaxRootIterations; ++iter) {
        const Jet2 j = fh.eval(y);
        const double gy = j.v - target;
        if (std::abs(gy) <= kOnSurfaceRelTol * std::max(1.0, others_scale + std::abs(j.v))) {
            root = polish(y, gy, j.d1, std::min(a, b), std::max(a, b));
            done = true;
            break;
        }
        if (std::signbit(gy) == std::signbit(ga)) {
            a = y;
            ga = gy;
        } else {
            b = y;
        }
        const double newton = j.d1 != 0.0 ? y - gy / j.d1 : std::nan("");
        const double next = (newton > std::min(a, b) && newton < std::max(a, b)) ? newton : 0.5 * (a + b);
        if (next == y) {
            root = y;
            done = true;
            break;
        }
        y = next;
    }
    if (!done) {
        throw RootError("height solve did not converge in " + std::to_string(kMaxRootIterations) + " iterations");
    }

    x[static_cast<Eigen::Index>(s.height())] = root;
    const auto jets = s.jets(x);
    check_regular(s, jets);
    const double residual = std::abs(level_value(jets));
    if (residual > on_surface_tolerance(jets)) {
        throw RootError("height solve stalled with residual " + std::to_string(residual));
    }
    return {x, residual};
}

Eigen::VectorXd gradient(const SeparableSurface& s, const SurfacePoint& p)
{
    const auto jets = s.jets(p.coords);
    Eigen::VectorXd grad(static_cast<Eigen::Index>(jets.size()));
    for (std::size_t k = 0; k < jets.size(); ++k) {
        grad[static_cast<Eigen::Index>(k)] = jets[k].d1;
    }
    return grad;
}

Eigen::VectorXd unit_normal(const SeparableSurface& s, const SurfacePoint& p)
{
    const Eigen::VectorXd grad = gradient(s, p);
    const double norm = grad.norm();
    if (!(norm >= kRegularityThreshold)) {
        throw RegularityError("gradient norm " + format_real(norm) + " below regularity threshold " +
                              format_real(kRegularityThreshold));
    }
    return grad / norm;
}

TangentFrame tangent_frame(const SeparableSurface& s, const SurfacePoint& p)
{
    const auto jets = s.jets(p.coords);
    check_regular(s, jets);

    const auto& tangent = s.tangent_indices();
    const auto n = static_cast<Eigen::Index>(s.dimension());
    const auto m = static_cast<Eigen::Index>(tangent.size());
    const Jet2& fh = jets[s.height()];

    double norm2 = 0.0;
    Eigen::VectorXd grad(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        grad[k] = jets[static_cast<std::size_t>(k)].d1;
        norm2 += grad[k] * grad[k];
    }
    const double norm = std::sqrt(norm2);

    TangentFrame frame;
    frame.normal = grad / norm;
    frame.gram.resize(m, m);
    frame.second_form.resize(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        const Jet2& fi = jets[tangent[static_cast<std::size_t>(a)]];
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        x[static_cast<Eigen::Index>(tangent[static_cast<std::size_t>(a)])] = 1.0;
        x[static_cast<Eigen::Index>(s.height())] = -fi.d1 / fh.d1;
        frame.basis.push_back(std::move(x));

        for (Eigen::Index b = 0; b < m; ++b) {
            const Jet2& fj = jets[tangent[static_cast<std::size_t>(b)]];
            const double cross = fi.d1 * fj.d1 / (fh.d1 * fh.d1);
            if (a == b) {
                const double ratio = fi.d1 / fh.d1;
                frame.gram(a, b) = 1.0 + ratio * ratio;
                frame.second_form(a, b) = -(fi.d2 + fi.d1 * fi.d1 * fh.d2 / (fh.d1 * fh.d1)) / norm;
            } else {
                frame.gram(a, b) = cross;
                frame.second_form(a, b) = -(cross * fh.d2) / norm;
            }
        }
    }
    return frame;
}

SampleSet sample_surface(const SeparableSurface& s, const SamplingBox& box, std::size_t count, std::uint64_t seed,
                         std::size_t max_draw_factor)
{
    constexpr std::size_t kMaxReasons = 16;
    const auto m = s.tangent_indices().size();
    if (box.ranges.size() != m) {
        throw std::invalid_argument("sampling box needs one range per tangent coordinate");
    }
    SampleSet out;
    Rng rng(seed);
    Eigen::VectorXd partial(static_cast<Eigen::Index>(m));
    const std::size_t max_draws = count * max_draw_factor;
    for (std::size_t draw = 0; draw < max_draws && out.points.size() < count; ++draw) {
        for (std::size_t t = 0; t < m; ++t) {
            partial[static_cast<Eigen::Index>(t)] = rng.uniform(box.ranges[t].lo, box.ranges[t].hi);
        }
        try {
            out.points.push_back(solve_height(s, partial, box.bracket));
        } catch (const Error& e) {
            ++out.rejected;
            if (out.rejection_reasons.size() < kMaxReasons) {
                out.rejection_reasons.emplace_back(e.what());
            }
        }
    }
    return out;
}

} // namespace sepcurv
