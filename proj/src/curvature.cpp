#include "sepcurv/curvature.hpp"

#include "sepcurv/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace sepcurv {

namespace {

CoordinatePair checked_pair(const SeparableSurface& s, std::size_t i, std::size_t j)
{
    const std::size_t n = s.dimension();
    if (i >= n || j >= n) {
        throw std::invalid_argument("coordinate index out of range");
    }
    if (i == j) {
        throw std::invalid_argument("coordinate pair needs two distinct indices");
    }
    if (i == s.height() || j == s.height()) {
        throw std::invalid_argument("coordinate pair must not include the height index");
    }
    return {std::min(i, j), std::max(i, j)};
}

struct PairJets {
    Jet2 fi;
    Jet2 fj;
    Jet2 fh;
    double grad_norm2 = 0.0;
};

PairJets pair_jets(const SeparableSurface& s, const SurfacePoint& p, CoordinatePair ij)
{
    const auto jets = s.jets(p.coords);
    check_regular(s, jets);
    PairJets out{jets[ij.first], jets[ij.second], jets[s.height()]};
    for (const auto& j : jets) {
        out.grad_norm2 += j.d1 * j.d1;
    }
    return out;
}

double numerator(const PairJets& q)
{
    return q.fi.d1 * q.fi.d1 * q.fj.d2 * q.fh.d2 + q.fj.d1 * q.fj.d1 * q.fi.d2 * q.fh.d2 +
           q.fh.d1 * q.fh.d1 * q.fi.d2 * q.fj.d2;
}

// Neumaier-compensated sum, evaluated in a fixed order.
class CompensatedSum {
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            c_ += (sum_ - t) + v;
        } else {
            c_ += (v - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + c_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

struct PointOutcome {
    std::vector<CurvatureSample> samples;
    std::optional<std::string> failure;
};

PointOutcome evaluate_point(const SeparableSurface& s, const SurfacePoint& p, std::size_t index,
                            const ScanPolicy& policy)
{
    PointOutcome out;
    try {
        check_regular(s, s.jets(p.coords));
        const auto& tangent = s.tangent_indices();
        for (std::size_t a = 0; a < tangent.size(); ++a) {
            for (std::size_t b = a + 1; b < tangent.size(); ++b) {
                const std::size_t i = tangent[a];
                const std::size_t j = tangent[b];
                CurvatureSample sample;
                sample.point_index = index;
                sample.pair = CoordinatePair{i, j};
                sample.k_special = sectional_special(s, p, i, j);
                sample.k_oracle = sectional_oracle(s, p, coordinate_plane(s, p, i, j));
                sample.residual_flat = flatness_residual(s, p, i, j);
                if (policy.k0) {
                    sample.residual_constk = constk_residual(s, p, i, j, *policy.k0);
                }
                sample.equivalent = std::abs(*sample.k_special - sample.k_oracle) <=
                                    policy.equivalence_tol * std::max(1.0, std::abs(sample.k_oracle));
                out.samples.push_back(std::move(sample));
            }
        }
        if (policy.oblique_planes > 0) {
            Rng rng(derive_seed(policy.seed, index));
            for (std::size_t r = 0; r < policy.oblique_planes; ++r) {
                CurvatureSample sample;
                sample.point_index = index;
                sample.plane = random_tangent_plane(s, p, rng);
                sample.k_oracle = sectional_oracle(s, p, *sample.plane);
                out.samples.push_back(std::move(sample));
            }
        }
    } catch (const Error& e) {
        out.samples.clear();
        out.failure = e.what();
    } catch (const std::invalid_argument& e) {
        out.samples.clear();
        out.failure = e.what();
    }
    return out;
}

} // namespace

double wedge_norm(const Eigen::VectorXd& u, const Eigen::VectorXd& w)
{
    const double uw = u.dot(w);
    return std::sqrt(std::max(0.0, u.squaredNorm() * w.squaredNorm() - uw * uw));
}

double sectional_special(const SeparableSurface& s, const SurfacePoint& p, std::size_t i, std::size_t j)
{
    const auto q = pair_jets(s, p, checked_pair(s, i, j));
    const double plane = q.fi.d1 * q.fi.d1 + q.fj.d1 * q.fj.d1 + q.fh.d1 * q.fh.d1;
    return numerator(q) / (q.grad_norm2 * plane);
}

double flatness_residual(const SeparableSurface& s, const SurfacePoint& p, std::size_t i, std::size_t j)
{
    const auto ij = checked_pair(s, i, j);
    const auto jets = s.jets(p.coords);
    return numerator(PairJets{jets[ij.first], jets[ij.second], jets[s.height()]});
}

double constk_residual(const SeparableSurface& s, const SurfacePoint& p, std::size_t i, std::size_t j, double k0)
{
    if (!std::isfinite(k0)) {
        throw std::invalid_argument("K0 must be finite");
    }
    const auto ij = checked_pair(s, i, j);
    const auto jets = s.jets(p.coords);
    check_regular(s, jets);
    double total = 0.0;
    for (const auto& jet : jets) {
        total += jet.d1 * jet.d1;
    }
    const auto sq = [](const Jet2& f) { return f.d1 * f.d1; };
    const auto dsq = [](const Jet2& f) { return 2.0 * f.d2; };
    const Jet2& fi = jets[ij.first];
    const Jet2& fj = jets[ij.second];
    const Jet2& fh = jets[s.height()];
    const double lhs = k0 * (sq(fi) + sq(fj) + sq(fh)) * total;
    const double rhs = sq(fi) * dsq(fj) * dsq(fh) + sq(fj) * dsq(fi) * dsq(fh) + sq(fh) * dsq(fi) * dsq(fj);
    return lhs - rhs;
}

double sectional_oracle(const SeparableSurface& s, const SurfacePoint& p, const PlaneSection& sec)
{
    const auto n = static_cast<Eigen::Index>(s.dimension());
    if (sec.u.size() != n || sec.w.size() != n) {
        throw std::invalid_argument("plane vectors must have the surface dimension");
    }
    const auto jets = s.jets(p.coords);
    check_regular(s, jets);
    const Eigen::VectorXd normal = unit_normal(s, p);
    for (const auto* v : {&sec.u, &sec.w}) {
        if (std::abs(v->dot(normal)) > kTangencyTol * std::max(1.0, v->norm())) {
            throw std::invalid_argument("plane vector is not tangent to the surface");
        }
    }
    if (!(wedge_norm(sec.u, sec.w) > kPlaneIndependenceTol)) {
        throw std::invalid_argument("degenerate plane section");
    }

    // Gram-Schmidt with one re-orthogonalization pass.
    const Eigen::VectorXd e1 = sec.u.normalized();
    Eigen::VectorXd e2 = sec.w - sec.w.dot(e1) * e1;
    e2 -= e2.dot(e1) * e1;
    e2.normalize();

    // F is a sum of single-variable terms, so its ambient Hessian is diag(f_k'').
    Eigen::VectorXd hess(n);
    double grad_norm2 = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        hess[k] = jets[static_cast<std::size_t>(k)].d2;
        grad_norm2 += jets[static_cast<std::size_t>(k)].d1 * jets[static_cast<std::size_t>(k)].d1;
    }
    const double h11 = (hess.array() * e1.array() * e1.array()).sum();
    const double h22 = (hess.array() * e2.array() * e2.array()).sum();
    const double h12 = (hess.array() * e1.array() * e2.array()).sum();
    return (h11 * h22 - h12 * h12) / grad_norm2;
}

PlaneSection coordinate_plane(const SeparableSurface& s, const SurfacePoint& p, std::size_t i, std::size_t j)
{
    checked_pair(s, i, j);
    const auto jets = s.jets(p.coords);
    check_regular(s, jets);
    const auto n = static_cast<Eigen::Index>(s.dimension());
    const auto h = static_cast<Eigen::Index>(s.height());
    auto basis_vector = [&](std::size_t k) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        x[static_cast<Eigen::Index>(k)] = 1.0;
        x[h] = -jets[k].d1 / jets[s.height()].d1;
        return x;
    };
    return {basis_vector(i), basis_vector(j)};
}

PlaneSection random_tangent_plane(const SeparableSurface& s, const SurfacePoint& p, Rng& rng)
{
    constexpr int kMaxRetries = 100;
    const Eigen::VectorXd normal = unit_normal(s, p);
    const auto n = normal.size();
    auto draw = [&] {
        Eigen::VectorXd v(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            v[k] = rng.uniform(-1.0, 1.0);
        }
        return v;
    };
    auto project = [&](Eigen::VectorXd v) {
        v -= v.dot(normal) * normal;
        v -= v.dot(normal) * normal;
        return v;
    };
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        Eigen::VectorXd u = project(draw());
        Eigen::VectorXd w = project(draw());
        const double un = u.norm();
        if (!(un > kPlaneIndependenceTol)) {
            continue;
        }
        u /= un;
        w -= w.dot(u) * u;
        w = project(w);
        w -= w.dot(u) * u;
        const double wn = w.norm();
        if (!(wn > kPlaneIndependenceTol)) {
            continue;
        }
        w /= wn;
        if (wedge_norm(u, w) > kPlaneIndependenceTol) {
            return {u, w};
        }
    }
    throw RegularityError("could not draw a non-degenerate tangent plane");
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Constant:
        return "constant";
    case Verdict::NonConstant:
        return "non-constant";
    case Verdict::Undetermined:
        return "undetermined";
    }
    return "undetermined";
}

CurvatureReport scan_constancy(const SeparableSurface& s, std::span<const SurfacePoint> points,
                               const ScanPolicy& policy)
{
    if (points.size() < 2) {
        throw std::invalid_argument("a constancy scan needs at least two sample points");
    }

    std::vector<PointOutcome> outcomes(points.size());
    const unsigned threads = std::max(1u, std::min<unsigned>(policy.threads, static_cast<unsigned>(points.size())));
    if (threads == 1) {
        for (std::size_t k = 0; k < points.size(); ++k) {
            outcomes[k] = evaluate_point(s, points[k], k, policy);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t k = next++; k < points.size(); k = next++) {
                    outcomes[k] = evaluate_point(s, points[k], k, policy);
                }
            });
        }
    }

    CurvatureReport report;
    report.seed = policy.seed;
    report.constancy_tol = policy.constancy_tol;
    report.points.assign(points.begin(), points.end());
    report.min = std::numeric_limits<double>::infinity();
    report.max = -std::numeric_limits<double>::infinity();
    CompensatedSum sum;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        auto& outcome = outcomes[k];
        if (outcome.failure) {
            report.failures.push_back({k, *outcome.failure});
            continue;
        }
        for (auto& sample : outcome.samples) {
            const double kval = sample.k();
            report.min = std::min(report.min, kval);
            report.max = std::max(report.max, kval);
            sum.add(kval);
            ++report.count;
            if (!sample.equivalent) {
                ++report.flagged;
            }
            report.samples.push_back(std::move(sample));
        }
    }
    if (report.count == 0) {
        report.min = report.max = 0.0;
        report.verdict = Verdict::Undetermined;
        return report;
    }
    report.mean = sum.value() / static_cast<double>(report.count);
    report.spread = report.max - report.min;
    report.verdict = report.spread <= policy.constancy_tol ? Verdict::Constant : Verdict::NonConstant;
    return report;
}

} // namespace sepcurv
