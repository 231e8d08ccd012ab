#include "doctest.h"

#include "sepcurv/curvature.hpp"
#include "sepcurv/error.hpp"
#include "sepcurv/families.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace sepcurv;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) {
        out[k++] = x;
    }
    return out;
}

SeparableSurface sphere(double r, std::size_t n) { return make_hypersphere(std::vector<double>(n, 0.0), r); }

struct Fixture {
    SeparableSurface surface;
    SurfacePoint point;
};

Fixture sphere_at_ones() { return {sphere(2, 4), make_surface_point(sphere(2, 4), vec({1, 1, 1, 1}))}; }

Fixture cd_at_ones()
{
    auto s = make_cobb_douglas_sqrt(1.0, 4);
    auto p = make_surface_point(s, vec({1, 1, 1, 1}));
    return {std::move(s), std::move(p)};
}

Fixture plane_point()
{
    auto s = make_hyperplane({1, 1, 1, 1});
    auto p = make_surface_point(s, vec({0.3, -1.2, 2.0, -1.1}));
    return {std::move(s), std::move(p)};
}

} // namespace

TEST_CASE("sectional_special examples")
{
    const auto hp = plane_point();
    for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
        CHECK(sectional_special(hp.surface, hp.point, i, j) == 0.0);
    }
    const auto cd = cd_at_ones();
    CHECK(sectional_special(cd.surface, cd.point, 0, 1) == 0.0);

    const auto sp = sphere_at_ones();
    for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
        CHECK(sectional_special(sp.surface, sp.point, i, j) == doctest::Approx(0.25).epsilon(1e-15));
        const auto plane = coordinate_plane(sp.surface, sp.point, i, j);
        const double brute = testing::brute_force_sectional(sp.surface, sp.point.coords, plane.u, plane.w);
        CHECK(brute == doctest::Approx(0.25).epsilon(1e-6));
        CHECK(sectional_oracle(sp.surface, sp.point, plane) == doctest::Approx(0.25).epsilon(1e-14));
    }
}

TEST_CASE("sectional_special index errors and symmetry")
{
    const auto sp = sphere_at_ones();
    CHECK_THROWS_AS(sectional_special(sp.surface, sp.point, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(sectional_special(sp.surface, sp.point, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(sectional_special(sp.surface, sp.point, 0, 7), std::invalid_argument);
    CHECK_THROWS_AS(flatness_residual(sp.surface, sp.point, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(constk_residual(sp.surface, sp.point, 0, 3, 1.0), std::invalid_argument);

    Rng rng(17);
    for (int t = 0; t < 50; ++t) {
        auto rs = testing::random_surface(rng, 5);
        for (const auto& p : sample_surface(rs.surface, rs.box, 4, rng.next()).points) {
            for (std::size_t i = 0; i < 4; ++i) {
                for (std::size_t j = 0; j < 4; ++j) {
                    if (i != j) {
                        CHECK(sectional_special(rs.surface, p, i, j) == sectional_special(rs.surface, p, j, i));
                    }
                }
            }
        }
    }
}

TEST_CASE("regularity gate")
{
    // f_4' = 3 x^2 vanishes at x_4 = 0, which lies on the surface.
    const SeparableSurface s({parse_function("x"), parse_function("x"), parse_function("x^2"), parse_function("x^3")});
    const SurfacePoint p{vec({1, -1, 0, 0}), 0.0};
    CHECK_THROWS_AS(sectional_special(s, p, 0, 1), RegularityError);
    CHECK_THROWS_AS(sectional_oracle(s, p, PlaneSection{vec({1, 0, 0, 0}), vec({0, 1, 0, 0})}), RegularityError);
    CHECK_THROWS_AS(tangent_frame(s, p), RegularityError);
}

TEST_CASE("sectional_oracle examples")
{
    const auto hp = plane_point();
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        CHECK(sectional_oracle(hp.surface, hp.point, random_tangent_plane(hp.surface, hp.point, rng)) == 0.0);
    }
    const auto sp = sphere_at_ones();
    for (int t = 0; t < 20; ++t) {
        const auto plane = random_tangent_plane(sp.surface, sp.point, rng);
        CHECK(sectional_oracle(sp.surface, sp.point, plane) == doctest::Approx(0.25).epsilon(1e-14));
    }
    const auto cd = cd_at_ones();
    const double special = sectional_special(cd.surface, cd.point, 0, 1);
    const double oracle = sectional_oracle(cd.surface, cd.point, coordinate_plane(cd.surface, cd.point, 0, 1));
    CHECK(std::abs(special - oracle) <= 1e-10);
}

TEST_CASE("sectional_oracle rejects bad planes")
{
    const auto sp = sphere_at_ones();
    const auto x1 = coordinate_plane(sp.surface, sp.point, 0, 1).u;
    CHECK_THROWS_AS(sectional_oracle(sp.surface, sp.point, PlaneSection{x1, 2.0 * x1}), std::invalid_argument);
    CHECK_THROWS_AS(sectional_oracle(sp.surface, sp.point, PlaneSection{x1, vec({1, 1, 1, 1})}),
                    std::invalid_argument);
    CHECK_THROWS_AS(sectional_oracle(sp.surface, sp.point, PlaneSection{vec({1, -1, 0}), vec({0, 1, -1})}),
                    std::invalid_argument);
    CHECK(wedge_norm(vec({1, 0}), vec({0, 2})) == 2.0);
}

TEST_CASE("flatness and constant-K residual examples")
{
    const auto cd = cd_at_ones();
    CHECK(flatness_residual(cd.surface, cd.point, 0, 1) == 0.0);
    const auto hp = plane_point();
    CHECK(flatness_residual(hp.surface, hp.point, 1, 2) == 0.0);

    const SeparableSurface cubic({parse_function("x^3"), parse_function("x^3"), parse_function("x^3"), parse_function("x")});
    const auto p = make_surface_point(cubic, vec({1, 1, 1, -3}));
    CHECK(flatness_residual(cubic, p, 0, 1) == 36.0);

    const auto sp = sphere_at_ones();
    CHECK(std::abs(constk_residual(sp.surface, sp.point, 0, 1, 1.0)) <= 1e-10);
    CHECK(constk_residual(hp.surface, hp.point, 0, 1, 0.0) == 0.0);
    // flat surface: only the K0 term survives, K0 (1 + 1 + 4)(1 + 1 + 1 + 4) at the all-ones point
    CHECK(constk_residual(cd.surface, cd.point, 0, 1, 1.0) == 42.0);
    CHECK(constk_residual(cd.surface, cd.point, 0, 1, -1.0) == -42.0);
    CHECK_THROWS_AS(constk_residual(sp.surface, sp.point, 0, 1, std::nan("")), std::invalid_argument);
}

TEST_CASE("closed form, Hessian oracle and brute-force shape operator agree on random surfaces")
{
    Rng rng(31337);
    double worst_oracle = 0.0;
    double worst_brute = 0.0;
    int count = 0;
    for (int t = 0; t < 150; ++t) {
        const std::size_t n = 3 + rng.next() % 4;
        auto rs = testing::random_surface(rng, n);
        const auto samples = sample_surface(rs.surface, rs.box, 3, rng.next());
        const auto& tangent = rs.surface.tangent_indices();
        for (const auto& p : samples.points) {
            const std::size_t a = rng.next() % tangent.size();
            std::size_t b = rng.next() % tangent.size();
            if (a == b) {
                b = (a + 1) % tangent.size();
            }
            const double k = sectional_special(rs.surface, p, tangent[a], tangent[b]);
            const auto plane = coordinate_plane(rs.surface, p, tangent[a], tangent[b]);
            worst_oracle = std::max(worst_oracle, testing::rel_err(k, sectional_oracle(rs.surface, p, plane)));
            if (rs.surface.function(rs.surface.height()).eval(p.coords[static_cast<Eigen::Index>(n - 1)]).d1 > 1e-2) {
                worst_brute = std::max(
                    worst_brute, testing::rel_err(k, testing::brute_force_sectional(rs.surface, p.coords, plane.u, plane.w)));
            }
            ++count;
        }
    }
    CHECK(count > 300);
    CHECK(worst_oracle <= 1e-9);
    CHECK(worst_brute <= 1e-5);
}

TEST_CASE("second fundamental form closed form matches the Hessian pairing")
{
    Rng rng(8);
    for (int t = 0; t < 40; ++t) {
        auto rs = testing::random_surface(rng, 4);
        for (const auto& p : sample_surface(rs.surface, rs.box, 3, rng.next()).points) {
            const auto frame = tangent_frame(rs.surface, p);
            const auto jets = rs.surface.jets(p.coords);
            const double gnorm = gradient(rs.surface, p).norm();
            for (std::size_t a = 0; a < frame.basis.size(); ++a) {
                for (std::size_t b = 0; b < frame.basis.size(); ++b) {
                    double hess = 0.0;
                    for (std::size_t k = 0; k < jets.size(); ++k) {
                        hess += jets[k].d2 * frame.basis[a][k] * frame.basis[b][k];
                    }
                    // II = <-dN(X), Y> = -H(X, Y) / |grad F|
                    CHECK(testing::rel_err(frame.second_form(a, b), -hess / gnorm) <= 1e-9);
                }
            }
        }
    }
}

TEST_CASE("oracle is invariant under a change of basis of the plane")
{
    Rng rng(4242);
    for (int t = 0; t < 100; ++t) {
        auto rs = testing::random_surface(rng, 3 + rng.next() % 4);
        const auto pts = sample_surface(rs.surface, rs.box, 1, rng.next()).points;
        if (pts.empty()) {
            continue;
        }
        const auto& p = pts.front();
        const auto plane = random_tangent_plane(rs.surface, p, rng);
        const double k = sectional_oracle(rs.surface, p, plane);
        for (int g = 0; g < 5; ++g) {
            double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.uniform(-2, 2), d = rng.uniform(-2, 2);
            if (std::abs(a * d - b * c) < 0.1) {
                continue;
            }
            const PlaneSection other{a * plane.u + b * plane.w, c * plane.u + d * plane.w};
            CHECK(testing::rel_err(sectional_oracle(rs.surface, p, other), k) <= 1e-9);
        }
    }
}

TEST_CASE("flatness residual and constant-K residual track the curvature")
{
    Rng rng(77);
    for (int t = 0; t < 60; ++t) {
        auto rs = testing::random_surface(rng, 4);
        for (const auto& p : sample_surface(rs.surface, rs.box, 3, rng.next()).points) {
            const auto jets = rs.surface.jets(p.coords);
            double total = 0.0;
            for (const auto& j : jets) {
                total += j.d1 * j.d1;
            }
            const double plane = jets[0].d1 * jets[0].d1 + jets[1].d1 * jets[1].d1 + jets[3].d1 * jets[3].d1;
            const double k = sectional_special(rs.surface, p, 0, 1);
            const double num = flatness_residual(rs.surface, p, 0, 1);
            CHECK(testing::rel_err(num, k * total * plane) <= 1e-12 * std::max(1.0, std::abs(num)));
            // residual vanishes at K0 = 4K and is linear in K0 otherwise
            const double scale = std::max(1.0, 4.0 * std::abs(num));
            CHECK(std::abs(constk_residual(rs.surface, p, 0, 1, 4.0 * k)) <= 1e-12 * scale);
            const double off = constk_residual(rs.surface, p, 0, 1, 4.0 * k + 1.0);
            CHECK(off == doctest::Approx(plane * total).epsilon(1e-9));
        }
    }
}

TEST_CASE("scan_constancy examples")
{
    {
        const CobbDouglasSqrtSpec spec{1.0, 5, {}};
        const auto s = make_family(spec);
        const auto pts = sample_surface(s, default_sampling_box(spec), 100, 42).points;
        const auto report = scan_constancy(s, pts, ScanPolicy{.seed = 42});
        CHECK(report.verdict == Verdict::Constant);
        REQUIRE(report.estimate());
        CHECK(std::abs(*report.estimate()) <= 1e-9);
        CHECK(report.count == 100 * 6);
        CHECK(report.flagged == 0);
        CHECK(report.failures.empty());
    }
    {
        const HypersphereSpec spec{{0, 0, 0, 0}, 3.0};
        const auto s = make_family(spec);
        const auto pts = sample_surface(s, default_sampling_box(spec), 100, 7).points;
        const auto report = scan_constancy(s, pts, ScanPolicy{.oblique_planes = 5, .seed = 7});
        CHECK(report.verdict == Verdict::Constant);
        CHECK(std::abs(*report.estimate() - 1.0 / 9.0) <= 1e-9);
        CHECK(report.spread <= 1e-9);
        CHECK(report.count == 100 * (3 + 5));
    }
    {
        const SeparableSurface s({parse_function("exp(x)"), parse_function("exp(x)"), parse_function("exp(x)"),
                                  parse_function("exp(x)")});
        const SamplingBox box{{{-1, 0}, {-1, 0}, {-1, 0}}, {-40, 3}};
        // exp(x_4) = -sum exp(x_i) has no real solution; use a shifted copy with a reachable height.
        const SeparableSurface shifted({parse_function("exp(x)"), parse_function("exp(x)"), parse_function("exp(x)"),
                                        parse_function("exp(x) - 10")});
        const auto pts = sample_surface(shifted, box, 100, 9).points;
        REQUIRE(pts.size() == 100);
        const auto report = scan_constancy(shifted, pts, ScanPolicy{.seed = 9});
        CHECK(report.verdict == Verdict::NonConstant);
        CHECK(report.spread > 1e-3);
        CHECK_FALSE(report.estimate());
        CHECK(sample_surface(s, box, 3, 1).points.empty());
    }
}

TEST_CASE("scan_constancy records per-point failures and rejects tiny sample sets")
{
    const SeparableSurface s({parse_function("x"), parse_function("x"), parse_function("x^2"), parse_function("x^3")});
    std::vector<SurfacePoint> pts{{vec({1, -1, 0, 0}), 0.0}, make_surface_point(s, vec({1, 1, 1, -std::cbrt(3.0)}))};
    const auto report = scan_constancy(s, pts, ScanPolicy{});
    REQUIRE(report.failures.size() == 1);
    CHECK(report.failures[0].point_index == 0);
    CHECK(report.count == 3);
    CHECK_THROWS_AS(scan_constancy(s, std::span(pts).first(1), ScanPolicy{}), std::invalid_argument);
}

TEST_CASE("scan_constancy is independent of the thread count")
{
    const auto s = make_cobb_douglas(1.3, {0.55, 0.5, 0.5, 0.5});
    const SamplingBox box{{{0.5, 2}, {0.5, 2}, {0.5, 2}, {0.5, 2}}, {1e-3, 1e3}};
    const auto pts = sample_surface(s, box, 64, 5).points;
    const auto one = scan_constancy(s, pts, ScanPolicy{.oblique_planes = 4, .seed = 5, .threads = 1});
    const auto many = scan_constancy(s, pts, ScanPolicy{.oblique_planes = 4, .seed = 5, .threads = 7});
    REQUIRE(one.samples.size() == many.samples.size());
    CHECK(one.mean == many.mean);
    CHECK(one.min == many.min);
    CHECK(one.max == many.max);
    for (std::size_t k = 0; k < one.samples.size(); ++k) {
        CHECK(one.samples[k].k() == many.samples[k].k());
        CHECK(one.samples[k].point_index == many.samples[k].point_index);
    }
}
