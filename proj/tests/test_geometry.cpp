#include "doctest.h"

#include "sepcurv/error.hpp"
#include "sepcurv/families.hpp"
#include "sepcurv/geometry.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace sepcurv;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SeparableSurface sphere4() { return make_hypersphere({0, 0, 0, 0}, 2.0); }

SeparableSurface cobb_douglas_half()
{
    // f_i = -1/2 log x_i, f_4 = log x_4: the flat Cobb-Douglas graph x_4 = sqrt(x_1 x_2 x_3).
    const Interval pos{0, kInf};
    return SeparableSurface({parse_function("-0.5*log(x)", pos), parse_function("-0.5*log(x)", pos),
                             parse_function("-0.5*log(x)", pos), parse_function("log(x)", pos)});
}

SeparableSurface plane4() { return make_hyperplane({1, 1, 1, 1}); }

Eigen::VectorXd vec(std::initializer_list<double> v)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) {
        out[k++] = x;
    }
    return out;
}

} // namespace

TEST_CASE("surface construction")
{
    CHECK_THROWS_AS(SeparableSurface({parse_function("x"), parse_function("x")}), std::invalid_argument);
    CHECK_THROWS_AS(SeparableSurface({parse_function("x"), parse_function("x"), parse_function("x")}, 3),
                    std::invalid_argument);
    const SeparableSurface s({parse_function("x"), parse_function("x"), parse_function("x")}, 1);
    CHECK(s.height() == 1);
    CHECK(s.tangent_indices() == std::vector<std::size_t>{0, 2});
    CHECK(plane4().height() == 3);
}

TEST_CASE("solve_height examples")
{
    const auto p = solve_height(sphere4(), vec({1, 1, 1}), Interval{0, 2});
    CHECK(p.coords[3] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.residual <= 1e-12);

    const auto cd = solve_height(make_cobb_douglas_sqrt(1.0, 4), vec({1, 1, 1}), Interval{0.5, 2});
    CHECK(cd.coords[3] == doctest::Approx(1.0).epsilon(1e-14));

    const auto hp = solve_height(plane4(), vec({1, 2, 3}), Interval{-10, 0});
    CHECK(hp.coords[3] == doctest::Approx(-6.0).epsilon(1e-14));

    // Monotone but non-polynomial height: needs both Newton and bisection.
    const SeparableSurface e({parse_function("x^2"), parse_function("x"), parse_function("exp(x) - 3")});
    const auto q = solve_height(e, vec({0.5, 0.25}), Interval{-30, 30});
    CHECK(std::exp(q.coords[2]) == doctest::Approx(3 - 0.5).epsilon(1e-13));
}

TEST_CASE("solve_height error paths")
{
    CHECK_THROWS_AS(solve_height(sphere4(), vec({1, 1, 1}), Interval{2, 3}), RootError);
    CHECK_THROWS_AS(solve_height(make_cobb_douglas_sqrt(1.0, 4), vec({1, 1, 1}), Interval{0, 2}), RootError);
    CHECK_THROWS_AS(solve_height(sphere4(), vec({1, 1}), Interval{0, 2}), std::invalid_argument);
    // The sphere's equator is a double root: no sign change.
    CHECK_THROWS_AS(solve_height(sphere4(), vec({2, 0, 0}), Interval{-1, 1}), RootError);
    // A simple crossing where f_4' vanishes.
    const SeparableSurface cubic({parse_function("x"), parse_function("x"), parse_function("x"), parse_function("x^3")});
    CHECK_THROWS_AS(solve_height(cubic, vec({1, -1, 0}), Interval{-1, 1}), RegularityError);
}

TEST_CASE("solve_height is idempotent")
{
    const auto s = make_cobb_douglas_sqrt(1.7, 5, {0.1, 0.2, 0.3, 0.4, 0.5});
    const auto box = default_sampling_box(CobbDouglasSqrtSpec{1.7, 5, {0.1, 0.2, 0.3, 0.4, 0.5}});
    const auto samples = sample_surface(s, box, 50, 3);
    REQUIRE(samples.points.size() == 50);
    for (const auto& p : samples.points) {
        const auto again = solve_height(s, p.coords.head(4), box.bracket);
        CHECK(std::abs(again.coords[4] - p.coords[4]) <= 1e-12);
    }
}

TEST_CASE("make_surface_point validates membership")
{
    CHECK_NOTHROW(make_surface_point(sphere4(), vec({1, 1, 1, 1})));
    CHECK_THROWS_AS(make_surface_point(sphere4(), vec({1, 1, 1, 1.1})), DomainError);
    CHECK_THROWS_AS(make_surface_point(cobb_douglas_half(), vec({1, 1, -1, 1})), DomainError);
}

TEST_CASE("unit normal examples")
{
    const auto plane_n = unit_normal(plane4(), make_surface_point(plane4(), vec({1, 2, 3, -6})));
    CHECK((plane_n - vec({0.5, 0.5, 0.5, 0.5})).norm() < 1e-15);

    const auto sphere_n = unit_normal(sphere4(), make_surface_point(sphere4(), vec({1, 1, 1, 1})));
    CHECK((sphere_n - vec({0.5, 0.5, 0.5, 0.5})).norm() < 1e-15);

    const auto cd = cobb_douglas_half();
    const auto p = make_surface_point(cd, vec({1, 1, 1, 1}));
    const Eigen::VectorXd expected = vec({-0.5, -0.5, -0.5, 1}) / std::sqrt(7.0 / 4.0);
    CHECK((unit_normal(cd, p) - expected).norm() < 1e-15);
    CHECK((testing::fd_normal(cd, p.coords) - expected).norm() < 1e-8);
}

TEST_CASE("tangent frame examples")
{
    const auto hp = tangent_frame(plane4(), make_surface_point(plane4(), vec({1, 2, 3, -6})));
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            CHECK(hp.gram(a, b) == (a == b ? 2.0 : 1.0));
            CHECK(hp.second_form(a, b) == 0.0);
        }
    }

    const auto sp = tangent_frame(sphere4(), make_surface_point(sphere4(), vec({1, 1, 1, 1})));
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            CHECK(sp.gram(a, b) == (a == b ? 2.0 : 1.0));
        }
    }

    const auto cd = tangent_frame(cobb_douglas_half(), make_surface_point(cobb_douglas_half(), vec({1, 1, 1, 1})));
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            CHECK(cd.gram(a, b) == (a == b ? 1.25 : 0.25));
        }
    }
    CHECK(cd.basis[1] == vec({0, 1, 0, 0.5}));
}

TEST_CASE("tangent frame invariants on random surfaces")
{
    Rng rng(99);
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 3 + rng.next() % 4;
        auto rs = testing::random_surface(rng, n);
        const auto samples = sample_surface(rs.surface, rs.box, 5, rng.next());
        for (const auto& p : samples.points) {
            const auto frame = tangent_frame(rs.surface, p);
            const auto grad = gradient(rs.surface, p);
            CHECK(std::abs(frame.normal.norm() - 1.0) <= 1e-12);
            Eigen::MatrixXd explicit_gram(frame.basis.size(), frame.basis.size());
            for (std::size_t a = 0; a < frame.basis.size(); ++a) {
                CHECK(std::abs(frame.basis[a].dot(grad)) <= 1e-10 * std::max(1.0, frame.basis[a].norm() * grad.norm()));
                CHECK(std::abs(frame.basis[a].dot(frame.normal)) <= 1e-10 * std::max(1.0, frame.basis[a].norm()));
                for (std::size_t b = 0; b < frame.basis.size(); ++b) {
                    explicit_gram(a, b) = frame.basis[a].dot(frame.basis[b]);
                }
            }
            const double scale = std::max(1.0, explicit_gram.cwiseAbs().maxCoeff());
            CHECK((frame.gram - explicit_gram).cwiseAbs().maxCoeff() <= 1e-12 * scale);
            CHECK((frame.gram - frame.gram.transpose()).cwiseAbs().maxCoeff() == 0.0);
            CHECK((frame.second_form - frame.second_form.transpose()).cwiseAbs().maxCoeff() <=
                  1e-14 * std::max(1.0, frame.second_form.cwiseAbs().maxCoeff()));
            Eigen::LLT<Eigen::MatrixXd> llt(frame.gram);
            CHECK(llt.info() == Eigen::Success);
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("sampling is deterministic and respects the box")
{
    const auto s = sphere4();
    const auto box = default_sampling_box(HypersphereSpec{{0, 0, 0, 0}, 2.0});
    const auto a = sample_surface(s, box, 40, 123);
    const auto b = sample_surface(s, box, 40, 123);
    REQUIRE(a.points.size() == 40);
    for (std::size_t k = 0; k < a.points.size(); ++k) {
        CHECK(a.points[k].coords == b.points[k].coords);
        for (int t = 0; t < 3; ++t) {
            CHECK(box.ranges[t].contains(a.points[k].coords[t]));
        }
        CHECK(a.points[k].coords[3] > 0);
    }
    // Points outside the unit ball have no root in the bracket and are redrawn.
    const SamplingBox wide{{{-3, 3}, {-3, 3}, {-3, 3}}, {0, 2}};
    const auto c = sample_surface(s, wide, 30, 1);
    CHECK(c.points.size() == 30);
    CHECK(c.rejected > 0);
    CHECK(!c.rejection_reasons.empty());
}
