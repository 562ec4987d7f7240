#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grasp/errors.hpp"
#include "grasp/geometry.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace grasp;

namespace {

bool same_vertex_set(const Polygon& p, const std::vector<Point2>& expected, double tol) {
    if (p.vertices.size() != expected.size()) return false;
    std::vector<bool> used(expected.size(), false);
    for (const auto& v : p.vertices) {
        bool found = false;
        for (size_t i = 0; i < expected.size(); ++i) {
            if (!used[i] && std::fabs(v.x - expected[i].x) < tol &&
                std::fabs(v.y - expected[i].y) < tol) {
                used[i] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

Polygon unit_square_at(double cx, double cy) {
    Polygon p;
    p.vertices = {{cx - 0.5, cy - 0.5}, {cx + 0.5, cy - 0.5},
                  {cx + 0.5, cy + 0.5}, {cx - 0.5, cy + 0.5}};
    return p;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

GraspRect random_rect(std::mt19937_64& rng) {
    return GraspRect(uniform(rng, 0.0, 100.0), uniform(rng, 0.0, 100.0),
                     uniform(rng, 1.0, 40.0), uniform(rng, 1.0, 40.0),
                     uniform(rng, 0.0, 180.0));
}

} // namespace

TEST_CASE("rect_corners axis-aligned") {
    const Polygon p = rect_corners(GraspRect(2, 1, 2, 4, 0));
    REQUIRE(p.vertices.size() == 4);
    CHECK(same_vertex_set(p, {{0, 0}, {4, 0}, {4, 2}, {0, 2}}, 1e-12));
    CHECK(p.is_convex_ccw());
    CHECK(p.area() == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("rect_corners 90 degrees swaps extents") {
    const Polygon p = rect_corners(GraspRect(0, 0, 2, 4, 90));
    CHECK(same_vertex_set(p, {{1, -2}, {1, 2}, {-1, 2}, {-1, -2}}, 1e-12));
    CHECK(p.is_convex_ccw());
}

TEST_CASE("rect_corners rotation preserves area") {
    const Polygon p = rect_corners(GraspRect(0, 0, 1, 1, 45));
    CHECK(std::fabs(p.area() - 1.0) < 1e-9);
}

TEST_CASE("rect_corners area matches h*w for random rectangles") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const GraspRect g = random_rect(rng);
        const Polygon p = rect_corners(g);
        CHECK(p.is_convex_ccw());
        CHECK(std::fabs(p.area() - g.area()) / g.area() < 1e-9);
    }
}

TEST_CASE("GraspRect canonicalizes theta and rejects bad extents") {
    CHECK(GraspRect(0, 0, 1, 1, 180).theta() == doctest::Approx(0.0));
    CHECK(GraspRect(0, 0, 1, 1, 190).theta() == doctest::Approx(10.0));
    CHECK(GraspRect(0, 0, 1, 1, -10).theta() == doctest::Approx(170.0));
    CHECK(GraspRect(0, 0, 1, 1, 540).theta() == doctest::Approx(0.0));
    CHECK(GraspRect(0, 0, 1, 1, 1e-9).theta() >= 0.0);
    CHECK(GraspRect(0, 0, 1, 1, -1e-12).theta() < 180.0);
    CHECK_THROWS_AS(GraspRect(0, 0, 0, 1, 0), Error);
    CHECK_THROWS_AS(GraspRect(0, 0, 1, -2, 0), Error);
}

TEST_CASE("convex_intersection_area identity and disjoint") {
    const Polygon sq = unit_square_at(0.5, 0.5);
    CHECK(convex_intersection_area(sq, sq) == doctest::Approx(1.0).epsilon(1e-12));
    const Polygon far = unit_square_at(10.5, 10.5);
    CHECK(convex_intersection_area(sq, far) == 0.0);
}

TEST_CASE("convex_intersection_area half-overlapping unit squares") {
    const Polygon a = unit_square_at(0, 0);
    const Polygon b = unit_square_at(0.5, 0);
    // closed form: overlap is 0.5 x 1
    CHECK(convex_intersection_area(a, b) == doctest::Approx(0.5).epsilon(1e-12));
    // cross-check against the rasterization oracle at a 0.01-px grid
    const GraspRect ra(0, 0, 1, 1, 0), rb(0.5, 0, 1, 1, 0);
    CHECK(std::fabs(oracles::raster_intersection_area(ra, rb, 0.01) - 0.5) < 5e-3);
}

TEST_CASE("jaccard basic values") {
    const GraspRect a(0, 0, 1, 1, 0);
    CHECK(jaccard(a, a) == 1.0); // exact
    const GraspRect far(20, 20, 1, 1, 0);
    CHECK(jaccard(a, far) == 0.0);
    const GraspRect b(0.5, 0, 1, 1, 0);
    // intersection 0.5, union 1.5
    CHECK(jaccard(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("jaccard symmetry and self-identity over random pairs") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const GraspRect a = random_rect(rng);
        const GraspRect b = random_rect(rng);
        CHECK(std::fabs(jaccard(a, b) - jaccard(b, a)) < 1e-12);
        CHECK(jaccard(a, a) == 1.0);
        const double j = jaccard(a, b);
        CHECK(j >= 0.0);
        CHECK(j <= 1.0);
    }
}

TEST_CASE("jaccard translation invariance") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const GraspRect a = random_rect(rng);
        const GraspRect b = random_rect(rng);
        const double dx = uniform(rng, -50, 50), dy = uniform(rng, -50, 50);
        const GraspRect a2(a.x() + dx, a.y() + dy, a.h(), a.w(), a.theta());
        const GraspRect b2(b.x() + dx, b.y() + dy, b.h(), b.w(), b.theta());
        CHECK(std::fabs(jaccard(a, b) - jaccard(a2, b2)) < 1e-9);
    }
}

TEST_CASE("jaccard rotation invariance about a common point") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
        const GraspRect a = random_rect(rng);
        const GraspRect b = random_rect(rng);
        const double phi = uniform(rng, 0, 360);
        const double c = std::cos(phi * std::numbers::pi / 180.0);
        const double s = std::sin(phi * std::numbers::pi / 180.0);
        const double px = 50, py = 50;
        auto rotate = [&](const GraspRect& g) {
            const double rx = px + c * (g.x() - px) - s * (g.y() - py);
            const double ry = py + s * (g.x() - px) + c * (g.y() - py);
            return GraspRect(rx, ry, g.h(), g.w(), g.theta() + phi);
        };
        CHECK(std::fabs(jaccard(a, b) - jaccard(rotate(a), rotate(b))) < 1e-6);
    }
}

TEST_CASE("jaccard agrees with rasterization oracle on 1000 random pairs") {
    std::mt19937_64 rng(42);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const GraspRect a = random_rect(rng);
        const GraspRect b = random_rect(rng);
        const double ours = jaccard(a, b);
        const double ref = oracles::raster_jaccard(a, b, 0.05);
        worst = std::max(worst, std::fabs(ours - ref));
    }
    CHECK(worst < 2e-2);
}

TEST_CASE("angle_delta") {
    CHECK(angle_delta(35, 35) == 0.0);
    CHECK(angle_delta(10, 170) == doctest::Approx(20.0));
    CHECK(angle_delta(0, 90) == doctest::Approx(90.0));
    for (int k = -3; k <= 3; ++k) {
        CHECK(angle_delta(37.5, 37.5 + 180.0 * k) == doctest::Approx(0.0).epsilon(1e-12));
    }
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
        const double t1 = uniform(rng, -720, 720), t2 = uniform(rng, -720, 720);
        const double d = angle_delta(t1, t2);
        CHECK(d >= 0.0);
        CHECK(d <= 90.0);
        CHECK(angle_delta(t1, t2) == doctest::Approx(angle_delta(t2, t1)));
    }
}
