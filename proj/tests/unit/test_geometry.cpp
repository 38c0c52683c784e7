#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "suitkit/geometry.hpp"
#include "suitkit/layer.hpp"

using namespace suitkit;

namespace {

std::vector<Point2> unit_square_ring() {
    return {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
}

}  // namespace

TEST_CASE("centroid of simple shapes") {
    const Polygon square(unit_square_ring());
    CHECK(centroid(square).point.x == doctest::Approx(0.5));
    CHECK(centroid(square).point.y == doctest::Approx(0.5));

    const Polygon triangle({{0, 0}, {1, 0}, {0, 1}, {0, 0}});
    CHECK(centroid(triangle).point.x == doctest::Approx(1.0 / 3.0));
    CHECK(centroid(triangle).point.y == doctest::Approx(1.0 / 3.0));

    // Centered half-size hole keeps the centroid put.
    const Polygon with_hole(unit_square_ring(),
                            {{{0.25, 0.25},
                              {0.75, 0.25},
                              {0.75, 0.75},
                              {0.25, 0.75},
                              {0.25, 0.25}}});
    CHECK(centroid(with_hole).point.x == doctest::Approx(0.5));
    CHECK(centroid(with_hole).point.y == doctest::Approx(0.5));
    CHECK(with_hole.area() == doctest::Approx(0.75));
    CHECK_FALSE(centroid(with_hole).used_vertex_mean);

    CHECK(centroid(Point2{3, 7}).point == Point2{3, 7});

    const LineString line({{0, 0}, {2, 0}});
    CHECK(centroid(line).point.x == doctest::Approx(1.0));
    CHECK(centroid(line).point.y == doctest::Approx(0.0));

    // Length weighting: a long and a short segment.
    const LineString bent({{0, 0}, {4, 0}, {4, 1}});
    const CentroidResult c = centroid(bent);
    CHECK(c.point.x == doctest::Approx((2.0 * 4.0 + 4.0 * 1.0) / 5.0));
    CHECK(c.point.y == doctest::Approx((0.0 * 4.0 + 0.5 * 1.0) / 5.0));
}

TEST_CASE("degenerate polygon centroid falls back to vertex mean") {
    const Polygon sliver({{0, 0}, {1, 0}, {2, 0}, {0, 0}});
    const CentroidResult c = centroid(sliver);
    CHECK(c.used_vertex_mean);
    CHECK(c.point.x == doctest::Approx(1.0));
    CHECK(c.point.y == doctest::Approx(0.0));
}

TEST_CASE("contains: interior, exterior, boundary, holes") {
    const Polygon square(unit_square_ring());
    CHECK(contains(square, {0.5, 0.5}));
    CHECK_FALSE(contains(square, {2, 2}));
    // Boundary points count as inside.
    CHECK(contains(square, {0.5, 0.0}));
    CHECK(contains(square, {1.0, 1.0}));

    const Polygon with_hole(unit_square_ring(),
                            {{{0.25, 0.25},
                              {0.75, 0.25},
                              {0.75, 0.75},
                              {0.25, 0.75},
                              {0.25, 0.25}}});
    CHECK_FALSE(contains(with_hole, {0.5, 0.5}));  // inside the hole
    CHECK(contains(with_hole, {0.1, 0.1}));
    CHECK(contains(with_hole, {0.25, 0.5}));  // hole boundary is boundary
}

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), std::invalid_argument);
    // Bowtie crosses itself.
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}, {0, 0}}),
                    std::invalid_argument);
    // Clockwise input is normalized to positive area.
    const Polygon cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}, {0, 0}});
    CHECK(cw.area() == doctest::Approx(1.0));
    CHECK(ring_signed_area(cw.exterior()) > 0);
}

TEST_CASE("line validation") {
    CHECK_THROWS_AS(LineString({{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(LineString({{0, 0}, {0, 0}, {1, 1}}), std::invalid_argument);
    const double nan = std::nan("");
    CHECK_THROWS_AS(LineString({{0, 0}, {nan, 1}}), std::invalid_argument);
}

TEST_CASE("bbox of layers") {
    const auto single = FeatureLayer::from_points({{3, 7}});
    const BoundingBox b1 = bbox(single);
    CHECK(b1.min_x == 3);
    CHECK(b1.min_y == 7);
    CHECK(b1.max_x == 3);
    CHECK(b1.max_y == 7);

    const auto two = FeatureLayer::from_points({{0, 0}, {5, 4}});
    const BoundingBox b2 = bbox(two);
    CHECK(b2.min_x == 0);
    CHECK(b2.max_x == 5);
    CHECK(b2.max_y == 4);

    const auto lines =
        FeatureLayer::from_lines({LineString({{1, 1}, {9, 2}, {4, 8}})});
    const BoundingBox b3 = bbox(lines);
    CHECK(b3.min_x == 1);
    CHECK(b3.min_y == 1);
    CHECK(b3.max_x == 9);
    CHECK(b3.max_y == 8);

    CHECK_THROWS_WITH_AS(bbox(FeatureLayer::from_points({})), "empty extent",
                         std::invalid_argument);
}

TEST_CASE("centroid of a convex polygon lies inside it") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 500; ++trial) {
        const double cx = oracles::uniform(rng, -100, 100);
        const double cy = oracles::uniform(rng, -100, 100);
        const double r = oracles::uniform(rng, 0.1, 50);
        const Polygon poly(oracles::random_convex_ring(rng, cx, cy, r));
        CHECK(contains(poly, centroid(poly).point));
    }
}

TEST_CASE("contains agrees with an independent ray-casting oracle") {
    std::mt19937_64 rng(7);
    std::size_t checked = 0;
    while (checked < 10000) {
        const double cx = oracles::uniform(rng, -10, 10);
        const double cy = oracles::uniform(rng, -10, 10);
        const double r = oracles::uniform(rng, 0.5, 8);
        const Polygon poly(
            oracles::random_convex_ring(rng, cx, cy, r, 3 + int(rng() % 9)));
        for (int i = 0; i < 20; ++i, ++checked) {
            const Point2 p{oracles::uniform(rng, cx - 2 * r, cx + 2 * r),
                           oracles::uniform(rng, cy - 2 * r, cy + 2 * r)};
            CHECK(contains(poly, p) == oracles::ray_cast_contains(poly, p));
        }
    }
}

TEST_CASE("translation moves centroid and bbox exactly") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Polygon poly(oracles::random_convex_ring(
            rng, oracles::uniform(rng, -5, 5), oracles::uniform(rng, -5, 5),
            oracles::uniform(rng, 0.5, 4)));
        const double dx = oracles::uniform(rng, -20, 20);
        const double dy = oracles::uniform(rng, -20, 20);
        std::vector<Point2> moved_ring;
        for (const Point2& p : poly.exterior()) {
            moved_ring.push_back({p.x + dx, p.y + dy});
        }
        const Polygon moved(moved_ring);
        const Point2 c0 = centroid(poly).point;
        const Point2 c1 = centroid(moved).point;
        CHECK(c1.x - c0.x == doctest::Approx(dx).epsilon(1e-9));
        CHECK(c1.y - c0.y == doctest::Approx(dy).epsilon(1e-9));

        const BoundingBox b0 = bbox_of(poly);
        const BoundingBox b1 = bbox_of(moved);
        CHECK(b1.min_x - b0.min_x == doctest::Approx(dx).epsilon(1e-9));
        CHECK(b1.max_y - b0.max_y == doctest::Approx(dy).epsilon(1e-9));
    }
}

TEST_CASE("layer bbox covers every vertex") {
    std::mt19937_64 rng(3);
    std::vector<LineString> lines;
    for (int i = 0; i < 30; ++i) {
        std::vector<Point2> verts = oracles::random_points(rng, 2 + rng() % 6, -50, 50);
        for (std::size_t v = 1; v < verts.size(); ++v) {
            if (verts[v] == verts[v - 1]) verts[v].x += 0.5;
        }
        lines.emplace_back(std::move(verts));
    }
    const auto layer = FeatureLayer::from_lines(std::move(lines));
    const BoundingBox box = bbox(layer);
    for (const auto& line : layer.lines()) {
        for (const Point2& p : line.vertices()) {
            CHECK(box.contains(p));
        }
    }
}

TEST_CASE("attribute table invariants") {
    AttributeTable table(2);
    table.add_column("name", {Value{std::string("a")}, Value{std::string("b")}});
    CHECK_THROWS_AS(table.add_column("name", {Value{1.0}, Value{2.0}}),
                    std::invalid_argument);
    table.add_column("name", {Value{1.0}, Value{2.0}}, /*overwrite=*/true);
    CHECK(as_number(table.column("name")[0]) == 1.0);
    CHECK_THROWS_AS(table.add_column("short", {Value{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(
        FeatureLayer::from_points({{0, 0}}, [] {
            AttributeTable t(3);
            t.add_column("x", {Value{1.0}, Value{2.0}, Value{3.0}});
            return t;
        }()),
        std::invalid_argument);
}
