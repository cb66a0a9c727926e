#include <catch2/catch_amalgamated.hpp>

#include "treeconf/geometry.hpp"

using namespace treeconf;

namespace {
Polygon unit_square() {
    Polygon p;
    p.dim = 2;
    p.pts = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
    return p;
}
} // namespace

TEST_CASE("clipping the unit square by x+y >= 1/2 gives a pentagon") {
    // x + y >= 1/2  <=>  -x - y <= -1/2
    Polygon p = clip(unit_square(), HalfPlane(-1, -1, Rational(-1, 2)));
    REQUIRE(p.dim == 2);
    REQUIRE(p.pts.size() == 5);
    std::vector<Vec2> expect = {Vec2(0, Rational(1, 2)), Vec2(Rational(1, 2), 0), Vec2(1, 0),
                                Vec2(1, 1), Vec2(0, 1)};
    CHECK(p.pts == expect);
    CHECK(signed_area2(p.pts) > 0);
}

TEST_CASE("clipping to a corner point and to nothing") {
    Polygon pt = clip(unit_square(), HalfPlane(-1, -1, -2)); // x + y >= 2
    REQUIRE(pt.dim == 0);
    CHECK(pt.pts[0] == Vec2(1, 1));
    Polygon none = clip(unit_square(), HalfPlane(-1, -1, -3)); // x + y >= 3
    CHECK(none.dim == -1);
}

TEST_CASE("clipping to a segment") {
    Polygon seg = clip(unit_square(), HalfPlane(1, 0, 0)); // x <= 0
    REQUIRE(seg.dim == 1);
    CHECK(seg.pts[0] == Vec2(0, 0));
    CHECK(seg.pts[1] == Vec2(0, 1));
}

TEST_CASE("cut splits a polygon along an interior line") {
    auto [lo, hi] = cut(unit_square(), LineXY(1, 1, 1)); // x + y = 1
    REQUIRE(lo.dim == 2);
    REQUIRE(hi.dim == 2);
    CHECK(lo.pts.size() == 3);
    CHECK(hi.pts.size() == 3);
    CHECK(signed_area2(lo.pts) + signed_area2(hi.pts) == signed_area2(unit_square().pts));
}

TEST_CASE("cut along a boundary line changes nothing") {
    auto pieces = subdivide(unit_square(), {LineXY(1, 0, 0), LineXY(1, 0, 2)});
    REQUIRE(pieces.size() == 1);
    CHECK(pieces[0].pts == unit_square().pts);
}

TEST_CASE("subdivision by two crossing lines yields four pieces") {
    auto pieces = subdivide(unit_square(),
                            {LineXY(1, 0, Rational(1, 2)), LineXY(0, 1, Rational(1, 2))});
    CHECK(pieces.size() == 4);
    Rational area = 0;
    for (const auto& pc : pieces) area += signed_area2(pc.pts);
    CHECK(area == signed_area2(unit_square().pts));
}

TEST_CASE("canonicalize removes collinear interior vertices") {
    Polygon p = canonicalize({Vec2(0, 0), Vec2(Rational(1, 2), 0), Vec2(1, 0), Vec2(1, 1),
                              Vec2(0, 1)});
    REQUIRE(p.dim == 2);
    CHECK(p.pts.size() == 4);
}

TEST_CASE("on_segment is exact") {
    CHECK(on_segment(Vec2(0, 0), Vec2(2, 2), Vec2(1, 1)));
    CHECK_FALSE(on_segment(Vec2(0, 0), Vec2(2, 2), Vec2(1, Rational(9999999, 10000000))));
    CHECK_FALSE(on_segment(Vec2(0, 0), Vec2(2, 2), Vec2(3, 3)));
    CHECK(on_segment(Vec2(0, 0), Vec2(2, 2), Vec2(0, 0)));
}
