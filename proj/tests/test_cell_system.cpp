#include <catch2/catch_amalgamated.hpp>

#include "treeconf/cell_system.hpp"

using namespace treeconf;

namespace {
const char* kSegmentSpec = R"({
  "vertices": ["v0", "v1"],
  "edges": [{"id": "e1", "u": "v0", "v": "v1", "len": "1"}]
})";
}

TEST_CASE("Y graph has 6 off-diagonal and 6 diagonal-branch systems") {
    auto y = MetricGraph::star(3, 1);
    auto systems = cell_systems(y, ParamPoint(Rational(1, 2), 1));
    CHECK(systems.size() == 12);
    int diag = 0, off = 0;
    for (const auto& s : systems) {
        (s.diagonal() ? diag : off)++;
        // box constraints plus exactly one proximity constraint
        CHECK(s.constraints.size() == 5);
        CHECK(s.proximity_index == 4);
    }
    CHECK(diag == 6);
    CHECK(off == 6);
}

TEST_CASE("segment graph has just the two branch systems") {
    auto g = MetricGraph::from_spec(kSegmentSpec);
    auto systems = cell_systems(g, ParamPoint(Rational(3, 10), 1));
    REQUIRE(systems.size() == 2);
    CHECK(systems[0].branch == 0);
    CHECK(systems[1].branch == 1);
}

TEST_CASE("H graph cross-side system carries the bridge length") {
    auto h = MetricGraph::generalized_h(3, 3, 2);
    auto systems = cell_systems(h, ParamPoint(Rational(5), 2));
    int e2 = h.edge_index("e2"), e4 = h.edge_index("e4");
    const CellSystem* found = nullptr;
    for (const auto& s : systems)
        if (s.ei == e2 && s.ej == e4) found = &s;
    REQUIRE(found);
    // x + L + y >= r with L = 2, r = 5: -x - y <= 2 - 5
    const HalfPlane& prox = found->constraints[found->proximity_index];
    CHECK(prox.a == -1);
    CHECK(prox.b == -1);
    CHECK(prox.c == -3);
}

TEST_CASE("solve_polygon on the documented examples") {
    CellSystem s;
    s.ei = 0;
    s.ej = 1;
    s.constraints = {HalfPlane(-1, 0, 0), HalfPlane(1, 0, 1), HalfPlane(0, -1, 0),
                     HalfPlane(0, 1, 1)};
    SECTION("pentagon") {
        s.constraints.push_back(HalfPlane(-1, -1, Rational(-1, 2)));
        s.proximity_index = 4;
        Polygon p = solve_polygon(s);
        REQUIRE(p.dim == 2);
        CHECK(p.pts.size() == 5);
    }
    SECTION("corner point") {
        s.constraints.push_back(HalfPlane(-1, -1, -2));
        s.proximity_index = 4;
        Polygon p = solve_polygon(s);
        REQUIRE(p.dim == 0);
        CHECK(p.pts[0] == Vec2(1, 1));
    }
    SECTION("empty") {
        s.constraints.push_back(HalfPlane(-1, -1, -3));
        s.proximity_index = 4;
        CHECK(solve_polygon(s).dim == -1);
    }
}

TEST_CASE("proximity form matches the intrinsic metric") {
    // the proximity constraint evaluated at sample coordinates must equal
    // delta(p, q) computed by the path metric
    auto h = MetricGraph::generalized_h(3, 4, Rational(3, 2));
    ParamPoint pp(Rational(1, 3), Rational(3, 2));
    for (int i = 0; i < int(h.num_edges()); ++i)
        for (int j = 0; j < int(h.num_edges()); ++j) {
            if (i == j) continue;
            ProximityForm f = proximity_form(h, i, j);
            Rational li = h.edge_length(i, pp.L), lj = h.edge_length(j, pp.L);
            for (const auto& [tx, ty] :
                 {std::pair<Rational, Rational>{li / 3, lj / 2},
                  std::pair<Rational, Rational>{li / 5, lj / 7}}) {
                GraphPoint p = point_on_edge(h, i, tx, pp.L);
                GraphPoint q = point_on_edge(h, j, ty, pp.L);
                Rational lhs = f.si * tx + f.sj * ty + f.base.at(pp.L);
                CHECK(lhs == path_distance(h, p, q, pp.L));
            }
        }
}
