#include <catch2/catch_amalgamated.hpp>

#include "treeconf/homology.hpp"
#include "treeconf/oracle.hpp"

using namespace treeconf;

namespace {
const char* kSegmentSpec = R"({
  "vertices": ["v0", "v1"],
  "edges": [{"id": "e1", "u": "v0", "v": "v1", "len": "1"}]
})";

HomologySummary betti_at(const MetricGraph& g, const Rational& r, const Rational& L) {
    return betti(build_complex(g, ParamPoint(r, L)).chain_complex());
}
} // namespace

TEST_CASE("segment at r=3/10 has two components") {
    auto g = MetricGraph::from_spec(kSegmentSpec);
    auto h = betti_at(g, Rational(3, 10), 1);
    CHECK(h.b0 == 2);
    CHECK(h.b1 == 0);
    CHECK(h.b2 == 0);
    CHECK(h.torsion_free());
}

TEST_CASE("Y at r=1/2 is a circle") {
    auto y = MetricGraph::star(3, 1);
    auto h = betti_at(y, Rational(1, 2), 1);
    CHECK(h.b0 == 1);
    CHECK(h.b1 == 1);
    CHECK(h.b2 == 0);
}

TEST_CASE("star(4) at r=3/2 has 12 components") {
    auto s = MetricGraph::star(4, 1);
    auto h = betti_at(s, Rational(3, 2), 1);
    CHECK(h.b0 == 12);
    CHECK(h.b1 == 0);
}

TEST_CASE("H(3,3) at r=3/2, L=1/4 has 12 components") {
    auto g = MetricGraph::generalized_h(3, 3, Rational(1, 4));
    auto h = betti_at(g, Rational(3, 2), Rational(1, 4));
    CHECK(h.b0 == 12);
    CHECK(h.b1 == 0);
}

TEST_CASE("Euler characteristic equals the alternating Betti sum") {
    auto y = MetricGraph::star(4, Rational(5, 4));
    for (const auto& r : {Rational(1, 2), Rational(6, 5), Rational(5, 2)}) {
        auto cx = build_complex(y, ParamPoint(r, Rational(5, 4)));
        auto cc = cx.chain_complex();
        auto h = betti(cc);
        CHECK(long(cc.n0) - long(cc.n1) + long(cc.n2) == h.b0 - h.b1 + h.b2);
    }
}

TEST_CASE("F_p homology dimensions match integral ranks when torsion-free") {
    auto y = MetricGraph::star(3, 2);
    for (const auto& r : {Rational(1, 2), Rational(3, 2), Rational(5, 2)}) {
        auto cx = build_complex(y, ParamPoint(r, 2));
        auto h = betti(cx.chain_complex());
        REQUIRE(h.torsion_free());
        auto sc = full_chain(cx, kDefaultPrime);
        CHECK(long(homology_basis(sc, 0).reps.cols()) == h.b0);
        CHECK(long(homology_basis(sc, 1).reps.cols()) == h.b1);
    }
}

TEST_CASE("subdividing an edge changes the complex but not the homology") {
    // the subdivided graph is the same metric space, so every Betti number
    // must survive; this exercises gluing across the new midpoint charts
    auto y = MetricGraph::star(3, 1);
    auto ys = subdivide_edge(y, "e2");
    auto yss = subdivide_edge(ys, "e3");
    for (const auto& r : {Rational(1, 2), Rational(6, 5), Rational(17, 10), Rational(5, 2)}) {
        auto h0 = betti_at(y, r, 1);
        auto h1 = betti_at(ys, r, 1);
        auto h2 = betti_at(yss, r, 1);
        CHECK(h0.b0 == h1.b0);
        CHECK(h0.b1 == h1.b1);
        CHECK(h0.b2 == h1.b2);
        CHECK(h0.b0 == h2.b0);
        CHECK(h0.b1 == h2.b1);
    }
    // subdividing the parameter edge halves its affine length form
    auto yl = subdivide_edge(y, "e1");
    CHECK(yl.edge(yl.edge_index("e1.1")).len.m == Rational(1, 2));
    for (const auto& r : {Rational(1, 2), Rational(6, 5)}) {
        auto a = betti_at(y, r, Rational(7, 4));
        auto b = betti_at(yl, r, Rational(7, 4));
        CHECK(a.b0 == b.b0);
        CHECK(a.b1 == b.b1);
    }
}

TEST_CASE("induced map at equal parameters is the identity") {
    auto y = MetricGraph::star(3, 1);
    ParamPoint p(Rational(1, 2), 1);
    for (int deg : {0, 1}) {
        FpMat m = induced_map(y, p, p, deg);
        CHECK(m == FpMat::identity(m.rows(), kDefaultPrime));
    }
}

TEST_CASE("six components merge into one across r=1") {
    auto y = MetricGraph::star(3, 1);
    FpMat m = induced_map(y, ParamPoint(Rational(3, 2), 1), ParamPoint(Rational(1, 2), 1), 0);
    CHECK(m.rows() == 1);
    CHECK(m.cols() == 6);
    CHECK(m.rank() == 1);
}

TEST_CASE("induced maps reject wrong parameter order") {
    auto y = MetricGraph::star(3, 1);
    CHECK_THROWS_AS(
        induced_map(y, ParamPoint(Rational(1, 2), 1), ParamPoint(Rational(3, 2), 1), 0),
        NotComparable);
    CHECK_THROWS_AS(induced_map(y, ParamPoint(1, 2), ParamPoint(1, 1), 0), NotComparable);
}

TEST_CASE("functoriality of induced maps on a comparable triple") {
    auto s = MetricGraph::star(4, 2);
    // p >= q >= t in the index order (r decreasing, L increasing)
    ParamPoint p(Rational(5, 8), Rational(1, 4));
    ParamPoint q(Rational(1, 2), Rational(1, 4));
    ParamPoint t(Rational(1, 2), 2);
    for (int deg : {0, 1}) {
        FpMat direct = induced_map(s, p, t, deg);
        FpMat composed = induced_map(s, q, t, deg) * induced_map(s, p, q, deg);
        CHECK(direct == composed);
    }
}

TEST_CASE("vertical induced map in degree 1 across the r=L wall") {
    // the rank of this map fixes the PH1 summand multiplicities; the value
    // is recorded by the pipeline, not given by the paper
    auto s = MetricGraph::star(4, 2);
    FpMat m =
        induced_map(s, ParamPoint(Rational(1, 2), Rational(1, 4)), ParamPoint(Rational(1, 2), 2), 1);
    auto h_small = rank_star(4, Rational(1, 2), Rational(1, 4));
    auto h_large = rank_star(4, Rational(1, 2), 2);
    CHECK(long(m.cols()) == h_small.h1);
    CHECK(long(m.rows()) == h_large.h1);
    CHECK(m.rank() <= std::min(m.rows(), m.cols()));
}
