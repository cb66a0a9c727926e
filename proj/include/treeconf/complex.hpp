#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeconf/cell_system.hpp"
#include "treeconf/geometry.hpp"
#include "treeconf/metric_graph.hpp"
#include "treeconf/snf.hpp"

namespace treeconf {

struct IllGluedComplex : std::runtime_error {
    explicit IllGluedComplex(const std::string& m)
        : std::runtime_error("IllGluedComplex: " + m) {}
};

/// Canonical key of a graph point. Vertex-anchored points sort before
/// interior points; ids sort lexicographically.
struct GPKey {
    int kind = 0; // 0 vertex, 1 interior point of an edge
    std::string id;
    Rational t{0};

    friend bool operator<(const GPKey& a, const GPKey& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.id != b.id) return a.id < b.id;
        return a.t < b.t;
    }
    friend bool operator==(const GPKey& a, const GPKey& b) {
        return a.kind == b.kind && a.id == b.id && a.t == b.t;
    }
    std::string str() const {
        return kind == 0 ? id : id + "@" + rat_str(t);
    }
};

inline GPKey gp_key(const MetricGraph& g, const GraphPoint& p) {
    GPKey k;
    if (p.at_vertex) {
        k.kind = 0;
        k.id = g.vertex_ids()[p.vertex];
    } else {
        k.kind = 1;
        k.id = g.edge(p.edge).id;
        k.t = p.t;
    }
    return k;
}

/// Key of a 0-cell: the ordered pair of robot positions.
struct Key0 {
    GPKey p, q;
    friend bool operator<(const Key0& a, const Key0& b) {
        if (!(a.p == b.p)) return a.p < b.p;
        return a.q < b.q;
    }
    friend bool operator==(const Key0& a, const Key0& b) { return a.p == b.p && a.q == b.q; }
    std::string str() const { return "(" + p.str() + "," + q.str() + ")"; }
};

/// Per-coordinate carrier of a 1-cell: either constant at a graph point or
/// moving along one edge. Together with the endpoints this pins the cell's
/// point set, so equal keys glue.
struct Carrier {
    int kind = 0; // 0 fixed, 1 moving
    GPKey fixed;
    std::string edge;

    friend bool operator<(const Carrier& a, const Carrier& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.kind == 0) return a.fixed < b.fixed;
        return a.edge < b.edge;
    }
    friend bool operator==(const Carrier& a, const Carrier& b) {
        if (a.kind != b.kind) return false;
        return a.kind == 0 ? a.fixed == b.fixed : a.edge == b.edge;
    }
};

struct Key1 {
    Key0 a, b; // a < b; canonical orientation runs a -> b
    Carrier cp, cq;
    friend bool operator<(const Key1& x, const Key1& y) {
        if (!(x.a == y.a)) return x.a < y.a;
        if (!(x.b == y.b)) return x.b < y.b;
        if (!(x.cp == y.cp)) return x.cp < y.cp;
        return x.cq < y.cq;
    }
    friend bool operator==(const Key1& x, const Key1& y) {
        return x.a == y.a && x.b == y.b && x.cp == y.cp && x.cq == y.cq;
    }
};

struct Cell0 {
    Key0 key;
    GraphPoint p, q;
    std::set<int> charts; // chart indices whose closure contains the cell
};

struct Cell1 {
    Key1 key;
    int a = -1, b = -1; // 0-cell ids, key(a) < key(b)
    std::set<int> charts;
};

struct Cell2 {
    int chart = -1;
    std::vector<int> cycle;                  // ccw vertex ids
    std::vector<std::pair<int, int>> bdry;   // (1-cell id, orientation sign)
    Polygon poly;                            // chart-coordinate carrier
};

struct ChainComplex {
    IntMat d1; // 0-cells x 1-cells
    IntMat d2; // 1-cells x 2-cells
    std::size_t n0 = 0, n1 = 0, n2 = 0;
};

/**
 * Regular CW structure on the restricted configuration space X^2_{r,L}:
 * the feasible polygons of all cell systems, optionally refined by extra
 * cut lines, glued along canonical keys. Boundary orientation: 2-cells ccw
 * in their chart, 1-cells from the smaller endpoint key to the larger.
 */
class PolyComplex {
public:
    std::vector<ChartKey> charts;
    std::vector<Polygon> chart_regions; // feasible region per chart (pre-cut)
    std::vector<Cell0> cells0;
    std::vector<Cell1> cells1;
    std::vector<Cell2> cells2;

    std::size_t size(int dim) const {
        switch (dim) {
            case 0: return cells0.size();
            case 1: return cells1.size();
            case 2: return cells2.size();
            default: return 0;
        }
    }

    std::optional<int> find0(const Key0& k) const {
        auto it = std::lower_bound(cells0.begin(), cells0.end(), k,
                                   [](const Cell0& c, const Key0& kk) { return c.key < kk; });
        if (it == cells0.end() || !(it->key == k)) return std::nullopt;
        return int(it - cells0.begin());
    }

    int chart_index(const ChartKey& ck) const {
        for (std::size_t i = 0; i < charts.size(); ++i)
            if (charts[i] == ck) return int(i);
        return -1;
    }

    ChainComplex chain_complex() const {
        ChainComplex cc;
        cc.n0 = cells0.size();
        cc.n1 = cells1.size();
        cc.n2 = cells2.size();
        cc.d1 = IntMat(cc.n0, cc.n1);
        for (std::size_t e = 0; e < cells1.size(); ++e) {
            cc.d1(cells1[e].b, e) += 1;
            cc.d1(cells1[e].a, e) -= 1;
        }
        cc.d2 = IntMat(cc.n1, cc.n2);
        for (std::size_t f = 0; f < cells2.size(); ++f)
            for (auto [e, s] : cells2[f].bdry) cc.d2(e, f) += s;
        IntMat prod = cc.d1 * cc.d2;
        if (!prod.is_zero()) throw IllGluedComplex("d1*d2 != 0");
        return cc;
    }
};

namespace detail {

struct ComplexBuilder {
    const MetricGraph& g;
    ParamPoint param;
    PolyComplex cx;

    std::map<Key0, int> index0;
    std::map<Key1, int> index1;

    ComplexBuilder(const MetricGraph& g_, const ParamPoint& p) : g(g_), param(p) {}

    int add0(const Key0& k, const GraphPoint& p, const GraphPoint& q, int chart) {
        auto [it, fresh] = index0.insert({k, int(cx.cells0.size())});
        if (fresh) {
            Cell0 c;
            c.key = k;
            c.p = p;
            c.q = q;
            cx.cells0.push_back(std::move(c));
        }
        if (chart >= 0) cx.cells0[it->second].charts.insert(chart);
        return it->second;
    }

    Key0 key_of(const Vec2& xy, const ChartKey& ck) const {
        GraphPoint p = point_on_edge(g, ck.ei, xy.x, param.L);
        GraphPoint q = point_on_edge(g, ck.ej, xy.y, param.L);
        return Key0{gp_key(g, p), gp_key(g, q)};
    }

    int add0_at(const Vec2& xy, const ChartKey& ck, int chart) {
        GraphPoint p = point_on_edge(g, ck.ei, xy.x, param.L);
        GraphPoint q = point_on_edge(g, ck.ej, xy.y, param.L);
        return add0(Key0{gp_key(g, p), gp_key(g, q)}, p, q, chart);
    }

    /// Chart coordinate of a graph point on an edge, if it lies there.
    std::optional<Rational> coord_on_edge(const GraphPoint& gp, int edge) const {
        if (gp.at_vertex) {
            if (gp.vertex == g.edge(edge).u) return Rational(0);
            if (gp.vertex == g.edge(edge).v) return g.edge_length(edge, param.L);
            return std::nullopt;
        }
        if (gp.edge == edge) return gp.t;
        return std::nullopt;
    }

    std::optional<Vec2> chart_coords(const Cell0& c, const ChartKey& ck) const {
        auto x = coord_on_edge(c.p, ck.ei);
        if (!x) return std::nullopt;
        auto y = coord_on_edge(c.q, ck.ej);
        if (!y) return std::nullopt;
        return Vec2(*x, *y);
    }

    int add1(int ia, int ib, const ChartKey& ck, int chart) {
        if (cx.cells0[ib].key < cx.cells0[ia].key) std::swap(ia, ib);
        const Cell0& A = cx.cells0[ia];
        const Cell0& B = cx.cells0[ib];
        Key1 k;
        k.a = A.key;
        k.b = B.key;
        // carrier per coordinate: constant or moving along the chart's edge
        if (A.key.p == B.key.p) {
            k.cp.kind = 0;
            k.cp.fixed = A.key.p;
        } else {
            k.cp.kind = 1;
            k.cp.edge = g.edge(ck.ei).id;
        }
        if (A.key.q == B.key.q) {
            k.cq.kind = 0;
            k.cq.fixed = A.key.q;
        } else {
            k.cq.kind = 1;
            k.cq.edge = g.edge(ck.ej).id;
        }
        auto [it, fresh] = index1.insert({k, int(cx.cells1.size())});
        if (fresh) {
            Cell1 c;
            c.key = k;
            c.a = ia;
            c.b = ib;
            cx.cells1.push_back(std::move(c));
        }
        if (chart >= 0) cx.cells1[it->second].charts.insert(chart);
        return it->second;
    }
};

} // namespace detail

using ExtraCuts = std::map<ChartKey, std::vector<LineXY>>;

inline PolyComplex build_complex(const MetricGraph& g, const ParamPoint& param,
                                 const ExtraCuts& cuts = {}) {
    detail::ComplexBuilder B(g, param);
    auto systems = cell_systems(g, param);

    struct ChartEntry {
        ChartKey ck;
        Polygon region;
        std::vector<Polygon> pieces; // dim-2 subdivision
    };
    std::vector<ChartEntry> entries;
    for (const auto& s : systems) {
        ChartEntry e;
        e.ck = ChartKey{s.ei, s.ej, s.branch};
        e.region = solve_polygon(s);
        if (e.region.empty()) continue;
        if (e.region.dim == 2) {
            auto it = cuts.find(e.ck);
            e.pieces = (it == cuts.end()) ? std::vector<Polygon>{e.region}
                                          : subdivide(e.region, it->second);
        }
        entries.push_back(std::move(e));
    }

    // register charts
    for (std::size_t i = 0; i < entries.size(); ++i) {
        B.cx.charts.push_back(entries[i].ck);
        B.cx.chart_regions.push_back(entries[i].region);
    }

    // pass 1: all 0-cells, from every chart
    for (std::size_t ci = 0; ci < entries.size(); ++ci) {
        const auto& e = entries[ci];
        if (e.region.dim == 0) {
            B.add0_at(e.region.pts[0], e.ck, int(ci));
        } else if (e.region.dim == 1) {
            // endpoints only; interior split points come from other charts
            B.add0_at(e.region.pts[0], e.ck, int(ci));
            B.add0_at(e.region.pts[1], e.ck, int(ci));
        } else {
            for (const auto& piece : e.pieces)
                for (const auto& v : piece.pts) B.add0_at(v, e.ck, int(ci));
        }
    }

    // pass 2: 1-cells (split at every global 0-cell on them) and faces
    struct PendingFace {
        int chart;
        std::vector<int> cycle;
        std::vector<std::pair<int, int>> bdry;
        Polygon poly;
    };
    std::vector<PendingFace> faces;

    for (std::size_t ci = 0; ci < entries.size(); ++ci) {
        const auto& e = entries[ci];
        if (e.region.dim < 1) continue;

        // 0-cells visible in this chart, with their chart coordinates
        std::vector<std::pair<int, Vec2>> pts_here;
        for (std::size_t v = 0; v < B.cx.cells0.size(); ++v) {
            auto xy = B.chart_coords(B.cx.cells0[v], e.ck);
            if (xy) pts_here.push_back({int(v), *xy});
        }

        auto emit_chain = [&](const Vec2& A, const Vec2& Bv,
                              std::vector<std::pair<int, int>>* face_bdry) {
            // gather all 0-cells on [A,B], order along the segment
            std::vector<std::pair<Rational, int>> chain;
            Vec2 dir(Bv.x - A.x, Bv.y - A.y);
            for (const auto& [idx, xy] : pts_here) {
                if (!on_segment(A, Bv, xy)) continue;
                Rational t = (xy.x - A.x) * dir.x + (xy.y - A.y) * dir.y;
                chain.push_back({t, idx});
            }
            std::sort(chain.begin(), chain.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
                int ia = chain[i].second, ib = chain[i + 1].second;
                int e1 = B.add1(ia, ib, e.ck, int(ci));
                if (face_bdry) {
                    // traversal runs ia -> ib; canonical orientation a -> b
                    int sign = (B.cx.cells1[e1].a == ia) ? 1 : -1;
                    face_bdry->push_back({e1, sign});
                }
            }
        };

        if (e.region.dim == 1) {
            emit_chain(e.region.pts[0], e.region.pts[1], nullptr);
            continue;
        }
        for (const auto& piece : e.pieces) {
            PendingFace f;
            f.chart = int(ci);
            f.poly = piece;
            for (const auto& v : piece.pts) {
                auto k = B.key_of(v, e.ck);
                f.cycle.push_back(B.index0.at(k));
            }
            std::size_t n = piece.pts.size();
            for (std::size_t i = 0; i < n; ++i)
                emit_chain(piece.pts[i], piece.pts[(i + 1) % n], &f.bdry);
            faces.push_back(std::move(f));
        }
    }

    // canonical ordering: cells already keyed; remap ids after sorting
    PolyComplex& cx = B.cx;
    std::vector<int> perm0(cx.cells0.size()), perm1(cx.cells1.size());
    {
        std::vector<int> order(cx.cells0.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return cx.cells0[a].key < cx.cells0[b].key; });
        std::vector<Cell0> sorted;
        for (std::size_t i = 0; i < order.size(); ++i) {
            perm0[order[i]] = int(i);
            sorted.push_back(cx.cells0[order[i]]);
        }
        cx.cells0 = std::move(sorted);
    }
    {
        std::vector<int> order(cx.cells1.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return cx.cells1[a].key < cx.cells1[b].key; });
        std::vector<Cell1> sorted;
        for (std::size_t i = 0; i < order.size(); ++i) {
            perm1[order[i]] = int(i);
            Cell1 c = cx.cells1[order[i]];
            c.a = perm0[c.a];
            c.b = perm0[c.b];
            sorted.push_back(std::move(c));
        }
        cx.cells1 = std::move(sorted);
    }
    std::sort(faces.begin(), faces.end(), [&](const PendingFace& x, const PendingFace& y) {
        if (x.chart != y.chart) return x.chart < y.chart;
        std::vector<Key0> kx, ky;
        for (int v : x.cycle) kx.push_back(cx.cells0[perm0[v]].key);
        for (int v : y.cycle) ky.push_back(cx.cells0[perm0[v]].key);
        return kx < ky;
    });
    for (const auto& f : faces) {
        Cell2 c;
        c.chart = f.chart;
        for (int v : f.cycle) c.cycle.push_back(perm0[v]);
        for (auto [e1, s] : f.bdry) c.bdry.push_back({perm1[e1], s});
        c.poly = f.poly;
        cx.cells2.push_back(std::move(c));
    }

    // the chain complex construction rejects ill-glued output (d1*d2 != 0)
    cx.chain_complex();
    return cx;
}

} // namespace treeconf
