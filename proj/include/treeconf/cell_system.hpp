#pragma once

#include <string>
#include <vector>

#include "treeconf/geometry.hpp"
#include "treeconf/metric_graph.hpp"
#include "treeconf/rational.hpp"

namespace treeconf {

/**
 * One maximal-cell inequality system of the two-robot configuration space:
 * robot 1 on edge ei at coordinate x (measured from the edge's u endpoint),
 * robot 2 on edge ej at coordinate y. For ei == ej the system splits into
 * the two branches of |x - y| >= r.
 */
struct CellSystem {
    int ei = -1;
    int ej = -1;
    int branch = 0; // 0: x - y >= r, 1: y - x >= r (diagonal charts only)
    std::vector<HalfPlane> constraints; // a*x + b*y <= c, box first
    std::size_t proximity_index = 0;    // exactly one proximity constraint

    bool diagonal() const { return ei == ej; }
};

struct ChartKey {
    int ei = -1, ej = -1, branch = 0;
    bool operator<(const ChartKey& o) const {
        if (ei != o.ei) return ei < o.ei;
        if (ej != o.ej) return ej < o.ej;
        return branch < o.branch;
    }
    bool operator==(const ChartKey& o) const {
        return ei == o.ei && ej == o.ej && branch == o.branch;
    }
};

/**
 * The proximity constraint of an off-diagonal chart in chart coordinates.
 * With u(x) the distance from robot 1 to the near endpoint of ei and v(y)
 * the same for ej, the tree metric gives delta = u + d + v, so delta >= r is
 * a single linear constraint; the other three endpoint routes are implied.
 * Returned as s_i*x + s_j*y >= rhs(L) with s in {+1, -1}.
 */
struct ProximityForm {
    Rational si{1}, sj{1}; // sign of x resp. y on the left side
    LinL base;             // constant offset: dist of near endpoints plus length terms
};

inline ProximityForm proximity_form(const MetricGraph& g, int ei, int ej) {
    auto nd = g.near_endpoints(ei, ej);
    ProximityForm f;
    f.base = nd.dist;
    if (nd.near_i == g.edge(ei).u) {
        f.si = 1; // u(x) = x
    } else {
        f.si = -1; // u(x) = len_i - x
        f.base = f.base + g.edge(ei).len;
    }
    if (nd.near_j == g.edge(ej).u) {
        f.sj = 1;
    } else {
        f.sj = -1;
        f.base = f.base + g.edge(ej).len;
    }
    return f;
}

/// All cell systems of X^2_{r,L}: one per ordered pair of distinct edges,
/// two per edge (the |x-y| >= r branches). Sorted by (ei, ej, branch).
inline std::vector<CellSystem> cell_systems(const MetricGraph& g, const ParamPoint& p) {
    std::vector<CellSystem> out;
    const int ne = int(g.num_edges());
    for (int i = 0; i < ne; ++i) {
        Rational li = g.edge_length(i, p.L);
        for (int j = 0; j < ne; ++j) {
            Rational lj = g.edge_length(j, p.L);
            auto box = [&](CellSystem& s) {
                s.constraints.emplace_back(Rational(-1), Rational(0), Rational(0)); // x >= 0
                s.constraints.emplace_back(Rational(1), Rational(0), li);           // x <= li
                s.constraints.emplace_back(Rational(0), Rational(-1), Rational(0)); // y >= 0
                s.constraints.emplace_back(Rational(0), Rational(1), lj);           // y <= lj
            };
            if (i == j) {
                for (int branch = 0; branch < 2; ++branch) {
                    CellSystem s;
                    s.ei = i;
                    s.ej = j;
                    s.branch = branch;
                    box(s);
                    // branch 0: x - y >= r, branch 1: y - x >= r
                    if (branch == 0)
                        s.constraints.emplace_back(Rational(-1), Rational(1), -p.r);
                    else
                        s.constraints.emplace_back(Rational(1), Rational(-1), -p.r);
                    s.proximity_index = s.constraints.size() - 1;
                    out.push_back(std::move(s));
                }
            } else {
                CellSystem s;
                s.ei = i;
                s.ej = j;
                box(s);
                ProximityForm f = proximity_form(g, i, j);
                // f.si*x + f.sj*y + base >= r  =>  -si*x - sj*y <= base - r
                s.constraints.emplace_back(-f.si, -f.sj, f.base.at(p.L) - p.r);
                s.proximity_index = s.constraints.size() - 1;
                out.push_back(std::move(s));
            }
        }
    }
    return out;
}

/// Feasible region of one cell system as a canonical convex region.
inline Polygon solve_polygon(const CellSystem& s) {
    // start from the box, clip by the rest
    Rational li = s.constraints[1].c, lj = s.constraints[3].c;
    Polygon boxp;
    boxp.dim = 2;
    boxp.pts = {Vec2(0, 0), Vec2(li, 0), Vec2(li, lj), Vec2(0, lj)};
    if (li == 0 || lj == 0) {
        // degenerate box cannot occur: edge lengths are positive
        boxp.dim = -1;
        return boxp;
    }
    std::vector<HalfPlane> rest(s.constraints.begin() + 4, s.constraints.end());
    return intersect_halfplanes(boxp, rest);
}

} // namespace treeconf
