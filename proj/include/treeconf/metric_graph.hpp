#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "treeconf/rational.hpp"

namespace treeconf {

struct NotATree : std::runtime_error {
    explicit NotATree(const std::string& m)
        : std::runtime_error("NotATree: " + m) {}
};
struct NonPositiveLength : std::runtime_error {
    explicit NonPositiveLength(const std::string& m)
        : std::runtime_error("NonPositiveLength: " + m) {}
};
struct PointNotOnGraph : std::runtime_error {
    explicit PointNotOnGraph(const std::string& m)
        : std::runtime_error("PointNotOnGraph: " + m) {}
};

/// Restraint parameter r and the symbolic edge length L (the length of e_1).
struct ParamPoint {
    Rational r{1};
    Rational L{1};
    ParamPoint() = default;
    ParamPoint(Rational r_, Rational L_) : r(std::move(r_)), L(std::move(L_)) {
        if (r <= 0 || L <= 0) throw std::invalid_argument("ParamPoint requires r > 0 and L > 0");
    }
};

struct GraphEdge {
    std::string id;
    int u = -1; // index of endpoint a_e
    int v = -1; // index of endpoint b_e
    LinL len;   // length as affine function of L
};

/**
 * Finite metric tree. Edge lengths are affine functions of the symbolic
 * parameter L so one graph object serves the whole (r, L) parameter plane;
 * the \"L edge\" of the star and generalized H builders carries slope 1
 * (bridge halves slope 1/2), all other edges are constants. Immutable
 * after construction.
 */
class MetricGraph {
public:
    MetricGraph(std::vector<std::string> vertex_ids, std::vector<GraphEdge> edges,
                Rational default_L)
        : vids_(std::move(vertex_ids)), edges_(std::move(edges)), default_L_(std::move(default_L)) {
        validate();
        build_adjacency();
    }

    static MetricGraph star(int k, const Rational& L1);
    static MetricGraph generalized_h(int m, int n, const Rational& L1);
    static MetricGraph from_spec(const std::string& json_text,
                                 const std::string& l_edge_id = "");

    std::size_t num_vertices() const { return vids_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<std::string>& vertex_ids() const { return vids_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    const GraphEdge& edge(std::size_t i) const { return edges_[i]; }
    const Rational& default_L() const { return default_L_; }
    bool has_symbolic_edge() const {
        for (const auto& e : edges_)
            if (e.len.m != 0) return true;
        return false;
    }

    int vertex_index(const std::string& id) const {
        auto it = std::find(vids_.begin(), vids_.end(), id);
        if (it == vids_.end()) throw PointNotOnGraph("unknown vertex '" + id + "'");
        return int(it - vids_.begin());
    }
    int edge_index(const std::string& id) const {
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (edges_[i].id == id) return int(i);
        throw PointNotOnGraph("unknown edge '" + id + "'");
    }

    Rational edge_length(std::size_t e, const Rational& L) const { return edges_[e].len.at(L); }
    Rational edge_length(std::size_t e) const { return edge_length(e, default_L_); }

    /// Exact distance between two vertices as a function of L.
    LinL vertex_distance_lin(int u, int v) const {
        LinL d;
        for (int e : vertex_path_edges(u, v)) d = d + edges_[e].len;
        return d;
    }

    /// Unique tree path between vertices, as a vertex index sequence.
    std::vector<int> vertex_path(int u, int v) const {
        std::vector<int> par(vids_.size(), -1), pare(vids_.size(), -1);
        std::deque<int> q{u};
        std::vector<bool> seen(vids_.size(), false);
        seen[u] = true;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            if (x == v) break;
            for (auto [y, e] : adj_[x])
                if (!seen[y]) {
                    seen[y] = true;
                    par[y] = x;
                    pare[y] = e;
                    q.push_back(y);
                }
        }
        std::vector<int> path;
        for (int x = v; x != -1; x = par[x]) path.push_back(x);
        std::reverse(path.begin(), path.end());
        if (path.empty() || path.front() != u) throw NotATree("vertices not connected");
        return path;
    }

    std::vector<int> vertex_path_edges(int u, int v) const {
        auto path = vertex_path(u, v);
        std::vector<int> es;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            for (auto [y, e] : adj_[path[i]])
                if (y == path[i + 1]) {
                    es.push_back(e);
                    break;
                }
        }
        return es;
    }

    /**
     * Near endpoints of an ordered pair of distinct edges: the endpoint of
     * each edge through which the unique connecting path runs, and the
     * distance between them. Purely combinatorial, so valid for every L.
     */
    struct NearData {
        int near_i;
        int near_j;
        LinL dist;
    };
    NearData near_endpoints(int ei, int ej) const {
        const GraphEdge& a = edges_[ei];
        const GraphEdge& b = edges_[ej];
        auto path = vertex_path(a.u, b.u);
        bool via_bi = std::find(path.begin(), path.end(), a.v) != path.end();
        bool via_bj = std::find(path.begin(), path.end(), b.v) != path.end();
        // shared-vertex pairs: the shared vertex is the near endpoint on both
        int ni = via_bi ? a.v : a.u;
        int nj = via_bj ? b.v : b.u;
        return NearData{ni, nj, vertex_distance_lin(ni, nj)};
    }

private:
    void validate() {
        if (vids_.empty()) throw NotATree("no vertices");
        std::set<std::string> seen_v(vids_.begin(), vids_.end());
        if (seen_v.size() != vids_.size()) throw NotATree("duplicate vertex ids");
        std::set<std::string> seen_e;
        std::set<std::pair<int, int>> seen_pair;
        for (const auto& e : edges_) {
            if (!seen_e.insert(e.id).second) throw NotATree("duplicate edge id '" + e.id + "'");
            if (e.u < 0 || e.v < 0 || e.u >= int(vids_.size()) || e.v >= int(vids_.size()))
                throw NotATree("edge endpoint out of range");
            if (e.u == e.v)
                throw NotATree("loop at '" + vids_[e.u] + "'; subdivide the loop first");
            auto pr = std::minmax(e.u, e.v);
            if (!seen_pair.insert({pr.first, pr.second}).second)
                throw NotATree("multi-edge between '" + vids_[e.u] + "' and '" + vids_[e.v] +
                               "'; subdivide one copy first");
            if (e.len.m < 0 || e.len.c < 0 || (e.len.c == 0 && e.len.m == 0))
                throw NonPositiveLength("edge '" + e.id + "'");
            if (e.len.m == 0 && e.len.c <= 0) throw NonPositiveLength("edge '" + e.id + "'");
        }
        if (edges_.size() + 1 != vids_.size())
            throw NotATree("edge count does not match a tree");
        if (default_L_ <= 0) throw NonPositiveLength("default L");
        // connectivity
        build_adjacency();
        std::vector<bool> seen(vids_.size(), false);
        std::deque<int> q{0};
        seen[0] = true;
        std::size_t cnt = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (auto [y, e] : adj_[x])
                if (!seen[y]) {
                    seen[y] = true;
                    ++cnt;
                    q.push_back(y);
                }
        }
        if (cnt != vids_.size()) throw NotATree("graph not connected");
    }

    void build_adjacency() {
        adj_.assign(vids_.size(), {});
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            adj_[edges_[e].u].push_back({edges_[e].v, int(e)});
            adj_[edges_[e].v].push_back({edges_[e].u, int(e)});
        }
    }

    std::vector<std::string> vids_;
    std::vector<GraphEdge> edges_;
    Rational default_L_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
};

inline MetricGraph MetricGraph::star(int k, const Rational& L1) {
    if (k < 3) throw std::invalid_argument("star requires k >= 3");
    if (L1 <= 0) throw NonPositiveLength("star L1");
    std::vector<std::string> vs{"c"};
    std::vector<GraphEdge> es;
    for (int i = 1; i <= k; ++i) {
        vs.push_back("v" + std::to_string(i));
        GraphEdge e;
        e.id = "e" + std::to_string(i);
        e.u = 0;
        e.v = i;
        e.len = (i == 1) ? LinL(0, 1) : LinL::constant(1);
        es.push_back(e);
    }
    return MetricGraph(std::move(vs), std::move(es), L1);
}

inline MetricGraph MetricGraph::generalized_h(int m, int n, const Rational& L1) {
    if (m < 3 || n < 3) throw std::invalid_argument("generalized_h requires m, n >= 3");
    if (L1 <= 0) throw NonPositiveLength("generalized_h L1");
    std::vector<std::string> vs{"cl", "cr", "m0"};
    std::vector<GraphEdge> es;
    auto leaf = [&](const std::string& eid, int center) {
        vs.push_back("v" + eid.substr(1));
        GraphEdge e;
        e.id = eid;
        e.u = center;
        e.v = int(vs.size()) - 1;
        e.len = LinL::constant(1);
        es.push_back(e);
    };
    for (int i = 2; i <= m; ++i) leaf("e" + std::to_string(i), 0);
    for (int j = m + 1; j <= m + n - 1; ++j) leaf("e" + std::to_string(j), 1);
    GraphEdge f;
    f.id = "f";
    f.u = 0;
    f.v = 2;
    f.len = LinL(0, Rational(1, 2));
    es.push_back(f);
    GraphEdge fp;
    fp.id = "fp";
    fp.u = 1;
    fp.v = 2;
    fp.len = LinL(0, Rational(1, 2));
    es.push_back(fp);
    return MetricGraph(std::move(vs), std::move(es), L1);
}

inline MetricGraph MetricGraph::from_spec(const std::string& json_text,
                                          const std::string& l_edge_id) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("graph spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw ParseError("graph spec must contain 'vertices' and 'edges'");
    try {
    std::vector<std::string> vs;
    for (const auto& v : j["vertices"]) {
        if (!v.is_string()) throw ParseError("vertex ids must be strings");
        vs.push_back(v.get<std::string>());
    }
    std::map<std::string, int> vidx;
    for (std::size_t i = 0; i < vs.size(); ++i) vidx[vs[i]] = int(i);
    std::vector<GraphEdge> es;
    Rational default_L = 1;
    bool have_l_edge = false;
    for (const auto& je : j["edges"]) {
        if (!je.contains("id") || !je.contains("u") || !je.contains("v") || !je.contains("len"))
            throw ParseError("edge entries need id, u, v, len");
        GraphEdge e;
        e.id = je["id"].get<std::string>();
        auto lookup = [&](const std::string& key) {
            std::string id = je[key].get<std::string>();
            auto it = vidx.find(id);
            if (it == vidx.end()) throw ParseError("edge endpoint '" + id + "' not declared");
            return it->second;
        };
        e.u = lookup("u");
        e.v = lookup("v");
        Rational len = parse_rational(je["len"].get<std::string>());
        if (len <= 0) throw NonPositiveLength("edge '" + e.id + "'");
        if (!l_edge_id.empty() && e.id == l_edge_id) {
            e.len = LinL(0, 1);
            default_L = len;
            have_l_edge = true;
        } else {
            e.len = LinL::constant(len);
        }
        es.push_back(e);
    }
    if (!l_edge_id.empty() && !have_l_edge)
        throw ParseError("designated L edge '" + l_edge_id + "' not present");
    return MetricGraph(std::move(vs), std::move(es), default_L);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed graph spec: ") + e.what());
    }
}

/// Subdivide one edge at its midpoint; used to prepare loops or to refine.
inline MetricGraph subdivide_edge(const MetricGraph& g, const std::string& edge_id) {
    int ei = g.edge_index(edge_id);
    std::vector<std::string> vs = g.vertex_ids();
    vs.push_back(edge_id + ".m");
    int mid = int(vs.size()) - 1;
    std::vector<GraphEdge> es;
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
        const auto& e = g.edge(i);
        if (int(i) != ei) {
            es.push_back(e);
            continue;
        }
        GraphEdge h1{e.id + ".1", e.u, mid, LinL(e.len.c / 2, e.len.m / 2)};
        GraphEdge h2{e.id + ".2", mid, e.v, LinL(e.len.c / 2, e.len.m / 2)};
        es.push_back(h1);
        es.push_back(h2);
    }
    return MetricGraph(std::move(vs), std::move(es), g.default_L());
}

inline std::string graph_to_spec(const MetricGraph& g) {
    nlohmann::json j;
    j["vertices"] = g.vertex_ids();
    j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges()) {
        nlohmann::json je;
        je["id"] = e.id;
        je["u"] = g.vertex_ids()[e.u];
        je["v"] = g.vertex_ids()[e.v];
        je["len"] = rat_str(e.len.at(g.default_L()));
        j["edges"].push_back(je);
    }
    return j.dump(2);
}

/// A point of the metric graph in canonical form: a vertex, or an interior
/// point (edge, t) with 0 < t < length. Canonical form makes equal points
/// compare equal across charts.
struct GraphPoint {
    bool at_vertex = true;
    int vertex = -1;
    int edge = -1;
    Rational t{0};

    static GraphPoint at(int vertex) {
        GraphPoint p;
        p.at_vertex = true;
        p.vertex = vertex;
        return p;
    }

    bool operator==(const GraphPoint& o) const {
        if (at_vertex != o.at_vertex) return false;
        if (at_vertex) return vertex == o.vertex;
        return edge == o.edge && t == o.t;
    }
};

/// Canonicalize a coordinate on an edge at parameter length L.
inline GraphPoint point_on_edge(const MetricGraph& g, int edge, const Rational& t,
                                const Rational& L) {
    if (edge < 0 || edge >= int(g.num_edges())) throw PointNotOnGraph("edge index out of range");
    Rational len = g.edge_length(edge, L);
    if (t < 0 || t > len) throw PointNotOnGraph("coordinate outside edge");
    if (t == 0) return GraphPoint::at(g.edge(edge).u);
    if (t == len) return GraphPoint::at(g.edge(edge).v);
    GraphPoint p;
    p.at_vertex = false;
    p.edge = edge;
    p.t = t;
    return p;
}

inline GraphPoint point_on_edge(const MetricGraph& g, const std::string& edge_id,
                                const Rational& t) {
    return point_on_edge(g, g.edge_index(edge_id), t, g.default_L());
}

/// Exact path metric at parameter length L.
inline Rational path_distance(const MetricGraph& g, const GraphPoint& p, const GraphPoint& q,
                              const Rational& L) {
    auto vdist = [&](int u, int v) { return g.vertex_distance_lin(u, v).at(L); };
    auto check = [&](const GraphPoint& x) {
        if (x.at_vertex) {
            if (x.vertex < 0 || x.vertex >= int(g.num_vertices()))
                throw PointNotOnGraph("vertex index out of range");
        } else {
            if (x.edge < 0 || x.edge >= int(g.num_edges()))
                throw PointNotOnGraph("edge index out of range");
            if (x.t <= 0 || x.t >= g.edge_length(x.edge, L))
                throw PointNotOnGraph("interior point not in canonical range");
        }
    };
    check(p);
    check(q);
    if (p.at_vertex && q.at_vertex) return vdist(p.vertex, q.vertex);
    if (!p.at_vertex && !q.at_vertex && p.edge == q.edge) return abs(p.t - q.t);
    if (p.at_vertex) {
        const auto& e = g.edge(q.edge);
        Rational via_u = vdist(p.vertex, e.u) + q.t;
        Rational via_v = vdist(p.vertex, e.v) + g.edge_length(q.edge, L) - q.t;
        return std::min(via_u, via_v);
    }
    if (q.at_vertex) return path_distance(g, q, p, L);
    // interior points on distinct edges: route through the four endpoint pairs
    const auto& a = g.edge(p.edge);
    const auto& b = g.edge(q.edge);
    Rational la = g.edge_length(p.edge, L), lb = g.edge_length(q.edge, L);
    Rational best = p.t + vdist(a.u, b.u) + q.t;
    best = std::min(best, p.t + vdist(a.u, b.v) + lb - q.t);
    best = std::min(best, la - p.t + vdist(a.v, b.u) + q.t);
    best = std::min(best, la - p.t + vdist(a.v, b.v) + lb - q.t);
    return best;
}

inline Rational path_distance(const MetricGraph& g, const GraphPoint& p, const GraphPoint& q) {
    return path_distance(g, p, q, g.default_L());
}

} // namespace treeconf
