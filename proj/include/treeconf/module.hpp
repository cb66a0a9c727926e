#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeconf/chambers.hpp"
#include "treeconf/homology.hpp"

namespace treeconf {

struct CommutativityViolation : std::runtime_error {
    explicit CommutativityViolation(const std::string& m)
        : std::runtime_error("CommutativityViolation: " + m) {}
};
struct TorsionDetected : std::runtime_error {
    explicit TorsionDetected(const std::string& m)
        : std::runtime_error("TorsionDetected: " + m) {}
};

/// Finite poset presented by generating relations (covering pairs) plus the
/// full comparability table they generate.
struct ModulePoset {
    int n = 0;
    std::vector<std::vector<bool>> leq;
    std::vector<std::pair<int, int>> gens; // (s, t), maps run H(s) -> H(t)

    std::vector<int> successors(int s) const {
        std::vector<int> out;
        for (auto [a, b] : gens)
            if (a == s) out.push_back(b);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::vector<std::pair<int, int>> canonical_chain(int s, int t) const {
        if (!leq[s][t]) throw NotComparable("poset elements not comparable");
        std::vector<std::pair<int, int>> chain;
        int cur = s;
        while (cur != t) {
            int next = -1;
            for (int u : successors(cur))
                if (leq[u][t]) {
                    next = u;
                    break;
                }
            if (next < 0) throw std::logic_error("generators do not generate the order");
            chain.push_back({cur, next});
            cur = next;
        }
        return chain;
    }
};

/**
 * Chamber-indexed persistence module: one F_p vector space per chamber,
 * one matrix per covering relation; longer relations are composed along the
 * canonical chain, never recomputed.
 */
struct PersistenceModule {
    ModulePoset poset;
    int degree = 0;
    std::uint32_t prime = kDefaultPrime;
    std::vector<int> dims;
    std::map<std::pair<int, int>, FpMat> maps;
    std::vector<ParamPoint> samples;   // provenance: chamber sample points
    std::vector<int> chamber_ids;      // provenance: ids in the source arrangement

    FpMat map_between(int s, int t) const {
        if (s == t) return FpMat::identity(dims[s], prime);
        FpMat acc = FpMat::identity(dims[s], prime);
        for (auto edge : poset.canonical_chain(s, t)) acc = maps.at(edge) * acc;
        return acc;
    }
};

struct FunctorialityReport {
    bool pass = true;
    std::vector<std::string> violations;
};

/**
 * Isomorphism H(x) -> H(y) for two interior points of one chamber. When the
 * points are comparable this is a single inclusion-induced map (inverted if
 * need be); otherwise route through the common lower bound (max r, min L) in
 * the index order, bisecting the segment until that corner stays inside the
 * chamber. Every factor is an isomorphism because the chamber is a single
 * combinatorial type.
 */
inline FpMat chamber_transport(const MetricGraph& g, const ChamberArrangement& arr, int chamber,
                               const ParamPoint& x, const ParamPoint& y, int degree,
                               std::uint32_t prime, int dim_hint, int depth = 0) {
    if (x.r == y.r && x.L == y.L) return FpMat::identity(dim_hint, prime);
    if (depth > 64) throw std::logic_error("chamber transport recursion too deep");
    auto invert = [&](const FpMat& m) {
        auto inv = m.inverse();
        if (!inv) throw std::logic_error("within-chamber induced map is not an isomorphism");
        return *inv;
    };
    if (y.r <= x.r && y.L >= x.L) return induced_map(g, x, y, degree, prime);
    if (x.r <= y.r && x.L >= y.L) return invert(induced_map(g, y, x, degree, prime));
    ParamPoint w(std::max(x.r, y.r), std::min(x.L, y.L)); // maps into both x and y
    if (arr.sign_vector_matches(chamber, w.r, w.L)) {
        FpMat a = induced_map(g, w, x, degree, prime);
        FpMat b = induced_map(g, w, y, degree, prime);
        return b * invert(a);
    }
    ParamPoint mid((x.r + y.r) / 2, (x.L + y.L) / 2);
    FpMat first = chamber_transport(g, arr, chamber, x, mid, degree, prime, dim_hint, depth + 1);
    FpMat second = chamber_transport(g, arr, chamber, mid, y, degree, prime, dim_hint, depth + 1);
    return second * first;
}

namespace detail {

inline void enumerate_paths(const ModulePoset& poset, int s, int t, int maxlen,
                            std::vector<std::pair<int, int>>& cur,
                            std::vector<std::vector<std::pair<int, int>>>& out) {
    int at = cur.empty() ? s : cur.back().second;
    if (at == t && !cur.empty()) {
        out.push_back(cur);
        return;
    }
    if (int(cur.size()) >= maxlen) return;
    for (int u : poset.successors(at)) {
        if (!poset.leq[u][t]) continue;
        cur.push_back({at, u});
        enumerate_paths(poset, s, t, maxlen, cur, out);
        cur.pop_back();
    }
}

} // namespace detail

/// Compare composites along all generator paths of length <= maxlen between
/// every comparable pair; report-only.
inline FunctorialityReport check_functoriality(const PersistenceModule& M, int maxlen = 3) {
    FunctorialityReport rep;
    for (int s = 0; s < M.poset.n; ++s)
        for (int t = 0; t < M.poset.n; ++t) {
            if (s == t || !M.poset.leq[s][t]) continue;
            std::vector<std::vector<std::pair<int, int>>> paths;
            std::vector<std::pair<int, int>> cur;
            detail::enumerate_paths(M.poset, s, t, maxlen, cur, paths);
            if (paths.size() < 2) continue;
            auto compose = [&](const std::vector<std::pair<int, int>>& path) {
                FpMat acc = FpMat::identity(M.dims[s], M.prime);
                for (auto e : path) acc = M.maps.at(e) * acc;
                return acc;
            };
            FpMat first = compose(paths[0]);
            for (std::size_t k = 1; k < paths.size(); ++k)
                if (!(compose(paths[k]) == first)) {
                    rep.pass = false;
                    rep.violations.push_back("path composites differ between chambers " +
                                             std::to_string(s) + " and " + std::to_string(t));
                    break;
                }
        }
    return rep;
}

/**
 * Assemble PH_degree(X^2_{-,-}; F_p) over the chamber poset: fibers are the
 * homology of the sample-point complex, structure maps are inclusion-induced,
 * one covering relation at a time. Verifies commutativity of all squares and
 * that integral homology is torsion-free on every chamber.
 */
inline PersistenceModule build_module(const MetricGraph& g, int degree,
                                      std::uint32_t prime = kDefaultPrime,
                                      std::optional<Rational> bound = std::nullopt) {
    auto lines = critical_lines(g);
    ChamberArrangement arr = bound ? arrangement(lines, *bound) : arrangement(lines);

    PersistenceModule M;
    M.degree = degree;
    M.prime = prime;
    M.poset.n = int(arr.chambers.size());
    M.poset.gens = arr.covering;
    M.poset.leq.assign(M.poset.n, std::vector<bool>(M.poset.n, false));
    for (int s = 0; s < M.poset.n; ++s)
        for (int t = 0; t < M.poset.n; ++t) M.poset.leq[s][t] = arr.leq(s, t);

    for (int c = 0; c < M.poset.n; ++c) {
        ParamPoint p = arr.sample_of(c);
        M.samples.push_back(p);
        M.chamber_ids.push_back(c);
        PolyComplex cx = build_complex(g, p);
        ChainComplex cc = cx.chain_complex();
        HomologySummary h = betti(cc);
        if (!h.torsion_free())
            throw TorsionDetected("integral homology has torsion at chamber " + std::to_string(c));
        SubChain sc = full_chain(cx, prime);
        HomologyBasis hb = homology_basis(sc, degree);
        if (long(hb.reps.cols()) != h.betti(degree))
            throw std::logic_error("F_p homology dimension disagrees with integral rank");
        M.dims.push_back(int(hb.reps.cols()));
    }

    // one map per covering relation, computed at a comparable pair straddling
    // the wall and transported to the chamber samples (well defined by the
    // colimit construction, independent of all the choices made here)
    for (std::size_t ci = 0; ci < M.poset.gens.size(); ++ci) {
        auto [s, t] = M.poset.gens[ci];
        auto [pf, pt] = arr.wall_pair(int(ci));
        FpMat cross = induced_map(g, pf, pt, degree, prime);
        FpMat into =
            chamber_transport(g, arr, s, arr.sample_of(s), pf, degree, prime, M.dims[s]);
        FpMat out_of =
            chamber_transport(g, arr, t, pt, arr.sample_of(t), degree, prime, M.dims[t]);
        FpMat m = out_of * cross * into;
        if (m.rows() != std::size_t(M.dims[t]) || m.cols() != std::size_t(M.dims[s]))
            throw std::logic_error("induced map shape mismatch");
        M.maps.insert({{s, t}, std::move(m)});
    }

    // commutativity of every square of covering relations
    for (auto [s, a] : M.poset.gens)
        for (auto [a2, t] : M.poset.gens) {
            if (a2 != a) continue;
            for (auto [s2, b] : M.poset.gens) {
                if (s2 != s || b == a) continue;
                for (auto [b2, t2] : M.poset.gens) {
                    if (b2 != b || t2 != t) continue;
                    FpMat left = M.maps.at({a, t}) * M.maps.at({s, a});
                    FpMat right = M.maps.at({b, t}) * M.maps.at({s, b});
                    if (!(left == right))
                        throw CommutativityViolation(
                            "square " + std::to_string(s) + "->" + std::to_string(t) +
                            " via " + std::to_string(a) + " / " + std::to_string(b));
                }
            }
        }
    return M;
}

/// Restriction to the chambers with nonzero fibers; generating relations are
/// the covering pairs of the restricted order, their maps composed from the
/// ambient module.
inline PersistenceModule restrict_support(const PersistenceModule& M) {
    std::vector<int> keep;
    for (int c = 0; c < M.poset.n; ++c)
        if (M.dims[c] > 0) keep.push_back(c);
    std::vector<int> pos(M.poset.n, -1);
    for (std::size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = int(i);

    PersistenceModule R;
    R.degree = M.degree;
    R.prime = M.prime;
    R.poset.n = int(keep.size());
    R.poset.leq.assign(R.poset.n, std::vector<bool>(R.poset.n, false));
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j)
            R.poset.leq[i][j] = M.poset.leq[keep[i]][keep[j]];
    for (std::size_t i = 0; i < keep.size(); ++i) {
        R.dims.push_back(M.dims[keep[i]]);
        R.samples.push_back(M.samples[keep[i]]);
        R.chamber_ids.push_back(M.chamber_ids[keep[i]]);
    }
    // covering pairs of the restricted order
    for (int i = 0; i < R.poset.n; ++i)
        for (int j = 0; j < R.poset.n; ++j) {
            if (i == j || !R.poset.leq[i][j]) continue;
            bool cover = true;
            for (int k = 0; k < R.poset.n && cover; ++k)
                if (k != i && k != j && R.poset.leq[i][k] && R.poset.leq[k][j]) cover = false;
            if (!cover) continue;
            R.poset.gens.push_back({i, j});
            R.maps.insert({{i, j}, M.map_between(keep[i], keep[j])});
        }
    return R;
}

} // namespace treeconf
