#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeconf/complex.hpp"
#include "treeconf/fp.hpp"
#include "treeconf/snf.hpp"

namespace treeconf {

struct HomologySummary {
    long b0 = 0, b1 = 0, b2 = 0;
    std::vector<Integer> torsion0, torsion1; // invariant factors > 1 in degree 0, 1

    bool torsion_free() const { return torsion0.empty() && torsion1.empty(); }
    long betti(int deg) const { return deg == 0 ? b0 : deg == 1 ? b1 : deg == 2 ? b2 : 0; }
};

/// Integral homology of a 2-dimensional chain complex via Smith normal form.
/// b_i = (#i-cells) - rank d_i - rank d_{i+1}; torsion in degree i comes from
/// the invariant factors of d_{i+1} that exceed 1.
inline HomologySummary betti(const ChainComplex& cc) {
    auto s1 = smith_normal_form(cc.d1);
    auto s2 = smith_normal_form(cc.d2);
    if (!snf_verify(cc.d1, s1) || !snf_verify(cc.d2, s2))
        throw std::logic_error("SNF self-check failed");
    HomologySummary h;
    h.b0 = long(cc.n0) - long(s1.rank);
    h.b1 = long(cc.n1) - long(s1.rank) - long(s2.rank);
    h.b2 = long(cc.n2) - long(s2.rank);
    for (const auto& d : s1.diagonal)
        if (d > 1) h.torsion0.push_back(d);
    for (const auto& d : s2.diagonal)
        if (d > 1) h.torsion1.push_back(d);
    return h;
}

/// Boundary matrices over F_p restricted to a cell subset (a subcomplex).
/// keep0/keep1/keep2 list the retained cell ids of each dimension, sorted.
struct SubChain {
    FpMat d1, d2;
    std::vector<int> keep0, keep1, keep2;
};

inline SubChain subchain(const PolyComplex& cx, const std::vector<int>& keep0,
                         const std::vector<int>& keep1, const std::vector<int>& keep2,
                         std::uint32_t p) {
    SubChain sc;
    sc.keep0 = keep0;
    sc.keep1 = keep1;
    sc.keep2 = keep2;
    std::vector<int> pos0(cx.cells0.size(), -1), pos1(cx.cells1.size(), -1);
    for (std::size_t i = 0; i < keep0.size(); ++i) pos0[keep0[i]] = int(i);
    for (std::size_t i = 0; i < keep1.size(); ++i) pos1[keep1[i]] = int(i);
    sc.d1 = FpMat(keep0.size(), keep1.size(), p);
    for (std::size_t j = 0; j < keep1.size(); ++j) {
        const Cell1& e = cx.cells1[keep1[j]];
        if (pos0[e.b] < 0 || pos0[e.a] < 0)
            throw IllGluedComplex("subcomplex not closed under faces");
        sc.d1(pos0[e.b], j) = sc.d1.add(sc.d1(pos0[e.b], j), 1);
        sc.d1(pos0[e.a], j) = sc.d1.sub(sc.d1(pos0[e.a], j), 1);
    }
    sc.d2 = FpMat(keep1.size(), keep2.size(), p);
    for (std::size_t j = 0; j < keep2.size(); ++j) {
        const Cell2& f = cx.cells2[keep2[j]];
        for (auto [e, s] : f.bdry) {
            if (pos1[e] < 0) throw IllGluedComplex("subcomplex not closed under faces");
            std::uint32_t v = sc.d2(pos1[e], j);
            sc.d2(pos1[e], j) = s > 0 ? sc.d2.add(v, 1) : sc.d2.sub(v, 1);
        }
    }
    return sc;
}

inline SubChain full_chain(const PolyComplex& cx, std::uint32_t p) {
    std::vector<int> k0(cx.cells0.size()), k1(cx.cells1.size()), k2(cx.cells2.size());
    for (std::size_t i = 0; i < k0.size(); ++i) k0[i] = int(i);
    for (std::size_t i = 0; i < k1.size(); ++i) k1[i] = int(i);
    for (std::size_t i = 0; i < k2.size(); ++i) k2[i] = int(i);
    return subchain(cx, k0, k1, k2, p);
}

/**
 * Homology basis over F_p in degree 0 or 1: representative cycles chosen
 * deterministically (the lexicographically first cells / kernel vectors that
 * complete a basis modulo boundaries).
 */
struct HomologyBasis {
    int degree = 0;
    FpMat reps; // (#cells of the degree) x dim, columns are representative cycles
};

namespace detail {

// incremental independence filter: keep the columns of candidates that are
// independent modulo span(baseline)
inline std::vector<std::size_t> complete_basis(const FpMat& baseline, const FpMat& candidates) {
    std::uint32_t p = candidates.prime();
    std::size_t rows = candidates.rows();
    FpMat work(rows, baseline.cols() + candidates.cols(), p);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < baseline.cols(); ++j) work(i, j) = baseline(i, j);
        for (std::size_t j = 0; j < candidates.cols(); ++j)
            work(i, baseline.cols() + j) = candidates(i, j);
    }
    auto pivots = work.rref();
    std::vector<std::size_t> chosen;
    for (auto pc : pivots)
        if (pc >= baseline.cols()) chosen.push_back(pc - baseline.cols());
    return chosen;
}

} // namespace detail

inline HomologyBasis homology_basis(const SubChain& sc, int degree) {
    std::uint32_t p = sc.d1.prime();
    HomologyBasis hb;
    hb.degree = degree;
    if (degree == 0) {
        std::size_t n0 = sc.d1.rows();
        FpMat cand = FpMat::identity(n0, p);
        auto chosen = detail::complete_basis(sc.d1, cand);
        hb.reps = FpMat(n0, chosen.size(), p);
        for (std::size_t k = 0; k < chosen.size(); ++k) hb.reps(chosen[k], k) = 1;
        return hb;
    }
    if (degree == 1) {
        auto kbasis = sc.d1.kernel_basis();
        std::size_t n1 = sc.d1.cols();
        FpMat cand(n1, kbasis.size(), p);
        for (std::size_t j = 0; j < kbasis.size(); ++j)
            for (std::size_t i = 0; i < n1; ++i) cand(i, j) = kbasis[j][i];
        auto chosen = detail::complete_basis(sc.d2, cand);
        hb.reps = FpMat(n1, chosen.size(), p);
        for (std::size_t k = 0; k < chosen.size(); ++k)
            for (std::size_t i = 0; i < n1; ++i) hb.reps(i, k) = kbasis[chosen[k]][i];
        return hb;
    }
    throw std::invalid_argument("homology_basis supports degree 0 or 1");
}

/// Coordinates of a cycle's class in a homology basis: solve
/// [reps | boundaries] c = z and take the reps block of c.
inline std::optional<std::vector<std::uint32_t>> class_coordinates(const HomologyBasis& hb,
                                                                   const FpMat& boundaries,
                                                                   const std::vector<std::uint32_t>& z) {
    std::uint32_t p = hb.reps.prime();
    std::size_t rows = hb.reps.rows();
    FpMat sys(rows, hb.reps.cols() + boundaries.cols(), p);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < hb.reps.cols(); ++j) sys(i, j) = hb.reps(i, j);
        for (std::size_t j = 0; j < boundaries.cols(); ++j)
            sys(i, hb.reps.cols() + j) = boundaries(i, j);
    }
    auto sol = sys.solve(z);
    if (!sol) return std::nullopt;
    return std::vector<std::uint32_t>(sol->begin(), sol->begin() + hb.reps.cols());
}

// ---------------------------------------------------------------------------
// Induced maps on homology for comparable parameter points.
//
// The bifiltration map X^2_{r,L} -> X^2_{r',L'} (r' <= r, L' >= L) rescales
// every edge linearly onto its longer copy. In chart coordinates this is the
// diagonal scaling (x, y) -> (s_i x, s_j y) with s_e = len_e(L')/len_e(L), a
// distance-expanding map, so the image of the source complex is a literal
// subcomplex of the target once the target is refined along the transformed
// source constraint lines. The chain map pushes each source cell onto the
// target cells its image covers.
// ---------------------------------------------------------------------------

namespace detail {

struct ChartScale {
    std::vector<Rational> s; // per-edge scale factor, >= 1

    static ChartScale make(const MetricGraph& g, const Rational& Lfrom, const Rational& Lto) {
        ChartScale cs;
        for (std::size_t e = 0; e < g.num_edges(); ++e)
            cs.s.push_back(g.edge_length(e, Lto) / g.edge_length(e, Lfrom));
        return cs;
    }

    GraphPoint apply(const MetricGraph& g, const GraphPoint& gp) const {
        if (gp.at_vertex) return gp;
        GraphPoint out = gp;
        out.t = gp.t * s[gp.edge];
        return out;
    }

    GPKey apply_key(const MetricGraph& g, const GPKey& k) const {
        if (k.kind == 0) return k;
        GPKey out = k;
        out.t = k.t * s[g.edge_index(k.id)];
        return out;
    }
};

inline Rational param_on_edge(const MetricGraph& g, const GraphPoint& gp, int edge,
                              const Rational& L) {
    if (gp.at_vertex) {
        if (gp.vertex == g.edge(edge).u) return Rational(0);
        if (gp.vertex == g.edge(edge).v) return g.edge_length(edge, L);
        throw std::logic_error("point not on carrier edge");
    }
    if (gp.edge != edge) throw std::logic_error("point not on carrier edge");
    return gp.t;
}

} // namespace detail

/// Cut lines for the target complex: every source constraint line, pushed
/// forward through the rescaling map.
inline ExtraCuts induced_cuts(const MetricGraph& g, const ParamPoint& from, const ParamPoint& to) {
    auto cs = detail::ChartScale::make(g, from.L, to.L);
    ExtraCuts cuts;
    for (const auto& sys : cell_systems(g, from)) {
        ChartKey ck{sys.ei, sys.ej, sys.branch};
        for (const auto& h : sys.constraints)
            cuts[ck].push_back(LineXY(h.a / cs.s[sys.ei], h.b / cs.s[sys.ej], h.c));
    }
    return cuts;
}

struct InducedData {
    PolyComplex source, target;
    IntMat chi0, chi1, chi2; // chain map C(source) -> C(target), per degree
    FpMat matrix;            // induced map on homology in the requested degree
    std::size_t dim_source = 0, dim_target = 0;
};

inline InducedData induced_map_full(const MetricGraph& g, const ParamPoint& from,
                                    const ParamPoint& to, int degree,
                                    std::uint32_t p = kDefaultPrime) {
    if (!(to.r <= from.r && to.L >= from.L))
        throw NotComparable("need to.r <= from.r and to.L >= from.L");
    if (degree != 0 && degree != 1)
        throw std::invalid_argument("induced_map supports degree 0 or 1");

    InducedData out;
    out.source = build_complex(g, from);
    out.target = build_complex(g, to, induced_cuts(g, from, to));
    const PolyComplex& S = out.source;
    const PolyComplex& T = out.target;
    auto cs = detail::ChartScale::make(g, from.L, to.L);

    // 0-cells: key lookup of the rescaled point pair
    std::vector<int> map0(S.cells0.size(), -1);
    for (std::size_t v = 0; v < S.cells0.size(); ++v) {
        Key0 k{cs.apply_key(g, S.cells0[v].key.p), cs.apply_key(g, S.cells0[v].key.q)};
        auto idx = T.find0(k);
        if (!idx) throw std::logic_error("source 0-cell missing from refined target");
        map0[v] = *idx;
    }
    out.chi0 = IntMat(T.cells0.size(), S.cells0.size());
    for (std::size_t v = 0; v < S.cells0.size(); ++v) out.chi0(map0[v], v) = 1;

    // 1-cells: chain of target 1-cells covering the rescaled segment
    out.chi1 = IntMat(T.cells1.size(), S.cells1.size());
    for (std::size_t e = 0; e < S.cells1.size(); ++e) {
        const Cell1& sc1 = S.cells1[e];
        Carrier tcp = sc1.key.cp, tcq = sc1.key.cq;
        if (tcp.kind == 0) tcp.fixed = cs.apply_key(g, tcp.fixed);
        if (tcq.kind == 0) tcq.fixed = cs.apply_key(g, tcq.fixed);
        GraphPoint pa = cs.apply(g, S.cells0[sc1.a].p), qa = cs.apply(g, S.cells0[sc1.a].q);
        GraphPoint pb = cs.apply(g, S.cells0[sc1.b].p), qb = cs.apply(g, S.cells0[sc1.b].q);

        int movp = tcp.kind == 1 ? g.edge_index(tcp.edge) : -1;
        int movq = tcq.kind == 1 ? g.edge_index(tcq.edge) : -1;
        Rational paP, pbP, paQ, pbQ;
        if (movp >= 0) {
            paP = detail::param_on_edge(g, pa, movp, to.L);
            pbP = detail::param_on_edge(g, pb, movp, to.L);
        }
        if (movq >= 0) {
            paQ = detail::param_on_edge(g, qa, movq, to.L);
            pbQ = detail::param_on_edge(g, qb, movq, to.L);
        }

        for (std::size_t te = 0; te < T.cells1.size(); ++te) {
            const Cell1& tc1 = T.cells1[te];
            if (!(tc1.key.cp == tcp) || !(tc1.key.cq == tcq)) continue;
            bool ok = true;
            Rational tap, tbp, taq, tbq;
            if (movp >= 0) {
                tap = detail::param_on_edge(g, T.cells0[tc1.a].p, movp, to.L);
                tbp = detail::param_on_edge(g, T.cells0[tc1.b].p, movp, to.L);
                Rational lo = std::min(paP, pbP), hi = std::max(paP, pbP);
                if (tap < lo || tap > hi || tbp < lo || tbp > hi) ok = false;
            }
            if (ok && movq >= 0) {
                taq = detail::param_on_edge(g, T.cells0[tc1.a].q, movq, to.L);
                tbq = detail::param_on_edge(g, T.cells0[tc1.b].q, movq, to.L);
                Rational lo = std::min(paQ, pbQ), hi = std::max(paQ, pbQ);
                if (taq < lo || taq > hi || tbq < lo || tbq > hi) ok = false;
            }
            if (ok && movp >= 0 && movq >= 0) {
                // collinearity with the image segment
                if ((tap - paP) * (pbQ - paQ) != (taq - paQ) * (pbP - paP)) ok = false;
                if ((tbp - paP) * (pbQ - paQ) != (tbq - paQ) * (pbP - paP)) ok = false;
            }
            if (!ok) continue;
            int sgn;
            if (movp >= 0)
                sgn = ((pbP > paP) == (tbp > tap)) ? 1 : -1;
            else
                sgn = ((pbQ > paQ) == (tbq > taq)) ? 1 : -1;
            out.chi1(te, e) = sgn;
        }
    }

    // 2-cells: all target faces of the same chart whose centroid satisfies
    // the transformed source system
    out.chi2 = IntMat(T.cells2.size(), S.cells2.size());
    auto systems = cell_systems(g, from);
    for (std::size_t f = 0; f < S.cells2.size(); ++f) {
        ChartKey ck = S.charts[S.cells2[f].chart];
        const CellSystem* sys = nullptr;
        for (const auto& s : systems)
            if (s.ei == ck.ei && s.ej == ck.ej && s.branch == ck.branch) {
                sys = &s;
                break;
            }
        for (std::size_t tf = 0; tf < T.cells2.size(); ++tf) {
            if (!(T.charts[T.cells2[tf].chart] == ck)) continue;
            Vec2 c = centroid(T.cells2[tf].poly);
            bool inside = true;
            for (const auto& h : sys->constraints)
                if (h.a / cs.s[ck.ei] * c.x + h.b / cs.s[ck.ej] * c.y > h.c) {
                    inside = false;
                    break;
                }
            if (inside) out.chi2(tf, f) = 1;
        }
    }

    // chain-map identity: boundary commutes with the pushforward
    ChainComplex ccS = S.chain_complex();
    ChainComplex ccT = T.chain_complex();
    if (!(ccT.d1 * out.chi1 == out.chi0 * ccS.d1))
        throw std::logic_error("induced chain map fails d1 compatibility");
    if (!(ccT.d2 * out.chi2 == out.chi1 * ccS.d2))
        throw std::logic_error("induced chain map fails d2 compatibility");

    // homology map
    SubChain scS = full_chain(S, p), scT = full_chain(T, p);
    HomologyBasis hbS = homology_basis(scS, degree);
    HomologyBasis hbT = homology_basis(scT, degree);
    const FpMat& bT = degree == 0 ? scT.d1 : scT.d2;
    const IntMat& chi = degree == 0 ? out.chi0 : out.chi1;
    out.dim_source = hbS.reps.cols();
    out.dim_target = hbT.reps.cols();
    out.matrix = FpMat(hbT.reps.cols(), hbS.reps.cols(), p);
    for (std::size_t j = 0; j < hbS.reps.cols(); ++j) {
        std::vector<std::uint32_t> w(chi.rows(), 0);
        for (std::size_t i = 0; i < chi.rows(); ++i) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < chi.cols(); ++k) {
                const Integer& v = chi(i, k);
                if (v == 0 || hbS.reps(k, j) == 0) continue;
                std::int64_t vi = v.convert_to<std::int64_t>();
                std::uint32_t term = std::uint32_t(((vi % (std::int64_t)p) + p) % p);
                acc = (acc + (std::uint64_t)term * hbS.reps(k, j)) % p;
            }
            w[i] = (std::uint32_t)acc;
        }
        auto coords = class_coordinates(hbT, bT, w);
        if (!coords) throw std::logic_error("pushed cycle not expressible in target homology");
        for (std::size_t i = 0; i < coords->size(); ++i) out.matrix(i, j) = (*coords)[i];
    }
    return out;
}

inline FpMat induced_map(const MetricGraph& g, const ParamPoint& from, const ParamPoint& to,
                         int degree, std::uint32_t p = kDefaultPrime) {
    return induced_map_full(g, from, to, degree, p).matrix;
}

} // namespace treeconf
