#pragma once

#include <array>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeconf/complex.hpp"
#include "treeconf/homology.hpp"

namespace treeconf {

struct NotACover : std::runtime_error {
    explicit NotACover(const std::string& m) : std::runtime_error("NotACover: " + m) {}
};

/// A closed subcomplex, by cell ids per dimension.
struct CellSet {
    std::set<int> c0, c1, c2;

    bool empty() const { return c0.empty() && c1.empty() && c2.empty(); }

    CellSet intersect(const CellSet& o) const {
        CellSet out;
        for (int x : c0)
            if (o.c0.count(x)) out.c0.insert(x);
        for (int x : c1)
            if (o.c1.count(x)) out.c1.insert(x);
        for (int x : c2)
            if (o.c2.count(x)) out.c2.insert(x);
        return out;
    }
};

/// Ordered cover of a complex by at most four closed subcomplexes.
struct OrderedCover {
    std::vector<CellSet> pieces;
};

/// Subcomplex spanned by the closed charts whose key satisfies `pred`.
inline CellSet chart_subcomplex(const PolyComplex& cx,
                                const std::function<bool(const ChartKey&)>& pred) {
    std::set<int> chart_ids;
    for (std::size_t i = 0; i < cx.charts.size(); ++i)
        if (pred(cx.charts[i])) chart_ids.insert(int(i));
    CellSet out;
    for (std::size_t i = 0; i < cx.cells0.size(); ++i)
        for (int c : cx.cells0[i].charts)
            if (chart_ids.count(c)) {
                out.c0.insert(int(i));
                break;
            }
    for (std::size_t i = 0; i < cx.cells1.size(); ++i)
        for (int c : cx.cells1[i].charts)
            if (chart_ids.count(c)) {
                out.c1.insert(int(i));
                break;
            }
    for (std::size_t i = 0; i < cx.cells2.size(); ++i)
        if (chart_ids.count(cx.cells2[i].chart)) out.c2.insert(int(i));
    return out;
}

inline void validate_cover(const PolyComplex& cx, const OrderedCover& cover) {
    if (cover.pieces.empty() || cover.pieces.size() > 4)
        throw NotACover("covers of size 1..4 are supported");
    CellSet all;
    for (const auto& p : cover.pieces) {
        // closed under faces
        for (int f : p.c2) {
            for (auto [e, s] : cx.cells2[f].bdry)
                if (!p.c1.count(e)) throw NotACover("piece not closed under faces");
        }
        for (int e : p.c1)
            if (!p.c0.count(cx.cells1[e].a) || !p.c0.count(cx.cells1[e].b))
                throw NotACover("piece not closed under faces");
        all.c0.insert(p.c0.begin(), p.c0.end());
        all.c1.insert(p.c1.begin(), p.c1.end());
        all.c2.insert(p.c2.begin(), p.c2.end());
    }
    if (all.c0.size() != cx.cells0.size() || all.c1.size() != cx.cells1.size() ||
        all.c2.size() != cx.cells2.size())
        throw NotACover("union of pieces is not the whole complex");
}

/// One page of the Mayer-Vietoris spectral sequence, rows q in {0,1} and
/// columns p in {0..3}.
struct SpectralPage {
    std::array<std::array<long, 2>, 4> dims{}; // dims[p][q]
    // d1[p][q]: E_{p,q} -> E_{p-1,q}, stored for p >= 1 on the E^1 page
    std::array<std::array<FpMat, 2>, 4> d1;
};

/**
 * E^1 and E^2 pages for an ordered cover: E^1_{p,q} is the direct sum of
 * H_q over the (p+1)-fold intersections, d^1 the alternating sum of the
 * inclusion-induced maps, E^2 the homology of the rows.
 */
inline std::pair<SpectralPage, SpectralPage> mv_pages(const PolyComplex& cx,
                                                      const OrderedCover& cover,
                                                      std::uint32_t p = kDefaultPrime) {
    validate_cover(cx, cover);
    const int npieces = int(cover.pieces.size());

    struct Tuple {
        std::vector<int> idx;   // piece indices, ascending
        CellSet cells;
        SubChain sc;
        HomologyBasis hq[2];
        std::size_t offset[2];  // offset inside E1_{p,q}
    };
    std::array<std::vector<Tuple>, 4> tuples;

    std::function<void(int, std::vector<int>&)> gen = [&](int start, std::vector<int>& cur) {
        if (!cur.empty()) {
            Tuple t;
            t.idx = cur;
            t.cells = cover.pieces[cur[0]];
            for (std::size_t i = 1; i < cur.size(); ++i)
                t.cells = t.cells.intersect(cover.pieces[cur[i]]);
            tuples[cur.size() - 1].push_back(std::move(t));
        }
        if (int(cur.size()) == npieces) return;
        for (int nxt = start; nxt < npieces; ++nxt) {
            cur.push_back(nxt);
            gen(nxt + 1, cur);
            cur.pop_back();
        }
    };
    std::vector<int> cur;
    gen(0, cur);

    SpectralPage E1, E2;
    for (int pp = 0; pp < 4; ++pp)
        for (auto& t : tuples[pp]) {
            std::vector<int> k0(t.cells.c0.begin(), t.cells.c0.end());
            std::vector<int> k1(t.cells.c1.begin(), t.cells.c1.end());
            std::vector<int> k2(t.cells.c2.begin(), t.cells.c2.end());
            t.sc = subchain(cx, k0, k1, k2, p);
            for (int q = 0; q < 2; ++q) {
                t.hq[q] = homology_basis(t.sc, q);
                t.offset[q] = E1.dims[pp][q];
                E1.dims[pp][q] += long(t.hq[q].reps.cols());
            }
        }

    // d1 blocks: drop one index, inclusion-induced map with sign (-1)^j
    for (int pp = 1; pp < 4; ++pp) {
        for (int q = 0; q < 2; ++q) {
            FpMat D(E1.dims[pp - 1][q], E1.dims[pp][q], p);
            for (const auto& src : tuples[pp]) {
                for (std::size_t j = 0; j < src.idx.size(); ++j) {
                    std::vector<int> reduced = src.idx;
                    reduced.erase(reduced.begin() + j);
                    const Tuple* dst = nullptr;
                    for (const auto& t : tuples[pp - 1])
                        if (t.idx == reduced) {
                            dst = &t;
                            break;
                        }
                    if (!dst) throw std::logic_error("missing reduced tuple");
                    // push each source representative into the target piece
                    const auto& keep_src = q == 0 ? src.sc.keep0 : src.sc.keep1;
                    const auto& keep_dst = q == 0 ? dst->sc.keep0 : dst->sc.keep1;
                    const FpMat& bdT = q == 0 ? dst->sc.d1 : dst->sc.d2;
                    std::vector<int> pos(q == 0 ? cx.cells0.size() : cx.cells1.size(), -1);
                    for (std::size_t i = 0; i < keep_dst.size(); ++i) pos[keep_dst[i]] = int(i);
                    for (std::size_t col = 0; col < src.hq[q].reps.cols(); ++col) {
                        std::vector<std::uint32_t> z(keep_dst.size(), 0);
                        for (std::size_t i = 0; i < keep_src.size(); ++i) {
                            std::uint32_t v = src.hq[q].reps(i, col);
                            if (!v) continue;
                            int tp = pos[keep_src[i]];
                            if (tp < 0)
                                throw std::logic_error("intersection not inside reduced tuple");
                            z[tp] = v;
                        }
                        auto coords = class_coordinates(dst->hq[q], bdT, z);
                        if (!coords)
                            throw std::logic_error("pushed class not expressible");
                        for (std::size_t i = 0; i < coords->size(); ++i) {
                            std::uint32_t val = (*coords)[i];
                            if (!val) continue;
                            if (j % 2 == 1) val = D.neg(val);
                            std::size_t rr = dst->offset[q] + i;
                            std::size_t cc = src.offset[q] + col;
                            D(rr, cc) = D.add(D(rr, cc), val);
                        }
                    }
                }
            }
            E1.d1[pp][q] = std::move(D);
        }
    }

    // d1 o d1 = 0
    for (int pp = 2; pp < 4; ++pp)
        for (int q = 0; q < 2; ++q)
            if (E1.dims[pp][q] > 0 && E1.dims[pp - 2][q] >= 0) {
                FpMat comp = E1.d1[pp - 1][q] * E1.d1[pp][q];
                if (!comp.is_zero()) throw std::logic_error("d1 composite nonzero");
            }

    // E2 dims: homology of each row
    for (int pp = 0; pp < 4; ++pp)
        for (int q = 0; q < 2; ++q) {
            long dim = E1.dims[pp][q];
            long rank_out = 0, rank_in = 0;
            if (pp >= 1 && dim > 0) rank_out = long(E1.d1[pp][q].rank());
            if (pp + 1 < 4 && E1.dims[pp + 1][q] > 0) rank_in = long(E1.d1[pp + 1][q].rank());
            E2.dims[pp][q] = dim - rank_out - rank_in;
        }
    return {E1, E2};
}

struct ConvergenceReport {
    bool pass = false;
    bool columns_out_of_range = false;
    std::string detail;
};

/// Two-column convergence: b_n = dim E^2_{0,n} + dim E^2_{1,n-1} for n = 0, 1,
/// valid when E^2 is concentrated in columns p in {0, 1}.
inline ConvergenceReport check_convergence(const SpectralPage& E2, const HomologySummary& target) {
    ConvergenceReport rep;
    for (int pp = 2; pp < 4; ++pp)
        for (int q = 0; q < 2; ++q)
            if (E2.dims[pp][q] != 0) {
                rep.columns_out_of_range = true;
                rep.detail = "E2 has content in column p=" + std::to_string(pp);
                return rep;
            }
    long b0 = E2.dims[0][0];
    long b1 = E2.dims[0][1] + E2.dims[1][0];
    rep.pass = (b0 == target.b0) && (b1 == target.b1);
    rep.detail = "b0 " + std::to_string(target.b0) + " vs " + std::to_string(b0) + ", b1 " +
                 std::to_string(target.b1) + " vs " + std::to_string(b1);
    return rep;
}

/// The four-piece cover separating the long edge of a star graph: both robots
/// on e1 / split across / both on the complementary substar.
inline OrderedCover star_cover(const PolyComplex& cx, const MetricGraph& g) {
    int e1 = g.edge_index("e1");
    OrderedCover cov;
    cov.pieces.push_back(chart_subcomplex(
        cx, [&](const ChartKey& c) { return c.ei == e1 && c.ej == e1; }));
    cov.pieces.push_back(chart_subcomplex(
        cx, [&](const ChartKey& c) { return c.ei == e1 && c.ej != e1; }));
    cov.pieces.push_back(chart_subcomplex(
        cx, [&](const ChartKey& c) { return c.ei != e1 && c.ej == e1; }));
    cov.pieces.push_back(chart_subcomplex(
        cx, [&](const ChartKey& c) { return c.ei != e1 && c.ej != e1; }));
    return cov;
}

/// The four-piece cover of a generalized H graph by the two closed substars
/// (left leaves plus f, right leaves plus fp).
inline OrderedCover h_cover(const PolyComplex& cx, const MetricGraph& g) {
    int cl = g.vertex_index("cl");
    std::vector<bool> left(g.num_edges(), false);
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (g.edge(e).u == cl || g.edge(e).v == cl) left[e] = true;
    OrderedCover cov;
    cov.pieces.push_back(chart_subcomplex(
        cx, [&](const ChartKey& c) { return left[c.ei] && left[c.ej]; }));
    cov.pieces.push_back(chart_subcomplex(
        cx, [&](const ChartKey& c) { return left[c.ei] && !left[c.ej]; }));
    cov.pieces.push_back(chart_subcomplex(
        cx, [&](const ChartKey& c) { return !left[c.ei] && left[c.ej]; }));
    cov.pieces.push_back(chart_subcomplex(
        cx, [&](const ChartKey& c) { return !left[c.ei] && !left[c.ej]; }));
    return cov;
}

} // namespace treeconf
