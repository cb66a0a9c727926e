#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeconf/fp.hpp"
#include "treeconf/module.hpp"

namespace treeconf {

struct IndecomposabilityUndecided : std::runtime_error {
    explicit IndecomposabilityUndecided(const std::string& m)
        : std::runtime_error("IndecomposabilityUndecided: " + m) {}
};

/// Natural endomorphism: one square matrix per chamber commuting with every
/// structure map.
struct Endomorphism {
    std::vector<FpMat> comps;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() { return state = splitmix64(state); }
    std::uint32_t uniform(std::uint32_t p) { return std::uint32_t(next() % p); }
};

} // namespace detail

/**
 * Basis of the natural-endomorphism space: the solution space of
 * X_t A = A X_s over every generating relation. Chambers linked by
 * invertible structure maps are merged first (conjugating by the transport
 * isomorphism), which keeps the linear system small.
 */
inline std::vector<Endomorphism> endomorphism_basis(const PersistenceModule& M) {
    const int n = M.poset.n;
    const std::uint32_t p = M.prime;

    // union-find over invertible generators
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (auto& [e, A] : M.maps) {
        if (M.dims[e.first] == 0) continue;
        if (A.is_invertible()) {
            int a = find(e.first), b = find(e.second);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    // transport matrices: T[c] maps the class representative's fiber to c's
    std::vector<FpMat> T(n);
    std::vector<bool> have(n, false);
    for (int c = 0; c < n; ++c)
        if (find(c) == c) {
            T[c] = FpMat::identity(M.dims[c], p);
            have[c] = true;
        }
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto& [e, A] : M.maps) {
            auto [s, t] = e;
            if (find(s) != find(t)) continue;
            if (!A.is_invertible()) continue;
            if (have[s] && !have[t]) {
                T[t] = A * T[s];
                have[t] = true;
                progress = true;
            } else if (have[t] && !have[s]) {
                T[s] = *A.inverse() * T[t];
                have[s] = true;
                progress = true;
            }
        }
    }
    for (int c = 0; c < n; ++c)
        if (!have[c]) throw std::logic_error("transport construction incomplete");

    // variables: entries of X_rep per class with nonzero dimension
    std::vector<int> reps;
    std::vector<int> offset(n, -1);
    int nvars = 0;
    for (int c = 0; c < n; ++c)
        if (find(c) == c && M.dims[c] > 0) {
            reps.push_back(c);
            offset[c] = nvars;
            nvars += M.dims[c] * M.dims[c];
        }

    // constraints from generators between different classes (in-class
    // generators reduce to X B = B X with B = I by commutativity)
    struct Constraint {
        int rs, rt;
        FpMat B; // dims[rt] x dims[rs] rewritten map
    };
    std::vector<Constraint> cons;
    for (auto& [e, A] : M.maps) {
        auto [s, t] = e;
        int rs = find(s), rt = find(t);
        if (M.dims[s] == 0 || M.dims[t] == 0) continue;
        FpMat B = *T[t].inverse() * A * T[s];
        if (rs == rt) {
            if (A.is_invertible()) {
                // commutativity makes the rewritten map the identity
                if (!(B == FpMat::identity(M.dims[rs], p)))
                    throw std::logic_error("in-class transport inconsistency");
                continue;
            }
        }
        cons.push_back({rs, rt, std::move(B)});
    }

    std::size_t neq = 0;
    for (const auto& c : cons) neq += std::size_t(M.dims[c.rt]) * std::size_t(M.dims[c.rs]);
    FpMat sys(neq, nvars, p);
    std::size_t row = 0;
    for (const auto& c : cons) {
        int dt = M.dims[c.rt], ds = M.dims[c.rs];
        for (int i = 0; i < dt; ++i)
            for (int j = 0; j < ds; ++j) {
                // (X_rt B)_{ij} - (B X_rs)_{ij} = 0
                for (int k = 0; k < dt; ++k) {
                    std::uint32_t coef = c.B(k, j);
                    if (!coef) continue;
                    std::size_t var = offset[c.rt] + std::size_t(i) * dt + k;
                    sys(row, var) = sys.add(sys(row, var), coef);
                }
                for (int k = 0; k < ds; ++k) {
                    std::uint32_t coef = c.B(i, k);
                    if (!coef) continue;
                    std::size_t var = offset[c.rs] + std::size_t(k) * ds + j;
                    sys(row, var) = sys.sub(sys(row, var), coef);
                }
                ++row;
            }
    }

    auto kb = sys.kernel_basis();
    std::vector<Endomorphism> basis;
    for (const auto& vec : kb) {
        Endomorphism f;
        f.comps.resize(n);
        std::vector<FpMat> Xrep(n);
        for (int r : reps) {
            FpMat X(M.dims[r], M.dims[r], p);
            for (int i = 0; i < M.dims[r]; ++i)
                for (int j = 0; j < M.dims[r]; ++j)
                    X(i, j) = vec[offset[r] + std::size_t(i) * M.dims[r] + j];
            Xrep[r] = std::move(X);
        }
        for (int c = 0; c < n; ++c) {
            if (M.dims[c] == 0) {
                f.comps[c] = FpMat(0, 0, p);
                continue;
            }
            int r = find(c);
            f.comps[c] = T[c] * Xrep[r] * *T[c].inverse();
        }
        basis.push_back(std::move(f));
    }
    return basis;
}

/// A direct summand, carried as per-chamber inclusion bases into the ambient
/// module plus its own restricted structure maps.
struct Summand {
    std::vector<FpMat> inclusion; // ambient dim x summand dim
    std::vector<int> dims;
    std::map<std::pair<int, int>, FpMat> maps;
    enum class Kind { Unclassified, Interval, NonInterval } kind = Kind::Unclassified;
    std::set<int> support;
    int end_dim = 0; // dimension of End, 1 certifies indecomposability

    PersistenceModule as_module(const PersistenceModule& ambient) const {
        PersistenceModule sub;
        sub.poset = ambient.poset;
        sub.degree = ambient.degree;
        sub.prime = ambient.prime;
        sub.dims = dims;
        sub.maps = maps;
        sub.samples = ambient.samples;
        sub.chamber_ids = ambient.chamber_ids;
        return sub;
    }
};

namespace detail {

/// Carve the subrepresentation spanned per chamber by `span` (columns in the
/// coordinates of `piece`) out of `piece`.
inline Summand carve(const PersistenceModule& root, const Summand& piece,
                     const std::vector<FpMat>& span) {
    Summand out;
    out.inclusion.resize(root.poset.n);
    out.dims.resize(root.poset.n);
    for (int c = 0; c < root.poset.n; ++c) {
        out.inclusion[c] = piece.inclusion[c] * span[c];
        out.dims[c] = int(span[c].cols());
        if (out.dims[c] > 0) out.support.insert(c);
    }
    for (auto& [e, A] : piece.maps) {
        auto [s, t] = e;
        // restricted map: solve span_t Y = A span_s
        FpMat rhs = A * span[s];
        auto Y = span[t].solve_matrix(rhs);
        if (!Y) throw std::logic_error("candidate subspace is not invariant");
        // confirm exactness: span_t * Y == rhs
        if (!(span[t] * *Y == rhs)) throw std::logic_error("subspace restriction not exact");
        out.maps.insert({e, std::move(*Y)});
    }
    return out;
}

inline Summand whole_module_summand(const PersistenceModule& M) {
    Summand all;
    all.inclusion.resize(M.poset.n);
    all.dims = M.dims;
    all.maps = M.maps;
    for (int c = 0; c < M.poset.n; ++c) {
        all.inclusion[c] = FpMat::identity(M.dims[c], M.prime);
        if (M.dims[c] > 0) all.support.insert(c);
    }
    return all;
}

} // namespace detail

/**
 * Fitting splitting along a natural endomorphism: with N the total dimension,
 * M = ker f^N (+) im f^N chamberwise, and both sides are subrepresentations.
 */
inline std::pair<Summand, Summand> fitting_split(const PersistenceModule& M,
                                                 const Endomorphism& f) {
    Summand whole = detail::whole_module_summand(M);
    std::size_t total = 0;
    for (int d : M.dims) total += d;
    std::vector<FpMat> ker(M.poset.n), im(M.poset.n);
    for (int c = 0; c < M.poset.n; ++c) {
        if (M.dims[c] == 0) {
            ker[c] = FpMat(0, 0, M.prime);
            im[c] = FpMat(0, 0, M.prime);
            continue;
        }
        FpMat fn = f.comps[c].pow(total == 0 ? 1 : total);
        auto kb = fn.kernel_basis();
        ker[c] = FpMat(M.dims[c], kb.size(), M.prime);
        for (std::size_t j = 0; j < kb.size(); ++j)
            for (int i = 0; i < M.dims[c]; ++i) ker[c](i, j) = kb[j][i];
        im[c] = fn.column_space_basis();
    }
    return {detail::carve(M, whole, ker), detail::carve(M, whole, im)};
}

struct DecomposeResult {
    std::vector<Summand> summands;
    int undecided = 0;
};

namespace detail {

inline void decompose_piece(const PersistenceModule& root, Summand piece, std::uint64_t stream,
                            DecomposeResult& out) {
    std::size_t total = 0;
    for (int d : piece.dims) total += d;
    if (total == 0) return;

    PersistenceModule view = piece.as_module(root);
    auto basis = endomorphism_basis(view);
    piece.end_dim = int(basis.size());
    if (basis.size() == 1) {
        out.summands.push_back(std::move(piece));
        return;
    }

    const std::uint32_t p = root.prime;
    Rng rng(stream);
    const int budget = 64;
    for (int attempt = 0; attempt < budget; ++attempt) {
        // random element of the endomorphism algebra
        std::vector<std::uint32_t> coef(basis.size());
        for (auto& c : coef) c = rng.uniform(p);
        Endomorphism f;
        f.comps.resize(root.poset.n);
        for (int c = 0; c < root.poset.n; ++c) {
            FpMat acc(piece.dims[c], piece.dims[c], p);
            for (std::size_t b = 0; b < basis.size(); ++b)
                if (coef[b]) acc = acc + basis[b].comps[c].scaled(coef[b]);
            f.comps[c] = std::move(acc);
        }
        // spectrum over all chambers, ascending for determinism
        std::set<std::uint32_t> lambdas;
        for (int c = 0; c < root.poset.n; ++c) {
            if (piece.dims[c] == 0) continue;
            for (auto l : poly_roots(f.comps[c].charpoly(), p)) lambdas.insert(l);
        }

        // Fitting split along f - lambda for the first eigenvalue whose
        // generalized eigenspace is a proper nonzero piece; the complement is
        // the image of (f - lambda)^N. A full eigen-decomposition is not
        // required (the characteristic polynomial rarely splits over F_p once
        // multiplicities grow); peeling one piece at a time suffices.
        for (auto lambda : lambdas) {
            std::vector<FpMat> ker(root.poset.n), im(root.poset.n);
            std::size_t tot = 0;
            for (int c = 0; c < root.poset.n; ++c) {
                if (piece.dims[c] == 0) {
                    ker[c] = FpMat(0, 0, p);
                    im[c] = FpMat(0, 0, p);
                    continue;
                }
                FpMat shifted = f.comps[c];
                for (int i = 0; i < piece.dims[c]; ++i)
                    shifted(i, i) = shifted.sub(shifted(i, i), lambda);
                FpMat fn = shifted.pow(total);
                auto kb = fn.kernel_basis();
                ker[c] = FpMat(piece.dims[c], kb.size(), p);
                for (std::size_t j = 0; j < kb.size(); ++j)
                    for (int i = 0; i < piece.dims[c]; ++i) ker[c](i, j) = kb[j][i];
                im[c] = fn.column_space_basis();
                tot += kb.size();
            }
            if (tot == 0 || tot == total) continue;
            Summand sub_ker = carve(root, piece, ker);
            Summand sub_im = carve(root, piece, im);
            decompose_piece(root, std::move(sub_ker), splitmix64(stream ^ 0x51ed2701ULL), out);
            decompose_piece(root, std::move(sub_im), splitmix64(stream ^ 0x2caffe17ULL), out);
            return;
        }
    }
    ++out.undecided;
    out.summands.push_back(std::move(piece)); // reported as-is, end_dim > 1 marks it
}

} // namespace detail

/**
 * Complete direct-sum decomposition by recursive Fitting splits along random
 * natural endomorphisms; deterministic for a fixed seed. Pieces whose
 * endomorphism ring is 1-dimensional are certified indecomposable; pieces
 * that exhaust the retry budget are counted in `undecided`, never guessed.
 */
inline DecomposeResult decompose(const PersistenceModule& M, std::uint64_t seed) {
    DecomposeResult out;
    detail::decompose_piece(M, detail::whole_module_summand(M), detail::splitmix64(seed ^ 0xabcdef),
                            out);
    // soundness: the concatenated inclusions reconstruct every fiber
    for (int c = 0; c < M.poset.n; ++c) {
        std::size_t cols = 0;
        for (const auto& s : out.summands) cols += s.dims[c];
        if (cols != std::size_t(M.dims[c]))
            throw std::logic_error("summand dimensions do not add up");
        if (cols == 0) continue;
        FpMat cat(M.dims[c], cols, M.prime);
        std::size_t off = 0;
        for (const auto& s : out.summands) {
            for (int i = 0; i < M.dims[c]; ++i)
                for (int j = 0; j < s.dims[c]; ++j) cat(i, off + j) = s.inclusion[c](i, j);
            off += s.dims[c];
        }
        if (!cat.is_invertible())
            throw std::logic_error("summand inclusions are not jointly invertible");
    }
    return out;
}

/**
 * Interval verdict: thin, support convex and zigzag-connected, and the module
 * rescales to the interval module (all comparable-pair composites equal after
 * a consistent choice of unit basis vectors).
 */
inline Summand::Kind classify_summand(const Summand& S, const PersistenceModule& ambient) {
    if (S.support.empty()) throw std::invalid_argument("cannot classify the zero summand");
    for (int c : S.support)
        if (S.dims[c] > 1) return Summand::Kind::NonInterval;

    const auto& leq = ambient.poset.leq;
    std::vector<int> sup(S.support.begin(), S.support.end());
    // zigzag connectivity of the comparability graph on the support
    std::vector<int> comp(sup.size());
    for (std::size_t i = 0; i < sup.size(); ++i) comp[i] = int(i);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    for (std::size_t i = 0; i < sup.size(); ++i)
        for (std::size_t j = i + 1; j < sup.size(); ++j)
            if (leq[sup[i]][sup[j]] || leq[sup[j]][sup[i]]) {
                int a = find(int(i)), b = find(int(j));
                if (a != b) comp[std::max(a, b)] = std::min(a, b);
            }
    for (std::size_t i = 0; i < sup.size(); ++i)
        if (find(int(i)) != find(0)) return Summand::Kind::NonInterval;
    // convexity in the ambient poset
    for (int x : sup)
        for (int y : sup) {
            if (!leq[x][y]) continue;
            for (int z = 0; z < ambient.poset.n; ++z)
                if (leq[x][z] && leq[z][y] && !S.support.count(z))
                    return Summand::Kind::NonInterval;
        }

    // constructive witness: scalars making every structure map the identity
    PersistenceModule view = S.as_module(ambient);
    std::map<int, std::uint32_t> scale;
    FpMat dummy(1, 1, ambient.prime);
    std::vector<int> queue{sup[0]};
    scale[sup[0]] = 1;
    while (!queue.empty()) {
        int x = queue.back();
        queue.pop_back();
        for (int y : sup) {
            if (scale.count(y)) continue;
            std::uint32_t v = 0;
            if (leq[x][y])
                v = dummy.mul(view.map_between(x, y)(0, 0), scale[x]);
            else if (leq[y][x]) {
                std::uint32_t m = view.map_between(y, x)(0, 0);
                if (m == 0) return Summand::Kind::NonInterval;
                v = dummy.mul(scale[x], dummy.inv(m));
            } else {
                continue;
            }
            if (v == 0) return Summand::Kind::NonInterval;
            scale[y] = v;
            queue.push_back(y);
        }
    }
    if (scale.size() != sup.size()) return Summand::Kind::NonInterval;
    for (int x : sup)
        for (int y : sup) {
            if (!leq[x][y]) continue;
            std::uint32_t m = view.map_between(x, y)(0, 0);
            if (dummy.mul(m, scale[x]) != scale[y]) return Summand::Kind::NonInterval;
        }
    return Summand::Kind::Interval;
}

/// Space of natural transformations S1 -> S2 (same machinery as End).
inline std::vector<std::vector<FpMat>> hom_basis(const PersistenceModule& ambient,
                                                 const Summand& S1, const Summand& S2) {
    const int n = ambient.poset.n;
    const std::uint32_t p = ambient.prime;
    int nvars = 0;
    std::vector<int> offset(n, -1);
    for (int c = 0; c < n; ++c) {
        offset[c] = nvars;
        nvars += S1.dims[c] * S2.dims[c];
    }
    std::size_t neq = 0;
    for (auto& [e, A] : S1.maps) neq += std::size_t(S2.dims[e.second]) * std::size_t(S1.dims[e.first]);
    FpMat sys(neq, nvars, p);
    std::size_t row = 0;
    for (auto& [e, A1] : S1.maps) {
        auto [s, t] = e;
        const FpMat& A2 = S2.maps.at(e);
        // X_t A1 = A2 X_s, X_c has shape dims2[c] x dims1[c]
        for (int i = 0; i < S2.dims[t]; ++i)
            for (int j = 0; j < S1.dims[s]; ++j) {
                for (int k = 0; k < S1.dims[t]; ++k) {
                    std::uint32_t coef = A1(k, j);
                    if (!coef) continue;
                    std::size_t var = offset[t] + std::size_t(i) * S1.dims[t] + k;
                    sys(row, var) = sys.add(sys(row, var), coef);
                }
                for (int k = 0; k < S2.dims[s]; ++k) {
                    std::uint32_t coef = A2(i, k);
                    if (!coef) continue;
                    std::size_t var = offset[s] + std::size_t(k) * S1.dims[s] + j;
                    sys(row, var) = sys.sub(sys(row, var), coef);
                }
                ++row;
            }
    }
    auto kb = sys.kernel_basis();
    std::vector<std::vector<FpMat>> out;
    for (const auto& vec : kb) {
        std::vector<FpMat> comps(n);
        for (int c = 0; c < n; ++c) {
            FpMat X(S2.dims[c], S1.dims[c], p);
            for (int i = 0; i < S2.dims[c]; ++i)
                for (int j = 0; j < S1.dims[c]; ++j)
                    X(i, j) = vec[offset[c] + std::size_t(i) * S1.dims[c] + j];
            comps[c] = std::move(X);
        }
        out.push_back(std::move(comps));
    }
    return out;
}

/// Isomorphism test for two indecomposable summands: find an invertible
/// natural transformation (basis elements, then random combinations).
inline bool summands_isomorphic(const PersistenceModule& ambient, const Summand& S1,
                                const Summand& S2, std::uint64_t seed = 0x5eedULL) {
    if (S1.dims != S2.dims) return false;
    auto basis = hom_basis(ambient, S1, S2);
    if (basis.empty()) {
        for (int d : S1.dims)
            if (d != 0) return false;
        return true; // both zero
    }
    auto invertible_everywhere = [&](const std::vector<FpMat>& f) {
        for (int c = 0; c < ambient.poset.n; ++c) {
            if (S1.dims[c] == 0) continue;
            if (!f[c].is_invertible()) return false;
        }
        return true;
    };
    for (const auto& f : basis)
        if (invertible_everywhere(f)) return true;
    detail::Rng rng(seed);
    const std::uint32_t p = ambient.prime;
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<FpMat> f(ambient.poset.n);
        std::vector<std::uint32_t> coef(basis.size());
        for (auto& c : coef) c = rng.uniform(p);
        for (int c = 0; c < ambient.poset.n; ++c) {
            FpMat acc(S2.dims[c], S1.dims[c], p);
            for (std::size_t b = 0; b < basis.size(); ++b)
                if (coef[b]) acc = acc + basis[b][c].scaled(coef[b]);
            f[c] = std::move(acc);
        }
        if (invertible_everywhere(f)) return true;
    }
    return false;
}

struct ClassEntry {
    bool interval = false;
    std::set<int> support;       // chamber ids of the ambient poset
    std::vector<int> dim_vector; // dims per chamber
    int multiplicity = 0;
    std::vector<std::size_t> members; // indices into the summand list
};

/// Group summands into isomorphism classes: interval summands by support,
/// the rest by dimension vector refined by an explicit isomorphism solve.
inline std::vector<ClassEntry> multiplicity_table(const PersistenceModule& ambient,
                                                  std::vector<Summand>& summands) {
    for (auto& s : summands)
        if (s.kind == Summand::Kind::Unclassified) s.kind = classify_summand(s, ambient);

    std::vector<ClassEntry> classes;
    for (std::size_t i = 0; i < summands.size(); ++i) {
        const Summand& s = summands[i];
        bool placed = false;
        for (auto& cl : classes) {
            if (cl.interval != (s.kind == Summand::Kind::Interval)) continue;
            if (cl.interval) {
                if (cl.support == s.support) {
                    cl.multiplicity++;
                    cl.members.push_back(i);
                    placed = true;
                    break;
                }
            } else {
                if (cl.dim_vector == s.dims &&
                    summands_isomorphic(ambient, summands[cl.members[0]], s)) {
                    cl.multiplicity++;
                    cl.members.push_back(i);
                    placed = true;
                    break;
                }
            }
        }
        if (placed) continue;
        ClassEntry cl;
        cl.interval = s.kind == Summand::Kind::Interval;
        cl.support = s.support;
        cl.dim_vector = s.dims;
        cl.multiplicity = 1;
        cl.members.push_back(i);
        classes.push_back(std::move(cl));
    }
    std::sort(classes.begin(), classes.end(), [](const ClassEntry& a, const ClassEntry& b) {
        if (a.interval != b.interval) return a.interval < b.interval;
        if (a.support != b.support) return a.support < b.support;
        return a.dim_vector < b.dim_vector;
    });
    return classes;
}

} // namespace treeconf
