#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "treeconf/cell_system.hpp"
#include "treeconf/geometry.hpp"
#include "treeconf/metric_graph.hpp"
#include "treeconf/rational.hpp"

namespace treeconf {

struct OnWall : std::runtime_error {
    explicit OnWall(const std::string& m) : std::runtime_error("OnWall: " + m) {}
};

/// Critical line alpha*r + beta*L = gamma in the parameter plane, normalized
/// to coprime integers with the first nonzero of (alpha, beta) positive.
struct CriticalLine {
    Integer alpha{0}, beta{0}, gamma{0};

    static CriticalLine make(const Rational& a, const Rational& b, const Rational& c) {
        Integer da = denominator(a), db = denominator(b), dc = denominator(c);
        Integer l = lcm(lcm(da, db), dc);
        Integer A = numerator(a) * (l / da);
        Integer B = numerator(b) * (l / db);
        Integer C = numerator(c) * (l / dc);
        Integer g = gcd(gcd(abs(A), abs(B)), abs(C));
        if (g > 1) {
            A /= g;
            B /= g;
            C /= g;
        }
        bool flip = (A != 0) ? (A < 0) : (B < 0);
        if (flip) {
            A = -A;
            B = -B;
            C = -C;
        }
        return CriticalLine{A, B, C};
    }

    Rational eval(const Rational& r, const Rational& L) const {
        return Rational(alpha) * r + Rational(beta) * L - Rational(gamma);
    }

    friend bool operator<(const CriticalLine& x, const CriticalLine& y) {
        if (x.alpha != y.alpha) return x.alpha < y.alpha;
        if (x.beta != y.beta) return x.beta < y.beta;
        return x.gamma < y.gamma;
    }
    friend bool operator==(const CriticalLine& x, const CriticalLine& y) {
        return x.alpha == y.alpha && x.beta == y.beta && x.gamma == y.gamma;
    }
};

/**
 * Critical lines of the (r, L) parameter plane: eliminate (x, y) from each
 * {box constraint binding} x {proximity constraint binding} pair, over all
 * cell systems, with the symbolic edge entering through both the box bounds
 * and the near-endpoint distances. Over-generation is harmless: crossing an
 * inert wall gives an isomorphism, and the constancy check documents it.
 */
inline std::vector<CriticalLine> critical_lines(const MetricGraph& g) {
    std::set<CriticalLine> lines;
    auto add = [&](const LinL& D) {
        // the binding value r = D.c + D.m * L; keep if it meets the open
        // positive quadrant
        if (D.m == 0 && D.c <= 0) return;
        if (D.m < 0 && D.c <= 0) return;
        lines.insert(CriticalLine::make(Rational(1), -D.m, D.c));
    };
    const int ne = int(g.num_edges());
    for (int i = 0; i < ne; ++i) {
        add(g.edge(i).len); // diagonal charts: |x-y| = r binding at a corner
        for (int j = 0; j < ne; ++j) {
            if (i == j) continue;
            auto nd = g.near_endpoints(i, j);
            for (int a = 0; a <= 1; ++a)
                for (int b = 0; b <= 1; ++b) {
                    LinL D = nd.dist;
                    if (a) D = D + g.edge(i).len;
                    if (b) D = D + g.edge(j).len;
                    add(D);
                }
        }
    }
    return {lines.begin(), lines.end()};
}

struct Chamber {
    int id = -1;
    Vec2 sample;            // (r, L), strictly inside
    std::vector<int> signs; // +1 / -1 per line
};

struct Wall {
    int plus_side = -1, minus_side = -1;
    int line = -1;
    Vec2 sample; // interior point of the shared wall segment
};

/**
 * Chamber decomposition of the window (0, bound)^2, with wall adjacencies
 * and the covering order oriented from smaller to larger space (r decreasing
 * or L increasing across the wall).
 */
class ChamberArrangement {
public:
    std::vector<CriticalLine> lines;
    std::vector<Chamber> chambers;
    std::vector<Wall> walls;
    std::vector<std::pair<int, int>> covering; // (s, t): map H(s) -> H(t)
    std::vector<int> covering_wall;            // wall index per covering relation
    Rational bound;

    bool sign_vector_matches(int chamber, const Rational& r, const Rational& L) const {
        for (std::size_t k = 0; k < lines.size(); ++k) {
            Rational v = lines[k].eval(r, L);
            if (v == 0) return false;
            if ((v > 0 ? 1 : -1) != chambers[chamber].signs[k]) return false;
        }
        return true;
    }

    /**
     * A comparable pair of interior points straddling a wall, ordered so the
     * first lies in the source chamber of the covering relation: crossing a
     * wall against its normal decreases r and increases L, so the two points
     * are comparable in the index order.
     */
    std::pair<ParamPoint, ParamPoint> wall_pair(int covering_index) const {
        auto [s, t] = covering[covering_index];
        const Wall& w = walls[covering_wall[covering_index]];
        const CriticalLine& ln = lines[w.line];
        Rational eps(1, 2);
        for (int halvings = 0; halvings < 200; ++halvings, eps /= 2) {
            Rational dr = Rational(ln.alpha) * eps, dL = Rational(ln.beta) * eps;
            Rational rp = w.sample.x + dr, Lp = w.sample.y + dL;
            Rational rm = w.sample.x - dr, Lm = w.sample.y - dL;
            if (rp <= 0 || rm <= 0 || Lp <= 0 || Lm <= 0) continue;
            if (!sign_vector_matches(w.plus_side, rp, Lp)) continue;
            if (!sign_vector_matches(w.minus_side, rm, Lm)) continue;
            ParamPoint plus(rp, Lp), minus(rm, Lm);
            if (s == w.plus_side) return {plus, minus};
            return {minus, plus};
        }
        throw std::logic_error("could not find interior points straddling the wall");
    }

    ParamPoint sample_of(int chamber) const {
        return ParamPoint(chambers[chamber].sample.x, chambers[chamber].sample.y);
    }

    bool leq(int s, int t) const { return reach_[s][t]; }

    std::vector<int> covering_successors(int s) const {
        std::vector<int> out;
        for (auto [a, b] : covering)
            if (a == s) out.push_back(b);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Canonical covering chain from s to t: greedily the smallest next
    /// chamber id. Well-defined because the covering relation generates the
    /// order.
    std::vector<std::pair<int, int>> canonical_chain(int s, int t) const {
        if (!leq(s, t)) throw NotComparable("chambers not comparable");
        std::vector<std::pair<int, int>> chain;
        int cur = s;
        while (cur != t) {
            int next = -1;
            for (int u : covering_successors(cur))
                if (u == t || reach_[u][t]) {
                    next = u;
                    break;
                }
            if (next < 0) throw std::logic_error("covering chain search failed");
            chain.push_back({cur, next});
            cur = next;
        }
        return chain;
    }

    void finalize() {
        std::size_t n = chambers.size();
        reach_.assign(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i) reach_[i][i] = true;
        // DAG transitive closure; repeat until stable (small posets)
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto [a, b] : covering)
                for (std::size_t t = 0; t < n; ++t)
                    if (reach_[b][t] && !reach_[a][t]) {
                        reach_[a][t] = true;
                        changed = true;
                    }
        }
        // antisymmetry == acyclicity of the covering graph
        for (auto [a, b] : covering)
            if (reach_[b][a]) throw std::logic_error("chamber order has a cycle");
    }

private:
    std::vector<std::vector<bool>> reach_;
};

inline Rational default_bound(const std::vector<CriticalLine>& lines) {
    Rational m = 1;
    for (const auto& ln : lines) {
        if (ln.alpha != 0) m = std::max(m, Rational(abs(Rational(ln.gamma) / Rational(ln.alpha))));
        if (ln.beta != 0) m = std::max(m, Rational(abs(Rational(ln.gamma) / Rational(ln.beta))));
    }
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            const auto& p = lines[i];
            const auto& q = lines[j];
            Integer det = p.alpha * q.beta - p.beta * q.alpha;
            if (det == 0) continue;
            Rational r = Rational(p.gamma * q.beta - q.gamma * p.beta) / Rational(det);
            Rational L = Rational(p.alpha * q.gamma - q.alpha * p.gamma) / Rational(det);
            m = std::max(m, Rational(abs(r)));
            m = std::max(m, Rational(abs(L)));
        }
    return m + 2;
}

inline ChamberArrangement arrangement(const std::vector<CriticalLine>& lines,
                                      const Rational& bound) {
    ChamberArrangement arr;
    arr.lines = lines;
    arr.bound = bound;
    const Rational B = bound;

    // r-coordinates of all arrangement vertices and window crossings
    std::set<Rational> rs{Rational(0), B};
    auto keep_r = [&](const Rational& r) {
        if (r >= 0 && r <= B) rs.insert(r);
    };
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& p = lines[i];
        if (p.alpha != 0) {
            // crossings with the window edges L = 0 and L = B
            keep_r(Rational(p.gamma) / Rational(p.alpha));
            keep_r((Rational(p.gamma) - Rational(p.beta) * B) / Rational(p.alpha));
        }
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            const auto& q = lines[j];
            Integer det = p.alpha * q.beta - p.beta * q.alpha;
            if (det == 0) continue;
            Rational r = Rational(p.gamma * q.beta - q.gamma * p.beta) / Rational(det);
            keep_r(r);
        }
    }
    // samples are midpoints of consecutive crossing coordinates, so their
    // denominators divide 2 * lcm of the crossing denominators, which are
    // quotients of the (integer) line coefficients and the bound
    std::vector<Rational> rlist(rs.begin(), rs.end());
    std::map<std::vector<int>, int> seen;
    for (std::size_t i = 0; i + 1 < rlist.size(); ++i) {
        Rational rstar = (rlist[i] + rlist[i + 1]) / 2;
        if (rstar <= 0 || rstar >= B) continue;
        std::set<Rational> Ls{Rational(0), B};
        for (const auto& ln : lines) {
            if (ln.beta == 0) continue;
            Rational L = (Rational(ln.gamma) - Rational(ln.alpha) * rstar) / Rational(ln.beta);
            if (L > 0 && L < B) Ls.insert(L);
        }
        std::vector<Rational> llist(Ls.begin(), Ls.end());
        for (std::size_t k = 0; k + 1 < llist.size(); ++k) {
            Rational lstar = (llist[k] + llist[k + 1]) / 2;
            std::vector<int> sig;
            bool onwall = false;
            for (const auto& ln : lines) {
                Rational v = ln.eval(rstar, lstar);
                if (v == 0) {
                    onwall = true;
                    break;
                }
                sig.push_back(v > 0 ? 1 : -1);
            }
            if (onwall) continue;
            if (seen.count(sig)) continue;
            Chamber c;
            c.id = int(arr.chambers.size());
            c.sample = Vec2(rstar, lstar);
            c.signs = sig;
            seen[sig] = c.id;
            arr.chambers.push_back(std::move(c));
        }
    }

    // wall adjacency: sign vectors differing on exactly one line, with a
    // 1-dimensional common boundary inside the window
    for (std::size_t a = 0; a < arr.chambers.size(); ++a)
        for (std::size_t b = a + 1; b < arr.chambers.size(); ++b) {
            const auto& ca = arr.chambers[a];
            const auto& cb = arr.chambers[b];
            int diff = -1;
            bool ok = true;
            for (std::size_t k = 0; k < lines.size(); ++k) {
                if (ca.signs[k] == cb.signs[k]) continue;
                if (diff >= 0) {
                    ok = false;
                    break;
                }
                diff = int(k);
            }
            if (!ok || diff < 0) continue;
            // parametrize the line; intersect the open conditions
            const auto& ln = lines[diff];
            // point on line + direction
            Rational px, py;
            if (ln.beta != 0) {
                px = 0;
                py = Rational(ln.gamma) / Rational(ln.beta);
            } else {
                px = Rational(ln.gamma) / Rational(ln.alpha);
                py = 0;
            }
            Rational dx = Rational(-ln.beta), dy = Rational(ln.alpha);
            // open constraints: sign_k * (line_k at point(t)) > 0 for k != diff,
            // plus the window strict bounds
            Rational lo, hi;
            bool has_lo = false, has_hi = false, infeasible = false;
            auto constrain = [&](const Rational& coef, const Rational& val) {
                // coef * t + val > 0
                if (coef == 0) {
                    if (val <= 0) infeasible = true;
                    return;
                }
                Rational t = -val / coef;
                if (coef > 0) {
                    if (!has_lo || t > lo) lo = t;
                    has_lo = true;
                } else {
                    if (!has_hi || t < hi) hi = t;
                    has_hi = true;
                }
            };
            for (std::size_t k = 0; k < lines.size(); ++k) {
                if (int(k) == diff) continue;
                const auto& lk = lines[k];
                Rational coef = Rational(ca.signs[k]) * (Rational(lk.alpha) * dx + Rational(lk.beta) * dy);
                Rational val = Rational(ca.signs[k]) * (Rational(lk.alpha) * px + Rational(lk.beta) * py - Rational(lk.gamma));
                constrain(coef, val);
            }
            // window: 0 < r < B, 0 < L < B
            constrain(dx, px);
            constrain(-dx, B - px);
            constrain(dy, py);
            constrain(-dy, B - py);
            if (infeasible) continue;
            if (has_lo && has_hi && !(lo < hi)) continue;
            Rational tmid;
            if (has_lo && has_hi)
                tmid = (lo + hi) / 2;
            else if (has_lo)
                tmid = lo + 1;
            else if (has_hi)
                tmid = hi - 1;
            else
                tmid = 0;
            Wall w;
            w.line = diff;
            w.plus_side = ca.signs[diff] > 0 ? int(a) : int(b);
            w.minus_side = ca.signs[diff] > 0 ? int(b) : int(a);
            w.sample = Vec2(px + tmid * dx, py + tmid * dy);
            arr.walls.push_back(w);
            // orientation of the covering relation: maps point toward smaller
            // r / larger L
            const auto& l0 = lines[diff];
            if (l0.alpha > 0 && l0.beta <= 0) {
                arr.covering.push_back({w.plus_side, w.minus_side});
                arr.covering_wall.push_back(int(arr.walls.size()) - 1);
            } else if (l0.alpha == 0 && l0.beta > 0) {
                arr.covering.push_back({w.minus_side, w.plus_side});
                arr.covering_wall.push_back(int(arr.walls.size()) - 1);
            }
            // alpha > 0 && beta > 0: neighbors incomparable, no relation
        }

    arr.finalize();
    return arr;
}

inline ChamberArrangement arrangement(const std::vector<CriticalLine>& lines) {
    return arrangement(lines, default_bound(lines));
}

inline int chamber_of(const ChamberArrangement& arr, const ParamPoint& p) {
    std::vector<int> sig;
    for (const auto& ln : arr.lines) {
        Rational v = ln.eval(p.r, p.L);
        if (v == 0) throw OnWall("parameter point lies on a critical line");
        sig.push_back(v > 0 ? 1 : -1);
    }
    for (const auto& c : arr.chambers)
        if (c.signs == sig) return c.id;
    throw std::out_of_range("parameter point outside the computed window");
}

} // namespace treeconf
