#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "treeconf/rational.hpp"

namespace treeconf {

struct Vec2 {
    Rational x{0}, y{0};
    Vec2() = default;
    Vec2(Rational x_, Rational y_) : x(std::move(x_)), y(std::move(y_)) {}
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
    bool operator<(const Vec2& o) const { return x != o.x ? x < o.x : y < o.y; }
};

inline Rational cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Closed half-plane a*x + b*y <= c.
struct HalfPlane {
    Rational a{0}, b{0}, c{0};
    HalfPlane() = default;
    HalfPlane(Rational a_, Rational b_, Rational c_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {}
    Rational eval(const Vec2& p) const { return a * p.x + b * p.y - c; } // <= 0 inside
};

/// Line a*x + b*y = c.
struct LineXY {
    Rational a{0}, b{0}, c{0};
    LineXY() = default;
    LineXY(Rational a_, Rational b_, Rational c_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {}
    Rational eval(const Vec2& p) const { return a * p.x + b * p.y - c; }
};

inline Vec2 segment_line_intersection(const Vec2& p, const Vec2& q, const Rational& fp,
                                      const Rational& fq) {
    // fp, fq are the line values at p, q with fp != fq and opposite signs
    Rational t = fp / (fp - fq);
    return Vec2(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y));
}

/**
 * Convex feasible region with explicit dimension:
 *   dim -1 empty, 0 a point, 1 a segment, 2 a polygon in ccw order
 * starting at its lexicographically smallest vertex. Degenerate regions are
 * genuine cells of the configuration space at boundary parameters, so they
 * are kept, not discarded.
 */
struct Polygon {
    int dim = -1;
    std::vector<Vec2> pts;

    bool empty() const { return dim < 0; }
};

inline Rational signed_area2(const std::vector<Vec2>& pts) {
    Rational s = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % pts.size()];
        s += a.x * b.y - a.y * b.x;
    }
    return s;
}

/// Canonical form of a convex point cloud: dimension, extreme points only,
/// ccw, lexicographically smallest vertex first.
inline Polygon canonicalize(std::vector<Vec2> pts) {
    Polygon out;
    // dedupe
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.empty()) return out;
    if (pts.size() == 1) {
        out.dim = 0;
        out.pts = pts;
        return out;
    }
    // collinear test
    bool collinear = true;
    for (std::size_t i = 2; i < pts.size(); ++i)
        if (cross(pts[0], pts[1], pts[i]) != 0) {
            collinear = false;
            break;
        }
    if (collinear) {
        out.dim = 1;
        out.pts = {pts.front(), pts.back()}; // sorted, so these are the extremes
        return out;
    }
    // convex hull (monotone chain); inputs are convex already but clipping
    // may leave collinear intermediate points
    std::vector<Vec2> hull;
    auto build = [&](bool lower) {
        std::size_t start = hull.size();
        auto run = pts;
        if (!lower) std::reverse(run.begin(), run.end());
        for (const auto& p : run) {
            while (hull.size() >= start + 2 &&
                   cross(hull[hull.size() - 2], hull[hull.size() - 1], p) <= 0)
                hull.pop_back();
            hull.push_back(p);
        }
        hull.pop_back();
    };
    build(true);
    build(false);
    out.dim = 2;
    out.pts = hull;
    // rotate to the lexicographic minimum
    std::size_t mi = 0;
    for (std::size_t i = 1; i < out.pts.size(); ++i)
        if (out.pts[i] < out.pts[mi]) mi = i;
    std::rotate(out.pts.begin(), out.pts.begin() + mi, out.pts.end());
    assert(signed_area2(out.pts) > 0);
    return out;
}

/// Clip a convex region by one half-plane (Sutherland-Hodgman step).
inline Polygon clip(const Polygon& poly, const HalfPlane& h) {
    if (poly.empty()) return poly;
    if (poly.dim == 0)
        return h.eval(poly.pts[0]) <= 0 ? poly : Polygon{};
    if (poly.dim == 1) {
        Rational f0 = h.eval(poly.pts[0]), f1 = h.eval(poly.pts[1]);
        std::vector<Vec2> keep;
        if (f0 <= 0) keep.push_back(poly.pts[0]);
        if (f1 <= 0) keep.push_back(poly.pts[1]);
        if ((f0 < 0 && f1 > 0) || (f0 > 0 && f1 < 0))
            keep.push_back(segment_line_intersection(poly.pts[0], poly.pts[1], f0, f1));
        return canonicalize(std::move(keep));
    }
    std::vector<Vec2> outpts;
    std::size_t n = poly.pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& cur = poly.pts[i];
        const Vec2& nxt = poly.pts[(i + 1) % n];
        Rational fc = h.eval(cur), fn = h.eval(nxt);
        if (fc <= 0) outpts.push_back(cur);
        if ((fc < 0 && fn > 0) || (fc > 0 && fn < 0))
            outpts.push_back(segment_line_intersection(cur, nxt, fc, fn));
    }
    return canonicalize(std::move(outpts));
}

inline Polygon intersect_halfplanes(const Polygon& start, const std::vector<HalfPlane>& hs) {
    Polygon cur = start;
    for (const auto& h : hs) {
        cur = clip(cur, h);
        if (cur.empty()) break;
    }
    return cur;
}

/// Split a 2-dimensional region along a line; returns the (<=, >=) sides.
/// If the line does not cross the interior, one side is the whole region and
/// the other is empty or lower-dimensional.
inline std::pair<Polygon, Polygon> cut(const Polygon& poly, const LineXY& line) {
    HalfPlane le(line.a, line.b, line.c);
    HalfPlane ge(-line.a, -line.b, -line.c);
    return {clip(poly, le), clip(poly, ge)};
}

/// Subdivide a convex 2-cell by a family of lines; only genuine 2-dimensional
/// pieces survive (a line grazing the boundary subdivides nothing).
inline std::vector<Polygon> subdivide(const Polygon& poly, const std::vector<LineXY>& lines) {
    std::vector<Polygon> pieces{poly};
    for (const auto& ln : lines) {
        std::vector<Polygon> next;
        for (const auto& pc : pieces) {
            auto [lo, hi] = cut(pc, ln);
            if (lo.dim == 2 && hi.dim == 2) {
                next.push_back(lo);
                next.push_back(hi);
            } else {
                next.push_back(pc);
            }
        }
        pieces = std::move(next);
    }
    return pieces;
}

inline Vec2 centroid(const Polygon& poly) {
    assert(!poly.empty());
    Rational sx = 0, sy = 0;
    for (const auto& p : poly.pts) {
        sx += p.x;
        sy += p.y;
    }
    Rational n = int(poly.pts.size());
    return Vec2(sx / n, sy / n);
}

inline bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    if (cross(a, b, p) != 0) return false;
    if (p.x < std::min(a.x, b.x) || p.x > std::max(a.x, b.x)) return false;
    if (p.y < std::min(a.y, b.y) || p.y > std::max(a.y, b.y)) return false;
    return true;
}

} // namespace treeconf
