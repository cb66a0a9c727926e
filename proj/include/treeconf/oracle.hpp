#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeconf/chambers.hpp"
#include "treeconf/rational.hpp"

namespace treeconf {

/**
 * Closed-form rank tables for the star and generalized H families, used to
 * cross-validate the geometric pipeline. Parameter points on a case boundary
 * are rejected.
 */

struct RankPair {
    long h0 = 0, h1 = 0;
    bool operator==(const RankPair& o) const { return h0 == o.h0 && h1 == o.h1; }
};

/// Star_k table. k >= 4 is the general statement; k = 3 (the Y graph)
/// differs in the single region r < 1, L < r where the space keeps two
/// components.
inline RankPair rank_star(int k, const Rational& r, const Rational& L) {
    if (k < 3) throw std::invalid_argument("rank_star requires k >= 3");
    if (r <= 0 || L <= 0) throw std::invalid_argument("rank_star requires r, L > 0");
    if (r == 1 || r == 2 || r == L || r == L + 1)
        throw OnWall("rank_star sample lies on a critical line");
    long K = k;
    if (r < 1) {
        if (r < L) return {1, K * (K - 3) + 1};
        if (k == 3) return {2, 0};
        return {1, K * K - 5 * K + 5};
    }
    if (r < 2) {
        if (r < L) return {K * K - 3 * K + 4, 0};
        if (r < L + 1) return {K * K - K, 0};
        return {K * K - 3 * K + 2, 0};
    }
    if (r < L) return {2, 0};
    if (r < L + 1) return {2 * K - 2, 0};
    return {0, 0};
}

/// Generalized H table (m, n >= 3); the m = n = 3 case reproduces the plain
/// H graph values.
inline RankPair rank_h(int m, int n, const Rational& r, const Rational& L) {
    if (m < 3 || n < 3) throw std::invalid_argument("rank_h requires m, n >= 3");
    if (r <= 0 || L <= 0) throw std::invalid_argument("rank_h requires r, L > 0");
    // only the table's own case boundaries are rejected; the arrangement's
    // extra lines r = L/2 and r = 1 + L/2 never change the ranks
    if (r == 1 || r == 2 || r == L || r == 1 + L || r == 2 + L)
        throw OnWall("rank_h sample lies on a case boundary");
    long M = m, N = n;
    long h0, h1;
    if (r < 1)
        h0 = 1;
    else if (r < 2)
        h0 = (r < L + 1) ? M * (M - 3) + N * (N - 3) + 6 : (M + N) * (M + N - 5) + 6;
    else if (r < L + 1)
        h0 = 2;
    else if (r < L + 2)
        h0 = 2 * (M - 1) * (N - 1);
    else
        h0 = 0;
    if (r < 1 && r < L)
        h1 = M * (M - 3) + N * (N - 3) + 3;
    else if (r < 1)
        h1 = (M + N) * (M + N - 7) + 11;
    else if (L < r && r < L + 1)
        h1 = 2 * (M - 2) * (N - 2);
    else
        h1 = 0;
    return {h0, h1};
}

// ---------------------------------------------------------------------------
// Expected summand catalogs. Supports are stated as predicates in region
// coordinates so the comparison is independent of how finely the arrangement
// subdivides each region (inert walls are harmless).
// ---------------------------------------------------------------------------

struct CatalogClass {
    std::string name;
    bool interval = true;
    // multiplicity as a closed form; -1 marks "determined at run time"
    long multiplicity = 0;
    // fiber dimension of one class member at a parameter point (0 outside
    // the support)
    std::function<long(const Rational& r, const Rational& L)> dim_at;
};

struct SummandCatalog {
    std::string kind;
    std::vector<CatalogClass> classes;
};

enum class CatalogKind { YPH0, StarPH0, StarPH1, HPH0, YPH1, HPH1 };

/// Reference catalogs:
///   Y PH0: one non-interval class and three interval classes (1,1,1,2);
///   Star_k PH0 (k>=4): (1, 1, 2k-4, k^2-3k+1);
///   H_{m,n} PH0: all interval, (1, 1, (m-1)(m-2)+(n-1)(n-2), 2mn-2m-2n);
///   Y PH1: a single interval module;
///   Star_k PH1: three interval classes whose multiplicities depend on the
///     rank rho of the vertical structure map, computed by the pipeline;
///   H PH1: interval decomposable (no fixed class list is asserted).
inline SummandCatalog expected_summands(CatalogKind kind, int k_or_m = 0, int n = 0) {
    SummandCatalog cat;
    auto in01 = [](const Rational& v) { return v > 0 && v < 1; };
    switch (kind) {
        case CatalogKind::YPH0: {
            cat.kind = "Y PH0";
            CatalogClass m1;
            m1.name = "M1";
            m1.interval = false;
            m1.multiplicity = 1;
            m1.dim_at = [](const Rational& r, const Rational& L) -> long {
                if (r > 2 && r > L + 1) return 0;
                if (r > 1 && r < 2 && r < L + 1) return 2;
                return 1;
            };
            CatalogClass m2;
            m2.name = "M2";
            m2.multiplicity = 1;
            m2.dim_at = [](const Rational& r, const Rational& L) -> long {
                return (r > 1 && r < L + 1) ? 1 : 0;
            };
            CatalogClass e;
            e.name = "E";
            e.multiplicity = 2;
            e.dim_at = [](const Rational& r, const Rational& L) -> long {
                return (r > 1 && r > L && r < L + 1) ? 1 : 0;
            };
            CatalogClass f;
            f.name = "F";
            f.multiplicity = 1;
            f.dim_at = [in01](const Rational& r, const Rational& L) -> long {
                if (r < 2 && r > 1) return 1;                  // middle column
                if (in01(r) && L < r) return 1;                // r < 1, below diagonal
                return 0;
            };
            cat.classes = {m1, m2, e, f};
            return cat;
        }
        case CatalogKind::StarPH0: {
            int k = k_or_m;
            if (k < 4) throw std::invalid_argument("StarPH0 catalog requires k >= 4");
            cat.kind = "Star_" + std::to_string(k) + " PH0";
            CatalogClass m1;
            m1.name = "M1";
            m1.interval = false;
            m1.multiplicity = 1;
            m1.dim_at = [](const Rational& r, const Rational& L) -> long {
                if (r > 2 && r > L + 1) return 0;
                if (r > 1 && r < 2 && r < L + 1) return 2;
                return 1;
            };
            CatalogClass m2;
            m2.name = "M2";
            m2.multiplicity = 1;
            m2.dim_at = [](const Rational& r, const Rational& L) -> long {
                return (r > 1 && r < L + 1) ? 1 : 0;
            };
            CatalogClass e;
            e.name = "E";
            e.multiplicity = 2L * k - 4;
            e.dim_at = [](const Rational& r, const Rational& L) -> long {
                return (r > 1 && r > L && r < L + 1) ? 1 : 0;
            };
            CatalogClass f;
            f.name = "F";
            f.multiplicity = (long)k * k - 3L * k + 1;
            f.dim_at = [](const Rational& r, const Rational& L) -> long {
                return (r > 1 && r < 2) ? 1 : 0;
            };
            cat.classes = {m1, m2, e, f};
            return cat;
        }
        case CatalogKind::StarPH1: {
            int k = k_or_m;
            if (k < 4) throw std::invalid_argument("StarPH1 catalog requires k >= 4");
            cat.kind = "Star_" + std::to_string(k) + " PH1";
            CatalogClass top; // supported where r <= 1, r <= L
            top.name = "N1";
            top.multiplicity = -1; // k(k-3)+1 - rho
            top.dim_at = [](const Rational& r, const Rational& L) -> long {
                return (r < 1 && r < L) ? 1 : 0;
            };
            CatalogClass bot; // supported where r <= 1, L < r
            bot.name = "N2";
            bot.multiplicity = -1; // k^2-5k+5 - rho
            bot.dim_at = [](const Rational& r, const Rational& L) -> long {
                return (r < 1 && L < r) ? 1 : 0;
            };
            CatalogClass both;
            both.name = "N3";
            both.multiplicity = -1; // rho
            both.dim_at = [](const Rational& r, const Rational&) -> long {
                return r < 1 ? 1 : 0;
            };
            cat.classes = {top, bot, both};
            return cat;
        }
        case CatalogKind::HPH0: {
            int m = k_or_m;
            if (m < 3 || n < 3) throw std::invalid_argument("HPH0 catalog requires m, n >= 3");
            cat.kind = "H_" + std::to_string(m) + "," + std::to_string(n) + " PH0";
            CatalogClass n1;
            n1.name = "N1";
            n1.multiplicity = 1;
            n1.dim_at = [](const Rational& r, const Rational& L) -> long {
                if (r < 1) return 1;
                if (r < 2) return 1;
                if (r < L + 2) return 1;
                return 0;
            };
            CatalogClass n2;
            n2.name = "N2";
            n2.multiplicity = 1;
            n2.dim_at = [](const Rational& r, const Rational& L) -> long {
                return (r > 1 && r < L + 2) ? 1 : 0;
            };
            CatalogClass e;
            e.name = "E";
            e.multiplicity = (long)(m - 1) * (m - 2) + (long)(n - 1) * (n - 2);
            e.dim_at = [](const Rational& r, const Rational& L) -> long {
                return (r > 1 && r < 2) ? 1 : 0;
            };
            CatalogClass f;
            f.name = "F";
            f.multiplicity = 2L * m * n - 2L * m - 2L * n;
            f.dim_at = [](const Rational& r, const Rational& L) -> long {
                return (r > 1 && r > L + 1 && r < L + 2) ? 1 : 0;
            };
            cat.classes = {n1, n2, e, f};
            return cat;
        }
        case CatalogKind::YPH1: {
            cat.kind = "Y PH1";
            CatalogClass c;
            c.name = "I";
            c.multiplicity = 1;
            c.dim_at = [](const Rational& r, const Rational& L) -> long {
                return (r < 1 && r < L) ? 1 : 0;
            };
            cat.classes = {c};
            return cat;
        }
        case CatalogKind::HPH1:
            cat.kind = "H PH1";
            return cat; // interval decomposability only; no fixed class list
    }
    throw std::invalid_argument("unsupported catalog kind");
}

} // namespace treeconf
