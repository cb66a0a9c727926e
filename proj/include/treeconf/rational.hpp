#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace treeconf {

using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error("ParseError: " + msg) {}
};

struct NotComparable : std::runtime_error {
    explicit NotComparable(const std::string& msg)
        : std::runtime_error("NotComparable: " + msg) {}
};

/**
 * Parse an exact rational from "p/q" or integer notation. No floating
 * point forms are accepted; chamber membership must be decided exactly.
 */
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational literal");
    auto bad = [&]() { throw ParseError("invalid rational literal '" + s + "'"); };
    std::size_t slash = s.find('/');
    auto check_int = [&](const std::string& t) {
        if (t.empty()) bad();
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) bad();
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') bad();
    };
    if (slash == std::string::npos) {
        check_int(s);
        return Rational(Integer(s));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    check_int(num);
    check_int(den);
    Integer d(den);
    if (d == 0) bad();
    return Rational(Integer(num), d);
}

inline std::string rat_str(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Affine function c + m*L of the symbolic edge-length parameter L.
struct LinL {
    Rational c{0};
    Rational m{0};

    LinL() = default;
    LinL(Rational c_, Rational m_) : c(std::move(c_)), m(std::move(m_)) {}
    static LinL constant(const Rational& v) { return LinL(v, 0); }

    Rational at(const Rational& L) const { return c + m * L; }

    LinL operator+(const LinL& o) const { return LinL(c + o.c, m + o.m); }
    LinL operator-(const LinL& o) const { return LinL(c - o.c, m - o.m); }
    bool operator==(const LinL& o) const { return c == o.c && m == o.m; }
};

} // namespace treeconf
