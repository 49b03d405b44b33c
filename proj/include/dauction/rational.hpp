#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dauction {

// Exact rational scalar used for every value, weight, price and welfare
// quantity in the library.  int64 components are ample at the magnitudes the
// engine targets (small graphs, single-digit or double-digit bids).
using Rat = boost::rational<long long>;

struct RationalParseError : std::runtime_error {
    explicit RationalParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline long long parse_int(const std::string& s, const std::string& ctx) {
    if (s.empty()) throw RationalParseError("empty integer in rational: " + ctx);
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw RationalParseError("bad integer '" + s + "' in rational: " + ctx);
    }
    if (pos != s.size()) throw RationalParseError("trailing garbage in rational: " + ctx);
    return v;
}

}  // namespace detail

// Accepts "p", "p/q" and decimal "p.ddd" forms, with an optional leading
// sign on p.  The denominator must be positive and nonzero.
inline Rat parse_rational(const std::string& text) {
    if (text.empty()) throw RationalParseError("empty rational literal");
    std::size_t slash = text.find('/');
    std::size_t dot = text.find('.');
    if (slash != std::string::npos && dot != std::string::npos)
        throw RationalParseError("mixed '/' and '.' in rational: " + text);
    if (slash != std::string::npos) {
        long long num = detail::parse_int(text.substr(0, slash), text);
        long long den = detail::parse_int(text.substr(slash + 1), text);
        if (den <= 0) throw RationalParseError("denominator must be positive: " + text);
        return Rat(num, den);
    }
    if (dot != std::string::npos) {
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        if (frac.empty()) throw RationalParseError("missing digits after '.': " + text);
        bool neg = !whole.empty() && whole[0] == '-';
        long long w = detail::parse_int(whole, text);
        long long den = 1;
        for (char c : frac) {
            if (c < '0' || c > '9') throw RationalParseError("bad decimal digit in: " + text);
            if (den > 1000000000000000LL) throw RationalParseError("decimal too long: " + text);
            den *= 10;
        }
        long long f = detail::parse_int(frac, text);
        long long num = w * den + (neg ? -f : f);
        return Rat(num, den);
    }
    return Rat(detail::parse_int(text, text));
}

// "p/q" for non-integral values, plain "p" otherwise.
inline std::string to_string(const Rat& r) {
    std::string s = std::to_string(r.numerator());
    if (r.denominator() != 1) {
        s += '/';
        s += std::to_string(r.denominator());
    }
    return s;
}

}  // namespace dauction
