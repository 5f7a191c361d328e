#ifndef DGBAR_RATIONAL_HPP
#define DGBAR_RATIONAL_HPP

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace dgbar {

// Exact arbitrary-precision rational scalar. GMP keeps values canonical
// (lowest terms, positive denominator, 0 = 0/1) as long as every entry point
// canonicalizes, so all construction goes through rat()/rat_parse().
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0)
        throw std::invalid_argument("rat: zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Rat& q) { return sgn(q) == 0; }

// Prints "p" for integers, "p/q" otherwise; no spaces.
inline std::string rat_str(const Rat& q) {
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "p" or "p/q" with optional sign; throws std::invalid_argument.
inline Rat rat_parse(const std::string& s) {
    if (s.empty())
        throw std::invalid_argument("rat_parse: empty literal");
    Rat q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("rat_parse: bad rational literal '" + s + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("rat_parse: zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

} // namespace dgbar

#endif
