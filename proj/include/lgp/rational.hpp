#ifndef LGP_RATIONAL_HPP
#define LGP_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

#include "lgp/defs.hpp"

namespace lgp {

using Int = mpz_class;
using Rat = mpq_class;

/// Canonical rational from numerator/denominator (denominator made positive,
/// fraction reduced). mpq_class does not canonicalize on its own.
Rat make_rat(const Int& num, const Int& den);
Rat make_rat(long num, long den = 1);

/// Accepts "p", "p/q" and decimal literals like "-1.25" or "3.0e-2".
Rat rat_from_string(const std::string& text);

double to_double(const Rat& q);

/// Exact conversion; doubles are dyadic.
Rat rat_from_double(double v);

int sign(const Rat& q);

Rat rat_abs(const Rat& q);

/// 2^k as an exact rational (k may be negative).
Rat pow2(long k);

/// Largest power of two <= q. Requires q > 0.
Rat largest_pow2_leq(const Rat& q);

/// The dyadic m/2^k with minimal k (ties resolved toward the center) strictly
/// inside the open interval (a, b). Requires a < b.
Rat shortest_dyadic_between(const Rat& a, const Rat& b);

/// Shortest dyadic within absolute distance tol of v (v finite).
Rat shortest_dyadic_near(double v, double tol);

/// Certified bounds on sqrt(q) for q >= 0, accurate to roughly 2^-bits.
Rat sqrt_lower(const Rat& q, unsigned bits);
Rat sqrt_upper(const Rat& q, unsigned bits);

/// Closed rational interval with exact arithmetic. Degenerate (lo == hi)
/// intervals represent exact values.
struct RatInterval {
    Rat lo, hi;

    RatInterval() : lo(0), hi(0) {}
    explicit RatInterval(const Rat& v) : lo(v), hi(v) {}
    RatInterval(Rat l, Rat h);

    bool is_exact() const { return lo == hi; }
    bool contains_zero() const { return sign(lo) <= 0 && sign(hi) >= 0; }
    /// -1, 0 (straddles or exactly zero), +1
    int interval_sign() const;
    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    double mid_double() const { return to_double(mid()); }

    RatInterval operator-() const { return RatInterval(-hi, -lo); }
    RatInterval operator+(const RatInterval& o) const;
    RatInterval operator-(const RatInterval& o) const;
    RatInterval operator*(const RatInterval& o) const;
    RatInterval operator+(const Rat& r) const { return *this + RatInterval(r); }
    RatInterval operator*(const Rat& r) const { return *this * RatInterval(r); }

    /// Reciprocal; requires the interval not to contain zero.
    RatInterval inverse() const;
    RatInterval operator/(const RatInterval& o) const { return *this * o.inverse(); }

    /// max(|lo|, |hi|)
    Rat mag() const;
    /// min distance to zero (0 if contains zero)
    Rat mig() const;

    bool disjoint_from(const RatInterval& o) const { return hi < o.lo || o.hi < lo; }
    bool contains(const Rat& v) const { return lo <= v && v <= hi; }
};

/// Outward-rounded sqrt of a nonnegative interval.
RatInterval interval_sqrt(const RatInterval& v, unsigned bits);

} // namespace lgp

#endif
