#ifndef LGP_REAL_ROOTS_HPP
#define LGP_REAL_ROOTS_HPP

#include <vector>

#include "lgp/mpoly.hpp"
#include "lgp/upoly.hpp"

namespace lgp {

/// Isolating interval for one real root: lo == hi means the root is known
/// exactly; otherwise the open interval (lo, hi) contains exactly one root of
/// the defining squarefree polynomial and the endpoints are not roots.
struct Interval {
    Rat lo, hi;

    Interval() : lo(0), hi(0) {}
    Interval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {}
    bool exact() const { return lo == hi; }
    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    double mid_double() const { return to_double(mid()); }
    RatInterval as_rat_interval() const { return RatInterval(lo, hi); }
};

/// All real roots of a univariate polynomial, isolated and ordered.
struct RootSet {
    MPoly poly;                // the input
    Var var = Var::x;
    ZPoly sf;                  // squarefree primitive integer form
    std::vector<Interval> roots;
};

/// Isolating intervals for every distinct real root (Descartes bisection on
/// the squarefree part).
RootSet isolate_roots(const MPoly& p);
RootSet isolate_roots(const ZPoly& p, Var v = Var::x);

/// Roots restricted to the open interval (a, b).
std::vector<Interval> isolate_roots_in(const ZPoly& sf, const Rat& a, const Rat& b);

/// Shrink the root's isolating interval to width <= target (still isolating).
Interval refine(const RootSet& rs, size_t index, const Rat& target_width);
Interval refine_interval(const ZPoly& sf, Interval iv, const Rat& target_width);

/// Exact count of distinct real roots in the open interval (a, b) via a Sturm
/// sequence. Roots at the endpoints are discounted exactly.
int count_roots_in(const MPoly& p, const Rat& a, const Rat& b);
int count_roots_in(const ZPoly& p, const Rat& a, const Rat& b);

/// Cauchy bound 1 + max |a_i / a_n|; every complex root has magnitude <= bound.
Rat root_bound(const MPoly& p);
Rat root_bound(const ZPoly& p);

/// Certified upper bound on max |real root| (tight to ~2^-30); 0 when the
/// polynomial has no real roots.
Rat max_real_root_magnitude(const ZPoly& p);

/// A real algebraic number: a squarefree defining polynomial plus an
/// isolating interval. Exact rationals use an empty polynomial.
struct AlgebraicReal {
    ZPoly defining;  // empty <=> value is exactly `iv.lo`
    Interval iv;

    AlgebraicReal() = default;
    explicit AlgebraicReal(const Rat& v) : iv(v, v) {}
    AlgebraicReal(ZPoly d, Interval i) : defining(std::move(d)), iv(std::move(i)) {}

    bool exact() const { return defining.is_zero() || iv.exact(); }
    Rat value_or_mid() const { return iv.mid(); }
    double to_double_approx() const { return iv.mid_double(); }

    /// Shrink the isolating interval in place to width <= target.
    void refine_to(const Rat& target_width);
};

/// Exact sign of S(alpha) for a univariate integer polynomial S.
/// Refines alpha as needed; detects exact zero via gcd.
int sign_at_algebraic(const ZPoly& S, AlgebraicReal& alpha);

} // namespace lgp

#endif
