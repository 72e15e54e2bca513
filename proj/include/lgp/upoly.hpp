#ifndef LGP_UPOLY_HPP
#define LGP_UPOLY_HPP

#include <optional>
#include <vector>

#include "lgp/mpoly.hpp"
#include "lgp/rational.hpp"

namespace lgp {

/// Dense univariate polynomial with integer coefficients, c[i] on X^i.
/// Normalized: no trailing zero coefficients (zero poly = empty vector).
struct ZPoly {
    std::vector<Int> c;

    ZPoly() = default;
    explicit ZPoly(std::vector<Int> coeffs) : c(std::move(coeffs)) { trim(); }

    void trim();
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const Int& lc() const { return c.back(); }

    ZPoly operator-() const;
    ZPoly operator+(const ZPoly& o) const;
    ZPoly operator-(const ZPoly& o) const;
    ZPoly operator*(const ZPoly& o) const;
    ZPoly operator*(const Int& k) const;

    ZPoly derivative() const;
    Int eval(const Int& x) const;
    Rat eval(const Rat& x) const;
    double eval(double x) const;
    RatInterval eval(const RatInterval& x) const;
    int sign_at(const Rat& x) const;

    Int content() const; // nonnegative gcd of coefficients (0 for zero poly)
    ZPoly primitive() const;
};

/// Exact quotient; throws if division is not exact.
ZPoly zpoly_div_exact(const ZPoly& a, const ZPoly& b);
std::optional<ZPoly> zpoly_try_div(const ZPoly& a, const ZPoly& b);

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r.
ZPoly zpoly_prem(const ZPoly& a, const ZPoly& b);

/// Primitive gcd via modular images (certified by trial division).
ZPoly zpoly_gcd(const ZPoly& a, const ZPoly& b);

/// p / gcd(p, p'), primitive with positive leading coefficient.
ZPoly zpoly_squarefree(const ZPoly& p);

/// Resultant of two integer polynomials (subresultant remainder sequence).
Int zpoly_resultant(const ZPoly& a, const ZPoly& b);

/// Conversions. The MPoly must be univariate in v (or constant).
ZPoly zpoly_from_mpoly(const MPoly& p, Var v, Rat* scale_out = nullptr);
MPoly mpoly_from_zpoly(const ZPoly& p, Var v);

/// Dense rational univariate; used for Sturm sequences and small solves.
struct QPoly {
    std::vector<Rat> c;

    QPoly() = default;
    explicit QPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }

    void trim();
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }

    QPoly operator+(const QPoly& o) const;
    QPoly operator-(const QPoly& o) const;
    QPoly operator*(const QPoly& o) const;
    QPoly operator*(const Rat& k) const;
    QPoly derivative() const;
    Rat eval(const Rat& x) const;
    double eval(double x) const;

    /// Euclidean remainder.
    QPoly rem(const QPoly& b) const;
};

QPoly qpoly_from_zpoly(const ZPoly& p);
ZPoly zpoly_from_qpoly(const QPoly& p); // clears denominators, primitive

} // namespace lgp

#endif
