#ifndef LGP_RESULTANT_HPP
#define LGP_RESULTANT_HPP

#include <map>
#include <vector>

#include "lgp/mpoly.hpp"

namespace lgp {

/// Resultant of p and q with respect to v, equal to the determinant of the
/// Sylvester matrix. Computed by a subresultant remainder sequence with
/// content removal; large bivariate instances go through exact
/// evaluation/interpolation instead (same value).
MPoly resultant(const MPoly& p, const MPoly& q, Var v);

/// A greatest common divisor, normalized to integer-primitive with positive
/// leading coefficient. gcd(0,0) = 0.
MPoly gcd_poly(const MPoly& p, const MPoly& q);

/// Product of the distinct irreducible factors, same normalization as
/// gcd_poly. Requires p nonzero.
MPoly squarefree_part(const MPoly& p);

/// Content of p with respect to v: gcd of the coefficient polynomials.
MPoly content_in(const MPoly& p, Var v);
MPoly primitive_part_in(const MPoly& p, Var v);

/// Divide by the rational content and fix the sign of the leading term
/// (packed lex order) to be positive.
MPoly normalize_primitive(const MPoly& p);

/// True iff b divides a exactly; quotient returned through q when non-null.
bool mpoly_divides(const MPoly& a, const MPoly& b, MPoly* q = nullptr);
MPoly mpoly_div_exact(const MPoly& a, const MPoly& b);

/// Subresultant polynomials of (p, q) w.r.t. v, keyed by index j. Entries are
/// the true subresultants up to sign. Missing indices are identically zero
/// (defective chain). Includes index 0 (the resultant).
std::map<int, MPoly> subresultant_chain(const MPoly& p, const MPoly& q, Var v);

/// Coefficient of v^j in the j-th subresultant (zero polynomial when absent).
MPoly principal_subresultant(const std::map<int, MPoly>& chain, int j, Var v);

} // namespace lgp

#endif
