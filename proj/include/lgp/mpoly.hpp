#ifndef LGP_MPOLY_HPP
#define LGP_MPOLY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lgp/rational.hpp"

namespace lgp {

enum class Var : int { x = 0, y = 1, z = 2, t = 3 };

constexpr int kNumVars = 4;

const char* var_name(Var v);
Var var_from_name(char c); // throws on unknown

/// Exponent vector packed into one word, 16 bits per variable,
/// x in the most significant field so key order is lex(x, y, z, t).
using ExpKey = std::uint64_t;

inline unsigned exp_of(ExpKey k, Var v) {
    return static_cast<unsigned>((k >> (16 * (3 - static_cast<int>(v)))) & 0xffffu);
}
inline ExpKey exp_set(ExpKey k, Var v, unsigned e) {
    int shift = 16 * (3 - static_cast<int>(v));
    k &= ~(ExpKey(0xffff) << shift);
    k |= ExpKey(e & 0xffffu) << shift;
    return k;
}

/// Sparse multivariate polynomial over the rationals. Terms never store zero
/// coefficients. The declared variable mask records which variables the
/// polynomial is considered to live in (used for precondition checks; terms
/// may use fewer).
class MPoly {
public:
    MPoly() : vars_mask_(0) {}
    explicit MPoly(Rat constant, unsigned vars_mask = 0);

    static MPoly variable(Var v);
    static unsigned mask_of(const std::vector<Var>& vars);

    const std::map<ExpKey, Rat>& terms() const { return terms_; }
    unsigned vars_mask() const { return vars_mask_; }
    bool declares(Var v) const { return (vars_mask_ >> static_cast<int>(v)) & 1u; }
    std::vector<Var> variables() const;

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rat constant_value() const; // requires is_constant()

    int degree(Var v) const;   // -1 for the zero polynomial
    int total_degree() const;  // -1 for the zero polynomial
    bool depends_on(Var v) const { return degree(v) > 0; }

    void add_term(ExpKey k, const Rat& c);

    MPoly operator-() const;
    MPoly operator+(const MPoly& o) const;
    MPoly operator-(const MPoly& o) const;
    MPoly operator*(const MPoly& o) const;
    MPoly& operator+=(const MPoly& o) { return *this = *this + o; }
    MPoly& operator-=(const MPoly& o) { return *this = *this - o; }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
    MPoly operator*(const Rat& c) const;
    bool operator==(const MPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const MPoly& o) const { return !(*this == o); }

    MPoly pow(unsigned e) const;

    /// Coefficients of v^0, v^1, ... as polynomials in the other variables.
    std::vector<MPoly> coeffs_in(Var v) const;
    static MPoly from_coeffs(const std::vector<MPoly>& cs, Var v);
    MPoly leading_coeff(Var v) const;

    /// Leading term under the packed lex order (x > y > z > t).
    std::pair<ExpKey, Rat> leading_term() const; // requires nonzero

    std::string to_string() const;

private:
    unsigned vars_mask_;
    std::map<ExpKey, Rat> terms_;
};

MPoly operator*(const Rat& c, const MPoly& p);

/// Parse per the input grammar: integers, rational literals p/q, variables,
/// + - * ^, parentheses; ^ binds tighter than * which binds tighter than +/-.
/// Errors carry the character position.
MPoly parse_poly(const std::string& text, const std::vector<Var>& vars);

/// Exact partial evaluation: substitutes the given variables, returns the
/// polynomial in the remaining ones. Assigned variables must be declared.
MPoly eval(const MPoly& p, const std::map<Var, Rat>& point);

/// Full numeric evaluation (coordinates for x,y,z,t; unused ones ignored).
double eval_double(const MPoly& p, double x, double y = 0, double z = 0, double t = 0);

/// Interval evaluation of a polynomial at boxed coordinates.
RatInterval eval_interval(const MPoly& p, const std::vector<std::pair<Var, RatInterval>>& at);

MPoly partial_derivative(const MPoly& p, Var v);

/// p(x, y + s*z, z), expanded exactly.
MPoly shear_yz(const MPoly& p, const Rat& s);

} // namespace lgp

#endif
