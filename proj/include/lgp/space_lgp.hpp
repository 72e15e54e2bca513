#ifndef LGP_SPACE_LGP_HPP
#define LGP_SPACE_LGP_HPP

#include <array>
#include <optional>

#include "lgp/plane_approx.hpp"

namespace lgp {

struct Box3 {
    Rat xlo, xhi, ylo, yhi, zlo, zhi;
    Box2 xy() const { return Box2{xlo, xhi, ylo, yhi}; }
};

/// Validates the standing assumptions on the input surfaces. Throws
/// input_error naming the offending factor.
void check_assumptions(const MPoly& f, const MPoly& g);

/// Shear data: s with 0 < s < r/(2R), the sample abscissas and their fibers.
struct ShearParams {
    Rat s;
    double r = 0, R = 0;
    Rat r_low;  // certified lower bound on the smallest fiber gap
    Rat R_up;   // certified upper bound on fiber |z| magnitudes
    std::vector<AlgebraicReal> alphas;
    std::vector<std::vector<Interval>> fibers;
    bool degenerate = false; // no curve in the box

    /// Endpoint-matching radius: min(r/2, s R (1 + 2^-20)).
    Rat match_radius() const;
    /// True iff 0 < cand < r/(2R) certifiably.
    bool admissible(const Rat& cand) const;
};

/// Shear magnitude per the gap/root-bound recipe; s defaults to the largest
/// power of two <= r/(4R).
ShearParams compute_s(const MPoly& f, const MPoly& g, const MPoly& h, const Box3& box,
                      const CurveEliminants* elim = nullptr, const TopologyConfig& cfg = {});

/// Sampled certification that the sheared surfaces meet each projected point
/// in at most one z (gcd degree <= 1 of the specialized fiber polynomials).
bool check_z_generic(const MPoly& f, const MPoly& g, const Rat& s, const Rat& xlo, const Rat& xhi);

/// Space points over a non-critical abscissa, recovered by the local
/// matching beta' = beta + s z. Throws "LGP violated" on match failures.
std::vector<std::array<double, 2>> solve_fiber(const MPoly& f, const MPoly& g, const Rat& x0,
                                               const ShearParams& sp);

struct Correspondence {
    // base-curve segment id -> sheared-curve segment ids, ordered by height
    std::map<int, std::vector<int>> pairs;
    std::vector<int> unresolved;       // sheared segments needing fiber resolution (resolved)
    std::vector<int> dropped_h;        // base segments with no real space branch
    std::vector<int> spurious_hbar;    // sheared segments with no space meaning
    std::vector<int> true_singular;    // sheared-topology point ids over space singularities
};

/// Match the segments of the base and sheared projections over a shared
/// split partition (endpoint + midpoint neighbourhoods, fiber resolution for
/// ambiguous cases).
Correspondence correspond_segments(const MPoly& f, const MPoly& g, const CurveTopology& topo_h,
                                   const CurveTopology& topo_hbar, const ShearParams& sp);

struct SpaceErrorBound {
    double per_coord;
    double hausdorff;
};

/// Error transport: per-coordinate max(e1, (e1+e2)/s) and Hausdorff
/// sqrt(s^2 e1^2 + (e1+e2)^2)/s.
SpaceErrorBound space_error_bound(double eps1, double eps2, const Rat& s);

/// One recovered piece: x -> (x, y1(x), (y2(x) - y1(x))/s).
struct SpacePiece {
    FittedPiece y1, y2;
    Rat s;
    Rat x0, x1;
    double eps1 = 0, eps2 = 0;
    SpaceErrorBound cert{0, 0};

    bool is_rational() const { return y1.approx.is_rational() && y2.approx.is_rational(); }
    std::array<double, 3> at(double x) const;
    std::array<double, 3> tangent(double x) const; // (1, y1', (y2'-y1')/s)
};

/// Combine two corresponding fitted plane pieces over a common domain.
SpacePiece recover_space(const FittedPiece& base, const FittedPiece& sheared,
                         const ShearParams& sp);

/// Two space pieces over the same base piece are disjoint iff their sheared
/// components never meet over the open domain.
bool check_disjoint_space(const SpacePiece& a, const SpacePiece& b);

} // namespace lgp

#endif
