#ifndef LGP_PLANE_TOPOLOGY_HPP
#define LGP_PLANE_TOPOLOGY_HPP

#include <map>
#include <optional>
#include <vector>

#include "lgp/real_roots.hpp"
#include "lgp/resultant.hpp"

namespace lgp {

struct Box2 {
    Rat xlo, xhi, ylo, yhi;
};

struct TopologyConfig {
    double vt_threshold = 100.0;   // |slope| beyond this counts as vertical
    double tangent_tau = 1e-3;     // tangent clustering tolerance at singularities
    int max_refine_depth = 64;
    long split_bits = 60;          // sweep-line enclosure width 2^-split_bits
    long fiber_bits = 48;          // fiber ordinate enclosure width 2^-fiber_bits
};

enum class PointKind { Regular, XCritical, YCritical, Singular, Flex, BoxBoundary };

const char* point_kind_name(PointKind k);

struct TangentDir2 {
    bool vertical = false;
    double slope = 0.0; // raw estimate, kept even when vertical
};

struct PlanePoint {
    RatInterval x, y;
    PointKind kind = PointKind::Regular;
    Rat x_anchor;        // rational abscissa shared by incident fitted pieces
    double y_anchor = 0; // ordinate at the anchor
    int split_index = -1;
    int fiber_multiplicity = 1;
    bool in_box = true;
    bool at_infinity = false; // synthetic endpoint for branches leaving every box
};

struct PlaneSegment {
    int p0 = -1, p1 = -1; // point ids, x-increasing
    TangentDir2 k0, k1;
    int branch_ordinal = 0; // index among all real branches in the gap, bottom up
    int gap_index = 0;
    Rat x0, x1; // anchor domain
    bool in_box = true;
};

/// Elimination data shared by the sweep and the shear-parameter computation.
struct CurveEliminants {
    MPoly h;   // squarefree, integer-primitive
    MPoly hx, hy;
    MPoly disc;      // Res_y(h, h_y): abscissas of vertical tangents and singular points
    MPoly xcrit_res; // abscissas of horizontal-tangent points (h = h_x = 0)
    MPoly flex_res;  // abscissas of inflection points
    MPoly lc;        // leading coefficient of h in y
    MPoly hessian;   // dehomogenized Hessian determinant of h
    std::map<int, MPoly> disc_chain; // subresultant chain of (h, h_y) in y
};

CurveEliminants curve_eliminants(const MPoly& h);

/// One sweep line of the decomposition, shareable between two curves so that
/// corresponding segments use identical anchor abscissas.
struct SweepSplit {
    AlgebraicReal x;
    Rat rep_lo, rep_mid, rep_hi; // anchor candidates (exact splits: all equal)
    bool exact() const { return x.exact(); }
};

/// Build the sorted split list for a set of abscissa polynomials inside
/// [xlo, xhi], including the box edges, with enclosures refined and separated.
std::vector<SweepSplit> build_splits(const std::vector<ZPoly>& abscissa_polys, const Rat& xlo,
                                     const Rat& xhi, long split_bits);

struct CurveTopology {
    MPoly h;
    Box2 box;
    TopologyConfig cfg;
    CurveEliminants elim;
    std::vector<SweepSplit> splits;
    std::vector<PlanePoint> points;
    std::vector<PlaneSegment> segments;
    std::map<int, std::vector<int>> adjacency; // point id -> incident segment ids
    std::vector<std::vector<int>> fiber_points; // per split: point ids bottom-up
    std::vector<Rat> gap_mid;                   // per gap: probe abscissa
    std::vector<int> gap_branches;              // per gap: number of real branches

    /// Number of connected components that are closed loops (over in-box segments).
    int closed_loops() const;
    int components() const;
};

/// Decompose the curve inside the box into x-monotone, y-monotone, convex
/// segments with endpoint tangents. The split set may be widened by extra
/// abscissa polynomials or replaced by a precomputed (shared) split list.
CurveTopology segment_curve(const MPoly& h, const Box2& box, const TopologyConfig& cfg = {},
                            const std::vector<ZPoly>& extra_split_polys = {},
                            const std::vector<SweepSplit>* preset_splits = nullptr);

/// Critical points (both kinds and singular) inside the box.
std::vector<PlanePoint> critical_points(const MPoly& h, const Box2& box,
                                        const TopologyConfig& cfg = {});

/// Inflection points inside the box (non-singular points on the Hessian curve).
std::vector<PlanePoint> flexes(const MPoly& h, const Box2& box, const TopologyConfig& cfg = {});

/// Endpoint tangent of a segment (stored at construction).
TangentDir2 tangent_at(const CurveTopology& topo, const PlaneSegment& seg, bool at_p1);

/// Ordinate of the segment's branch at an interior abscissa, by branch order
/// among all real roots of h(x0, .). Throws if x0 lies on a sweep line.
double point_on_branch(const CurveTopology& topo, const PlaneSegment& seg, const Rat& x0);
Interval point_on_branch_interval(const CurveTopology& topo, const PlaneSegment& seg,
                                  const Rat& x0, const Rat& width);

/// -h_x/h_y at a numeric point.
double implicit_slope(const MPoly& h, double x, double y);

/// All real fiber ordinates of h at a rational abscissa (any multiplicity),
/// refined to the given width.
std::vector<Interval> fiber_ordinates(const MPoly& h, const Rat& x0, const Rat& width);

/// Certified enclosures of all real fiber ordinates over one sweep line,
/// rational or algebraic. `critical` must be true when the discriminant of
/// the curve vanishes at x (the enclosure is refined in place as needed).
std::vector<Interval> certified_fiber(const CurveEliminants& elim, AlgebraicReal& x, bool critical,
                                      const TopologyConfig& cfg = {});

} // namespace lgp

#endif
