#ifndef LGP_PLANE_APPROX_HPP
#define LGP_PLANE_APPROX_HPP

#include <variant>
#include <vector>

#include "lgp/plane_topology.hpp"

namespace lgp {

enum class ConicKind { Ellipse, Hyperbola };

/// (a X^2 + b X + c)/(d X + 1) over the normalized domain X in [0,1].
struct RationalQuadratic {
    double a, b, c, d;
};

/// at*x + bt + ct/(dt*x + 1) over the raw domain.
struct SimplifiedRQ {
    double at, bt, ct, dt;
};

/// y = yo + branch_sign * (b/a) * sqrt(|a^2 - (x-xo)^2|), ellipse taking the
/// inner sign of the radicand, hyperbola the outer one.
struct ConicArc {
    double a, b, xo, yo;
    int branch_sign;
    ConicKind kind;
};

struct SegApprox {
    std::variant<RationalQuadratic, SimplifiedRQ, ConicArc> form;
    Rat x0, x1;
    double error_bound = 0;

    bool is_rational() const { return !std::holds_alternative<ConicArc>(form); }
    double eval(double x) const;
    double deriv(double x) const;
};

struct Triangle {
    double x0, y0, x1, y1, xa, ya; // endpoints and tangent-intersection apex
    bool degenerate = false;       // collinear data: the triangle is a segment

    bool contains(double px, double py, double slack) const;
};

/// Triangle spanned by the endpoints and their tangent lines (vertical flag
/// replaces an infinite slope).
Triangle segment_triangle(double x0, double y0, bool vt0, double k0, double x1, double y1,
                          bool vt1, double k1);

/// A sub-interval of a topology segment prepared for fitting.
struct SubSeg {
    int seg_id = -1;
    Rat x0, x1;
    double y0 = 0, y1 = 0;
    double k0 = 0, k1 = 0;
    bool vt0 = false, vt1 = false;
};

/// Hermite fit by a rational quadratic (no vertical tangent at either end).
/// Collinear data degenerates to the exact line; the polynomial case d = 0 is
/// returned in normalized form.
SegApprox fit_rational_quadratic(const Rat& x0, double y0, double k0, const Rat& x1, double y1,
                                 double k1);

/// Conic-arc fit when one endpoint has a vertical tangent. vt_at_p0 selects
/// the vertical end; k is the slope at the other end; y_side is the sign of
/// (y_other - y_vt).
SegApprox fit_conic_arc(const Rat& xv, double yv, const Rat& xw, double yw, double k,
                        bool vt_at_p0, int y_side);

/// Max vertical deviation from the true branch over n+1 uniform samples
/// (Newton refinement with a certified fallback).
double estimate_error(const CurveTopology& topo, const PlaneSegment& seg, const SegApprox& approx,
                      int n);
double estimate_error(const CurveTopology& topo, const SubSeg& sub, const SegApprox& approx, int n);

/// Split at the abscissa midpoint; ordinates and tangents come from the curve.
std::pair<SubSeg, SubSeg> subdivide(const CurveTopology& topo, const SubSeg& sub);

/// True iff the two fitted graphs do not meet over the open interval (lo, hi).
/// Exact: float coefficients are rounded to nearby dyadics first.
bool check_disjoint_plane(const SegApprox& a, const SegApprox& b, const Rat& lo, const Rat& hi);

struct PlaneApproxConfig {
    int samples_n = 19;           // interior sample count for error estimation
    double vt_cap = 1.0 / 8;      // length fraction for vertical-tangent pieces
    double vt_delta = 0;          // tighter budget for vertical pieces (0: same)
    int max_subdivision_depth = 40;
    int max_disjoint_rounds = 6;
};

struct FittedPiece {
    SegApprox approx;
    SubSeg sub; // anchors and tangent data the fit interpolates
};

struct PlaneApproximation {
    CurveTopology topo;
    std::vector<FittedPiece> pieces; // ordered by segment, then by x
    double max_error = 0;
};

/// Fit every in-box segment to tolerance delta, preserving topology
/// (pairwise disjointness enforced by subdivision).
PlaneApproximation approximate_plane_curve(const MPoly& h, const Box2& box, double delta,
                                           const TopologyConfig& tcfg = {},
                                           const PlaneApproxConfig& acfg = {},
                                           const std::vector<ZPoly>& extra_split_polys = {},
                                           const std::vector<SweepSplit>* preset_splits = nullptr);

} // namespace lgp

#endif
