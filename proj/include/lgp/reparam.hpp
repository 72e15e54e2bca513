#ifndef LGP_REPARAM_HPP
#define LGP_REPARAM_HPP

#include "lgp/space_lgp.hpp"

namespace lgp {

enum class VTAxis { General, YAxis, ZAxis };

/// Direction of the space tangent at a segment endpoint, classified by which
/// coordinate can drive a rational parametrization there.
struct TangentDir3 {
    VTAxis cls = VTAxis::General;
    std::array<double, 3> dir{1, 0, 0};
};

struct ReparamConfig {
    double axis_threshold = 100.0; // slope magnitude treated as infinite
    double snap_tol = 1e-3;        // components below this are snapped to zero
    std::vector<double> grid = {-0.5, 0.5, 1.0, 2.0};
    int samples_n = 19;
};

/// Classify the endpoint tangent (1, p', (q'-p')/s) of a recovered space
/// segment, switching to the y- or z-driven chart when slopes blow up.
TangentDir3 classify_vt_tangent(double p_slope, double q_slope, const Rat& s,
                                const ReparamConfig& cfg = {});

/// Rational parametrization (x(t), y(t), z(t)), t in [0,1], driven by y or z.
struct ReparamTriple {
    VTAxis axis = VTAxis::YAxis; // which coordinate is affine in t
    double a1, b1, c1, d1;       // x component
    double a2, b2, c2, d2, c3, d3; // the remaining component
    double drive0 = 0, drive1 = 1; // affine map t -> driving coordinate

    std::array<double, 3> at(double t) const;
    std::array<double, 3> velocity(double t) const;
};

/// Interpolates positions at both endpoints and tangent directions t0 (at the
/// vertical end, t=0) and t1, with free denominators d2, d3. Throws
/// "invalid free parameters" when a pole or the endpoint condition fails.
/// A General t0 is accepted when axis_hint selects the driving coordinate
/// (used for the non-vertical halves of subdivided arcs).
ReparamTriple reparametrize_vt_segment(const std::array<double, 3>& p0,
                                       const std::array<double, 3>& p1, const TangentDir3& t0,
                                       const TangentDir3& t1, double d2, double d3,
                                       VTAxis axis_hint = VTAxis::General);

struct ReparamErrorReport {
    double max_dist = 0;
    int skipped = 0;
    int total = 0;
};

/// Max 3D distance between the graph-form piece and the rational triple over
/// n+1 samples, matching points through the driving coordinate.
double reparam_error(const SpacePiece& original, const ReparamTriple& triple, int n,
                     ReparamErrorReport* report = nullptr);

struct FreeParamChoice {
    double d2 = 0, d3 = 0;
    ReparamTriple triple;
    double err = 0;
};

/// Scan the configured grid for the free denominators and keep the pair with
/// the smallest measured error (first in grid order on ties).
FreeParamChoice select_free_params(const SpacePiece& original, const std::array<double, 3>& p0,
                                   const std::array<double, 3>& p1, const TangentDir3& t0,
                                   const TangentDir3& t1, const ReparamConfig& cfg = {});

} // namespace lgp

#endif
