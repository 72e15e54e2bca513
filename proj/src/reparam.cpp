#include "lgp/reparam.hpp"

#include <algorithm>
#include <cmath>

namespace lgp {

TangentDir3 classify_vt_tangent(double p_slope, double q_slope, const Rat& s,
                                const ReparamConfig& cfg) {
    TangentDir3 out;
    double sd = to_double(s);
    if (std::abs(p_slope) <= cfg.axis_threshold) {
        out.cls = VTAxis::General;
        out.dir = {1.0, p_slope, (q_slope - p_slope) / sd};
    } else {
        double zeta = (q_slope - p_slope) / (sd * p_slope);
        if (std::abs(zeta) > cfg.axis_threshold) {
            out.cls = VTAxis::ZAxis;
            out.dir = {0.0, 0.0, zeta > 0 ? 1.0 : -1.0};
            return out;
        }
        out.cls = VTAxis::YAxis;
        out.dir = {0.0, 1.0, zeta};
    }
    for (double& v : out.dir)
        if (std::abs(v) < cfg.snap_tol) v = 0.0;
    if (out.cls == VTAxis::General && out.dir[0] == 0.0) out.dir[0] = 1.0;
    return out;
}

std::array<double, 3> ReparamTriple::at(double t) const {
    double x = (a1 * t * t + b1 * t + c1) / (d1 * t + 1);
    double other = (a2 * t * t + b2 * t + c2) / (d2 * t + 1) + c3 / (d3 * t + 1);
    double drive = drive0 + (drive1 - drive0) * t;
    if (axis == VTAxis::YAxis) return {x, drive, other};
    return {x, other, drive};
}

std::array<double, 3> ReparamTriple::velocity(double t) const {
    auto rq_d = [](double a, double b, double c, double d, double t2) {
        double den = d * t2 + 1;
        return ((2 * a * t2 + b) * den - d * (a * t2 * t2 + b * t2 + c)) / (den * den);
    };
    double dx = rq_d(a1, b1, c1, d1, t);
    double dother = rq_d(a2, b2, c2, d2, t) - c3 * d3 / ((d3 * t + 1) * (d3 * t + 1));
    double ddrive = drive1 - drive0;
    if (axis == VTAxis::YAxis) return {dx, ddrive, dother};
    return {dx, dother, ddrive};
}

namespace {

// solve the 4x4 linear system for the non-driving component
// w(t) = (a t^2 + b t + c)/(d2 t + 1) + c3/(d3 t + 1)
// with w(0)=w0, w'(0)=w0p, w(1)=w1, w'(1)=w1p
std::array<double, 4> solve_component(double w0, double w0p, double w1, double w1p, double d2,
                                      double d3) {
    double e2 = 1 + d2, e3 = 1 + d3;
    // unknowns: a, b, c, c3
    double M[4][5] = {
        {0, 0, 1, 1, w0},                                    // w(0)
        {0, 1, -d2, -d3, w0p},                               // w'(0)
        {1 / e2, 1 / e2, 1 / e2, 1 / e3, w1},                // w(1)
        {(2 * e2 - d2) / (e2 * e2), (e2 - d2) / (e2 * e2), -d2 / (e2 * e2), -d3 / (e3 * e3), w1p},
    };
    // gaussian elimination with partial pivoting
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        if (std::abs(M[piv][col]) < 1e-14) throw error("invalid free parameters");
        std::swap(M[col], M[piv]);
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            double k = M[r][col] / M[col][col];
            for (int c = col; c <= 4; ++c) M[r][c] -= k * M[col][c];
        }
    }
    return {M[0][4] / M[0][0], M[1][4] / M[1][1], M[2][4] / M[2][2], M[3][4] / M[3][3]};
}

} // namespace

ReparamTriple reparametrize_vt_segment(const std::array<double, 3>& p0,
                                       const std::array<double, 3>& p1, const TangentDir3& t0,
                                       const TangentDir3& t1, double d2, double d3,
                                       VTAxis axis_hint) {
    if (d2 <= -1 || d3 <= -1 || d3 == 0 || d2 == d3) throw error("invalid free parameters");

    ReparamTriple tri;
    tri.axis = t0.cls != VTAxis::General ? t0.cls : axis_hint;
    if (tri.axis == VTAxis::General)
        throw input_error("reparametrization requires a vertical-tangent end or an axis hint");
    tri.d2 = d2;
    tri.d3 = d3;

    const bool ydrive = tri.axis == VTAxis::YAxis;
    double drive0 = ydrive ? p0[1] : p0[2];
    double drive1 = ydrive ? p1[1] : p1[2];
    double delta = drive1 - drive0;
    if (delta == 0) throw input_error("driving coordinate does not advance along the segment");
    tri.drive0 = drive0;
    tri.drive1 = drive1;

    // endpoint tangents scaled to the unit drive step
    double tv1 = ydrive ? t1.dir[1] : t1.dir[2];
    if (tv1 == 0) throw input_error("end tangent orthogonal to the driving coordinate");
    double X1p = t1.dir[0] / tv1 * delta;
    double W1p = (ydrive ? t1.dir[2] : t1.dir[1]) / tv1 * delta;
    double X0p = 0, W0p = 0;
    if (t0.cls == VTAxis::General) {
        double tv0 = ydrive ? t0.dir[1] : t0.dir[2];
        if (tv0 == 0) throw input_error("start tangent orthogonal to the driving coordinate");
        X0p = t0.dir[0] / tv0 * delta;
        W0p = (ydrive ? t0.dir[2] : t0.dir[1]) / tv0 * delta;
    } else {
        W0p = ydrive ? t0.dir[2] * delta : 0.0; // (0,1,zeta) or (0,0,+-1)
    }

    // x component: x(0)=x0, x'(0)=X0p, x(1)=x1, x'(1)=X1p
    double x0 = p0[0], x1 = p1[0];
    double dx = x1 - x0;
    double den = X1p - dx;
    if (den == 0) throw error("invalid free parameters");
    tri.d1 = (2 * dx - X0p - X1p) / den;
    if (tri.d1 <= -1) throw error("invalid free parameters");
    tri.b1 = X0p + tri.d1 * x0;
    tri.a1 = dx - X0p + tri.d1 * dx;
    tri.c1 = x0;

    double w0 = ydrive ? p0[2] : p0[1];
    double w1 = ydrive ? p1[2] : p1[1];
    auto sol = solve_component(w0, W0p, w1, W1p, d2, d3);
    tri.a2 = sol[0];
    tri.b2 = sol[1];
    tri.c2 = sol[2];
    tri.c3 = sol[3];
    return tri;
}

double reparam_error(const SpacePiece& original, const ReparamTriple& triple, int n,
                     ReparamErrorReport* report) {
    ReparamErrorReport local;
    double delta = triple.drive1 - triple.drive0;
    double worst = 0;
    for (int i = 0; i <= n; ++i) {
        double x = to_double(original.x0) +
                   (to_double(original.x1) - to_double(original.x0)) * i / n;
        std::array<double, 3> p = original.at(x);
        double drive = triple.axis == VTAxis::YAxis ? p[1] : p[2];
        double t = (drive - triple.drive0) / delta;
        ++local.total;
        if (t < -1e-9 || t > 1 + 1e-9) {
            ++local.skipped;
            continue;
        }
        t = std::clamp(t, 0.0, 1.0);
        std::array<double, 3> q = triple.at(t);
        double d = std::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) +
                             (p[2] - q[2]) * (p[2] - q[2]));
        worst = std::max(worst, d);
    }
    if (report) *report = local;
    return worst;
}

FreeParamChoice select_free_params(const SpacePiece& original, const std::array<double, 3>& p0,
                                   const std::array<double, 3>& p1, const TangentDir3& t0,
                                   const TangentDir3& t1, const ReparamConfig& cfg) {
    bool have = false;
    FreeParamChoice best;
    for (double d2 : cfg.grid) {
        for (double d3 : cfg.grid) {
            if (d3 == 0 || d2 == d3 || d2 <= -0.9 || d3 <= -0.9 || d2 > 4 || d3 > 4) continue;
            ReparamTriple tri;
            try {
                tri = reparametrize_vt_segment(p0, p1, t0, t1, d2, d3);
            } catch (const error&) {
                continue;
            }
            double err = reparam_error(original, tri, cfg.samples_n + 1);
            if (!have || err < best.err) {
                have = true;
                best = {d2, d3, tri, err};
            }
        }
    }
    if (!have) throw error("invalid free parameters");
    return best;
}

} // namespace lgp
