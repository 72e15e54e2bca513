#include "lgp/plane_approx.hpp"

#include <algorithm>
#include <cmath>

namespace lgp {

namespace {

// dense double evaluator for a bivariate polynomial and its y-derivative
struct BivarDouble {
    std::vector<std::vector<double>> c; // c[j][i] on x^i y^j

    explicit BivarDouble(const MPoly& p) {
        int dy = std::max(p.degree(Var::y), 0);
        int dx = std::max(p.degree(Var::x), 0);
        c.assign(static_cast<size_t>(dy) + 1, std::vector<double>(static_cast<size_t>(dx) + 1, 0));
        for (const auto& [k, q] : p.terms())
            c[exp_of(k, Var::y)][exp_of(k, Var::x)] = to_double(q);
    }
    double eval(double x, double y) const {
        double acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            double row = 0;
            for (auto jt = it->rbegin(); jt != it->rend(); ++jt) row = row * x + *jt;
            acc = acc * y + row;
        }
        return acc;
    }
    double eval_dy(double x, double y) const {
        double acc = 0;
        for (size_t j = c.size() - 1; j >= 1; --j) {
            double row = 0;
            for (auto jt = c[j].rbegin(); jt != c[j].rend(); ++jt) row = row * x + *jt;
            acc = acc * y + row * static_cast<double>(j);
            if (j == 1) break;
        }
        return acc;
    }
};

double scale_of(const BivarDouble& f) {
    double m = 0;
    for (const auto& row : f.c)
        for (double v : row) m = std::max(m, std::abs(v));
    return std::max(m, 1.0);
}

} // namespace

// ---------------------------------------------------------------------------
// forms

double SegApprox::eval(double x) const {
    if (const auto* rq = std::get_if<RationalQuadratic>(&form)) {
        double w = to_double(x1 - x0);
        double X = (x - to_double(x0)) / w;
        return (rq->a * X * X + rq->b * X + rq->c) / (rq->d * X + 1);
    }
    if (const auto* s = std::get_if<SimplifiedRQ>(&form)) {
        return s->at * x + s->bt + s->ct / (s->dt * x + 1);
    }
    const ConicArc& ca = std::get<ConicArc>(form);
    double rad = ca.a * ca.a - (x - ca.xo) * (x - ca.xo);
    if (ca.kind == ConicKind::Hyperbola) rad = -rad;
    return ca.yo + ca.branch_sign * (ca.b / std::abs(ca.a)) * std::sqrt(std::max(rad, 0.0));
}

double SegApprox::deriv(double x) const {
    if (const auto* rq = std::get_if<RationalQuadratic>(&form)) {
        double w = to_double(x1 - x0);
        double X = (x - to_double(x0)) / w;
        double den = rq->d * X + 1;
        double num = (2 * rq->a * X + rq->b) * den - rq->d * (rq->a * X * X + rq->b * X + rq->c);
        return num / (den * den) / w;
    }
    if (const auto* s = std::get_if<SimplifiedRQ>(&form)) {
        double den = s->dt * x + 1;
        return s->at - s->ct * s->dt / (den * den);
    }
    const ConicArc& ca = std::get<ConicArc>(form);
    double rad = ca.a * ca.a - (x - ca.xo) * (x - ca.xo);
    double inner = -(x - ca.xo);
    if (ca.kind == ConicKind::Hyperbola) {
        rad = -rad;
        inner = x - ca.xo;
    }
    rad = std::max(rad, 1e-300);
    return ca.branch_sign * (ca.b / std::abs(ca.a)) * inner / std::sqrt(rad);
}

// ---------------------------------------------------------------------------
// triangle

Triangle segment_triangle(double x0, double y0, bool vt0, double k0, double x1, double y1,
                          bool vt1, double k1) {
    Triangle t;
    t.x0 = x0;
    t.y0 = y0;
    t.x1 = x1;
    t.y1 = y1;
    if (vt0 && vt1) {
        t.degenerate = true; // two vertical tangents: no finite apex
        t.xa = (x0 + x1) / 2;
        t.ya = (y0 + y1) / 2;
        return t;
    }
    if (vt0) {
        t.xa = x0;
        t.ya = y1 + k1 * (x0 - x1);
        return t;
    }
    if (vt1) {
        t.xa = x1;
        t.ya = y0 + k0 * (x1 - x0);
        return t;
    }
    double dk = k0 - k1;
    if (std::abs(dk) <= 1e-12 * (1 + std::abs(k0) + std::abs(k1))) {
        t.degenerate = true; // straight data
        t.xa = (x0 + x1) / 2;
        t.ya = (y0 + y1) / 2;
        return t;
    }
    t.xa = (y1 - y0 + k0 * x0 - k1 * x1) / dk;
    t.ya = y0 + k0 * (t.xa - x0);
    return t;
}

namespace {
double point_segment_distance(double px, double py, double ax, double ay, double bx, double by) {
    double vx = bx - ax, vy = by - ay;
    double L2 = vx * vx + vy * vy;
    double t = L2 > 0 ? ((px - ax) * vx + (py - ay) * vy) / L2 : 0;
    t = std::clamp(t, 0.0, 1.0);
    double dx = px - (ax + t * vx), dy2 = py - (ay + t * vy);
    return std::sqrt(dx * dx + dy2 * dy2);
}
} // namespace

bool Triangle::contains(double px, double py, double slack) const {
    if (degenerate) return point_segment_distance(px, py, x0, y0, x1, y1) <= slack;
    struct Edge {
        double ax, ay, bx, by, cx, cy;
    };
    Edge edges[3] = {{x0, y0, x1, y1, xa, ya}, {x1, y1, xa, ya, x0, y0}, {xa, ya, x0, y0, x1, y1}};
    for (const Edge& e : edges) {
        double nx = -(e.by - e.ay), ny = e.bx - e.ax;
        double len = std::hypot(nx, ny);
        if (len == 0) continue;
        double dc = ((e.cx - e.ax) * nx + (e.cy - e.ay) * ny) / len;
        double dp = ((px - e.ax) * nx + (py - e.ay) * ny) / len;
        if (dc < 0) {
            dc = -dc;
            dp = -dp;
        }
        if (dp < -slack) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// fitting

SegApprox fit_rational_quadratic(const Rat& x0, double y0, double k0, const Rat& x1, double y1,
                                 double k1) {
    if (!(x0 < x1)) throw input_error("fit requires x0 < x1");
    SegApprox out;
    out.x0 = x0;
    out.x1 = x1;
    double w = to_double(x1 - x0);
    double K0 = k0 * w, K1 = k1 * w;
    double Dy = y1 - y0;
    double scale = 1 + std::abs(K0) + std::abs(K1) + std::abs(Dy);

    if (std::abs(K0 - Dy) <= 1e-11 * scale && std::abs(K1 - Dy) <= 1e-11 * scale) {
        out.form = RationalQuadratic{0.0, Dy, y0, 0.0}; // the chord, exactly
        return out;
    }
    double D = K1 - Dy;
    if (std::abs(D) <= 1e-13 * scale)
        throw error("rational quadratic fit: interpolation conditions violated");
    double a = (Dy * Dy - K0 * K1) / D;
    double b = -(-2 * y0 * y1 + y0 * K1 + 2 * y0 * y0 + K0 * y1 - K0 * K1) / D;
    double c = y0;
    double d = -(K0 + K1 - 2 * Dy) / D;
    if (d <= -1 + 1e-12)
        throw error("rational quadratic fit: pole inside the domain");
    if (std::abs(d) < 1e-12) {
        out.form = RationalQuadratic{(K1 - K0) / 2, K0, y0, 0.0};
        return out;
    }
    // simplified raw-domain form when the denominator normalizes cleanly
    double x0d = to_double(x0);
    double den_const = 1 - d * x0d / w;
    if (std::abs(den_const) > 1e-9) {
        double dt = (d / w) / den_const;
        double n2 = a / (w * w) / den_const;
        double n1 = (-2 * a * x0d / (w * w) + b / w) / den_const;
        double n0 = (a * x0d * x0d / (w * w) - b * x0d / w + c) / den_const;
        double at = n2 / dt;
        double bt = (n1 - at) / dt;
        double ct = n0 - bt;
        if (std::isfinite(at) && std::isfinite(bt) && std::isfinite(ct)) {
            out.form = SimplifiedRQ{at, bt, ct, dt};
            return out;
        }
    }
    out.form = RationalQuadratic{a, b, c, d};
    return out;
}

SegApprox fit_conic_arc(const Rat& xv, double yv, const Rat& xw, double yw, double k,
                        bool vt_at_p0, int y_side) {
    (void)vt_at_p0; // the vertical end is identified by xv
    SegApprox out;
    out.x0 = std::min(xv, xw);
    out.x1 = std::max(xv, xw);
    double xvd = to_double(xv), xwd = to_double(xw);
    double sx = xwd > xvd ? 1.0 : -1.0;
    double sy = y_side >= 0 ? 1.0 : -1.0;
    double u1 = sx * (xwd - xvd);
    double v1 = sy * (yw - yv);
    if (u1 <= 0 || v1 <= 0) throw input_error("conic arc fit: inconsistent endpoint data");
    double kk = sx * sy * k;
    double threshold = v1 / (2 * u1);
    if (std::abs(kk - threshold) <= 1e-12 * (1 + std::abs(kk) + std::abs(threshold)))
        throw error("shrink segment");
    double den = v1 - 2 * u1 * kk;
    double a = u1 * (v1 - u1 * kk) / den;
    double kappa = v1 * v1 / std::abs(2 * a * u1 - u1 * u1);
    double b = std::abs(a) * std::sqrt(kappa);
    ConicArc ca;
    ca.a = a;
    ca.b = b;
    ca.xo = xvd + sx * a;
    ca.yo = yv;
    ca.branch_sign = sy > 0 ? 1 : -1;
    ca.kind = kk < threshold ? ConicKind::Ellipse : ConicKind::Hyperbola;
    out.form = ca;
    return out;
}

// ---------------------------------------------------------------------------
// error estimation

namespace {

// Newton toward the branch; NaN when unconvincing
double newton_branch(const BivarDouble& f, double x, double start, double fscale) {
    double y = start;
    for (int it = 0; it < 60; ++it) {
        double v = f.eval(x, y);
        double dv = f.eval_dy(x, y);
        if (std::abs(dv) < 1e-14 * fscale) return std::nan("");
        double step = v / dv;
        y -= step;
        if (!std::isfinite(y)) return std::nan("");
        if (std::abs(step) <= 1e-14 * (1 + std::abs(y))) {
            if (std::abs(f.eval(x, y)) <= 1e-9 * fscale) return y;
            return std::nan("");
        }
    }
    return std::nan("");
}

} // namespace

double estimate_error(const CurveTopology& topo, const SubSeg& sub, const SegApprox& approx,
                      int n) {
    const PlaneSegment& seg = topo.segments[static_cast<size_t>(sub.seg_id)];
    BivarDouble f(topo.h);
    double fscale = scale_of(f);
    double worst = 0;

    // neighbour separation at the gap midpoint bounds how far Newton may drift
    double guard = 1e300;
    {
        size_t g = static_cast<size_t>(seg.gap_index);
        std::vector<Interval> fib = fiber_ordinates(topo.h, topo.gap_mid[g], pow2(-30));
        for (size_t i = 0; i + 1 < fib.size(); ++i)
            guard = std::min(guard, to_double(fib[i + 1].lo - fib[i].hi));
        if (fib.size() <= 1) guard = 1e300;
        guard = std::max(guard * 0.45, 1e-9);
    }

    for (int i = 0; i <= n; ++i) {
        Rat x = sub.x0 + (sub.x1 - sub.x0) * i / n;
        double xd = to_double(x);
        double yhat = approx.eval(xd);
        double truey;
        if (i == 0) {
            truey = sub.y0;
        } else if (i == n) {
            truey = sub.y1;
        } else {
            truey = newton_branch(f, xd, yhat, fscale);
            if (!std::isfinite(truey) || std::abs(truey - yhat) > guard)
                truey = point_on_branch(topo, seg, x);
        }
        worst = std::max(worst, std::abs(yhat - truey));
    }
    return worst;
}

double estimate_error(const CurveTopology& topo, const PlaneSegment& seg, const SegApprox& approx,
                      int n) {
    SubSeg sub;
    sub.seg_id = static_cast<int>(&seg - topo.segments.data());
    sub.x0 = approx.x0;
    sub.x1 = approx.x1;
    sub.y0 = approx.eval(to_double(approx.x0));
    sub.y1 = approx.eval(to_double(approx.x1));
    return estimate_error(topo, sub, approx, n);
}

std::pair<SubSeg, SubSeg> subdivide(const CurveTopology& topo, const SubSeg& sub) {
    const PlaneSegment& seg = topo.segments[static_cast<size_t>(sub.seg_id)];
    Rat m = (sub.x0 + sub.x1) / 2;
    Interval ym = point_on_branch_interval(topo, seg, m, pow2(-46));
    double ymd = ym.mid_double();
    double km = implicit_slope(topo.h, to_double(m), ymd);
    SubSeg a = sub, b = sub;
    a.x1 = m;
    a.y1 = ymd;
    a.k1 = km;
    a.vt1 = false;
    b.x0 = m;
    b.y0 = ymd;
    b.k0 = km;
    b.vt0 = false;
    return {a, b};
}

// ---------------------------------------------------------------------------
// exact disjointness

namespace {

struct RationalForm {
    QPoly num, den; // y = num/den, den without roots on the domain
};

Rat dyadic(double v) { return shortest_dyadic_near(v, 1e-12); }

RationalForm rational_form(const SegApprox& s) {
    RationalForm rf;
    if (const auto* rq = std::get_if<RationalQuadratic>(&s.form)) {
        Rat a = dyadic(rq->a), b = dyadic(rq->b), c = dyadic(rq->c), d = dyadic(rq->d);
        Rat w = s.x1 - s.x0;
        QPoly X;
        X.c = {-s.x0 / w, Rat(1) / w};
        X.trim();
        QPoly num = (X * X) * a + X * b;
        if (num.c.empty()) num.c.assign(1, Rat(0));
        num.c[0] += c;
        num.trim();
        QPoly den = X * d;
        if (den.c.empty()) den.c.assign(1, Rat(0));
        den.c[0] += 1;
        den.trim();
        rf.num = num;
        rf.den = den;
        return rf;
    }
    const auto& sf = std::get<SimplifiedRQ>(s.form);
    Rat at = dyadic(sf.at), bt = dyadic(sf.bt), ct = dyadic(sf.ct), dt = dyadic(sf.dt);
    QPoly den;
    den.c = {Rat(1), dt};
    den.trim();
    QPoly lin;
    lin.c = {bt, at};
    lin.trim();
    rf.num = lin * den;
    if (rf.num.c.empty()) rf.num.c.assign(1, Rat(0));
    rf.num.c[0] += ct;
    rf.num.trim();
    rf.den = den;
    return rf;
}

struct ConicForm {
    QPoly K; // (y - yo)^2 = K(x) on the arc
    Rat yo;
    int side;
};

ConicForm conic_form(const SegApprox& s) {
    const auto& ca = std::get<ConicArc>(s.form);
    ConicForm cf;
    Rat a = dyadic(ca.a), b = dyadic(ca.b), xo = dyadic(ca.xo);
    cf.yo = dyadic(ca.yo);
    cf.side = ca.branch_sign;
    Rat kappa = (b * b) / (a * a);
    QPoly sq;
    sq.c = {xo * xo - a * a, -2 * xo, Rat(1)}; // (x-xo)^2 - a^2
    sq.trim();
    Rat sgn = ca.kind == ConicKind::Ellipse ? Rat(-1) : Rat(1);
    cf.K = sq * (kappa * sgn);
    return cf;
}

int sign_at_isolated_root(const QPoly& witness, const ZPoly& defining, const Interval& root) {
    ZPoly w = zpoly_from_qpoly(witness);
    if (w.is_zero()) return 0;
    AlgebraicReal alpha(defining, root);
    return sign_at_algebraic(w, alpha);
}

} // namespace

bool check_disjoint_plane(const SegApprox& A, const SegApprox& B, const Rat& lo, const Rat& hi) {
    if (!(lo < hi)) return true; // empty open interval
    bool ar = A.is_rational(), br = B.is_rational();

    if (ar && br) {
        RationalForm fa = rational_form(A), fb = rational_form(B);
        QPoly T = fa.num * fb.den - fb.num * fa.den;
        if (T.is_zero()) return false; // coincident
        return count_roots_in(zpoly_from_qpoly(T), lo, hi) == 0;
    }

    if (ar != br) {
        const SegApprox& R = ar ? A : B;
        const SegApprox& C = ar ? B : A;
        RationalForm fr = rational_form(R);
        ConicForm fc = conic_form(C);
        QPoly U = fr.num - fr.den * fc.yo;
        QPoly T = U * U - fc.K * (fr.den * fr.den);
        if (T.is_zero()) return false;
        ZPoly sf = zpoly_squarefree(zpoly_from_qpoly(T));
        for (auto& r : isolate_roots_in(sf, lo, hi)) {
            // genuine iff the rational graph sits on the arc's side of the axis
            QPoly witness = U * fr.den * Rat(fc.side);
            if (sign_at_isolated_root(witness, sf, r) >= 0) return false;
        }
        return true;
    }

    ConicForm fa = conic_form(A), fb = conic_form(B);
    if (fa.yo == fb.yo) {
        QPoly W = fa.K - fb.K;
        if (W.is_zero()) {
            if (fa.side == fb.side) return false; // identical arcs
            ZPoly kz = zpoly_from_qpoly(fa.K);
            return kz.is_zero() ? false : count_roots_in(kz, lo, hi) == 0;
        }
        if (fa.side == fb.side) return count_roots_in(zpoly_from_qpoly(W), lo, hi) == 0;
        ZPoly ka = zpoly_from_qpoly(fa.K), kb = zpoly_from_qpoly(fb.K);
        ZPoly g = zpoly_gcd(ka, kb);
        return g.degree() <= 0 || count_roots_in(g, lo, hi) == 0;
    }
    // crossing ordinate is rational in x when the axes differ
    Rat two_d = 2 * (fa.yo - fb.yo);
    QPoly L = fa.K - fb.K;
    if (L.c.empty()) L.c.assign(1, Rat(0));
    L.c[0] += fa.yo * fa.yo - fb.yo * fb.yo;
    L.trim();
    L = L * (Rat(1) / two_d);
    QPoly U = L;
    if (U.c.empty()) U.c.assign(1, Rat(0));
    U.c[0] -= fa.yo;
    U.trim();
    QPoly T = U * U - fa.K;
    if (T.is_zero()) return false;
    ZPoly sf = zpoly_squarefree(zpoly_from_qpoly(T));
    for (auto& r : isolate_roots_in(sf, lo, hi)) {
        QPoly ub = L;
        if (ub.c.empty()) ub.c.assign(1, Rat(0));
        ub.c[0] -= fb.yo;
        ub.trim();
        int sa = sign_at_isolated_root(U * Rat(fa.side), sf, r);
        int sb = sign_at_isolated_root(ub * Rat(fb.side), sf, r);
        if (sa >= 0 && sb >= 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// the plane stage

namespace {

SegApprox fit_subseg(const SubSeg& s) {
    if (s.vt0 && s.vt1) throw error("cannot fit a segment with two vertical ends");
    if (s.vt0) return fit_conic_arc(s.x0, s.y0, s.x1, s.y1, s.k1, true, s.y1 >= s.y0 ? 1 : -1);
    if (s.vt1) return fit_conic_arc(s.x1, s.y1, s.x0, s.y0, s.k0, false, s.y0 >= s.y1 ? 1 : -1);
    return fit_rational_quadratic(s.x0, s.y0, s.k0, s.x1, s.y1, s.k1);
}

SubSeg cut_vt(const CurveTopology& topo, const SubSeg& s, double cap, std::vector<SubSeg>& out) {
    const PlaneSegment& seg = topo.segments[static_cast<size_t>(s.seg_id)];
    Rat span = s.x1 - s.x0;
    Rat cut = shortest_dyadic_near(cap, 1e-6) * span;
    Rat m = s.vt0 ? Rat(s.x0 + cut) : Rat(s.x1 - cut);
    Interval ym = point_on_branch_interval(topo, seg, m, pow2(-46));
    double ymd = ym.mid_double();
    double km = implicit_slope(topo.h, to_double(m), ymd);
    SubSeg a = s, b = s;
    a.x1 = m;
    a.y1 = ymd;
    a.k1 = km;
    a.vt1 = false;
    b.x0 = m;
    b.y0 = ymd;
    b.k0 = km;
    b.vt0 = false;
    out.push_back(a);
    out.push_back(b);
    return a;
}

} // namespace

PlaneApproximation approximate_plane_curve(const MPoly& h, const Box2& box, double delta,
                                           const TopologyConfig& tcfg,
                                           const PlaneApproxConfig& acfg,
                                           const std::vector<ZPoly>& extra_split_polys,
                                           const std::vector<SweepSplit>* preset_splits) {
    if (delta <= 0) throw input_error("tolerance must be positive");
    PlaneApproximation out;
    out.topo = segment_curve(h, box, tcfg, extra_split_polys, preset_splits);
    const CurveTopology& topo = out.topo;

    std::vector<SubSeg> seeds;
    for (size_t sid = 0; sid < topo.segments.size(); ++sid) {
        const PlaneSegment& seg = topo.segments[sid];
        if (!seg.in_box) continue;
        SubSeg s;
        s.seg_id = static_cast<int>(sid);
        s.x0 = seg.x0;
        s.x1 = seg.x1;
        s.y0 = topo.points[static_cast<size_t>(seg.p0)].y_anchor;
        s.y1 = topo.points[static_cast<size_t>(seg.p1)].y_anchor;
        s.k0 = seg.k0.slope;
        s.k1 = seg.k1.slope;
        s.vt0 = seg.k0.vertical;
        s.vt1 = seg.k1.vertical;
        if (s.vt0 && s.vt1) {
            auto [a, b] = subdivide(topo, s);
            seeds.push_back(a);
            seeds.push_back(b);
        } else {
            seeds.push_back(s);
        }
    }
    // vertical-tangent pieces are kept short
    std::vector<SubSeg> staged;
    for (auto& s : seeds) {
        if (s.vt0 || s.vt1)
            cut_vt(topo, s, acfg.vt_cap, staged);
        else
            staged.push_back(s);
    }

    struct Work {
        SubSeg s;
        int depth;
    };
    const double vt_budget = acfg.vt_delta > 0 ? std::min(acfg.vt_delta, delta) : delta;
    std::vector<Work> work;
    for (auto& s : staged) work.push_back({s, 0});
    while (!work.empty()) {
        Work w = work.back();
        work.pop_back();
        SegApprox fit = fit_subseg(w.s);
        double err = estimate_error(topo, w.s, fit, acfg.samples_n + 1);
        double budget = (w.s.vt0 || w.s.vt1) ? vt_budget : delta;
        if (err <= budget) {
            fit.error_bound = err;
            out.pieces.push_back({fit, w.s});
            continue;
        }
        if (w.depth >= acfg.max_subdivision_depth)
            throw certification_error("tolerance not reached at maximal subdivision depth");
        auto [a, b] = subdivide(topo, w.s);
        work.push_back({a, w.depth + 1});
        work.push_back({b, w.depth + 1});
    }

    auto order = [](const FittedPiece& a, const FittedPiece& b) {
        if (a.sub.seg_id != b.sub.seg_id) return a.sub.seg_id < b.sub.seg_id;
        return a.sub.x0 < b.sub.x0;
    };
    std::sort(out.pieces.begin(), out.pieces.end(), order);

    // topology preservation: any two graphs over a common abscissa range must
    // be disjoint; offenders are subdivided and refitted
    for (int round = 0;; ++round) {
        bool clash = false;
        size_t ci = 0, cj = 0;
        for (size_t i = 0; i < out.pieces.size() && !clash; ++i) {
            for (size_t j = i + 1; j < out.pieces.size(); ++j) {
                const FittedPiece& P = out.pieces[i];
                const FittedPiece& Q = out.pieces[j];
                if (P.sub.seg_id == Q.sub.seg_id) continue; // same monotone branch
                Rat lo = std::max(P.sub.x0, Q.sub.x0);
                Rat hi = std::min(P.sub.x1, Q.sub.x1);
                if (!(lo < hi)) continue;
                // cheap separation proof via the containing triangles
                Triangle ta = segment_triangle(to_double(P.sub.x0), P.sub.y0, P.sub.vt0, P.sub.k0,
                                               to_double(P.sub.x1), P.sub.y1, P.sub.vt1, P.sub.k1);
                Triangle tb = segment_triangle(to_double(Q.sub.x0), Q.sub.y0, Q.sub.vt0, Q.sub.k0,
                                               to_double(Q.sub.x1), Q.sub.y1, Q.sub.vt1, Q.sub.k1);
                double amin = std::min({ta.y0, ta.y1, ta.ya});
                double amax = std::max({ta.y0, ta.y1, ta.ya});
                double bmin = std::min({tb.y0, tb.y1, tb.ya});
                double bmax = std::max({tb.y0, tb.y1, tb.ya});
                if (amax < bmin - 1e-12 || bmax < amin - 1e-12) continue;
                if (check_disjoint_plane(P.approx, Q.approx, lo, hi)) continue;
                clash = true;
                ci = i;
                cj = j;
                break;
            }
        }
        if (!clash) break;
        if (round >= acfg.max_disjoint_rounds)
            throw certification_error("approximation keeps intersecting a neighbouring branch");
        std::vector<FittedPiece> next;
        for (size_t k2 = 0; k2 < out.pieces.size(); ++k2) {
            if (k2 != ci && k2 != cj) {
                next.push_back(out.pieces[k2]);
                continue;
            }
            auto [a, b] = subdivide(topo, out.pieces[k2].sub);
            for (const SubSeg& s : {a, b}) {
                SegApprox fit = fit_subseg(s);
                fit.error_bound = estimate_error(topo, s, fit, acfg.samples_n + 1);
                double budget2 = (s.vt0 || s.vt1) ? vt_budget : delta;
                if (fit.error_bound > budget2)
                    throw certification_error("disjointness subdivision exceeded the tolerance");
                next.push_back({fit, s});
            }
        }
        out.pieces = std::move(next);
        std::sort(out.pieces.begin(), out.pieces.end(), order);
    }

    for (const auto& p : out.pieces) out.max_error = std::max(out.max_error, p.approx.error_bound);
    return out;
}

} // namespace lgp
