#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lgp/reparam.hpp"

using namespace lgp;

namespace {
bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// graph-form piece for the vertical-tangent arc of the two-circle example:
// y1 = circle of radius sqrt3, y2 = the same circle lifted by s*z = 1
SpacePiece worked_vt_piece() {
    Rat xv = rat_from_string("-1.732050808");
    Rat xw = rat_from_string("-1.6");
    FittedPiece base, sheared;
    base.approx = fit_conic_arc(xv, 0.0, xw, 0.6633249580, 2.412090756, true, 1);
    base.approx.error_bound = 1e-7;
    sheared.approx = fit_conic_arc(xv, 1.0, xw, 1.6633249580, 2.412090756, true, 1);
    sheared.approx.error_bound = 1e-7;
    ShearParams sp;
    sp.s = Rat(1);
    sp.r_low = rat_from_string("3.46");
    sp.R_up = Rat(1);
    return recover_space(base, sheared, sp);
}
} // namespace

TEST_CASE("tangent classification") {
    ReparamConfig cfg;
    TangentDir3 t = classify_vt_tangent(283.0783218, 283.0783218, Rat(1), cfg);
    CHECK(t.cls == VTAxis::YAxis);
    CHECK(t.dir[0] == 0.0);
    CHECK(t.dir[1] == 1.0);
    CHECK(t.dir[2] == 0.0); // snapped

    TangentDir3 g = classify_vt_tangent(0.5, 1.25, Rat(1), cfg);
    CHECK(g.cls == VTAxis::General);
    CHECK(near(g.dir[1], 0.5, 1e-12));
    CHECK(near(g.dir[2], 0.75, 1e-12));

    TangentDir3 z = classify_vt_tangent(1e6, 1e6 * (1.0 + 1e6), Rat(1), cfg);
    CHECK(z.cls == VTAxis::ZAxis);
    CHECK(z.dir[2] == 1.0);
}

TEST_CASE("worked vertical arc: x(y) coefficients and error budget") {
    SpacePiece orig = worked_vt_piece();
    std::array<double, 3> p0{-1.732050808, 0.0, 1.0};
    std::array<double, 3> p1{-1.6, 0.6633249580, 1.0};
    TangentDir3 t0;
    t0.cls = VTAxis::YAxis;
    t0.dir = {0, 1, 0};
    TangentDir3 t1;
    t1.cls = VTAxis::General;
    t1.dir = {1, 2.412090757, 0};

    ReparamTriple tri = reparametrize_vt_segment(p0, p1, t0, t1, 0.5, 1.0);
    // endpoints exactly
    auto a = tri.at(0), b = tri.at(1);
    CHECK(near(a[0], p0[0], 1e-9));
    CHECK(near(a[1], p0[1], 1e-9));
    CHECK(near(a[2], p0[2], 1e-9));
    CHECK(near(b[0], p1[0], 1e-9));
    CHECK(near(b[1], p1[1], 1e-9));
    CHECK(near(b[2], p1[2], 1e-9));
    // tangent directions parallel to the requested ones
    auto v0 = tri.velocity(0), v1 = tri.velocity(1);
    CHECK(near(v0[0], 0.0, 1e-9));
    CHECK(near(v0[2], 0.0, 1e-9));
    double cross = std::abs(v1[0] * t1.dir[1] - v1[1] * t1.dir[0]);
    CHECK(cross / std::hypot(v1[0], v1[1]) < 1e-9);
    // constant z component is reproduced identically
    for (double t : {0.1, 0.5, 0.9}) CHECK(near(tri.at(t)[2], 1.0, 1e-9));

    // the x(y) coefficients in the simplified form, independent of d2/d3:
    // x(y) = at*y + bt + ct/(dt*y + 1)
    double dy = p1[1] - p0[1];
    double dt = tri.d1 / dy;
    double n2 = tri.a1 / (dy * dy), n1 = tri.b1 / dy, n0 = tri.c1;
    double at = n2 / dt, bt = (n1 - at) / dt, ct = n0 - bt;
    CHECK(near(at, -2.412090984, 2e-6));
    CHECK(near(bt, -22.71853197, 2e-4));
    CHECK(near(ct, 20.98648116, 2e-4));
    CHECK(near(dt, -0.1149354656, 1e-8));

    // the measured deviation meets the Example budget
    FreeParamChoice choice = select_free_params(orig, p0, p1, t0, t1);
    CHECK(choice.err <= 0.0022);
    CHECK(choice.err >= 1e-6); // the chart change has genuine cost
}

TEST_CASE("constant component stays constant") {
    std::array<double, 3> p0{0.0, 0.0, 5.0};
    std::array<double, 3> p1{1.0, 2.0, 5.0};
    TangentDir3 t0;
    t0.cls = VTAxis::YAxis;
    t0.dir = {0, 1, 0};
    TangentDir3 t1;
    t1.dir = {1, 1.5, 0};
    ReparamTriple tri = reparametrize_vt_segment(p0, p1, t0, t1, 2.0, 0.5);
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) CHECK(near(tri.at(t)[2], 5.0, 1e-10));
}

TEST_CASE("round trip: a rational triple is reproduced exactly") {
    // start from a known triple, read off its endpoint data, rebuild
    ReparamTriple t0ref;
    t0ref.axis = VTAxis::YAxis;
    t0ref.a1 = 0.7;
    t0ref.b1 = 0.2 * 0.3; // b1 = d1 x0 with x0 = c1
    t0ref.c1 = 0.3;
    t0ref.d1 = 0.2;
    t0ref.a2 = -0.4;
    t0ref.b2 = 0.9;
    t0ref.c2 = 1.1;
    t0ref.d2 = 0.5;
    t0ref.c3 = -0.6;
    t0ref.d3 = 1.5;
    t0ref.drive0 = 2.0;
    t0ref.drive1 = 3.0;

    auto p0 = t0ref.at(0), p1 = t0ref.at(1);
    auto v1 = t0ref.velocity(1);
    TangentDir3 td0;
    td0.cls = VTAxis::YAxis;
    td0.dir = {0, 1, t0ref.velocity(0)[2] / (t0ref.drive1 - t0ref.drive0)};
    TangentDir3 td1;
    td1.dir = v1;
    ReparamTriple rebuilt =
        reparametrize_vt_segment(p0, p1, td0, td1, t0ref.d2, t0ref.d3);
    for (double t : {0.0, 0.2, 0.45, 0.8, 1.0}) {
        auto a = t0ref.at(t), b = rebuilt.at(t);
        for (int i = 0; i < 3; ++i) CHECK(near(a[i], b[i], 1e-9));
    }
}

TEST_CASE("z-driven chart") {
    // quarter helix-like arc: x misses a chart in y, z advances monotonically
    std::array<double, 3> p0{1.0, 2.0, 0.0};
    std::array<double, 3> p1{0.5, 2.5, 1.0};
    TangentDir3 t0;
    t0.cls = VTAxis::ZAxis;
    t0.dir = {0, 0, 1};
    TangentDir3 t1;
    t1.dir = {-1.0, 0.8, 1.2};
    ReparamTriple tri = reparametrize_vt_segment(p0, p1, t0, t1, 0.5, 2.0);
    auto a = tri.at(0), b = tri.at(1);
    for (int i = 0; i < 3; ++i) {
        CHECK(near(a[i], p0[i], 1e-9));
        CHECK(near(b[i], p1[i], 1e-9));
    }
    auto v0 = tri.velocity(0);
    CHECK(near(v0[0], 0.0, 1e-9));
    CHECK(near(v0[1], 0.0, 1e-9));
    auto v1 = tri.velocity(1);
    double n1 = std::sqrt(v1[0] * v1[0] + v1[1] * v1[1] + v1[2] * v1[2]);
    double nt = std::sqrt(t1.dir[0] * t1.dir[0] + t1.dir[1] * t1.dir[1] + t1.dir[2] * t1.dir[2]);
    double cx = v1[1] * t1.dir[2] - v1[2] * t1.dir[1];
    double cy = v1[2] * t1.dir[0] - v1[0] * t1.dir[2];
    double cz = v1[0] * t1.dir[1] - v1[1] * t1.dir[0];
    CHECK(std::sqrt(cx * cx + cy * cy + cz * cz) / (n1 * nt) < 1e-9);
}

TEST_CASE("free parameter grid always contains a valid pair") {
    ReparamConfig cfg;
    int valid = 0;
    for (double d2 : cfg.grid)
        for (double d3 : cfg.grid) {
            if (d3 == 0 || d2 == d3 || d2 <= -0.9 || d3 <= -0.9 || d2 > 4 || d3 > 4) continue;
            ++valid;
        }
    CHECK(valid >= 4);

    // constant-z segment: every valid pair leaves z flat, selection is by the
    // x-error only
    SpacePiece orig = worked_vt_piece();
    std::array<double, 3> p0{-1.732050808, 0.0, 1.0};
    std::array<double, 3> p1{-1.6, 0.6633249580, 1.0};
    TangentDir3 t0;
    t0.cls = VTAxis::YAxis;
    t0.dir = {0, 1, 0};
    TangentDir3 t1;
    t1.dir = {1, 2.412090757, 0};
    FreeParamChoice c = select_free_params(orig, p0, p1, t0, t1);
    for (double t : {0.2, 0.6}) CHECK(near(c.triple.at(t)[2], 1.0, 1e-9));
}

TEST_CASE("pole freedom and quadratic-solution sanity") {
    std::array<double, 3> p0{-1.732050808, 0.0, 1.0};
    std::array<double, 3> p1{-1.6, 0.6633249580, 1.0};
    TangentDir3 t0;
    t0.cls = VTAxis::YAxis;
    t0.dir = {0, 1, 0};
    TangentDir3 t1;
    t1.dir = {1, 2.412090757, 0};
    ReparamTriple tri = reparametrize_vt_segment(p0, p1, t0, t1, 0.5, 1.0);
    for (double d : {tri.d1, tri.d2, tri.d3}) CHECK(d > -1.0);
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        CHECK(tri.d1 * t + 1 > 0);
        CHECK(tri.d2 * t + 1 > 0);
        CHECK(tri.d3 * t + 1 > 0);
    }
    CHECK_THROWS_WITH_AS(reparametrize_vt_segment(p0, p1, t0, t1, 1.0, 1.0),
                         doctest::Contains("invalid free parameters"), error);
    CHECK_THROWS_WITH_AS(reparametrize_vt_segment(p0, p1, t0, t1, 0.5, 0.0),
                         doctest::Contains("invalid free parameters"), error);
}
