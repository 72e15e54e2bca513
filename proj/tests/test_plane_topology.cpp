#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "lgp/plane_topology.hpp"

using namespace lgp;

namespace {
const std::vector<Var> XY = {Var::x, Var::y};
MPoly P(const std::string& s) { return parse_poly(s, XY); }
const Box2 kBox{Rat(-2), Rat(2), Rat(-2), Rat(2)};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

int count_kind(const std::vector<PlanePoint>& pts, PointKind k) {
    int n = 0;
    for (const auto& p : pts)
        if (p.kind == k) ++n;
    return n;
}
} // namespace

TEST_CASE("critical points of the circle") {
    auto pts = critical_points(P("x^2+y^2-3"), kBox);
    // horizontal-tangent points (0, +-sqrt3), vertical-tangent points (+-sqrt3, 0)
    REQUIRE(pts.size() == 4);
    CHECK(count_kind(pts, PointKind::XCritical) == 2);
    CHECK(count_kind(pts, PointKind::YCritical) == 2);
    CHECK(count_kind(pts, PointKind::Singular) == 0);
    for (const auto& p : pts) {
        double x = to_double(p.x.mid()), y = to_double(p.y.mid());
        if (p.kind == PointKind::XCritical) {
            CHECK(near(x, 0.0, 1e-10));
            CHECK(near(std::abs(y), 1.7320508075688772, 1e-9));
        } else {
            CHECK(near(std::abs(x), 1.7320508075688772, 1e-9));
            CHECK(near(y, 0.0, 1e-10));
        }
    }
}

TEST_CASE("nodal cubic has a singular point at the origin") {
    // h = y^2 - x^2 (x+1); h = h_x = h_y = 0 exactly at (0,0)
    MPoly h = P("y^2 - x^2*(x+1)");
    CHECK(eval(h, {{Var::x, Rat(0)}, {Var::y, Rat(0)}}).constant_value() == 0);
    CHECK(eval(partial_derivative(h, Var::x), {{Var::x, Rat(0)}, {Var::y, Rat(0)}}).constant_value() == 0);
    CHECK(eval(partial_derivative(h, Var::y), {{Var::x, Rat(0)}, {Var::y, Rat(0)}}).constant_value() == 0);
    auto pts = critical_points(h, kBox);
    int singular = 0;
    for (const auto& p : pts)
        if (p.kind == PointKind::Singular) {
            ++singular;
            CHECK(near(to_double(p.x.mid()), 0.0, 1e-10));
            CHECK(near(to_double(p.y.mid()), 0.0, 1e-10));
        }
    CHECK(singular == 1);
}

TEST_CASE("line has no critical points") {
    auto pts = critical_points(P("y-x"), kBox);
    CHECK(pts.empty());
}

TEST_CASE("non-squarefree input is rejected") {
    CHECK_THROWS_AS(critical_points(P("(y-x)^2"), kBox), input_error);
}

TEST_CASE("flexes") {
    CHECK(flexes(P("x^2+y^2-3"), kBox).empty());
    auto f = flexes(P("y-x^3"), kBox);
    REQUIRE(f.size() == 1);
    CHECK(near(to_double(f[0].x.mid()), 0.0, 1e-10));
    CHECK(near(to_double(f[0].y.mid()), 0.0, 1e-10));
    CHECK(flexes(P("y-x^2"), kBox).empty());

    // curvature-numerator oracle: sign change across the flex of y = x^3
    MPoly h = P("y-x^3");
    MPoly hx = partial_derivative(h, Var::x), hy = partial_derivative(h, Var::y);
    MPoly hxx = partial_derivative(hx, Var::x), hxy = partial_derivative(hx, Var::y),
          hyy = partial_derivative(hy, Var::y);
    MPoly K = hxx * hy * hy - Rat(2) * (hxy * hx * hy) + hyy * hx * hx;
    double before = eval_double(K, -0.5, -0.125);
    double after = eval_double(K, 0.5, 0.125);
    CHECK(before * after < 0);
}

TEST_CASE("circle segmentation: one loop of monotone arcs with VT points") {
    CurveTopology topo = segment_curve(P("x^2+y^2-3"), kBox);
    // splits at x = -sqrt3, 0, sqrt3 produce four quarter arcs
    CHECK(topo.segments.size() >= 4);
    CHECK(topo.closed_loops() == 1);
    CHECK(topo.components() == 1);
    for (const auto& [pid, segs] : topo.adjacency) {
        if (topo.points[static_cast<size_t>(pid)].at_infinity) continue;
        CHECK(segs.size() == 2); // every endpoint joins exactly two arcs
    }
    // VT flags exactly at (+-sqrt3, 0)
    int vt_ends = 0;
    for (const auto& s : topo.segments) {
        if (s.k0.vertical) ++vt_ends;
        if (s.k1.vertical) ++vt_ends;
    }
    CHECK(vt_ends == 4); // two fold points, two incident arcs each
}

TEST_CASE("sheared two-circle curve splits into sixteen segments") {
    // product of the two circles of radius sqrt3 centered at (0, -1), (0, 1)
    MPoly hbar = P("(x^2+y^2-2+2*y)*(x^2+y^2-2-2*y)");
    Box2 box{Rat(-2), Rat(2), Rat(-4), Rat(4)};
    CurveTopology topo = segment_curve(hbar, box);
    CHECK(topo.segments.size() == 16);
    CHECK(topo.closed_loops() == 0); // the two loops meet at the crossings
    CHECK(topo.components() == 1);
    int singular = 0;
    for (const auto& p : topo.points)
        if (p.kind == PointKind::Singular && p.in_box) ++singular;
    CHECK(singular == 2); // crossings at (+-sqrt2, 0)
    for (const auto& p : topo.points) {
        if (p.kind != PointKind::Singular || !p.in_box) continue;
        CHECK(near(std::abs(to_double(p.x.mid())), 1.4142135623730951, 1e-9));
        CHECK(near(to_double(p.y.mid()), 0.0, 1e-9));
        CHECK(topo.adjacency.at(static_cast<int>(&p - topo.points.data())).size() == 4);
    }
}

TEST_CASE("empty curve yields no segments") {
    CurveTopology topo = segment_curve(P("x^2+y^2+1"), kBox);
    CHECK(topo.segments.empty());
    CHECK(topo.closed_loops() == 0);
}

TEST_CASE("vertical line component is rejected") {
    CHECK_THROWS_WITH_AS(segment_curve(P("(x-1)*(y-x)"), kBox) /* factor in x only */,
                         doctest::Contains("assumption violated"), input_error);
}

TEST_CASE("tangents on the circle") {
    CurveTopology topo = segment_curve(P("x^2+y^2-3"), kBox);
    // implicit slope value used by the fitting stage
    double k = implicit_slope(P("x^2+y^2-3"), -1.6, 0.6633249580710796);
    CHECK(near(k, 2.412090756622109, 1e-9));

    // fold endpoints are vertical, horizontal-tangent endpoints have slope ~0
    for (const auto& s : topo.segments) {
        const PlanePoint& a = topo.points[static_cast<size_t>(s.p0)];
        const PlanePoint& b = topo.points[static_cast<size_t>(s.p1)];
        if (a.kind == PointKind::YCritical) CHECK(s.k0.vertical);
        if (b.kind == PointKind::YCritical) CHECK(s.k1.vertical);
        if (a.kind == PointKind::XCritical) CHECK(near(s.k0.slope, 0.0, 1e-6));
        if (b.kind == PointKind::XCritical) CHECK(near(s.k1.slope, 0.0, 1e-6));
    }

    // endpoint tangents agree with the closed-form implicit slope at regular ends
    for (const auto& s : topo.segments) {
        for (bool at1 : {false, true}) {
            const PlanePoint& p = topo.points[static_cast<size_t>(at1 ? s.p1 : s.p0)];
            TangentDir2 td = tangent_at(topo, s, at1);
            if (td.vertical || std::abs(p.y_anchor) < 1e-6) continue;
            double expect = -to_double(p.x_anchor) / p.y_anchor;
            CHECK(near(td.slope, expect, 1e-3));
        }
    }
}

TEST_CASE("point on branch") {
    CurveTopology topo = segment_curve(P("x^2+y^2-3"), kBox);
    // the upper-right arc: locate the segment through (1, sqrt(2))
    const PlaneSegment* upper = nullptr;
    for (const auto& s : topo.segments) {
        if (to_double(s.x0) < 0.9 && to_double(s.x1) > 1.1 && s.branch_ordinal == 1) upper = &s;
        if (to_double(s.x0) <= 0.01 && to_double(s.x1) >= 1.7 && s.branch_ordinal == 1) upper = &s;
    }
    REQUIRE(upper != nullptr);
    double y0 = point_on_branch(topo, *upper, Rat(1));
    CHECK(near(y0, std::sqrt(2.0), 1e-9));
    // closed-form oracle at 20 interior abscissas
    for (int i = 1; i <= 20; ++i) {
        Rat x = make_rat(i, 16); // within (0, sqrt3)
        if (!(x > upper->x0 && x < upper->x1)) continue;
        double y = point_on_branch(topo, *upper, x);
        CHECK(near(y, std::sqrt(3.0 - to_double(x) * to_double(x)), 1e-9));
    }
    // abscissa on a sweep line is refused
    CHECK_THROWS_AS(point_on_branch(topo, *upper, Rat(0)), input_error);
}

TEST_CASE("upper branch ordinate at the sweep midpoint equals the endpoint anchor") {
    CurveTopology topo = segment_curve(P("x^2+y^2-3"), kBox);
    for (const auto& s : topo.segments) {
        const PlanePoint& p0 = topo.points[static_cast<size_t>(s.p0)];
        // limit consistency: branch value near the left anchor approaches p0.y
        // (square-root departure at vertical-tangent folds)
        Rat x = s.x0 + (s.x1 - s.x0) / 1024;
        double y = point_on_branch(topo, s, x);
        CHECK(near(y, p0.y_anchor, s.k0.vertical ? 0.15 : 2e-2));
    }
}

TEST_CASE("segment interiors are monotone and convex (sampled)") {
    for (const char* src : {"x^2+y^2-3", "y^2 - x^2*(x+1)"}) {
        CurveTopology topo = segment_curve(P(src), kBox);
        MPoly h = P(src);
        for (const auto& s : topo.segments) {
            if (!s.in_box) continue;
            double prev_y = 0, prev_k = 0;
            bool have_prev = false;
            int dir = 0, kdir = 0;
            for (int i = 1; i <= 10; ++i) {
                Rat x = s.x0 + (s.x1 - s.x0) * i / 11;
                double y = point_on_branch(topo, s, x);
                double k = implicit_slope(h, to_double(x), y);
                if (have_prev) {
                    int d = y > prev_y ? 1 : (y < prev_y ? -1 : 0);
                    if (dir == 0) dir = d;
                    if (d != 0) CHECK(d == dir); // monotone in y
                    int kd = k > prev_k ? 1 : (k < prev_k ? -1 : 0);
                    if (kdir == 0) kdir = kd;
                    if (kd != 0) CHECK(kd == kdir); // convex: slope monotone
                }
                prev_y = y;
                prev_k = k;
                have_prev = true;
            }
        }
    }
}

TEST_CASE("adjacency degree sum equals twice the number of incidences") {
    CurveTopology topo = segment_curve(P("x^2+y^2-3"), kBox);
    size_t total = 0;
    for (const auto& [p, segs] : topo.adjacency) total += segs.size();
    CHECK(total == 2 * topo.segments.size());
}

TEST_CASE("segmentation is invariant under box enlargement") {
    CurveTopology small = segment_curve(P("x^2+y^2-3"), kBox);
    CurveTopology large = segment_curve(P("x^2+y^2-3"), Box2{Rat(-5), Rat(5), Rat(-5), Rat(5)});
    CHECK(small.segments.size() == large.segments.size());
    CHECK(small.closed_loops() == large.closed_loops());
    std::multiset<int> a, b;
    for (const auto& s : small.segments) a.insert(s.branch_ordinal);
    for (const auto& s : large.segments) b.insert(s.branch_ordinal);
    CHECK(a == b);
}

TEST_CASE("preset splits produce a superset decomposition") {
    // share the sweep lines of the sheared curve with the base circle
    MPoly h = P("x^2+y^2-3");
    std::vector<ZPoly> extra;
    extra.push_back(zpoly_from_mpoly(parse_poly("x^2-2", {Var::x}), Var::x));
    CurveTopology topo = segment_curve(h, kBox, {}, extra);
    CHECK(topo.segments.size() == 8); // quarters further split at +-sqrt2
    CHECK(topo.closed_loops() == 1);
}
