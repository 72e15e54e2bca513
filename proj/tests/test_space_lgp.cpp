#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lgp/space_lgp.hpp"
#include "support/oracles.hpp"

using namespace lgp;

namespace {
const std::vector<Var> XYZ = {Var::x, Var::y, Var::z};
MPoly P3(const std::string& s) { return parse_poly(s, XYZ); }
const Box3 kBox{Rat(-2), Rat(2), Rat(-2), Rat(2), Rat(-2), Rat(2)};

MPoly two_circles_f() { return P3("x^2+y^2+z^2-4"); }
MPoly two_circles_g() { return P3("(z-1)*(x^2+y^2-3*z^2)"); }
MPoly two_circles_h() { return squarefree_part(resultant(two_circles_f(), two_circles_g(), Var::z)); }

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }
} // namespace

TEST_CASE("assumptions hold for the two-circle pair") {
    CHECK_NOTHROW(check_assumptions(two_circles_f(), two_circles_g()));
    // leading coefficients in z are 1 and -3
    CHECK(two_circles_f().leading_coeff(Var::z).constant_value() == 1);
    CHECK(two_circles_g().leading_coeff(Var::z).constant_value() == -3);
}

TEST_CASE("constructed violation: shared leading factor in x") {
    MPoly f = P3("(x-1)*z^2 + y");
    MPoly g = P3("(x-1)*z^3 + 1");
    CHECK_THROWS_WITH_AS(check_assumptions(f, g), doctest::Contains("x - 1"), input_error);
}

TEST_CASE("identical surfaces are rejected") {
    MPoly f = P3("x^2+y^2+z^2-4");
    CHECK_THROWS_WITH_AS(check_assumptions(f, f), doctest::Contains("gcd nonconstant"), input_error);
}

TEST_CASE("shear magnitude for the two circles") {
    ShearParams sp = compute_s(two_circles_f(), two_circles_g(), two_circles_h(), kBox);
    // smallest fiber gap is 2*sqrt(3); the z-magnitude bound is exactly 1
    CHECK(sp.r >= 3.4641016);
    CHECK(sp.r <= 3.4641017);
    CHECK(sp.R >= 1.0);
    CHECK(sp.R < 1.7320508);
    CHECK(sp.admissible(Rat(1)));        // the unit shear passes r/(2R)
    CHECK(!sp.admissible(Rat(2)));       // 2 > r/(2R)
    CHECK(sp.admissible(sp.s));          // the default choice is admissible
    CHECK(sp.s == largest_pow2_leq(sp.r_low / (4 * sp.R_up)));
}

TEST_CASE("single-point fibers fall back to the root bound") {
    // parabolic cylinder cut by a plane: every fiber has exactly one point
    MPoly f = P3("y - x^2");
    MPoly g = P3("z - 1 + 0*y");
    MPoly h = squarefree_part(resultant(f, g, Var::z));
    ShearParams sp = compute_s(f, g, h, kBox);
    CHECK(!sp.degenerate);
    CHECK(sp.r_low == sp.R_up); // gap term absent
    CHECK(sp.s <= make_rat(1, 4));
}

TEST_CASE("z-generic check") {
    CHECK(check_z_generic(two_circles_f(), two_circles_g(), Rat(1), kBox.xlo, kBox.xhi));
    // without a shear both circles project onto each other
    CHECK(!check_z_generic(two_circles_f(), two_circles_g(), Rat(0), kBox.xlo, kBox.xhi));
}

TEST_CASE("fiber solving recovers z = +-1") {
    ShearParams sp = compute_s(two_circles_f(), two_circles_g(), two_circles_h(), kBox);
    ShearParams sp_unit = sp;
    sp_unit.s = Rat(1); // the worked numbers use the unit shear at x = 0
    auto pts = solve_fiber(two_circles_f(), two_circles_g(), Rat(0), sp_unit);
    REQUIRE(pts.size() == 4);
    // beta = +-sqrt3 each with z in {+1, -1}
    for (const auto& p : pts) {
        CHECK(near(std::abs(p[0]), 1.7320508075688772, 1e-9));
        CHECK(near(std::abs(p[1]), 1.0, 1e-9));
    }
    // closed-form oracle at several abscissas (the computed shear keeps the
    // matching neighbourhoods disjoint everywhere in the box)
    for (const char* xs : {"-3/2", "-1", "1", "3/2"}) {
        Rat x0 = rat_from_string(xs);
        auto fiber = solve_fiber(two_circles_f(), two_circles_g(), x0, sp);
        double expect_y = std::sqrt(3.0 - to_double(x0) * to_double(x0));
        REQUIRE(fiber.size() == 4);
        for (const auto& p : fiber) {
            CHECK(near(std::abs(p[0]), expect_y, 1e-9));
            CHECK(near(std::abs(p[1]), 1.0, 1e-9));
        }
    }
    // an empty fiber stays empty
    auto none = solve_fiber(two_circles_f(), two_circles_g(), rat_from_string("19/10"), sp);
    CHECK(none.empty());
}

TEST_CASE("fiber matching is a perfect matching at random abscissas") {
    ShearParams sp = compute_s(two_circles_f(), two_circles_g(), two_circles_h(), kBox);
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> di(-27, 27);
    int tested = 0;
    for (int iter = 0; iter < 80 && tested < 50; ++iter) {
        Rat x0 = make_rat(di(rng), 16);
        std::vector<std::array<double, 2>> pts;
        try {
            pts = solve_fiber(two_circles_f(), two_circles_g(), x0, sp);
        } catch (const input_error&) {
            continue; // critical abscissa
        }
        ++tested;
        double xx = to_double(x0);
        size_t expect = xx * xx < 3.0 ? 4 : 0;
        CHECK(pts.size() == expect);
        for (const auto& p : pts) CHECK(std::abs(p[1]) <= to_double(sp.R_up) + 1e-9);
    }
    CHECK(tested >= 30);
}

TEST_CASE("correspondence pairs each base segment with two sheared segments") {
    MPoly f = two_circles_f(), g = two_circles_g();
    MPoly h = two_circles_h();
    ShearParams sp = compute_s(f, g, h, kBox);
    sp.s = Rat(1);
    MPoly hbar = squarefree_part(resultant(shear_yz(f, sp.s), shear_yz(g, sp.s), Var::z));

    // shared split partition from both curves
    CurveEliminants eh = curve_eliminants(h);
    CurveEliminants eb = curve_eliminants(hbar);
    std::vector<ZPoly> polys;
    for (const CurveEliminants* e : {&eh, &eb}) {
        polys.push_back(zpoly_from_mpoly(e->disc, Var::x));
        if (!e->xcrit_res.is_constant()) polys.push_back(zpoly_from_mpoly(e->xcrit_res, Var::x));
        if (!e->flex_res.is_constant()) polys.push_back(zpoly_from_mpoly(e->flex_res, Var::x));
        if (!e->lc.is_constant()) polys.push_back(zpoly_from_mpoly(e->lc, Var::x));
    }
    Box2 b2 = kBox.xy();
    Box2 b2bar{b2.xlo, b2.xhi, b2.ylo + sp.s * kBox.zlo, b2.yhi + sp.s * kBox.zhi};
    for (const Rat& yb : {b2.ylo, b2.yhi}) {
        MPoly lp = eval(h + MPoly(Rat(0), MPoly::mask_of({Var::x, Var::y})), {{Var::y, yb}});
        if (!lp.is_zero() && lp.depends_on(Var::x)) polys.push_back(zpoly_from_mpoly(lp, Var::x));
    }
    for (const Rat& yb : {b2bar.ylo, b2bar.yhi}) {
        MPoly lp = eval(hbar + MPoly(Rat(0), MPoly::mask_of({Var::x, Var::y})), {{Var::y, yb}});
        if (!lp.is_zero() && lp.depends_on(Var::x)) polys.push_back(zpoly_from_mpoly(lp, Var::x));
    }
    auto splits = build_splits(polys, b2.xlo, b2.xhi, 60);
    CurveTopology th = segment_curve(h, b2, {}, {}, &splits);
    CurveTopology tb = segment_curve(hbar, b2bar, {}, {}, &splits);

    Correspondence co = correspond_segments(f, g, th, tb, sp);
    CHECK(co.spurious_hbar.empty());
    CHECK(co.dropped_h.empty());
    int in_box_h = 0;
    for (const auto& s : th.segments)
        if (s.in_box) ++in_box_h;
    CHECK(static_cast<int>(co.pairs.size()) == in_box_h);
    for (const auto& [si, list] : co.pairs) CHECK(list.size() == 2);
}

TEST_CASE("error transport formulas") {
    SpaceErrorBound b0 = space_error_bound(0, 0, Rat(1));
    CHECK(b0.per_coord == 0);
    CHECK(b0.hausdorff == 0);
    SpaceErrorBound b = space_error_bound(0.0044, 0.0044, Rat(1));
    CHECK(near(b.hausdorff, std::sqrt(0.0044 * 0.0044 + 0.0088 * 0.0088), 1e-12));
    CHECK(b.hausdorff < 0.01);
    // budget inversion: eps = 0.01, s = 1 allows the plane stage 0.01/sqrt(5)
    double bound = 1.0 / std::sqrt(5.0) * 0.01;
    CHECK(near(bound, 0.004472135954999579, 1e-15));
    CHECK(0.0044 < bound);
}

TEST_CASE("space recovery and disjointness on worked pieces") {
    ShearParams sp;
    sp.s = Rat(1);
    sp.r_low = rat_from_string("3.46");
    sp.R_up = Rat(1);

    // base piece: chord of the circle; sheared partners: shifted chords
    FittedPiece base;
    base.approx = fit_rational_quadratic(rat_from_string("-1.6"), 0.6633249580, 2.412090756,
                                         rat_from_string("-1.4"), 1.019803903, 1.372812946);
    base.approx.error_bound = 4e-4;
    base.sub.x0 = base.approx.x0;
    base.sub.x1 = base.approx.x1;

    FittedPiece upper = base, lower = base;
    // the sheared circle branches sit at y + s: emulate with shifted fits
    upper.approx = fit_rational_quadratic(rat_from_string("-1.6"), 1.6633249580, 2.412090756,
                                          rat_from_string("-1.4"), 2.019803903, 1.372812946);
    upper.approx.error_bound = 4e-4;
    lower.approx = fit_rational_quadratic(rat_from_string("-1.6"), -0.3366750420, 2.412090756,
                                          rat_from_string("-1.4"), 0.019803903, 1.372812946);
    lower.approx.error_bound = 4e-4;

    SpacePiece pu = recover_space(base, upper, sp);
    SpacePiece pl = recover_space(base, lower, sp);
    // recovered z values: +1 and -1
    for (double x : {-1.58, -1.5, -1.42}) {
        CHECK(near(pu.at(x)[2], 1.0, 2e-3));
        CHECK(near(pl.at(x)[2], -1.0, 2e-3));
    }
    CHECK(check_disjoint_space(pu, pl));
    CHECK(!check_disjoint_space(pu, pu)); // identical pieces overlap
    // certificate values follow the transport formula
    CHECK(near(pu.cert.hausdorff, space_error_bound(4e-4, 4e-4, Rat(1)).hausdorff, 1e-15));

    // y2 == y1 gives the zero height
    SpacePiece flat = recover_space(base, base, sp);
    for (double x : {-1.55, -1.45}) CHECK(near(flat.at(x)[2], 0.0, 1e-12));
}
