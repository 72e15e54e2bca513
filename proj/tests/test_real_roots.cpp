#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lgp/real_roots.hpp"
#include "support/oracles.hpp"

using namespace lgp;

namespace {
const std::vector<Var> Y = {Var::y};
const std::vector<Var> X = {Var::x};
const std::vector<Var> Z = {Var::z};

bool contains(const Interval& iv, double v) {
    return to_double(iv.lo) <= v && v <= to_double(iv.hi);
}
} // namespace

TEST_CASE("isolate sqrt(3)") {
    RootSet rs = isolate_roots(parse_poly("y^2-3", Y));
    REQUIRE(rs.roots.size() == 2);
    // the printed 10-digit value must land inside a moderately refined bracket
    Interval lo = refine(rs, 0, make_rat(1, 1000000));
    Interval hi = refine(rs, 1, make_rat(1, 1000000));
    CHECK(contains(lo, -1.732050808));
    CHECK(contains(hi, 1.732050808));
    Interval tight = refine(rs, 1, pow2(-40));
    CHECK(std::abs(tight.mid_double() - 1.7320508075688772) < 1e-9);
}

TEST_CASE("constant has no roots") {
    RootSet rs = isolate_roots(MPoly(Rat(5), MPoly::mask_of(Y)));
    CHECK(rs.roots.empty());
}

TEST_CASE("constructed integer roots 1..6") {
    MPoly p(Rat(1), MPoly::mask_of(X));
    for (int i = 1; i <= 6; ++i) p *= parse_poly("x-" + std::to_string(i), X);
    RootSet rs = isolate_roots(p);
    REQUIRE(rs.roots.size() == 6);
    for (int i = 0; i < 6; ++i) {
        Interval iv = refine(rs, static_cast<size_t>(i), make_rat(1, 100));
        CHECK(contains(iv, i + 1.0));
    }
}

TEST_CASE("refine to 1e-9 and nesting") {
    RootSet rs = isolate_roots(parse_poly("y^2-3", Y));
    Interval iv = refine(rs, 1, make_rat(1, 1000000000));
    CHECK(iv.width() <= make_rat(1, 1000000000));
    CHECK(contains(iv, 1.7320508075688772935));

    // already-narrow interval comes back unchanged
    Interval again = refine_interval(rs.sf, iv, Rat(1));
    CHECK(again.lo == iv.lo);
    CHECK(again.hi == iv.hi);

    // successive halvings nest
    Interval prev = rs.roots[1];
    for (int k = 0; k < 10; ++k) {
        Interval next = refine_interval(rs.sf, prev, prev.width() / 2);
        CHECK(next.lo >= prev.lo);
        CHECK(next.hi <= prev.hi);
        prev = next;
    }
}

TEST_CASE("root counting") {
    CHECK(count_roots_in(parse_poly("x^2-2", X), Rat(0), Rat(2)) == 1);
    CHECK(count_roots_in(parse_poly("x^2+1", X), Rat(-10), Rat(10)) == 0);

    // random degree-5: count matches isolation filtered to the interval
    std::mt19937 rng(5);
    for (int iter = 0; iter < 10; ++iter) {
        MPoly p = oracles::random_poly(rng, X, 5, 5);
        if (p.is_zero() || p.degree(Var::x) < 1) continue;
        RootSet rs = isolate_roots(p);
        Rat a(-2), b(1);
        int direct = count_roots_in(p, a, b);
        int via_isolation = 0;
        for (size_t i = 0; i < rs.roots.size(); ++i) {
            Interval tight = refine(rs, i, make_rat(1, 1 << 28));
            if (tight.exact()) {
                if (a < tight.lo && tight.lo < b) ++via_isolation;
            } else if (tight.lo >= a && tight.hi <= b) {
                ++via_isolation;
            }
        }
        CHECK(direct == via_isolation);
    }
}

TEST_CASE("count is additive over a split at a non-root") {
    MPoly p = parse_poly("(x-1)*(x+1)*(x-3)", X);
    Rat a(-2), b(4), m(2);
    CHECK(count_roots_in(p, a, b) == count_roots_in(p, a, m) + count_roots_in(p, m, b));
}

TEST_CASE("endpoint roots are discounted") {
    MPoly p = parse_poly("(x-1)*(x-2)", X);
    CHECK(count_roots_in(p, Rat(1), Rat(3)) == 1);  // only x=2
    CHECK(count_roots_in(p, Rat(1), Rat(2)) == 0);  // both at endpoints
}

TEST_CASE("cauchy root bound") {
    CHECK(root_bound(parse_poly("z^2-4", Z)) == 5);
    CHECK(root_bound(parse_poly("z^3", Z)) == 1);
    // dominates max |root| for constructed integer roots
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> dr(-30, 30);
    for (int iter = 0; iter < 100; ++iter) {
        MPoly p(Rat(1), MPoly::mask_of(X));
        double maxroot = 0;
        for (int j = 0; j < 4; ++j) {
            int r = dr(rng);
            maxroot = std::max(maxroot, std::abs(static_cast<double>(r)));
            p *= parse_poly(r >= 0 ? "x-" + std::to_string(r) : "x+" + std::to_string(-r), X);
        }
        CHECK(to_double(root_bound(p)) >= maxroot);
    }
}

TEST_CASE("max real root magnitude is tight") {
    ZPoly p = zpoly_from_mpoly(parse_poly("(z-1)*(z+1)*(z^2+100)", Z), Var::z);
    Rat m = max_real_root_magnitude(p);
    CHECK(m >= 1);
    CHECK(to_double(m) < 1.0 + 1e-8);
    ZPoly none = zpoly_from_mpoly(parse_poly("z^2+1", Z), Var::z);
    CHECK(max_real_root_magnitude(none) == 0);
}

TEST_CASE("every isolating interval sees a sign change or refines to exact") {
    std::mt19937 rng(21);
    for (int iter = 0; iter < 8; ++iter) {
        MPoly p = oracles::random_poly(rng, X, 6, 5);
        if (p.is_zero() || p.degree(Var::x) < 1) continue;
        RootSet rs = isolate_roots(p);
        for (size_t i = 0; i < rs.roots.size(); ++i) {
            // raw endpoints may coincide with adjacent roots; refinement must
            // produce a sign-bearing bracket or pin the root exactly
            Interval iv = refine(rs, i, pow2(-30));
            if (iv.exact()) {
                CHECK(rs.sf.sign_at(iv.lo) == 0);
            } else {
                CHECK(rs.sf.sign_at(iv.lo) * rs.sf.sign_at(iv.hi) < 0);
            }
        }
    }
}

TEST_CASE("sign at algebraic numbers") {
    // alpha = sqrt(3)
    RootSet rs = isolate_roots(parse_poly("x^2-3", X));
    AlgebraicReal alpha(rs.sf, rs.roots[1]);
    ZPoly S1 = zpoly_from_mpoly(parse_poly("x-2", X), Var::x);
    ZPoly S2 = zpoly_from_mpoly(parse_poly("x-1", X), Var::x);
    ZPoly S3 = zpoly_from_mpoly(parse_poly("x^2-3", X), Var::x);
    ZPoly S4 = zpoly_from_mpoly(parse_poly("(x^2-3)*(x-5)", X), Var::x);
    CHECK(sign_at_algebraic(S1, alpha) < 0);
    CHECK(sign_at_algebraic(S2, alpha) > 0);
    CHECK(sign_at_algebraic(S3, alpha) == 0);
    CHECK(sign_at_algebraic(S4, alpha) == 0);
    // very close but distinct value: 1.7320508 = 21650635/12500000
    ZPoly S5 = zpoly_from_mpoly(parse_poly("12500000*x-21650635", X), Var::x);
    CHECK(sign_at_algebraic(S5, alpha) > 0);
}

TEST_CASE("isolation restricted to a window") {
    ZPoly p = zpoly_from_mpoly(parse_poly("(x-1)*(x-2)*(x-3)*(x-10)", X), Var::x);
    ZPoly sf = zpoly_squarefree(p);
    auto roots = isolate_roots_in(sf, Rat(0), Rat(5));
    CHECK(roots.size() == 3);
    auto none = isolate_roots_in(sf, Rat(4), Rat(9));
    CHECK(none.empty());
}
