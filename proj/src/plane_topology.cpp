#include "lgp/plane_topology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace lgp {

const char* point_kind_name(PointKind k) {
    switch (k) {
        case PointKind::Regular: return "regular";
        case PointKind::XCritical: return "x-critical";
        case PointKind::YCritical: return "y-critical";
        case PointKind::Singular: return "singular";
        case PointKind::Flex: return "flex";
        case PointKind::BoxBoundary: return "box-boundary";
    }
    return "?";
}

namespace {

const unsigned kMaskXY = MPoly::mask_of({Var::x, Var::y});

void require_bivariate(const MPoly& h) {
    if (h.is_zero()) throw input_error("zero curve polynomial");
    if (h.depends_on(Var::z) || h.depends_on(Var::t))
        throw input_error("plane curve must be a polynomial in x and y");
}

MPoly with_xy(const MPoly& p) { return p + MPoly(Rat(0), kMaskXY); }

ZPoly zp_x(const MPoly& p) { return zpoly_from_mpoly(with_xy(p) * MPoly(Rat(1)), Var::x); }

// h(x0, .) as integer polynomial in y
ZPoly fiber_poly(const MPoly& h, const Rat& x0) {
    return zpoly_from_mpoly(eval(with_xy(h), {{Var::x, x0}}), Var::y);
}

// h(., y0) as integer polynomial in x
ZPoly line_poly(const MPoly& h, const Rat& y0) {
    return zpoly_from_mpoly(eval(with_xy(h), {{Var::y, y0}}), Var::x);
}

// remove from a every factor it shares with b (used to make resultants well defined)
MPoly coprime_residual(MPoly a, const MPoly& b) {
    for (;;) {
        MPoly g = gcd_poly(a, b);
        if (g.is_constant()) return a;
        a = mpoly_div_exact(a, g);
        if (a.is_constant()) return a;
    }
}

MPoly hessian_determinant(const MPoly& h) {
    // homogenize with t, take det of the matrix of second partials, set t=1
    int d = h.total_degree();
    MPoly F(Rat(0), h.vars_mask() | MPoly::mask_of({Var::t}));
    for (const auto& [k, c] : h.terms()) {
        int s = static_cast<int>(exp_of(k, Var::x)) + static_cast<int>(exp_of(k, Var::y));
        F.add_term(exp_set(k, Var::t, static_cast<unsigned>(d - s)), c);
    }
    Var vs[3] = {Var::x, Var::y, Var::t};
    MPoly M[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) M[i][j] = M[j][i] = partial_derivative(partial_derivative(F, vs[i]), vs[j]);
    MPoly det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    return eval(det, {{Var::t, Rat(1)}});
}

// Yun decomposition: list of (factor, multiplicity), factors squarefree & coprime
std::vector<std::pair<ZPoly, int>> squarefree_decomposition(const ZPoly& f) {
    std::vector<std::pair<ZPoly, int>> out;
    ZPoly p = f.primitive();
    if (p.degree() <= 0) return out;
    ZPoly g = zpoly_gcd(p, p.derivative());
    ZPoly c = zpoly_div_exact(p, g);
    ZPoly d = zpoly_div_exact(p.derivative(), g) - c.derivative();
    for (int i = 1; c.degree() > 0; ++i) {
        ZPoly a = zpoly_gcd(c, d);
        if (a.degree() > 0) out.emplace_back(a, i);
        c = zpoly_div_exact(c, a);
        d = zpoly_div_exact(d, a) - c.derivative();
    }
    return out;
}

} // namespace

CurveEliminants curve_eliminants(const MPoly& h_in) {
    require_bivariate(h_in);
    CurveEliminants e;
    e.h = normalize_primitive(with_xy(h_in));
    MPoly sf = squarefree_part(e.h);
    if (sf != e.h) throw input_error("curve polynomial must be squarefree");
    if (!content_in(e.h, Var::y).is_constant())
        throw input_error("assumption violated: vertical line component (factor in x only)");

    e.hx = partial_derivative(e.h, Var::x);
    e.hy = partial_derivative(e.h, Var::y);
    e.lc = e.h.leading_coeff(Var::y);

    if (e.h.degree(Var::y) == 0) throw input_error("curve has no y term");
    e.disc_chain = subresultant_chain(e.h, e.hy, Var::y);
    if (e.h.degree(Var::y) >= 1 && e.hy.degree(Var::y) >= 1 &&
        e.h.degree(Var::y) * e.hy.degree(Var::y) >= 60) {
        e.disc = resultant(e.h, e.hy, Var::y); // interpolated; chain kept for fibers
    } else {
        auto it = e.disc_chain.find(0);
        e.disc = it == e.disc_chain.end() ? MPoly() : it->second;
    }
    if (e.disc.is_zero()) throw input_error("degenerate curve: discriminant vanishes identically");

    // horizontal-tangent abscissas; strip components where h_x vanishes identically
    if (e.hx.is_zero()) {
        e.xcrit_res = MPoly(Rat(1));
    } else if (e.hx.degree(Var::y) == 0) {
        MPoly reduced = coprime_residual(e.hx, e.h);
        e.xcrit_res = reduced.is_constant() ? MPoly(Rat(1)) : reduced;
    } else {
        MPoly hh = coprime_residual(e.h, e.hx);
        e.xcrit_res = hh.degree(Var::y) >= 1 && e.hx.degree(Var::y) >= 1
                          ? resultant(hh, e.hx, Var::y)
                          : MPoly(Rat(1));
    }

    // inflection abscissas; components shared with the Hessian are lines and
    // carry no flexes
    e.hessian = hessian_determinant(e.h);
    if (e.hessian.is_zero() || e.hessian.is_constant()) {
        e.flex_res = MPoly(Rat(1));
    } else {
        MPoly hh = coprime_residual(e.h, e.hessian);
        if (hh.is_constant()) {
            e.flex_res = MPoly(Rat(1));
        } else if (e.hessian.degree(Var::y) == 0) {
            e.flex_res = e.hessian; // already a polynomial in x alone
        } else {
            e.flex_res = resultant(hh, e.hessian, Var::y);
        }
    }
    if (e.flex_res.is_zero()) e.flex_res = MPoly(Rat(1));
    return e;
}

// ---------------------------------------------------------------------------
// splits

std::vector<SweepSplit> build_splits(const std::vector<ZPoly>& abscissa_polys, const Rat& xlo,
                                     const Rat& xhi, long split_bits) {
    ZPoly prod;
    prod.c = {Int(1)};
    for (const auto& p : abscissa_polys) {
        if (p.is_zero()) throw input_error("degenerate abscissa polynomial");
        ZPoly sf = zpoly_squarefree(p);
        if (sf.degree() > 0) prod = prod * sf;
    }
    ZPoly all = zpoly_squarefree(prod);
    std::vector<SweepSplit> splits;

    SweepSplit lo_edge;
    lo_edge.x = AlgebraicReal(xlo);
    lo_edge.rep_lo = lo_edge.rep_mid = lo_edge.rep_hi = xlo;
    splits.push_back(lo_edge);

    if (all.degree() > 0) {
        auto roots = isolate_roots_in(all, xlo, xhi);
        Rat w = pow2(-split_bits);
        for (auto& iv : roots) {
            Interval r = refine_interval(all, iv, w);
            SweepSplit s;
            if (r.exact()) {
                s.x = AlgebraicReal(r.lo);
                s.rep_lo = s.rep_mid = s.rep_hi = r.lo;
            } else {
                s.x = AlgebraicReal(all, r);
                s.rep_lo = r.lo;
                s.rep_hi = r.hi;
                s.rep_mid = shortest_dyadic_between(r.lo, r.hi);
            }
            splits.push_back(std::move(s));
        }
    }

    SweepSplit hi_edge;
    hi_edge.x = AlgebraicReal(xhi);
    hi_edge.rep_lo = hi_edge.rep_mid = hi_edge.rep_hi = xhi;
    splits.push_back(hi_edge);

    std::sort(splits.begin(), splits.end(),
              [](const SweepSplit& a, const SweepSplit& b) { return a.x.iv.lo < b.x.iv.lo; });

    // separate enclosures strictly
    for (size_t i = 0; i + 1 < splits.size(); ++i) {
        int guard = 0;
        while (!(splits[i].x.iv.hi < splits[i + 1].x.iv.lo)) {
            if (++guard > 200) throw certification_error("cannot separate sweep lines");
            for (SweepSplit* s : {&splits[i], &splits[i + 1]}) {
                if (!s->x.exact()) {
                    s->x.refine_to(s->x.iv.width() / 16);
                    s->rep_lo = s->x.iv.lo;
                    s->rep_hi = s->x.iv.hi;
                    if (!s->x.iv.exact()) s->rep_mid = shortest_dyadic_between(s->x.iv.lo, s->x.iv.hi);
                    else s->rep_lo = s->rep_mid = s->rep_hi = s->x.iv.lo;
                }
            }
        }
    }
    return splits;
}

// ---------------------------------------------------------------------------
// fibers

namespace {

struct FiberPointData {
    RatInterval y;
    int mult = 1;
};

struct FiberData {
    std::vector<FiberPointData> pts; // sorted by y
};

FiberData fiber_at_exact(const MPoly& h, const Rat& x0, long fiber_bits) {
    ZPoly fz = fiber_poly(h, x0);
    if (fz.is_zero()) throw input_error("fiber polynomial vanishes identically");
    FiberData fd;
    if (fz.degree() == 0) return fd;
    auto decomp = squarefree_decomposition(fz);
    Rat w = pow2(-fiber_bits);
    ZPoly sf = zpoly_squarefree(fz);
    RootSet rs = isolate_roots(sf, Var::y);
    for (size_t i = 0; i < rs.roots.size(); ++i) {
        Interval iv = refine_interval(rs.sf, rs.roots[i], w);
        FiberPointData p;
        p.y = iv.as_rat_interval();
        p.mult = 1;
        for (const auto& [fac, m] : decomp) {
            if (iv.exact() ? fac.sign_at(iv.lo) == 0 : count_roots_in(fac, iv.lo, iv.hi) == 1) {
                p.mult = m;
                break;
            }
        }
        fd.pts.push_back(std::move(p));
    }
    return fd;
}

struct AlgebraicFiberCtx {
    const MPoly& h;
    const CurveEliminants& elim;
    AlgebraicReal& alpha; // shared, refined in place
    long fiber_bits;
    int max_depth;

    std::map<Rat, int> exact_sign_cache;       // sign of h(alpha, u)
    std::vector<std::pair<Rat, int>> exacts;   // exact rational fiber roots + multiplicity
    std::vector<MPoly> y_derivs;               // h, h_y, h_yy, ...

    const MPoly& y_deriv(int k) {
        if (y_derivs.empty()) y_derivs.push_back(h);
        while (static_cast<int>(y_derivs.size()) <= k)
            y_derivs.push_back(partial_derivative(y_derivs.back(), Var::y));
        return y_derivs[static_cast<size_t>(k)];
    }

    int sign_at_y(const Rat& u) {
        auto it = exact_sign_cache.find(u);
        if (it != exact_sign_cache.end()) return it->second;
        ZPoly hu = line_poly(h, u);
        int s = sign_at_algebraic(hu, alpha);
        exact_sign_cache[u] = s;
        return s;
    }

    // multiplicity of a known exact fiber root: first nonvanishing y-derivative
    int multiplicity_at(const Rat& m) {
        for (int k = 1; k <= h.degree(Var::y); ++k) {
            ZPoly d = zpoly_from_mpoly(eval(with_xy(y_deriv(k)), {{Var::y, m}}), Var::x);
            if (d.is_zero()) continue;
            if (sign_at_algebraic(d, alpha) != 0) return k;
        }
        throw certification_error("fiber root of full multiplicity");
    }

    // sign of the fiber polynomial with all recorded exact roots divided out
    int deflated_sign(const Rat& u) {
        for (const auto& [m, k] : exacts) {
            if (u == m) {
                // q(m) has the sign of the k-th derivative there
                ZPoly d = zpoly_from_mpoly(eval(with_xy(y_deriv(k)), {{Var::y, m}}), Var::x);
                int s = sign_at_algebraic(d, alpha);
                for (const auto& [m2, k2] : exacts)
                    if (m2 != m && (k2 & 1) && u < m2) s = -s;
                return s;
            }
        }
        int s = sign_at_y(u);
        if (s == 0) return 0; // a new exact root; caller records it
        for (const auto& [m, k] : exacts)
            if ((k & 1) && u < m) s = -s;
        return s;
    }

    std::vector<RatInterval> coeff_intervals() const {
        auto cs = h.coeffs_in(Var::y);
        std::vector<RatInterval> out(cs.size());
        for (size_t i = 0; i < cs.size(); ++i)
            out[i] = eval_interval(cs[i], {{Var::x, alpha.iv.as_rat_interval()}});
        return out;
    }
};

RatInterval horner_y(const std::vector<RatInterval>& cs, const RatInterval& y) {
    RatInterval acc{Rat(0)};
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * y + *it;
    return acc;
}

// synthetic division by (y - m): valid interval enclosure of the quotient
std::vector<RatInterval> deflate_once(const std::vector<RatInterval>& cs, const Rat& m) {
    if (cs.size() <= 1) return {};
    std::vector<RatInterval> q(cs.size() - 1);
    q.back() = cs.back();
    for (int i = static_cast<int>(cs.size()) - 2; i >= 1; --i)
        q[static_cast<size_t>(i - 1)] = cs[static_cast<size_t>(i)] + q[static_cast<size_t>(i)] * m;
    return q;
}

// multiple fiber points via the bottom of the subresultant chain
std::vector<FiberPointData> multiple_points(AlgebraicFiberCtx& ctx, int& gcd_degree) {
    std::vector<FiberPointData> out;
    gcd_degree = 0;
    MPoly s1 = principal_subresultant(ctx.elim.disc_chain, 1, Var::y);
    ZPoly s1z = s1.is_zero() ? ZPoly() : zp_x(s1);
    if (!s1z.is_zero() && sign_at_algebraic(s1z, ctx.alpha) != 0) {
        gcd_degree = 1;
        auto it = ctx.elim.disc_chain.find(1);
        auto cs = it->second.coeffs_in(Var::y);
        MPoly b = cs[0], a = cs[1];
        Rat target = pow2(-ctx.fiber_bits);
        for (int round = 0;; ++round) {
            RatInterval ia = eval_interval(a, {{Var::x, ctx.alpha.iv.as_rat_interval()}});
            if (!ia.contains_zero()) {
                RatInterval ib = eval_interval(b, {{Var::x, ctx.alpha.iv.as_rat_interval()}});
                RatInterval yc = -(ib / ia);
                if (yc.width() <= target) {
                    out.push_back({yc, 2});
                    break;
                }
            }
            if (round > ctx.max_depth) throw certification_error("cannot enclose critical fiber point");
            ctx.alpha.refine_to(ctx.alpha.iv.width() / 16);
        }
        return out;
    }
    MPoly s2 = principal_subresultant(ctx.elim.disc_chain, 2, Var::y);
    ZPoly s2z = s2.is_zero() ? ZPoly() : zp_x(s2);
    if (!s2z.is_zero() && sign_at_algebraic(s2z, ctx.alpha) != 0) {
        gcd_degree = 2;
        auto it = ctx.elim.disc_chain.find(2);
        auto cs = it->second.coeffs_in(Var::y);
        MPoly c = cs.size() > 0 ? cs[0] : MPoly();
        MPoly b = cs.size() > 1 ? cs[1] : MPoly();
        MPoly a = cs[2];
        MPoly disc2 = b * b - Rat(4) * (a * c);
        int sd = disc2.is_zero() ? 0 : [&] {
            ZPoly d2 = zp_x(disc2);
            return sign_at_algebraic(d2, ctx.alpha);
        }();
        if (sd < 0) return out; // conjugate pair; no real multiple point
        Rat target = pow2(-ctx.fiber_bits);
        for (int round = 0;; ++round) {
            RatInterval Ix = ctx.alpha.iv.as_rat_interval();
            RatInterval ia = eval_interval(a, {{Var::x, Ix}});
            if (!ia.contains_zero()) {
                RatInterval ib = eval_interval(b, {{Var::x, Ix}});
                if (sd == 0) {
                    RatInterval yc = -(ib / (ia * Rat(2)));
                    if (yc.width() <= target) {
                        out.push_back({yc, 3});
                        break;
                    }
                } else {
                    RatInterval ic = eval_interval(c, {{Var::x, Ix}});
                    RatInterval rad = ib * ib - ia * ic * Rat(4);
                    if (sign(rad.lo) > 0) {
                        RatInterval root = interval_sqrt(rad, static_cast<unsigned>(ctx.fiber_bits + 8));
                        RatInterval y1 = (-(ib) - root) / (ia * Rat(2));
                        RatInterval y2 = (-(ib) + root) / (ia * Rat(2));
                        if (y1.width() <= target && y2.width() <= target) {
                            if (y1.lo > y2.lo) std::swap(y1, y2);
                            out.push_back({y1, 2});
                            out.push_back({y2, 2});
                            break;
                        }
                    }
                }
            }
            if (round > ctx.max_depth) throw certification_error("cannot enclose critical fiber points");
            ctx.alpha.refine_to(ctx.alpha.iv.width() / 16);
        }
        return out;
    }
    throw certification_error("fiber multiplicity beyond supported range (gcd degree > 2)");
}

FiberData fiber_at_algebraic(AlgebraicFiberCtx& ctx, bool is_critical) {
    // effective leading coefficient must not vanish here
    ZPoly lcz = zp_x(ctx.elim.lc);
    bool lc_drop = sign_at_algebraic(lcz, ctx.alpha) == 0;
    if (lc_drop && is_critical)
        throw certification_error("degree drop at a critical sweep line (non-generic input)");

    // effective degree and a magnitude bound for the fiber roots
    auto top_index = [&](const std::vector<RatInterval>& cs) {
        for (int i = static_cast<int>(cs.size()) - 1; i >= 0; --i) {
            if (!cs[static_cast<size_t>(i)].contains_zero()) return i;
            // coefficient may genuinely vanish at alpha; certify by exact sign
            auto coeffs = ctx.h.coeffs_in(Var::y);
            ZPoly cz = zp_x(coeffs[static_cast<size_t>(i)]);
            if (sign_at_algebraic(cz, ctx.alpha) != 0) return -i - 1000; // needs refinement
        }
        return -1;
    };

    std::vector<RatInterval> cs;
    int n_eff = -1;
    for (int round = 0;; ++round) {
        cs = ctx.coeff_intervals();
        int ti = top_index(cs);
        if (ti >= 0) {
            n_eff = ti;
            break;
        }
        if (ti == -1) throw input_error("fiber polynomial vanishes identically");
        if (round > ctx.max_depth) throw certification_error("cannot certify fiber degree");
        ctx.alpha.refine_to(ctx.alpha.iv.width() / 16);
    }
    FiberData fd;
    if (n_eff == 0) return fd;
    cs.resize(static_cast<size_t>(n_eff) + 1);

    Rat B;
    {
        Rat num(0);
        for (int i = 0; i < n_eff; ++i) num = std::max(num, cs[static_cast<size_t>(i)].mag());
        Rat den = cs[static_cast<size_t>(n_eff)].mig();
        // round up to a power of two so bisection probes land on short dyadics
        B = largest_pow2_leq(num / den + 2) * 2;
    }

    // exclusion bisection for the simple roots; exact rational roots found on
    // the way are divided out so that sign tests see the deflated polynomial
    struct Seg {
        Rat u, v;
        int su, sv;
        int depth;
    };
    Rat floorw = pow2(-ctx.fiber_bits);
    std::vector<FiberPointData> multiples;
    std::vector<FiberPointData> simples;
    int rounds = 0;
    for (;; ++rounds) {
        if (rounds > 60) throw certification_error("fiber isolation did not converge");
        if (is_critical) {
            int gd = 0;
            multiples = multiple_points(ctx, gd);
            for (auto& mp : multiples)
                for (const auto& [m, k] : ctx.exacts)
                    if (mp.y.contains(m)) mp.y = RatInterval(m);
        }
        cs = ctx.coeff_intervals();
        cs.resize(static_cast<size_t>(n_eff) + 1);
        simples.clear();
        bool stuck = false;
        bool new_exact = false;

        auto record_exact = [&](const Rat& m) {
            for (const auto& [m2, k2] : ctx.exacts)
                if (m2 == m) return;
            ctx.exacts.emplace_back(m, ctx.multiplicity_at(m));
            new_exact = true;
        };

        auto excluded = [&](const Rat& u, const Rat& v) {
            std::vector<RatInterval> dc = cs;
            // divide out recorded roots touching the closed interval; the claim
            // is only about roots in the open interval beyond the recorded ones
            for (const auto& [m, k] : ctx.exacts)
                if (m >= u && m <= v)
                    for (int i = 0; i < k; ++i) dc = deflate_once(dc, m);
            return !horner_y(dc, RatInterval(u, v)).contains_zero();
        };

        std::vector<Seg> work;
        int slo = ctx.deflated_sign(-B), shi = ctx.deflated_sign(B);
        if (slo == 0 || shi == 0) {
            record_exact(slo == 0 ? Rat(-B) : Rat(B));
            B = B * 2;
            continue;
        }
        work.push_back({-B, B, slo, shi, 0});
        long budget = 4000; // beyond this the sweep-line enclosure is too wide
        while (!work.empty() && !stuck && !new_exact) {
            if (--budget < 0) {
                stuck = true;
                break;
            }
            Seg sgm = work.back();
            work.pop_back();
            // exact multiple points are handled by deflation; only enclosures
            // of irrational multiple roots block the exclusion test
            bool hits_inexact_multiple = false;
            for (const auto& mp : multiples)
                if (!mp.y.is_exact() && !(mp.y.hi < sgm.u || mp.y.lo > sgm.v))
                    hits_inexact_multiple = true;
            if (!hits_inexact_multiple && excluded(sgm.u, sgm.v)) continue;
            bool has_exact_inside = false;
            for (const auto& [m, k] : ctx.exacts)
                if (m > sgm.u && m < sgm.v) has_exact_inside = true;
            if (sgm.su * sgm.sv < 0 && !hits_inexact_multiple && !has_exact_inside &&
                (sgm.v - sgm.u) <= floorw) {
                simples.push_back({RatInterval(sgm.u, sgm.v), 1});
                continue;
            }
            if (hits_inexact_multiple && (sgm.v - sgm.u) <= floorw * 4 && sgm.su * sgm.sv > 0 &&
                !has_exact_inside) {
                continue; // attributed to the enclosed multiple point
            }
            if (sgm.su * sgm.sv > 0 && !hits_inexact_multiple && !has_exact_inside &&
                (sgm.v - sgm.u) <= floorw) {
                stuck = true; // even cluster or interval noise: tighten the sweep line
                break;
            }
            if (sgm.depth > ctx.max_depth + 40) {
                stuck = true;
                break;
            }
            Rat m = (sgm.u + sgm.v) / 2;
            int sm = ctx.deflated_sign(m);
            if (sm == 0) {
                record_exact(m);
                for (auto& mp : multiples)
                    if (mp.y.contains(m)) mp.y = RatInterval(m);
                break; // restart with the root divided out
            }
            work.push_back({sgm.u, m, sgm.su, sm, sgm.depth + 1});
            work.push_back({m, sgm.v, sm, sgm.sv, sgm.depth + 1});
        }
        if (new_exact) continue;
        if (stuck) {
            ctx.alpha.refine_to(ctx.alpha.iv.width() / 65536);
            continue;
        }
        break;
    }

    for (const auto& [m, k] : ctx.exacts) {
        bool inside_multiple = false;
        for (const auto& mp : multiples)
            if (mp.y.contains(m)) inside_multiple = true;
        if (inside_multiple) continue;
        if (k > 1) throw certification_error("unexpected multiple rational fiber root");
        if (m > -B && m < B) simples.push_back({RatInterval(m), 1});
    }
    fd.pts = std::move(simples);
    for (auto& mp : multiples) fd.pts.push_back(mp);
    std::sort(fd.pts.begin(), fd.pts.end(),
              [](const FiberPointData& a, const FiberPointData& b) { return a.y.lo < b.y.lo; });

    // enforce strictly separated enclosures (simple ones shrink by bisection)
    auto shrink_simple = [&](FiberPointData& p) {
        if (p.y.is_exact() || p.mult > 1) return false;
        Rat u = p.y.lo, v = p.y.hi;
        int su = ctx.deflated_sign(u), sv = ctx.deflated_sign(v);
        if (su == 0 || sv == 0 || su == sv) return false;
        Rat m = (u + v) / 2;
        int sm = ctx.deflated_sign(m);
        if (sm == 0) {
            p.y = RatInterval(m);
            return true;
        }
        p.y = sm == su ? RatInterval(m, v) : RatInterval(u, m);
        return true;
    };
    for (int r = 0; r < 200; ++r) {
        bool all_separated = true, progress = false;
        for (size_t i = 0; i + 1 < fd.pts.size(); ++i) {
            if (fd.pts[i].y.hi < fd.pts[i + 1].y.lo) continue;
            all_separated = false;
            progress |= shrink_simple(fd.pts[i]);
            progress |= shrink_simple(fd.pts[i + 1]);
        }
        if (all_separated) break;
        if (!progress) throw certification_error("fiber points could not be separated");
    }
    for (size_t i = 0; i + 1 < fd.pts.size(); ++i)
        if (!(fd.pts[i].y.hi < fd.pts[i + 1].y.lo))
            throw certification_error("fiber points could not be separated");
    return fd;
}

} // namespace

std::vector<Interval> fiber_ordinates(const MPoly& h, const Rat& x0, const Rat& width) {
    ZPoly fz = fiber_poly(with_xy(h), x0);
    if (fz.is_zero()) throw input_error("fiber polynomial vanishes identically");
    std::vector<Interval> out;
    if (fz.degree() == 0) return out;
    RootSet rs = isolate_roots(fz, Var::y);
    for (size_t i = 0; i < rs.roots.size(); ++i) out.push_back(refine(rs, i, width));
    return out;
}

std::vector<Interval> certified_fiber(const CurveEliminants& elim, AlgebraicReal& x, bool critical,
                                      const TopologyConfig& cfg) {
    FiberData fd;
    if (x.exact()) {
        fd = fiber_at_exact(elim.h, x.iv.lo, cfg.fiber_bits);
    } else {
        AlgebraicFiberCtx ctx{elim.h, elim, x, cfg.fiber_bits, cfg.max_refine_depth, {}, {}, {}};
        fd = fiber_at_algebraic(ctx, critical);
    }
    std::vector<Interval> out;
    for (const auto& p : fd.pts) out.emplace_back(p.y.lo, p.y.hi);
    return out;
}

// ---------------------------------------------------------------------------
// the sweep

namespace {

struct SideCounts {
    int below_escape = 0;
    std::vector<int> per_point; // bottom-up, aligned with fiber points
    int above_escape = 0;
};

// count how many branches of the adjacent gap converge to each fiber point
SideCounts certify_side(const MPoly& h, AlgebraicReal& alpha, const std::vector<FiberPointData>& pts,
                        bool left_side, const Rat& gap_probe_limit, int expected_branches,
                        int max_depth) {
    SideCounts sc;
    sc.per_point.assign(pts.size(), 0);
    if (expected_branches == 0) return sc;

    for (int round = 0;; ++round) {
        if (round > max_depth) throw certification_error("cannot certify branch connections");
        // probe strictly inside the gap, near alpha
        Rat probe;
        if (alpha.exact()) {
            Rat a = alpha.iv.lo;
            Rat d = left_side ? Rat(a - gap_probe_limit) : Rat(gap_probe_limit - a);
            Rat step = d / pow2(4 + 4 * round);
            probe = left_side ? Rat(a - step) : Rat(a + step);
        } else {
            probe = left_side ? alpha.iv.lo : alpha.iv.hi;
        }

        // separators between fiber points
        std::vector<Rat> gammas;
        bool sep_fail = false;
        if (!pts.empty()) {
            gammas.push_back(pts.front().y.lo - 1);
            for (size_t i = 0; i + 1 < pts.size(); ++i) {
                if (!(pts[i].y.hi < pts[i + 1].y.lo)) {
                    sep_fail = true;
                    break;
                }
                gammas.push_back(shortest_dyadic_between(pts[i].y.hi, pts[i + 1].y.lo));
            }
            gammas.push_back(pts.back().y.hi + 1);
        }
        if (sep_fail) throw certification_error("fiber points not separated");

        ZPoly fz = fiber_poly(h, probe);
        if (fz.degree() < 0) throw certification_error("empty fiber at probe");
        Rat B = fz.degree() > 0 ? root_bound(fz) + 1 : Rat(2);
        if (!gammas.empty()) {
            B = std::max(B, Rat(rat_abs(gammas.front()) + 1));
            B = std::max(B, Rat(rat_abs(gammas.back()) + 1));
        }

        // the horizontal lines y = gamma_j must not meet the curve between the
        // probe and the sweep line
        bool ok = true;
        for (const Rat& g : gammas) {
            if (fz.sign_at(g) == 0) {
                ok = false;
                break;
            }
            ZPoly lp = line_poly(h, g);
            if (lp.is_zero()) {
                ok = false;
                break;
            }
            Rat a = left_side ? probe : alpha.iv.lo;
            Rat b = left_side ? alpha.iv.hi : probe;
            if (count_roots_in(lp, a, b) != 0 || lp.sign_at(a) == 0 || lp.sign_at(b) == 0) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            if (!alpha.exact()) alpha.refine_to(alpha.iv.width() / 16);
            continue;
        }

        int total = 0;
        if (pts.empty()) {
            sc.below_escape = expected_branches; // no finite limit points at all
            sc.above_escape = 0;
            return sc;
        }
        sc.below_escape = count_roots_in(fz, -B, gammas.front());
        total += sc.below_escape;
        for (size_t i = 0; i < pts.size(); ++i) {
            sc.per_point[i] = count_roots_in(fz, gammas[i], gammas[i + 1]);
            total += sc.per_point[i];
        }
        sc.above_escape = count_roots_in(fz, gammas.back(), B);
        total += sc.above_escape;
        if (total != expected_branches) {
            if (!alpha.exact()) alpha.refine_to(alpha.iv.width() / 16);
            continue;
        }
        return sc;
    }
}

struct TangentTask {
    int seg_id;
    bool at_p1;    // tangent at which end of the segment
    int ordinal;   // branch ordinal in the adjacent gap
    int gap;       // gap index
    double slope = 0;
};

} // namespace

int CurveTopology::closed_loops() const {
    // union-find over in-box segment endpoints
    std::map<int, int> parent;
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::map<int, int> degree;
    for (const auto& s : segments) {
        if (!s.in_box) continue;
        for (int p : {s.p0, s.p1})
            if (!parent.count(p)) parent[p] = p;
        int a = find(s.p0), b = find(s.p1);
        if (a != b) parent[a] = b;
        degree[s.p0]++;
        degree[s.p1]++;
    }
    std::map<int, std::pair<int, int>> comp; // root -> (#edges, all_deg2)
    std::map<int, bool> ok;
    for (auto& [p, d] : degree) {
        int r = find(p);
        if (!ok.count(r)) ok[r] = true;
        if (d != 2) ok[r] = false;
    }
    std::map<int, int> edges, verts;
    for (const auto& s : segments) {
        if (!s.in_box) continue;
        edges[find(s.p0)]++;
    }
    for (auto& [p, d] : degree) verts[find(p)]++;
    int loops = 0;
    for (auto& [r, e] : edges)
        if (ok[r] && e == verts[r]) ++loops;
    return loops;
}

int CurveTopology::components() const {
    std::map<int, int> parent;
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& s : segments) {
        if (!s.in_box) continue;
        for (int p : {s.p0, s.p1})
            if (!parent.count(p)) parent[p] = p;
        int a = find(s.p0), b = find(s.p1);
        if (a != b) parent[a] = b;
    }
    std::set<int> roots;
    for (auto& [p, _] : parent) roots.insert(find(p));
    return static_cast<int>(roots.size());
}

CurveTopology segment_curve(const MPoly& h_in, const Box2& box, const TopologyConfig& cfg,
                            const std::vector<ZPoly>& extra_split_polys,
                            const std::vector<SweepSplit>* preset_splits) {
    CurveTopology topo;
    topo.cfg = cfg;
    topo.box = box;
    topo.elim = curve_eliminants(h_in);
    topo.h = topo.elim.h;
    const MPoly& h = topo.h;

    // --- split set
    if (preset_splits) {
        topo.splits = *preset_splits;
    } else {
        std::vector<ZPoly> polys;
        polys.push_back(zp_x(topo.elim.disc));
        if (!topo.elim.xcrit_res.is_constant()) polys.push_back(zp_x(topo.elim.xcrit_res));
        if (!topo.elim.flex_res.is_constant()) polys.push_back(zp_x(topo.elim.flex_res));
        if (!topo.elim.lc.is_constant()) polys.push_back(zp_x(topo.elim.lc));
        for (const Rat& yb : {box.ylo, box.yhi}) {
            ZPoly lp = line_poly(h, yb);
            if (lp.is_zero()) throw input_error("box boundary lies on the curve");
            if (lp.degree() > 0) polys.push_back(lp);
        }
        for (const auto& p : extra_split_polys) polys.push_back(p);
        topo.splits = build_splits(polys, box.xlo, box.xhi, cfg.split_bits);
    }
    const size_t ns = topo.splits.size();
    ZPoly disc_sf = zpoly_squarefree(zp_x(topo.elim.disc));

    // --- fibers at splits
    std::vector<FiberData> fibers(ns);
    std::vector<bool> is_critical(ns, false);
    for (size_t i = 0; i < ns; ++i) {
        SweepSplit& sp = topo.splits[i];
        try {
            if (sp.exact()) {
                is_critical[i] = disc_sf.sign_at(sp.x.iv.lo) == 0;
                fibers[i] = fiber_at_exact(h, sp.x.iv.lo, cfg.fiber_bits);
            } else {
                is_critical[i] = count_roots_in(disc_sf, sp.x.iv.lo, sp.x.iv.hi) == 1;
                AlgebraicFiberCtx ctx{h, topo.elim, sp.x, cfg.fiber_bits, cfg.max_refine_depth, {}};
                fibers[i] = fiber_at_algebraic(ctx, is_critical[i]);
                sp.rep_lo = sp.x.iv.lo;
                sp.rep_hi = sp.x.iv.hi;
                if (!sp.x.iv.exact()) sp.rep_mid = shortest_dyadic_between(sp.x.iv.lo, sp.x.iv.hi);
            }
        } catch (const certification_error& e) {
            throw certification_error(std::string(e.what()) + " (sweep line near x = " +
                                      std::to_string(to_double(sp.x.iv.mid())) +
                                      (is_critical[i] ? ", critical)" : ")"));
        }
    }

    // --- gap probes and branch counts
    const size_t ngaps = ns - 1;
    topo.gap_mid.resize(ngaps);
    topo.gap_branches.resize(ngaps);
    std::vector<std::vector<Interval>> gap_fiber(ngaps);
    for (size_t g = 0; g < ngaps; ++g) {
        Rat lo = topo.splits[g].x.iv.hi, hi = topo.splits[g + 1].x.iv.lo;
        Rat m = shortest_dyadic_between(lo, hi);
        topo.gap_mid[g] = m;
        ZPoly fz = fiber_poly(h, m);
        if (fz.degree() > 0) {
            RootSet rs = isolate_roots(fz, Var::y);
            for (size_t i = 0; i < rs.roots.size(); ++i)
                gap_fiber[g].push_back(refine(rs, i, pow2(-cfg.fiber_bits)));
        }
        topo.gap_branches[g] = static_cast<int>(gap_fiber[g].size());
    }

    // --- connection counts per split side
    std::vector<SideCounts> left_counts(ns), right_counts(ns);
    for (size_t i = 0; i < ns; ++i) {
        if (i > 0)
            left_counts[i] = certify_side(h, topo.splits[i].x, fibers[i].pts, true,
                                          topo.gap_mid[i - 1], topo.gap_branches[i - 1],
                                          cfg.max_refine_depth);
        if (i + 1 < ns)
            right_counts[i] = certify_side(h, topo.splits[i].x, fibers[i].pts, false, topo.gap_mid[i],
                                           topo.gap_branches[i], cfg.max_refine_depth);
        // anchors may have moved with refinement
        SweepSplit& sp = topo.splits[i];
        if (!sp.exact()) {
            sp.rep_lo = sp.x.iv.lo;
            sp.rep_hi = sp.x.iv.hi;
            if (!sp.x.iv.exact()) sp.rep_mid = shortest_dyadic_between(sp.x.iv.lo, sp.x.iv.hi);
        }
    }

    // --- build points
    topo.fiber_points.resize(ns);
    ZPoly xcrit_sf = topo.elim.xcrit_res.is_constant() ? ZPoly() : zpoly_squarefree(zp_x(topo.elim.xcrit_res));
    ZPoly flex_sf = topo.elim.flex_res.is_constant() ? ZPoly() : zpoly_squarefree(zp_x(topo.elim.flex_res));
    for (size_t i = 0; i < ns; ++i) {
        SweepSplit& sp = topo.splits[i];
        bool at_x_edge = sp.exact() && (sp.x.iv.lo == box.xlo || sp.x.iv.lo == box.xhi);
        bool has_xcrit = !xcrit_sf.is_zero() &&
                         (sp.exact() ? xcrit_sf.sign_at(sp.x.iv.lo) == 0
                                     : count_roots_in(xcrit_sf, sp.x.iv.lo, sp.x.iv.hi) == 1);
        bool has_flex = !flex_sf.is_zero() &&
                        (sp.exact() ? flex_sf.sign_at(sp.x.iv.lo) == 0
                                    : count_roots_in(flex_sf, sp.x.iv.lo, sp.x.iv.hi) == 1);
        for (size_t j = 0; j < fibers[i].pts.size(); ++j) {
            const FiberPointData& fp = fibers[i].pts[j];
            PlanePoint pp;
            pp.x = sp.x.iv.as_rat_interval();
            pp.y = fp.y;
            pp.split_index = static_cast<int>(i);
            pp.fiber_multiplicity = fp.mult;
            pp.in_box = !(fp.y.hi < box.ylo || fp.y.lo > box.yhi);

            int cl = i > 0 ? left_counts[i].per_point[j] : 0;
            int cr = i + 1 < ns ? right_counts[i].per_point[j] : 0;
            // anchor: one-sided for fold-like points so that samples stay on the curve
            if (cl == 0 && cr > 0)
                pp.x_anchor = sp.rep_hi;
            else if (cr == 0 && cl > 0)
                pp.x_anchor = sp.rep_lo;
            else
                pp.x_anchor = sp.rep_mid;
            pp.y_anchor = to_double(fp.y.mid());

            // classification
            if (fp.mult >= 2) {
                // h_y vanishes; singular iff h_x also vanishes (interval test)
                RatInterval hx_iv = eval_interval(topo.elim.hx, {{Var::x, pp.x}, {Var::y, fp.y}});
                pp.kind = hx_iv.contains_zero() ? PointKind::Singular : PointKind::YCritical;
                if (cl + cr >= 3 && !(cl >= 1 && cr >= 1)) pp.kind = PointKind::Singular;
                if (cl >= 2 && cr >= 2) pp.kind = PointKind::Singular;
            } else if (has_flex &&
                       eval_interval(topo.elim.hessian, {{Var::x, pp.x}, {Var::y, fp.y}})
                           .contains_zero()) {
                pp.kind = PointKind::Flex;
            } else if (has_xcrit &&
                       eval_interval(topo.elim.hx, {{Var::x, pp.x}, {Var::y, fp.y}}).contains_zero()) {
                pp.kind = PointKind::XCritical;
            } else if (at_x_edge || fp.y.contains(box.ylo) || fp.y.contains(box.yhi)) {
                pp.kind = PointKind::BoxBoundary;
            } else {
                pp.kind = PointKind::Regular;
            }
            topo.fiber_points[i].push_back(static_cast<int>(topo.points.size()));
            topo.points.push_back(std::move(pp));
        }
    }

    // synthetic endpoints for branches leaving through the top/bottom at a split
    auto infinity_point = [&](size_t split, bool below) {
        PlanePoint pp;
        pp.x = topo.splits[split].x.iv.as_rat_interval();
        pp.y = RatInterval(below ? Rat(box.ylo - 1000000) : Rat(box.yhi + 1000000));
        pp.split_index = static_cast<int>(split);
        pp.in_box = false;
        pp.at_infinity = true;
        pp.kind = PointKind::BoxBoundary;
        pp.x_anchor = topo.splits[split].rep_mid;
        pp.y_anchor = to_double(pp.y.lo);
        topo.points.push_back(pp);
        return static_cast<int>(topo.points.size() - 1);
    };

    // --- segments per gap
    for (size_t g = 0; g < ngaps; ++g) {
        int nb = topo.gap_branches[g];
        if (nb == 0) continue;
        const SideCounts& rc = right_counts[g];      // split g, branches entering gap g
        const SideCounts& lc2 = left_counts[g + 1];  // split g+1
        // bottom-up attachment lists
        std::vector<int> left_attach, right_attach;
        for (int k = 0; k < rc.below_escape; ++k) left_attach.push_back(-1);
        for (size_t j = 0; j < fibers[g].pts.size(); ++j)
            for (int k = 0; k < rc.per_point[j]; ++k)
                left_attach.push_back(topo.fiber_points[g][j]);
        for (int k = 0; k < rc.above_escape; ++k) left_attach.push_back(-2);
        for (int k = 0; k < lc2.below_escape; ++k) right_attach.push_back(-1);
        for (size_t j = 0; j < fibers[g + 1].pts.size(); ++j)
            for (int k = 0; k < lc2.per_point[j]; ++k)
                right_attach.push_back(topo.fiber_points[g + 1][j]);
        for (int k = 0; k < lc2.above_escape; ++k) right_attach.push_back(-2);
        if (static_cast<int>(left_attach.size()) != nb || static_cast<int>(right_attach.size()) != nb)
            throw certification_error("branch attachment count mismatch");

        int below_inf_l = -1, above_inf_l = -1, below_inf_r = -1, above_inf_r = -1;
        for (int j = 0; j < nb; ++j) {
            PlaneSegment seg;
            seg.gap_index = static_cast<int>(g);
            seg.branch_ordinal = j;
            int pl = left_attach[static_cast<size_t>(j)];
            int pr = right_attach[static_cast<size_t>(j)];
            if (pl == -1) pl = below_inf_l != -1 ? below_inf_l : (below_inf_l = infinity_point(g, true));
            if (pl == -2) pl = above_inf_l != -1 ? above_inf_l : (above_inf_l = infinity_point(g, false));
            if (pr == -1) pr = below_inf_r != -1 ? below_inf_r : (below_inf_r = infinity_point(g + 1, true));
            if (pr == -2) pr = above_inf_r != -1 ? above_inf_r : (above_inf_r = infinity_point(g + 1, false));
            seg.p0 = pl;
            seg.p1 = pr;
            seg.x0 = topo.points[static_cast<size_t>(pl)].x_anchor;
            seg.x1 = topo.points[static_cast<size_t>(pr)].x_anchor;
            const Interval& branch_y = gap_fiber[g][static_cast<size_t>(j)];
            seg.in_box = !(branch_y.hi < box.ylo || branch_y.lo > box.yhi) &&
                         !topo.points[static_cast<size_t>(pl)].at_infinity &&
                         !topo.points[static_cast<size_t>(pr)].at_infinity;
            topo.segments.push_back(seg);
        }
    }

    // --- tangents
    // regular pass-through points: one certified slope shared by both sides
    std::vector<double> point_slope(topo.points.size(), 0.0);
    std::vector<int> slope_mode(topo.points.size(), 0); // 0 none, 1 shared, 2 per-branch
    for (size_t pid = 0; pid < topo.points.size(); ++pid) {
        PlanePoint& pp = topo.points[pid];
        if (pp.at_infinity) continue;
        if (pp.fiber_multiplicity == 1) {
            // h_y nonzero here: certified interval slope
            RatInterval X = pp.x, Y = pp.y;
            AlgebraicReal& ax = topo.splits[static_cast<size_t>(pp.split_index)].x;
            for (int round = 0; round < cfg.max_refine_depth; ++round) {
                RatInterval hyv = eval_interval(topo.elim.hy, {{Var::x, X}, {Var::y, Y}});
                if (!hyv.contains_zero()) {
                    RatInterval hxv = eval_interval(topo.elim.hx, {{Var::x, X}, {Var::y, Y}});
                    RatInterval sl = -(hxv / hyv);
                    if (sl.width() < make_rat(1, 10000000)) {
                        point_slope[pid] = sl.mid_double();
                        slope_mode[pid] = 1;
                        break;
                    }
                }
                // refine both coordinates
                ax.refine_to(ax.iv.width() / 16);
                X = ax.iv.as_rat_interval();
                ZPoly fz = ax.exact() ? fiber_poly(h, ax.iv.lo) : ZPoly();
                if (!fz.is_zero()) {
                    Interval yy = refine_interval(zpoly_squarefree(fz), Interval(Y.lo, Y.hi),
                                                  RatInterval(Y.lo, Y.hi).width() / 16);
                    Y = yy.as_rat_interval();
                } else {
                    // re-enclose the simple root by sign bisection at exact ordinates
                    break; // interval refinement of x usually suffices
                }
            }
            if (slope_mode[pid] != 1) {
                // fallback: numeric slope at the anchor
                point_slope[pid] = implicit_slope(h, to_double(pp.x_anchor), pp.y_anchor);
                slope_mode[pid] = 1;
            }
        } else {
            slope_mode[pid] = 2;
        }
    }

    // per-branch probe slopes at multi-branch points, clustered and averaged
    std::map<int, std::vector<std::pair<int, bool>>> incident; // point -> (seg, at_p1)
    for (size_t s = 0; s < topo.segments.size(); ++s) {
        incident[topo.segments[s].p0].emplace_back(static_cast<int>(s), false);
        incident[topo.segments[s].p1].emplace_back(static_cast<int>(s), true);
    }

    for (size_t pid = 0; pid < topo.points.size(); ++pid) {
        if (topo.points[pid].at_infinity) continue;
        auto it = incident.find(static_cast<int>(pid));
        if (it == incident.end()) continue;
        if (slope_mode[pid] == 1) {
            double k = point_slope[pid];
            bool vert = std::abs(k) > cfg.vt_threshold;
            for (auto [sid, at1] : it->second) {
                TangentDir2& td = at1 ? topo.segments[static_cast<size_t>(sid)].k1
                                      : topo.segments[static_cast<size_t>(sid)].k0;
                td.slope = k;
                td.vertical = vert;
            }
            continue;
        }
        // probe each incident branch near the point; the probe distance is
        // shrunk until the slope estimate stabilizes (too close and the
        // double-precision evaluation cancels catastrophically)
        const SweepSplit& sp = topo.splits[static_cast<size_t>(topo.points[pid].split_index)];
        std::vector<std::pair<double, std::pair<int, bool>>> slopes;
        for (auto [sid, at1] : it->second) {
            const PlaneSegment& seg = topo.segments[static_cast<size_t>(sid)];
            const Rat& m = topo.gap_mid[static_cast<size_t>(seg.gap_index)];
            Rat base = at1 ? sp.x.iv.lo : sp.x.iv.hi;
            Rat span = rat_abs(m - base);
            auto slope_at = [&](long ebits) {
                Rat probe = at1 ? Rat(base - span / pow2(ebits)) : Rat(base + span / pow2(ebits));
                ZPoly fz = fiber_poly(h, probe);
                RootSet rs = isolate_roots(fz, Var::y);
                if (static_cast<size_t>(seg.branch_ordinal) >= rs.roots.size())
                    throw certification_error("branch ordinal out of range at tangent probe");
                Interval yv = refine(rs, static_cast<size_t>(seg.branch_ordinal), pow2(-50));
                return implicit_slope(h, to_double(probe), yv.mid_double());
            };
            double k = slope_at(10);
            for (long e = 13; e <= 31; e += 3) {
                double k2 = slope_at(e);
                if (std::abs(k2) > 4 * cfg.vt_threshold && std::abs(k) > 4 * cfg.vt_threshold) {
                    k = k2; // running off to a vertical tangent
                    break;
                }
                if (std::abs(k2 - k) <= 1e-7 * (1 + std::abs(k2))) {
                    k = k2;
                    break;
                }
                k = k2;
            }
            slopes.push_back({k, {sid, at1}});
        }
        // cluster by tangent_tau and average within clusters
        std::sort(slopes.begin(), slopes.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        size_t i = 0;
        while (i < slopes.size()) {
            size_t j = i + 1;
            while (j < slopes.size() && slopes[j].first - slopes[j - 1].first <= cfg.tangent_tau) ++j;
            double avg = 0;
            for (size_t k2 = i; k2 < j; ++k2) avg += slopes[k2].first;
            avg /= static_cast<double>(j - i);
            bool vert = std::abs(avg) > cfg.vt_threshold;
            for (size_t k2 = i; k2 < j; ++k2) {
                auto [sid, at1] = slopes[k2].second;
                TangentDir2& td = at1 ? topo.segments[static_cast<size_t>(sid)].k1
                                      : topo.segments[static_cast<size_t>(sid)].k0;
                td.slope = vert ? slopes[k2].first : avg; // keep raw magnitude when vertical
                td.vertical = vert;
            }
            i = j;
        }
    }

    // adjacency
    for (size_t s = 0; s < topo.segments.size(); ++s) {
        topo.adjacency[topo.segments[s].p0].push_back(static_cast<int>(s));
        topo.adjacency[topo.segments[s].p1].push_back(static_cast<int>(s));
    }
    return topo;
}

// ---------------------------------------------------------------------------

std::vector<PlanePoint> critical_points(const MPoly& h, const Box2& box, const TopologyConfig& cfg) {
    CurveTopology topo = segment_curve(h, box, cfg);
    std::vector<PlanePoint> out;
    for (const auto& p : topo.points) {
        if (p.at_infinity || !p.in_box) continue;
        if (p.kind == PointKind::XCritical || p.kind == PointKind::YCritical ||
            p.kind == PointKind::Singular)
            out.push_back(p);
    }
    return out;
}

std::vector<PlanePoint> flexes(const MPoly& h, const Box2& box, const TopologyConfig& cfg) {
    CurveTopology topo = segment_curve(h, box, cfg);
    std::vector<PlanePoint> out;
    for (const auto& p : topo.points) {
        if (p.at_infinity || !p.in_box) continue;
        if (p.kind == PointKind::Flex) out.push_back(p);
    }
    return out;
}

TangentDir2 tangent_at(const CurveTopology&, const PlaneSegment& seg, bool at_p1) {
    return at_p1 ? seg.k1 : seg.k0;
}

Interval point_on_branch_interval(const CurveTopology& topo, const PlaneSegment& seg, const Rat& x0,
                                  const Rat& width) {
    size_t g = static_cast<size_t>(seg.gap_index);
    const SweepSplit& L = topo.splits[g];
    const SweepSplit& R = topo.splits[g + 1];
    if (!(x0 > L.x.iv.hi && x0 < R.x.iv.lo)) {
        if (x0 <= L.x.iv.hi && x0 >= L.x.iv.lo)
            throw input_error("abscissa lies on a sweep line enclosure");
        if (x0 <= R.x.iv.hi && x0 >= R.x.iv.lo)
            throw input_error("abscissa lies on a sweep line enclosure");
        throw input_error("abscissa outside the segment's gap");
    }
    ZPoly fz = fiber_poly(topo.h, x0);
    RootSet rs = isolate_roots(fz, Var::y);
    if (static_cast<size_t>(seg.branch_ordinal) >= rs.roots.size())
        throw input_error("branch ordinal out of range");
    return refine(rs, static_cast<size_t>(seg.branch_ordinal), width);
}

double point_on_branch(const CurveTopology& topo, const PlaneSegment& seg, const Rat& x0) {
    return point_on_branch_interval(topo, seg, x0, pow2(-48)).mid_double();
}

double implicit_slope(const MPoly& h, double x, double y) {
    MPoly hx = partial_derivative(with_xy(h) + MPoly(Rat(0), kMaskXY), Var::x);
    MPoly hy = partial_derivative(with_xy(h) + MPoly(Rat(0), kMaskXY), Var::y);
    double dx = eval_double(hx, x, y);
    double dy = eval_double(hy, x, y);
    if (dy == 0) return dx > 0 ? -1e300 : 1e300;
    return -dx / dy;
}

} // namespace lgp
