#include "lgp/space_lgp.hpp"

#include <algorithm>
#include <cmath>

namespace lgp {

namespace {

const unsigned kMaskXYZ = MPoly::mask_of({Var::x, Var::y, Var::z});

MPoly with_xyz(const MPoly& p) { return p + MPoly(Rat(0), kMaskXYZ); }

ZPoly zp_of(const MPoly& p, Var v) { return zpoly_from_mpoly(p, v); }

} // namespace

void check_assumptions(const MPoly& f_in, const MPoly& g_in) {
    MPoly f = with_xyz(f_in), g = with_xyz(g_in);
    if (f.is_zero() || g.is_zero()) throw input_error("zero input surface");
    MPoly d = gcd_poly(f, g);
    if (!d.is_constant()) throw input_error("gcd nonconstant: " + d.to_string());
    if (f.degree(Var::z) <= 0 || g.degree(Var::z) <= 0)
        throw input_error("input surface independent of z");

    MPoly lf = f.leading_coeff(Var::z), lg = g.leading_coeff(Var::z);
    MPoly dl = gcd_poly(lf, lg);
    if (!dl.is_constant()) {
        MPoly xonly = dl.depends_on(Var::y) ? content_in(dl, Var::y) : dl;
        if (!xonly.is_constant())
            throw input_error("assumption violated: leading coefficients share the factor " +
                              xonly.to_string());
    }
    MPoly h_raw = resultant(f, g, Var::z);
    if (h_raw.is_zero()) throw input_error("projection vanishes identically");
    MPoly cont = h_raw.depends_on(Var::y) ? content_in(h_raw, Var::y) : h_raw;
    if (!cont.is_constant() && cont.depends_on(Var::x))
        throw input_error("assumption violated: projection has the factor " + cont.to_string() +
                          " in x only");
}

Rat ShearParams::match_radius() const {
    Rat a = r_low / 2;
    Rat b = s * R_up * (Rat(1) + pow2(-20));
    return std::min(a, b);
}

bool ShearParams::admissible(const Rat& cand) const {
    if (sign(cand) <= 0) return false;
    if (degenerate) return true;
    if (sign(R_up) == 0) return true; // no space points at the samples
    return cand * 2 * R_up < r_low;
}

namespace {

// certified max |real root| of Res_x(Res_y(f, h), P_alpha) in z; empty when
// the elimination is uninformative
std::optional<Rat> elimination_root_bound(const MPoly& f, const MPoly& h, const ZPoly& alpha_poly) {
    if (f.degree(Var::z) < 1) return std::nullopt; // no constraint on z from f
    MPoly T;
    if (f.degree(Var::y) < 1) {
        T = f; // already free of y
    } else {
        if (h.degree(Var::y) < 1) return std::nullopt;
        T = resultant(f, h, Var::y); // polynomial in x, z
    }
    if (T.is_zero() || T.degree(Var::z) < 1) return std::nullopt;
    if (T.degree(Var::x) < 1) return max_real_root_magnitude(zp_of(T, Var::z));
    MPoly P = mpoly_from_zpoly(alpha_poly, Var::x);
    MPoly T2 = resultant(T, P, Var::x);
    if (T2.is_zero() || T2.is_constant() || T2.degree(Var::z) < 1) return std::nullopt;
    return max_real_root_magnitude(zp_of(T2, Var::z));
}

// interval Cauchy bound for f(alpha, beta, .); empty when the specialization
// could vanish identically (no constraint)
std::optional<Rat> interval_cauchy_z(const MPoly& f, const RatInterval& ax,
                                     const RatInterval& by) {
    auto cs = f.coeffs_in(Var::z);
    std::vector<RatInterval> vals(cs.size());
    for (size_t i = 0; i < cs.size(); ++i)
        vals[i] = eval_interval(cs[i], {{Var::x, ax}, {Var::y, by}});
    int top = static_cast<int>(vals.size()) - 1;
    while (top >= 0 && vals[static_cast<size_t>(top)].contains_zero()) --top;
    if (top < 0) return std::nullopt; // possibly the zero polynomial
    if (top == 0) return Rat(0);      // certifiably nonzero constant: no roots
    Rat num(0);
    for (int i = 0; i < top; ++i) num = std::max(num, vals[static_cast<size_t>(i)].mag());
    Rat den = vals[static_cast<size_t>(top)].mig();
    return num / den + 1;
}

} // namespace

ShearParams compute_s(const MPoly& f_in, const MPoly& g_in, const MPoly& h, const Box3& box,
                      const CurveEliminants* elim_in, const TopologyConfig& cfg) {
    MPoly f = with_xyz(f_in), g = with_xyz(g_in);
    CurveEliminants local;
    const CurveEliminants* elim = elim_in;
    if (!elim) {
        local = curve_eliminants(h);
        elim = &local;
    }

    ShearParams sp;
    // sample abscissas: box edges, fold and flex values, and midpoints between
    std::vector<ZPoly> polys;
    ZPoly disc_sf = zpoly_squarefree(zp_of(elim->disc, Var::x));
    polys.push_back(disc_sf);
    if (!elim->flex_res.is_constant()) polys.push_back(zp_of(elim->flex_res, Var::x));
    std::vector<SweepSplit> marks = build_splits(polys, box.xlo, box.xhi, cfg.split_bits);

    std::vector<AlgebraicReal> alphas;
    for (size_t i = 0; i < marks.size(); ++i) {
        alphas.push_back(marks[i].x);
        if (i + 1 < marks.size())
            alphas.emplace_back(shortest_dyadic_between(marks[i].x.iv.hi, marks[i + 1].x.iv.lo));
    }

    bool any_fiber = false;
    Rat min_gap(-1);
    std::vector<std::vector<Interval>> fibers;
    for (auto& a : alphas) {
        bool critical = a.exact() ? disc_sf.sign_at(a.iv.lo) == 0
                                  : count_roots_in(disc_sf, a.iv.lo, a.iv.hi) == 1;
        std::vector<Interval> fib = certified_fiber(*elim, a, critical, cfg);
        if (!fib.empty()) any_fiber = true;
        for (size_t j = 0; j + 1 < fib.size(); ++j) {
            Rat gap = fib[j + 1].lo - fib[j].hi;
            if (min_gap < 0 || gap < min_gap) min_gap = gap;
        }
        fibers.push_back(std::move(fib));
    }
    sp.alphas = alphas;
    sp.fibers = std::move(fibers);

    if (!any_fiber) {
        sp.degenerate = true;
        sp.s = make_rat(1, 4);
        sp.r_low = Rat(0);
        sp.R_up = Rat(0);
        return sp;
    }

    // R: tight bound on fiber |z| via double elimination, interval Cauchy as
    // the fallback
    ZPoly alpha_poly = disc_sf;
    if (!elim->flex_res.is_constant())
        alpha_poly = zpoly_squarefree(alpha_poly * zpoly_squarefree(zp_of(elim->flex_res, Var::x)));
    for (const auto& a : sp.alphas) {
        if (!a.exact()) continue;
        ZPoly l;
        l.c = {Int(-a.iv.lo.get_num()), Int(a.iv.lo.get_den())};
        alpha_poly = alpha_poly * l;
    }
    alpha_poly = zpoly_squarefree(alpha_poly);

    std::optional<Rat> Rf = elimination_root_bound(f, elim->h, alpha_poly);
    std::optional<Rat> Rg = elimination_root_bound(g, elim->h, alpha_poly);
    Rat R_up;
    if (Rf && Rg)
        R_up = std::min(*Rf, *Rg);
    else if (Rf)
        R_up = *Rf;
    else if (Rg)
        R_up = *Rg;
    else {
        // per-fiber bound: the common roots obey whichever surface constrains them
        R_up = Rat(0);
        for (size_t i = 0; i < sp.alphas.size(); ++i)
            for (const auto& b : sp.fibers[i]) {
                auto bf = interval_cauchy_z(f, sp.alphas[i].iv.as_rat_interval(),
                                            b.as_rat_interval());
                auto bg = interval_cauchy_z(g, sp.alphas[i].iv.as_rat_interval(),
                                            b.as_rat_interval());
                std::optional<Rat> bp;
                if (bf && bg)
                    bp = std::min(*bf, *bg);
                else if (bf)
                    bp = bf;
                else if (bg)
                    bp = bg;
                if (!bp)
                    throw certification_error("fiber z-magnitude could not be bounded");
                R_up = std::max(R_up, *bp);
            }
    }
    sp.R_up = R_up;
    sp.R = to_double(R_up);

    if (min_gap < 0) min_gap = R_up; // single-point fibers only: fall back to R
    sp.r_low = min_gap;
    sp.r = to_double(min_gap);

    if (sign(sp.r_low) <= 0)
        throw certification_error("fiber gap could not be bounded away from zero");
    if (sign(R_up) == 0) {
        sp.s = make_rat(1, 2);
        return sp;
    }
    sp.s = largest_pow2_leq(sp.r_low / (4 * R_up));
    return sp;
}

bool check_z_generic(const MPoly& f_in, const MPoly& g_in, const Rat& s, const Rat& xlo,
                     const Rat& xhi) {
    MPoly pf = shear_yz(with_xyz(f_in), s);
    MPoly pg = shear_yz(with_xyz(g_in), s);
    MPoly hbar_raw = resultant(pf, pg, Var::z);
    if (hbar_raw.is_zero()) return false;
    MPoly hbar = squarefree_part(hbar_raw);
    if (!hbar.depends_on(Var::y)) return false;

    auto chain = subresultant_chain(pf, pg, Var::z);
    MPoly s1 = principal_subresultant(chain, 1, Var::z);
    if (s1.is_zero()) return false; // fiber gcd degree >= 2 everywhere

    // sample between the fold abscissas of the sheared projection
    CurveEliminants eb = curve_eliminants(hbar);
    ZPoly disc_sf = zpoly_squarefree(zpoly_from_mpoly(eb.disc, Var::x));
    std::vector<SweepSplit> marks = build_splits({disc_sf}, xlo, xhi, 50);
    std::vector<Rat> samples;
    for (size_t i = 0; i + 1 < marks.size(); ++i)
        samples.push_back(shortest_dyadic_between(marks[i].x.iv.hi, marks[i + 1].x.iv.lo));

    for (const Rat& a : samples) {
        ZPoly fz = zpoly_from_mpoly(eval(hbar, {{Var::x, a}}), Var::y);
        if (fz.degree() <= 0) continue;
        ZPoly fsf = zpoly_squarefree(fz);
        MPoly s1a = eval(s1 + MPoly(Rat(0), kMaskXYZ), {{Var::x, a}});
        ZPoly s1z = zpoly_from_mpoly(s1a, Var::y);
        if (s1z.is_zero()) return false;
        ZPoly shared = zpoly_gcd(s1z, fsf);
        if (shared.degree() <= 0) continue;
        RootSet rs = isolate_roots(fsf, Var::y);
        for (size_t i = 0; i < rs.roots.size(); ++i) {
            const Interval& b = rs.roots[i];
            // s1 vanishing at a projected point: more than one space point above it
            if (b.exact() ? shared.sign_at(b.lo) == 0
                          : count_roots_in(shared, b.lo, b.hi) == 1)
                return false;
        }
    }
    return true;
}

namespace {

Rat dist_lo(const Interval& a, const Interval& b) {
    if (a.hi < b.lo) return b.lo - a.hi;
    if (b.hi < a.lo) return a.lo - b.hi;
    return Rat(0);
}

} // namespace

std::vector<std::array<double, 2>> solve_fiber(const MPoly& f_in, const MPoly& g_in, const Rat& x0,
                                               const ShearParams& sp) {
    MPoly f = with_xyz(f_in), g = with_xyz(g_in);
    MPoly h = squarefree_part(resultant(f, g, Var::z));
    MPoly pf = shear_yz(f, sp.s), pg = shear_yz(g, sp.s);
    MPoly hbar = squarefree_part(resultant(pf, pg, Var::z));

    for (const MPoly* hh : {&h, &hbar}) {
        ZPoly fz = zpoly_from_mpoly(eval(*hh + MPoly(Rat(0), kMaskXYZ), {{Var::x, x0}}), Var::y);
        if (fz.is_zero()) throw input_error("fiber vanishes identically");
        if (fz.degree() > 0) {
            ZPoly gg = zpoly_gcd(fz, fz.derivative());
            if (gg.degree() > 0) throw input_error("abscissa is critical for a projection");
        }
    }

    Rat width = pow2(-45);
    std::vector<Interval> base = fiber_ordinates(h, x0, width);
    std::vector<Interval> sheared = fiber_ordinates(hbar, x0, width);
    Rat radius = sp.match_radius();

    ZPoly base_sf = zpoly_squarefree(
        zpoly_from_mpoly(eval(h + MPoly(Rat(0), kMaskXYZ), {{Var::x, x0}}), Var::y));
    ZPoly sheared_sf = zpoly_squarefree(
        zpoly_from_mpoly(eval(hbar + MPoly(Rat(0), kMaskXYZ), {{Var::x, x0}}), Var::y));

    std::vector<std::array<double, 2>> out;
    for (auto& bp : sheared) {
        std::vector<size_t> cands;
        for (size_t i = 0; i < base.size(); ++i)
            if (dist_lo(bp, base[i]) <= radius) cands.push_back(i);
        if (cands.empty()) throw error("LGP violated: sheared point matches no base point");
        if (cands.size() > 1) {
            // fold neighbourhoods can bring two parents inside the radius;
            // the impostor fails the surface residuals certifiably
            for (int round = 0; round < 10 && cands.size() > 1; ++round) {
                std::vector<size_t> survivors;
                for (size_t i : cands) {
                    RatInterval y(base[i].lo, base[i].hi);
                    RatInterval yp(bp.lo, bp.hi);
                    RatInterval z = (yp - y) * RatInterval(Rat(1) / sp.s);
                    RatInterval vf =
                        eval_interval(f, {{Var::x, RatInterval(x0)}, {Var::y, y}, {Var::z, z}});
                    RatInterval vg =
                        eval_interval(g, {{Var::x, RatInterval(x0)}, {Var::y, y}, {Var::z, z}});
                    if (!vf.contains_zero() || !vg.contains_zero()) continue;
                    survivors.push_back(i);
                }
                if (survivors.size() >= 1) cands = survivors;
                if (cands.size() > 1) {
                    width = width / 256;
                    for (size_t i : cands) base[i] = refine_interval(base_sf, base[i], width);
                    bp = refine_interval(sheared_sf, bp, width);
                }
            }
            if (cands.size() != 1)
                throw error("LGP violated: sheared point matches two base points");
        }
        double beta = base[cands[0]].mid_double();
        double betap = bp.mid_double();
        out.push_back({beta, (betap - beta) / to_double(sp.s)});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
    });
    return out;
}

Correspondence correspond_segments(const MPoly& f_in, const MPoly& g_in,
                                   const CurveTopology& topo_h, const CurveTopology& topo_hbar,
                                   const ShearParams& sp) {
    if (topo_h.splits.size() != topo_hbar.splits.size())
        throw input_error("correspondence requires a shared split partition");
    Correspondence co;
    Rat radius = sp.match_radius();
    MPoly f = with_xyz(f_in), g = with_xyz(g_in);

    std::map<int, std::vector<int>> h_by_gap;
    for (size_t i = 0; i < topo_h.segments.size(); ++i)
        h_by_gap[topo_h.segments[i].gap_index].push_back(static_cast<int>(i));

    auto endpoint_near = [&](const PlanePoint& a, const PlanePoint& b) {
        if (a.at_infinity || b.at_infinity) return a.at_infinity && b.at_infinity;
        return dist_lo(Interval(a.y.lo, a.y.hi), Interval(b.y.lo, b.y.hi)) <= radius;
    };

    for (size_t sj = 0; sj < topo_hbar.segments.size(); ++sj) {
        const PlaneSegment& sb = topo_hbar.segments[sj];
        const PlanePoint& b0 = topo_hbar.points[static_cast<size_t>(sb.p0)];
        const PlanePoint& b1 = topo_hbar.points[static_cast<size_t>(sb.p1)];
        if (b0.at_infinity || b1.at_infinity) continue;
        int gap = sb.gap_index;

        Rat m = topo_hbar.gap_mid[static_cast<size_t>(gap)];
        Interval bmid = point_on_branch_interval(topo_hbar, sb, m, pow2(-40));

        std::vector<int> candidates;
        auto it = h_by_gap.find(gap);
        if (it != h_by_gap.end()) {
            for (int si : it->second) {
                const PlaneSegment& sh = topo_h.segments[static_cast<size_t>(si)];
                const PlanePoint& a0 = topo_h.points[static_cast<size_t>(sh.p0)];
                const PlanePoint& a1 = topo_h.points[static_cast<size_t>(sh.p1)];
                if (a0.at_infinity || a1.at_infinity) continue;
                if (!endpoint_near(b0, a0) || !endpoint_near(b1, a1)) continue;
                Interval amid = point_on_branch_interval(topo_h, sh, m, pow2(-40));
                if (dist_lo(bmid, amid) > radius) continue;
                candidates.push_back(si);
            }
        }
        if (candidates.empty()) {
            if (sb.in_box) co.spurious_hbar.push_back(static_cast<int>(sj));
            continue;
        }
        if (candidates.size() > 1) {
            // overlapping base branches: decide by residual exclusion at an
            // interior abscissa
            co.unresolved.push_back(static_cast<int>(sj));
            std::vector<int> survivors;
            for (int si : candidates) {
                const PlaneSegment& sh = topo_h.segments[static_cast<size_t>(si)];
                Interval amid = point_on_branch_interval(topo_h, sh, m, pow2(-48));
                Interval btight = point_on_branch_interval(topo_hbar, sb, m, pow2(-48));
                RatInterval y(amid.lo, amid.hi);
                RatInterval yp(btight.lo, btight.hi);
                RatInterval z = (yp - y) * RatInterval(Rat(1) / sp.s);
                RatInterval vx{RatInterval(m)};
                RatInterval vf = eval_interval(f, {{Var::x, vx}, {Var::y, y}, {Var::z, z}});
                RatInterval vg = eval_interval(g, {{Var::x, vx}, {Var::y, y}, {Var::z, z}});
                if (!vf.contains_zero() || !vg.contains_zero()) continue;
                survivors.push_back(si);
            }
            if (survivors.size() != 1)
                throw certification_error("increase precision or recompute s");
            candidates = survivors;
        }
        co.pairs[candidates[0]].push_back(static_cast<int>(sj));
    }

    for (auto& [si, list] : co.pairs) {
        std::sort(list.begin(), list.end(), [&](int a, int b) {
            return topo_hbar.segments[static_cast<size_t>(a)].branch_ordinal <
                   topo_hbar.segments[static_cast<size_t>(b)].branch_ordinal;
        });
    }
    for (size_t si = 0; si < topo_h.segments.size(); ++si) {
        if (!topo_h.segments[si].in_box) continue;
        if (!co.pairs.count(static_cast<int>(si))) co.dropped_h.push_back(static_cast<int>(si));
    }

    // sheared singular points whose one-sided branches map to a shared base
    // segment sit over genuine space singularities
    for (size_t pid = 0; pid < topo_hbar.points.size(); ++pid) {
        const PlanePoint& p = topo_hbar.points[pid];
        if (p.kind != PointKind::Singular) continue;
        auto adj = topo_hbar.adjacency.find(static_cast<int>(pid));
        if (adj == topo_hbar.adjacency.end()) continue;
        std::map<int, int> left_partners, right_partners;
        for (int sj : adj->second) {
            const PlaneSegment& sb = topo_hbar.segments[static_cast<size_t>(sj)];
            int partner = -1;
            for (const auto& [si, list] : co.pairs)
                for (int x : list)
                    if (x == sj) partner = si;
            if (partner < 0) continue;
            if (sb.p1 == static_cast<int>(pid))
                left_partners[partner]++;
            else
                right_partners[partner]++;
        }
        bool truesing = false;
        for (const auto& [si, n] : left_partners)
            if (n >= 2) truesing = true;
        for (const auto& [si, n] : right_partners)
            if (n >= 2) truesing = true;
        if (truesing) co.true_singular.push_back(static_cast<int>(pid));
    }
    return co;
}

SpaceErrorBound space_error_bound(double eps1, double eps2, const Rat& s) {
    double sd = to_double(s);
    SpaceErrorBound b;
    b.per_coord = std::max(eps1, (eps1 + eps2) / sd);
    b.hausdorff = std::sqrt(sd * sd * eps1 * eps1 + (eps1 + eps2) * (eps1 + eps2)) / sd;
    return b;
}

std::array<double, 3> SpacePiece::at(double x) const {
    double a = y1.approx.eval(x);
    double b = y2.approx.eval(x);
    return {x, a, (b - a) / to_double(s)};
}

std::array<double, 3> SpacePiece::tangent(double x) const {
    double da = y1.approx.deriv(x);
    double db = y2.approx.deriv(x);
    return {1.0, da, (db - da) / to_double(s)};
}

SpacePiece recover_space(const FittedPiece& base, const FittedPiece& sheared,
                         const ShearParams& sp) {
    Rat lo = std::max(base.approx.x0, sheared.approx.x0);
    Rat hi = std::min(base.approx.x1, sheared.approx.x1);
    if (!(lo < hi)) throw input_error("domain mismatch between corresponding pieces");
    SpacePiece p;
    p.y1 = base;
    p.y2 = sheared;
    p.s = sp.s;
    p.x0 = lo;
    p.x1 = hi;
    p.eps1 = base.approx.error_bound;
    p.eps2 = sheared.approx.error_bound;
    p.cert = space_error_bound(p.eps1, p.eps2, sp.s);
    return p;
}

bool check_disjoint_space(const SpacePiece& a, const SpacePiece& b) {
    Rat lo = std::max(a.x0, b.x0), hi = std::min(a.x1, b.x1);
    return check_disjoint_plane(a.y2.approx, b.y2.approx, lo, hi);
}

} // namespace lgp
