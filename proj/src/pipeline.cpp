#include "lgp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lgp {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string rat_str(const Rat& q) { return q.get_str(); }

const std::vector<Var> kXYZ = {Var::x, Var::y, Var::z};
const std::vector<Var> kXY = {Var::x, Var::y};

MPoly boundary_line(const MPoly& h, const Rat& y0) {
    return eval(h + MPoly(Rat(0), MPoly::mask_of(kXY)), {{Var::y, y0}});
}

// quantized key for joining piece endpoints in space
struct JointKey {
    std::string x;
    long long qy, qz;
    bool operator<(const JointKey& o) const {
        if (x != o.x) return x < o.x;
        if (qy != o.qy) return qy < o.qy;
        return qz < o.qz;
    }
};

JointKey joint_key(const Rat& x, double y, double z) {
    return JointKey{x.get_str(), llround(y * 1e7), llround(z * 1e7)};
}

std::array<double, 3> normalized(std::array<double, 3> v) {
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (n == 0) return v;
    return {v[0] / n, v[1] / n, v[2] / n};
}

double cross_norm(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double cx = a[1] * b[2] - a[2] * b[1];
    double cy = a[2] * b[0] - a[0] * b[2];
    double cz = a[0] * b[1] - a[1] * b[0];
    return std::sqrt(cx * cx + cy * cy + cz * cz);
}

// largest budget value strictly below s/sqrt(s^2+4) * eps, checked exactly
double plane_budget(const Rat& s, double eps) {
    Rat eps_r = rat_from_double(eps);
    double bound = to_double(s) / std::sqrt(to_double(s) * to_double(s) + 4.0) * eps;
    double cand = bound * 0.98;
    for (int i = 0; i < 200; ++i) {
        Rat c = rat_from_double(cand);
        // c^2 (s^2 + 4) < s^2 eps^2  <=>  c < s/sqrt(s^2+4) eps
        if (c * c * (s * s + 4) < s * s * eps_r * eps_r && sign(c) > 0) return cand;
        cand *= 0.99;
    }
    throw certification_error("could not derive a plane-stage budget");
}

struct SpaceChains {
    // one chain per (base segment, partner segment)
    struct Chain {
        int si, sj;
        std::vector<SpacePiece> cells;
    };
    std::vector<Chain> chains;
};

} // namespace

void JobConfig::validate() const {
    if (epsilon <= 0) throw input_error("epsilon must be positive");
    if (!(box.xlo < box.xhi) || !(box.ylo < box.yhi) || !(box.zlo < box.zhi))
        throw input_error("box is empty");
    if (f_text.empty()) throw input_error("missing curve polynomial");
}

// ---------------------------------------------------------------------------
// plane mode

PiecewiseOutput run_plane_pipeline(const JobConfig& cfg) {
    cfg.validate();
    PiecewiseOutput out;
    out.space_mode = false;
    out.cfg = cfg;
    out.s = Rat(0);

    MPoly h = parse_poly(cfg.f_text, kXY);
    TopologyConfig tcfg;
    tcfg.vt_threshold = cfg.vt_threshold;
    tcfg.tangent_tau = cfg.tangent_tau;
    PlaneApproxConfig acfg;
    acfg.samples_n = cfg.samples_n;
    Box2 b2 = cfg.box.xy();
    PlaneApproximation pa = approximate_plane_curve(h, b2, cfg.epsilon, tcfg, acfg);

    out.eps_nonvt = cfg.epsilon;
    out.eps_vt = cfg.epsilon;
    for (const auto& p : pa.pieces) {
        OutputPiece op;
        op.kind = OutputPiece::Kind::Plane;
        op.plane = p.approx;
        op.total_bound = p.approx.error_bound;
        op.rational = p.approx.is_rational();
        op.h_segment = p.sub.seg_id;
        out.pieces.push_back(op);
        out.max_piece_bound = std::max(out.max_piece_bound, op.total_bound);
    }
    std::sort(out.pieces.begin(), out.pieces.end(), [](const OutputPiece& a, const OutputPiece& b) {
        if (a.h_segment != b.h_segment) return a.h_segment < b.h_segment;
        return a.plane.x0 < b.plane.x0;
    });

    out.loops = pa.topo.closed_loops();
    out.components = pa.topo.components();
    for (const auto& pt : pa.topo.points) {
        if (pt.at_infinity || !pt.in_box) continue;
        std::array<double, 3> c{to_double(pt.x.mid()), to_double(pt.y.mid()), 0.0};
        out.vertices.push_back(c);
        if (pt.kind == PointKind::Singular) out.singular_points.push_back(c);
        if (pt.kind == PointKind::YCritical) out.vt_points.push_back(c);
    }
    for (const auto& seg : pa.topo.segments) {
        if (!seg.in_box) continue;
        out.edges.push_back({seg.p0, seg.p1});
    }

    // pairwise disjointness was enforced during fitting; count the pairs
    for (size_t i = 0; i < pa.pieces.size(); ++i)
        for (size_t j = i + 1; j < pa.pieces.size(); ++j) {
            if (pa.pieces[i].sub.seg_id == pa.pieces[j].sub.seg_id) continue;
            Rat lo = std::max(pa.pieces[i].sub.x0, pa.pieces[j].sub.x0);
            Rat hi = std::min(pa.pieces[i].sub.x1, pa.pieces[j].sub.x1);
            if (lo < hi) ++out.disjoint_pairs_checked;
        }
    out.disjoint_ok = true;

    // joints: collect piece endpoints (2D), report tangent agreement
    std::map<JointKey, std::vector<std::array<double, 3>>> joints;
    for (const auto& p : pa.pieces) {
        for (bool at1 : {false, true}) {
            const Rat& x = at1 ? p.sub.x1 : p.sub.x0;
            double y = at1 ? p.sub.y1 : p.sub.y0;
            bool vt = at1 ? p.sub.vt1 : p.sub.vt0;
            double k = at1 ? p.sub.k1 : p.sub.k0;
            std::array<double, 3> tan =
                vt ? std::array<double, 3>{0, 1, 0} : normalized({1, k, 0});
            joints[joint_key(x, y, 0)].push_back(tan);
        }
    }
    for (auto& [key, tans] : joints) {
        if (tans.size() != 2) continue; // crossings are not smooth junctions
        double cn = cross_norm(normalized(tans[0]), normalized(tans[1]));
        out.g1_max_cross = std::max(out.g1_max_cross, cn);
        out.joints.push_back({{0, 0, 0}, cn});
    }
    return out;
}

// ---------------------------------------------------------------------------
// space mode

PiecewiseOutput run_space_pipeline(const JobConfig& cfg) {
    cfg.validate();
    if (cfg.g_text.empty()) throw input_error("space mode requires two surfaces");
    PiecewiseOutput out;
    out.space_mode = true;
    out.cfg = cfg;

    MPoly f = parse_poly(cfg.f_text, kXYZ);
    MPoly g = parse_poly(cfg.g_text, kXYZ);
    check_assumptions(f, g);

    MPoly h = squarefree_part(resultant(f, g, Var::z));
    CurveEliminants elim_h = curve_eliminants(h);

    TopologyConfig tcfg;
    tcfg.vt_threshold = cfg.vt_threshold;
    tcfg.tangent_tau = cfg.tangent_tau;

    // step 2: shear magnitude
    ShearParams sp = compute_s(f, g, elim_h.h, cfg.box, &elim_h, tcfg);
    if (sp.degenerate) {
        out.s = sp.s;
        out.diagnostics.push_back("no curve inside the box");
        return out;
    }
    if (cfg.s_override) {
        if (!sp.admissible(*cfg.s_override))
            throw input_error("shear override outside the admissible range");
        if (!check_z_generic(f, g, *cfg.s_override, cfg.box.xlo, cfg.box.xhi))
            throw input_error("shear override fails the genericity check");
        sp.s = *cfg.s_override;
    } else {
        bool ok = false;
        for (int tries = 0; tries < 10; ++tries) {
            if (check_z_generic(f, g, sp.s, cfg.box.xlo, cfg.box.xhi)) {
                ok = true;
                break;
            }
            sp.s = sp.s / 3;
        }
        if (!ok) throw certification_error("no generic shear found");
    }
    out.s = sp.s;
    out.r = sp.r;
    out.R = sp.R;
    for (const auto& a : sp.alphas)
        out.alphas.push_back({rat_str(a.iv.lo), rat_str(a.iv.hi)});

    // step 3: sheared projection
    MPoly pf = shear_yz(f, sp.s), pg = shear_yz(g, sp.s);
    MPoly hbar = squarefree_part(resultant(pf, pg, Var::z));
    CurveEliminants elim_hb = curve_eliminants(hbar);

    Box2 b2 = cfg.box.xy();
    Box2 b2bar{b2.xlo, b2.xhi, Rat(b2.ylo + sp.s * cfg.box.zlo), Rat(b2.yhi + sp.s * cfg.box.zhi)};

    // shared sweep lines: both curves' critical data, box crossings, and the
    // abscissas where the space curve meets the z faces of the box
    std::vector<ZPoly> polys;
    for (const CurveEliminants* e : {&elim_h, &elim_hb}) {
        polys.push_back(zpoly_from_mpoly(e->disc, Var::x));
        if (!e->xcrit_res.is_constant()) polys.push_back(zpoly_from_mpoly(e->xcrit_res, Var::x));
        if (!e->flex_res.is_constant()) polys.push_back(zpoly_from_mpoly(e->flex_res, Var::x));
        if (!e->lc.is_constant()) polys.push_back(zpoly_from_mpoly(e->lc, Var::x));
    }
    for (const Rat& yb : {b2.ylo, b2.yhi}) {
        MPoly lp = boundary_line(elim_h.h, yb);
        if (lp.is_zero()) throw input_error("box boundary lies on the projected curve");
        if (lp.depends_on(Var::x)) polys.push_back(zpoly_from_mpoly(lp, Var::x));
    }
    for (const Rat& yb : {b2bar.ylo, b2bar.yhi}) {
        MPoly lp = boundary_line(elim_hb.h, yb);
        if (lp.is_zero()) throw input_error("box boundary lies on the sheared projection");
        if (lp.depends_on(Var::x)) polys.push_back(zpoly_from_mpoly(lp, Var::x));
    }
    for (const Rat& zb : {cfg.box.zlo, cfg.box.zhi}) {
        MPoly fz = eval(f, {{Var::z, zb}});
        MPoly gz = eval(g, {{Var::z, zb}});
        if (fz.is_zero() || gz.is_zero()) throw input_error("box face lies on a surface");
        if (fz.depends_on(Var::y) || gz.depends_on(Var::y)) {
            MPoly ex = resultant(fz + MPoly(Rat(0), MPoly::mask_of(kXY)),
                                 gz + MPoly(Rat(0), MPoly::mask_of(kXY)), Var::y);
            if (!ex.is_zero() && ex.depends_on(Var::x))
                polys.push_back(zpoly_from_mpoly(squarefree_part(ex), Var::x));
        }
    }
    std::vector<SweepSplit> splits = build_splits(polys, b2.xlo, b2.xhi, tcfg.split_bits);

    // steps 4-5: budgets and topology-preserving plane approximations
    double bound_nv = plane_budget(sp.s, cfg.epsilon);
    out.eps_nonvt = bound_nv;
    out.eps_vt = bound_nv / 2;

    PlaneApproxConfig acfg;
    acfg.samples_n = cfg.samples_n;
    acfg.vt_delta = out.eps_vt;
    PlaneApproximation pa_h =
        approximate_plane_curve(elim_h.h, b2, out.eps_nonvt, tcfg, acfg, {}, &splits);
    PlaneApproximation pa_hb =
        approximate_plane_curve(elim_hb.h, b2bar, out.eps_nonvt, tcfg, acfg, {}, &splits);

    Correspondence co = correspond_segments(f, g, pa_h.topo, pa_hb.topo, sp);
    for (int si : co.dropped_h)
        out.diagnostics.push_back("base segment " + std::to_string(si) +
                                  " has no real space branch");
    for (int sj : co.spurious_hbar)
        out.diagnostics.push_back("sheared segment " + std::to_string(sj) +
                                  " carries no space points");

    std::map<int, std::vector<const FittedPiece*>> by_seg_h, by_seg_hb;
    for (const auto& p : pa_h.pieces) by_seg_h[p.sub.seg_id].push_back(&p);
    for (const auto& p : pa_hb.pieces) by_seg_hb[p.sub.seg_id].push_back(&p);

    // step 6: recover the space pieces over the common refinement
    double ztol = cfg.epsilon;
    SpaceChains chains;
    for (const auto& [si, partners] : co.pairs) {
        auto ith = by_seg_h.find(si);
        if (ith == by_seg_h.end()) continue;
        for (int sj : partners) {
            auto itb = by_seg_hb.find(sj);
            if (itb == by_seg_hb.end()) continue;
            std::vector<Rat> cuts;
            for (const FittedPiece* p : ith->second) {
                cuts.push_back(p->sub.x0);
                cuts.push_back(p->sub.x1);
            }
            for (const FittedPiece* p : itb->second) {
                cuts.push_back(p->sub.x0);
                cuts.push_back(p->sub.x1);
            }
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            Rat lo = std::max(ith->second.front()->sub.x0, itb->second.front()->sub.x0);
            Rat hi = std::min(ith->second.back()->sub.x1, itb->second.back()->sub.x1);
            SpaceChains::Chain chain;
            chain.si = si;
            chain.sj = sj;
            for (size_t c = 0; c + 1 < cuts.size(); ++c) {
                Rat a = cuts[c], b = cuts[c + 1];
                if (!(a >= lo && b <= hi) || !(a < b)) continue;
                const FittedPiece* ph = nullptr;
                const FittedPiece* pb = nullptr;
                for (const FittedPiece* p : ith->second)
                    if (p->sub.x0 <= a && b <= p->sub.x1) ph = p;
                for (const FittedPiece* p : itb->second)
                    if (p->sub.x0 <= a && b <= p->sub.x1) pb = p;
                if (!ph || !pb) continue;
                SpacePiece cell = recover_space(*ph, *pb, sp);
                cell.x0 = a;
                cell.x1 = b;
                double zm = cell.at((to_double(a) + to_double(b)) / 2)[2];
                if (zm < to_double(cfg.box.zlo) - ztol || zm > to_double(cfg.box.zhi) + ztol)
                    continue; // outside the z faces
                chain.cells.push_back(std::move(cell));
            }
            if (!chain.cells.empty()) chains.chains.push_back(std::move(chain));
        }
    }

    // step 7: rational reparametrization of the non-rational cells
    ReparamConfig rcfg;
    rcfg.axis_threshold = cfg.vt_threshold;
    rcfg.grid = cfg.d_grid;
    rcfg.samples_n = cfg.samples_n;

    // shared vertical-end tangents per space point
    std::map<std::pair<int, int>, std::vector<double>> zeta_by_point;
    auto vt_end_of = [&](const SpaceChains::Chain& ch, const SpacePiece& cell, int end) {
        // returns (h point id, hbar point id) when the cell end is a vertical end
        const PlaneSegment& sh = pa_h.topo.segments[static_cast<size_t>(ch.si)];
        const PlaneSegment& sb = pa_hb.topo.segments[static_cast<size_t>(ch.sj)];
        bool vt = end == 0 ? (cell.y1.sub.vt0 && cell.x0 == cell.y1.sub.x0)
                           : (cell.y1.sub.vt1 && cell.x1 == cell.y1.sub.x1);
        if (!vt) return std::pair<int, int>{-1, -1};
        return end == 0 ? std::pair<int, int>{sh.p0, sb.p0} : std::pair<int, int>{sh.p1, sb.p1};
    };
    // the height slope dz/dy at a fold is a ratio of two diverging plane
    // slopes; estimate both on a shared probe abscissa and shrink the probe
    // distance until the ratio stabilizes
    auto zeta_at = [&](const SpaceChains::Chain& ch, const SpacePiece& cell, int end) {
        const PlaneSegment& sh = pa_h.topo.segments[static_cast<size_t>(ch.si)];
        const PlaneSegment& sb = pa_hb.topo.segments[static_cast<size_t>(ch.sj)];
        Rat base = end == 0 ? cell.x0 : cell.x1;
        Rat span = cell.x1 - cell.x0;
        double sd = to_double(sp.s);
        auto ratio_at = [&](long ebits) {
            Rat probe = end == 0 ? Rat(base + span / pow2(ebits)) : Rat(base - span / pow2(ebits));
            double yh = point_on_branch(pa_h.topo, sh, probe);
            double yb = point_on_branch(pa_hb.topo, sb, probe);
            double pslope = implicit_slope(elim_h.h, to_double(probe), yh);
            double qslope = implicit_slope(elim_hb.h, to_double(probe), yb);
            return (qslope - pslope) / (sd * pslope);
        };
        double zeta = ratio_at(8);
        for (long e = 11; e <= 29; e += 3) {
            double z2 = ratio_at(e);
            if (std::abs(z2 - zeta) <= 1e-5 * (1 + std::abs(z2))) {
                zeta = z2;
                break;
            }
            zeta = z2;
        }
        return zeta;
    };
    for (const auto& ch : chains.chains) {
        for (const auto& cell : ch.cells) {
            if (cell.is_rational()) continue;
            for (int end : {0, 1}) {
                auto key = vt_end_of(ch, cell, end);
                if (key.first < 0) continue;
                zeta_by_point[key].push_back(zeta_at(ch, cell, end));
            }
        }
    }
    std::map<std::pair<int, int>, double> zeta_avg;
    for (auto& [key, zs] : zeta_by_point) {
        double sum = 0;
        for (double z : zs) sum += z;
        zeta_avg[key] = sum / static_cast<double>(zs.size());
    }

    double reparam_budget = cfg.epsilon / 2;
    for (auto& ch : chains.chains) {
        std::vector<std::pair<SpacePiece, std::optional<ReparamTriple>>> done;
        std::vector<std::pair<SpacePiece, int>> todo;
        for (auto& cell : ch.cells) todo.push_back({cell, 0});
        std::vector<std::pair<SpacePiece, double>> reperr;
        while (!todo.empty()) {
            auto [cell, depth] = todo.back();
            todo.pop_back();
            if (cell.is_rational()) {
                done.push_back({cell, std::nullopt});
                continue;
            }
            // end data
            double xa = to_double(cell.x0), xb = to_double(cell.x1);
            std::array<double, 3> q0 = cell.at(xa), q1 = cell.at(xb);
            auto key0 = vt_end_of(ch, cell, 0);
            auto key1 = vt_end_of(ch, cell, 1);
            TangentDir3 t0, t1;
            VTAxis hint = VTAxis::YAxis;
            bool flip = false;
            if (key0.first >= 0) {
                double zeta = zeta_avg.count(key0) ? zeta_avg[key0] : 0.0;
                t0 = classify_vt_tangent(1e18, (1 + zeta * to_double(sp.s)) * 1e18, sp.s, rcfg);
                t0.dir[2] = std::abs(zeta) < rcfg.snap_tol ? 0.0 : zeta;
                if (std::abs(zeta) > rcfg.axis_threshold) {
                    t0.cls = VTAxis::ZAxis;
                    t0.dir = {0, 0, zeta > 0 ? 1.0 : -1.0};
                }
                auto tg = cell.tangent(xb);
                t1.cls = VTAxis::General;
                t1.dir = tg;
                hint = t0.cls;
            } else if (key1.first >= 0) {
                // vertical tangent at the right end: run the chart backwards
                double zeta = zeta_avg.count(key1) ? zeta_avg[key1] : 0.0;
                t0.cls = std::abs(zeta) > rcfg.axis_threshold ? VTAxis::ZAxis : VTAxis::YAxis;
                t0.dir = t0.cls == VTAxis::YAxis
                             ? std::array<double, 3>{0, 1, std::abs(zeta) < rcfg.snap_tol ? 0 : zeta}
                             : std::array<double, 3>{0, 0, zeta > 0 ? 1.0 : -1.0};
                auto tg = cell.tangent(xa);
                t1.cls = VTAxis::General;
                t1.dir = tg;
                hint = t0.cls;
                flip = true;
            } else {
                // interior non-rational cell: drive by y with plain tangents
                auto ta = cell.tangent(xa);
                t0.cls = VTAxis::General;
                t0.dir = ta;
                auto tb = cell.tangent(xb);
                t1.cls = VTAxis::General;
                t1.dir = tb;
                hint = VTAxis::YAxis;
            }
            std::array<double, 3> p0 = flip ? q1 : q0;
            std::array<double, 3> p1 = flip ? q0 : q1;
            bool fitted = false;
            ReparamTriple best;
            double best_err = 0;
            try {
                if (t0.cls == VTAxis::General) {
                    // grid search with the hinted chart
                    bool have = false;
                    for (double d2 : rcfg.grid)
                        for (double d3 : rcfg.grid) {
                            if (d3 == 0 || d2 == d3 || d2 <= -0.9 || d3 <= -0.9) continue;
                            try {
                                ReparamTriple tri =
                                    reparametrize_vt_segment(p0, p1, t0, t1, d2, d3, hint);
                                double err = reparam_error(cell, tri, rcfg.samples_n + 1);
                                if (!have || err < best_err) {
                                    have = true;
                                    best = tri;
                                    best_err = err;
                                }
                            } catch (const error&) {
                                continue;
                            }
                        }
                    fitted = have;
                } else {
                    FreeParamChoice c = select_free_params(cell, p0, p1, t0, t1, rcfg);
                    best = c.triple;
                    best_err = c.err;
                    fitted = true;
                }
            } catch (const error&) {
                fitted = false;
            }
            if (fitted && best_err <= reparam_budget) {
                SpacePiece annotated = cell;
                done.push_back({annotated, best});
                reperr.push_back({annotated, best_err});
                continue;
            }
            if (depth >= 12)
                throw certification_error("rational reparametrization missed the budget");
            // bisect the cell and retry
            Rat m = (cell.x0 + cell.x1) / 2;
            SpacePiece left = cell, right = cell;
            left.x1 = m;
            right.x0 = m;
            todo.push_back({left, depth + 1});
            todo.push_back({right, depth + 1});
        }
        // replace the chain cells (sorted) and emit output pieces
        std::sort(done.begin(), done.end(), [](const auto& a, const auto& b) {
            return a.first.x0 < b.first.x0;
        });
        for (auto& [cell, tri] : done) {
            OutputPiece op;
            op.kind = tri ? OutputPiece::Kind::Reparam : OutputPiece::Kind::Graph;
            op.space = cell;
            op.triple = tri;
            op.h_segment = ch.si;
            op.hbar_segment = ch.sj;
            op.rational = !tri ? cell.is_rational() : true;
            if (tri) {
                // recompute the measured reparametrization error for the record
                op.reparam_err = reparam_error(cell, *tri, rcfg.samples_n + 1);
                op.total_bound = cell.cert.hausdorff + op.reparam_err;
            } else {
                op.total_bound = cell.cert.hausdorff;
            }
            out.pieces.push_back(std::move(op));
        }
    }

    std::sort(out.pieces.begin(), out.pieces.end(), [](const OutputPiece& a, const OutputPiece& b) {
        if (a.h_segment != b.h_segment) return a.h_segment < b.h_segment;
        if (a.hbar_segment != b.hbar_segment) return a.hbar_segment < b.hbar_segment;
        return a.space.x0 < b.space.x0;
    });
    for (const auto& p : out.pieces) out.max_piece_bound = std::max(out.max_piece_bound, p.total_bound);

    // step 8 checks: disjointness of space pieces over shared base segments
    out.disjoint_ok = true;
    for (size_t i = 0; i < out.pieces.size(); ++i)
        for (size_t j = i + 1; j < out.pieces.size(); ++j) {
            const OutputPiece& A = out.pieces[i];
            const OutputPiece& B = out.pieces[j];
            if (A.h_segment != B.h_segment || A.hbar_segment == B.hbar_segment) continue;
            Rat lo = std::max(A.space.x0, B.space.x0);
            Rat hi = std::min(A.space.x1, B.space.x1);
            if (!(lo < hi)) continue;
            ++out.disjoint_pairs_checked;
            if (!check_disjoint_space(A.space, B.space)) out.disjoint_ok = false;
        }
    if (!out.disjoint_ok) throw certification_error("space pieces failed the disjointness check");

    // G1 joints: only degree-2 junctions are smooth joins
    std::map<JointKey, std::vector<std::array<double, 3>>> joints;
    for (const auto& p : out.pieces) {
        for (int end : {0, 1}) {
            const Rat& x = end == 0 ? p.space.x0 : p.space.x1;
            double xd = to_double(x);
            std::array<double, 3> pos = p.space.at(xd);
            std::array<double, 3> tan;
            if (p.triple) {
                double tpar = 0;
                // locate the parameter of this end through the driving coordinate
                double drive = p.triple->axis == VTAxis::YAxis ? pos[1] : pos[2];
                tpar = (drive - p.triple->drive0) / (p.triple->drive1 - p.triple->drive0);
                tpar = std::clamp(tpar, 0.0, 1.0);
                tan = p.triple->velocity(tpar);
                pos = p.triple->at(tpar);
            } else {
                tan = p.space.tangent(xd);
            }
            joints[joint_key(x, pos[1], pos[2])].push_back(normalized(tan));
        }
    }
    for (auto& [key, tans] : joints) {
        if (tans.size() != 2) continue;
        double cn = cross_norm(tans[0], tans[1]);
        out.g1_max_cross = std::max(out.g1_max_cross, cn);
        out.joints.push_back({{0, 0, 0}, cn});
    }

    // topology summary over the space graph
    std::map<std::pair<int, int>, int> vertex_ids;
    auto vertex_of = [&](int hp, int bp) {
        auto key = std::make_pair(hp, bp);
        auto it = vertex_ids.find(key);
        if (it != vertex_ids.end()) return it->second;
        int id = static_cast<int>(out.vertices.size());
        vertex_ids[key] = id;
        const PlanePoint& a = pa_h.topo.points[static_cast<size_t>(hp)];
        const PlanePoint& b = pa_hb.topo.points[static_cast<size_t>(bp)];
        double y = a.y_anchor;
        double z = (b.y_anchor - a.y_anchor) / to_double(sp.s);
        out.vertices.push_back({to_double(a.x_anchor), y, z});
        return id;
    };
    std::map<int, int> degree;
    std::set<std::pair<int, int>> seen_chain;
    for (const auto& ch : chains.chains) {
        if (ch.cells.empty()) continue;
        if (!seen_chain.insert({ch.si, ch.sj}).second) continue;
        const PlaneSegment& sh = pa_h.topo.segments[static_cast<size_t>(ch.si)];
        const PlaneSegment& sb = pa_hb.topo.segments[static_cast<size_t>(ch.sj)];
        int v0 = vertex_of(sh.p0, sb.p0);
        int v1 = vertex_of(sh.p1, sb.p1);
        out.edges.push_back({v0, v1});
        degree[v0]++;
        degree[v1]++;
    }
    {
        // count components and closed loops of the space graph
        std::map<int, int> parent;
        std::function<int(int)> find = [&](int v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (const auto& e : out.edges)
            for (int v : {e[0], e[1]})
                if (!parent.count(v)) parent[v] = v;
        for (const auto& e : out.edges) {
            int a = find(e[0]), b = find(e[1]);
            if (a != b) parent[a] = b;
        }
        std::map<int, std::pair<int, int>> comp; // root -> (edges, vertices)
        std::map<int, bool> all2;
        for (const auto& e : out.edges) comp[find(e[0])].first++;
        for (auto& [v, d] : degree) {
            comp[find(v)].second++;
            if (!all2.count(find(v))) all2[find(v)] = true;
            if (d != 2) all2[find(v)] = false;
        }
        out.components = static_cast<int>(comp.size());
        out.loops = 0;
        for (auto& [root, ev] : comp)
            if (all2[root] && ev.first == ev.second) out.loops++;
    }
    for (size_t pid = 0; pid < pa_hb.topo.points.size(); ++pid) {
        if (std::find(co.true_singular.begin(), co.true_singular.end(), static_cast<int>(pid)) ==
            co.true_singular.end())
            continue;
        // report the corresponding space location
        const PlanePoint& b = pa_hb.topo.points[pid];
        out.singular_points.push_back({to_double(b.x_anchor), 0.0, 0.0});
    }
    for (const auto& pt : pa_h.topo.points) {
        if (pt.at_infinity || !pt.in_box) continue;
        if (pt.kind == PointKind::YCritical)
            out.vt_points.push_back({to_double(pt.x_anchor), pt.y_anchor, 0.0});
    }
    return out;
}

// ---------------------------------------------------------------------------
// exports

namespace {

ordered_json piece_json(const OutputPiece& p, bool space_mode) {
    ordered_json j;
    auto form_json = [&](const SegApprox& s) {
        ordered_json fj;
        if (const auto* rq = std::get_if<RationalQuadratic>(&s.form)) {
            fj["type"] = "rational_quadratic_normalized";
            fj["a"] = fmt17(rq->a);
            fj["b"] = fmt17(rq->b);
            fj["c"] = fmt17(rq->c);
            fj["d"] = fmt17(rq->d);
            fj["a_exact"] = rat_str(shortest_dyadic_near(rq->a, 1e-12));
            fj["b_exact"] = rat_str(shortest_dyadic_near(rq->b, 1e-12));
            fj["c_exact"] = rat_str(shortest_dyadic_near(rq->c, 1e-12));
            fj["d_exact"] = rat_str(shortest_dyadic_near(rq->d, 1e-12));
        } else if (const auto* sf = std::get_if<SimplifiedRQ>(&s.form)) {
            fj["type"] = "rational_linear_plus_pole";
            fj["at"] = fmt17(sf->at);
            fj["bt"] = fmt17(sf->bt);
            fj["ct"] = fmt17(sf->ct);
            fj["dt"] = fmt17(sf->dt);
            fj["at_exact"] = rat_str(shortest_dyadic_near(sf->at, 1e-12));
            fj["bt_exact"] = rat_str(shortest_dyadic_near(sf->bt, 1e-12));
            fj["ct_exact"] = rat_str(shortest_dyadic_near(sf->ct, 1e-12));
            fj["dt_exact"] = rat_str(shortest_dyadic_near(sf->dt, 1e-12));
        } else {
            const ConicArc& ca = std::get<ConicArc>(s.form);
            fj["type"] = ca.kind == ConicKind::Ellipse ? "ellipse_arc" : "hyperbola_arc";
            fj["a"] = fmt17(ca.a);
            fj["b"] = fmt17(ca.b);
            fj["xo"] = fmt17(ca.xo);
            fj["yo"] = fmt17(ca.yo);
            fj["branch_sign"] = ca.branch_sign;
        }
        fj["domain"] = {rat_str(s.x0), rat_str(s.x1)};
        fj["error"] = fmt17(s.error_bound);
        return fj;
    };

    if (!space_mode) {
        j["kind"] = "plane";
        j["form"] = form_json(p.plane);
        j["rational"] = p.rational;
        j["certificate"] = {{"error", fmt17(p.total_bound)}};
        return j;
    }
    j["kind"] = p.kind == OutputPiece::Kind::Reparam ? "reparam" : "graph";
    j["domain"] = {rat_str(p.space.x0), rat_str(p.space.x1)};
    j["rational"] = p.rational;
    j["s"] = rat_str(p.space.s);
    j["y1"] = form_json(p.space.y1.approx);
    j["y2"] = form_json(p.space.y2.approx);
    if (p.triple) {
        ordered_json t;
        t["axis"] = p.triple->axis == VTAxis::YAxis ? "y" : "z";
        t["x"] = {fmt17(p.triple->a1), fmt17(p.triple->b1), fmt17(p.triple->c1),
                  fmt17(p.triple->d1)};
        t["w"] = {fmt17(p.triple->a2), fmt17(p.triple->b2), fmt17(p.triple->c2),
                  fmt17(p.triple->d2), fmt17(p.triple->c3), fmt17(p.triple->d3)};
        t["drive"] = {fmt17(p.triple->drive0), fmt17(p.triple->drive1)};
        j["triple"] = t;
    }
    ordered_json cert;
    cert["eps1"] = fmt17(p.space.eps1);
    cert["eps2"] = fmt17(p.space.eps2);
    cert["per_coord"] = fmt17(p.space.cert.per_coord);
    cert["hausdorff"] = fmt17(p.space.cert.hausdorff);
    if (p.triple) cert["reparam_error"] = fmt17(p.reparam_err);
    cert["total"] = fmt17(p.total_bound);
    j["certificate"] = cert;
    return j;
}

} // namespace

std::string export_json(const PiecewiseOutput& out) {
    ordered_json j;
    j["mode"] = out.space_mode ? "space" : "plane";
    ordered_json in;
    in["f"] = out.cfg.f_text;
    if (out.space_mode) in["g"] = out.cfg.g_text;
    in["box"] = {rat_str(out.cfg.box.xlo), rat_str(out.cfg.box.xhi), rat_str(out.cfg.box.ylo),
                 rat_str(out.cfg.box.yhi), rat_str(out.cfg.box.zlo), rat_str(out.cfg.box.zhi)};
    in["epsilon"] = fmt17(out.cfg.epsilon);
    j["input"] = in;

    ordered_json prov;
    prov["s"] = rat_str(out.s);
    prov["s_float"] = fmt17(to_double(out.s));
    prov["r"] = fmt17(out.r);
    prov["R"] = fmt17(out.R);
    ordered_json alphas = ordered_json::array();
    for (const auto& a : out.alphas) alphas.push_back({a[0], a[1]});
    prov["alphas"] = alphas;
    prov["eps_nonvt"] = fmt17(out.eps_nonvt);
    prov["eps_vt"] = fmt17(out.eps_vt);
    j["provenance"] = prov;

    ordered_json topo;
    topo["loops"] = out.loops;
    topo["components"] = out.components;
    ordered_json verts = ordered_json::array();
    for (const auto& v : out.vertices) verts.push_back({fmt17(v[0]), fmt17(v[1]), fmt17(v[2])});
    topo["vertices"] = verts;
    ordered_json edges = ordered_json::array();
    for (const auto& e : out.edges) edges.push_back({e[0], e[1]});
    topo["edges"] = edges;
    ordered_json sing = ordered_json::array();
    for (const auto& v : out.singular_points)
        sing.push_back({fmt17(v[0]), fmt17(v[1]), fmt17(v[2])});
    topo["singular_points"] = sing;
    ordered_json vts = ordered_json::array();
    for (const auto& v : out.vt_points) vts.push_back({fmt17(v[0]), fmt17(v[1]), fmt17(v[2])});
    topo["vt_points"] = vts;
    j["topology"] = topo;

    ordered_json pieces = ordered_json::array();
    for (const auto& p : out.pieces) pieces.push_back(piece_json(p, out.space_mode));
    j["pieces"] = pieces;

    ordered_json checks;
    checks["disjoint_pairs_checked"] = out.disjoint_pairs_checked;
    checks["disjoint_ok"] = out.disjoint_ok;
    checks["g1_max_cross"] = fmt17(out.g1_max_cross);
    checks["max_piece_bound"] = fmt17(out.max_piece_bound);
    ordered_json diags = ordered_json::array();
    for (const auto& d : out.diagnostics) diags.push_back(d);
    checks["diagnostics"] = diags;
    j["checks"] = checks;
    return j.dump(2) + "\n";
}

std::string export_svg(const PiecewiseOutput& out) {
    if (out.space_mode) throw input_error("svg export is for plane mode");
    double xlo = to_double(out.cfg.box.xlo), xhi = to_double(out.cfg.box.xhi);
    double ylo = to_double(out.cfg.box.ylo), yhi = to_double(out.cfg.box.yhi);
    double W = 800, H = 800;
    auto tx = [&](double x) { return (x - xlo) / (xhi - xlo) * W; };
    auto ty = [&](double y) { return H - (y - ylo) / (yhi - ylo) * H; };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 " << W << " "
       << H << "\">\n";
    for (const auto& p : out.pieces) {
        os << "  <path fill=\"none\" stroke=\"black\" d=\"";
        const int n = 32;
        for (int i = 0; i <= n; ++i) {
            double x = to_double(p.plane.x0) +
                       (to_double(p.plane.x1) - to_double(p.plane.x0)) * i / n;
            double y = p.plane.eval(x);
            os << (i == 0 ? "M" : " L") << fmt17(tx(x)) << " " << fmt17(ty(y));
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string export_polyline(const PiecewiseOutput& out, int density) {
    std::ostringstream os;
    int base = 1;
    for (const auto& p : out.pieces) {
        int n = std::max(density, 2);
        for (int i = 0; i <= n; ++i) {
            if (out.space_mode) {
                double x = to_double(p.space.x0) +
                           (to_double(p.space.x1) - to_double(p.space.x0)) * i / n;
                std::array<double, 3> q;
                if (p.triple) {
                    double t = static_cast<double>(i) / n;
                    q = p.triple->at(t);
                } else {
                    q = p.space.at(x);
                }
                os << "v " << fmt17(q[0]) << " " << fmt17(q[1]) << " " << fmt17(q[2]) << "\n";
            } else {
                double x = to_double(p.plane.x0) +
                           (to_double(p.plane.x1) - to_double(p.plane.x0)) * i / n;
                os << "v " << fmt17(x) << " " << fmt17(p.plane.eval(x)) << " 0\n";
            }
        }
        for (int i = 0; i < n; ++i) os << "l " << base + i << " " << base + i + 1 << "\n";
        base += n + 1;
    }
    return os.str();
}

} // namespace lgp
