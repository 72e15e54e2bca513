#include "lgp/real_roots.hpp"

#include <algorithm>

namespace lgp {

namespace {

// number of sign variations in the coefficient sequence
int sign_variations(const ZPoly& p) {
    int v = 0, last = 0;
    for (const auto& c : p.c) {
        int s = sgn(c);
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

// p(x) -> p(x+1), in place (Pascal accumulation)
void taylor_shift_1(ZPoly& p) {
    int n = p.degree();
    for (int i = 0; i < n; ++i)
        for (int j = n - 1; j >= i; --j) p.c[static_cast<size_t>(j)] += p.c[static_cast<size_t>(j) + 1];
}

// p(x) -> 2^n p(x/2)
void scale_half(ZPoly& p) {
    int n = p.degree();
    for (int i = 0; i <= n; ++i)
        mpz_mul_2exp(p.c[static_cast<size_t>(i)].get_mpz_t(), p.c[static_cast<size_t>(i)].get_mpz_t(),
                     static_cast<mp_bitcnt_t>(n - i));
}

// Descartes bound for the number of roots of p in (0,1):
// variations of (x+1)^n p(1/(x+1))
int descartes_01(const ZPoly& p) {
    ZPoly r;
    r.c.assign(p.c.rbegin(), p.c.rend());
    r.trim();
    if (r.is_zero()) return 0;
    taylor_shift_1(r);
    return sign_variations(r);
}

// roots of p in the open dyadic interval (a + c/2^k, a + (c+1)/2^k) * w ...
// we carry the affine map explicitly: interval = (lo, lo + w/2^k)
struct IsolJob {
    ZPoly p; // roots in (0,1) of p correspond to roots in (lo, lo+len)
    Rat lo;
    Rat len;
};

void isolate01(std::vector<IsolJob>& stack, std::vector<Interval>& out) {
    while (!stack.empty()) {
        IsolJob job = std::move(stack.back());
        stack.pop_back();
        int v = descartes_01(job.p);
        if (v == 0) continue;
        if (v == 1) {
            out.emplace_back(job.lo, job.lo + job.len);
            continue;
        }
        ZPoly left = job.p;
        scale_half(left);
        ZPoly right = left;
        taylor_shift_1(right);
        Rat half = job.len / 2;
        Rat mid = job.lo + half;
        // exact root at the midpoint?
        if (right.c.empty() || right.c[0] == 0) out.emplace_back(mid, mid);
        stack.push_back({std::move(left), job.lo, half});
        stack.push_back({std::move(right), mid, half});
    }
}

// power-of-two root-magnitude bound (Knuth form, via coefficient bit lengths);
// much tighter than the Cauchy bound for polynomials with lopsided coefficients
Rat knuth_pow2_bound(const ZPoly& p) {
    int n = p.degree();
    long lead_bits = static_cast<long>(mpz_sizeinbase(p.lc().get_mpz_t(), 2));
    long emax = 0;
    for (int i = 0; i < n; ++i) {
        const Int& a = p.c[static_cast<size_t>(i)];
        if (a == 0) continue;
        long bits = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2));
        long diff = bits - lead_bits + 1;
        long gap = n - i;
        long e = diff <= 0 ? 0 : (diff + gap - 1) / gap;
        emax = std::max(emax, e);
    }
    return pow2(emax + 1);
}

// substitute x -> a + (b-a) x  (maps (0,1) onto (a,b)), clearing denominators
ZPoly map_unit_to(const ZPoly& p, const Rat& a, const Rat& b) {
    QPoly q;
    QPoly acc;
    acc.c = {Rat(1)};
    QPoly lin;
    lin.c = {a, b - a};
    q.c.assign(1, Rat(0));
    for (size_t i = 0; i < p.c.size(); ++i) {
        if (p.c[i] != 0) q = q + acc * Rat(p.c[i]);
        if (i + 1 < p.c.size()) acc = acc * lin;
    }
    return zpoly_from_qpoly(q);
}

} // namespace

std::vector<Interval> isolate_roots_in(const ZPoly& sf, const Rat& a, const Rat& b) {
    std::vector<Interval> out;
    if (sf.is_zero() || sf.degree() == 0) return out;
    if (!(a < b)) return out;
    ZPoly mapped = map_unit_to(sf, a, b);
    std::vector<IsolJob> stack;
    stack.push_back({std::move(mapped), a, b - a});
    std::vector<Interval> inner;
    isolate01(stack, inner);
    for (auto& iv : inner) out.push_back(std::move(iv));
    std::sort(out.begin(), out.end(), [](const Interval& u, const Interval& v) { return u.lo < v.lo; });
    // drop the synthetic endpoint-root marker unless it is genuinely inside
    out.erase(std::remove_if(out.begin(), out.end(),
                             [&](const Interval& iv) { return iv.exact() && !(a < iv.lo && iv.lo < b); }),
              out.end());
    return out;
}

RootSet isolate_roots(const ZPoly& p, Var v) {
    if (p.is_zero()) throw input_error("root isolation of zero polynomial");
    RootSet rs;
    rs.var = v;
    rs.poly = mpoly_from_zpoly(p, v);
    rs.sf = zpoly_squarefree(p);
    if (rs.sf.degree() <= 0) return rs;
    Rat bound = knuth_pow2_bound(rs.sf);
    rs.roots = isolate_roots_in(rs.sf, -bound, bound);
    return rs;
}

RootSet isolate_roots(const MPoly& p) {
    if (p.is_zero()) throw input_error("root isolation of zero polynomial");
    auto vars = p.variables();
    Var v = Var::x;
    int count = 0;
    for (int i = 0; i < kNumVars; ++i)
        if (p.depends_on(static_cast<Var>(i))) {
            v = static_cast<Var>(i);
            ++count;
        }
    if (count > 1) throw input_error("isolate_roots expects a univariate polynomial");
    if (count == 0) {
        RootSet rs;
        rs.poly = p;
        return rs; // nonzero constant: no roots
    }
    RootSet rs = isolate_roots(zpoly_from_mpoly(p, v), v);
    rs.poly = p;
    return rs;
}

Interval refine_interval(const ZPoly& sf, Interval iv, const Rat& target_width) {
    if (iv.exact()) return iv;
    // the isolated root lies strictly inside; an endpoint may still be a root
    // of a neighbouring factor, so establish sign-bearing endpoints first
    int slo = sf.sign_at(iv.lo);
    int shi = sf.sign_at(iv.hi);
    while (slo == 0 || shi == 0) {
        Rat mid = iv.mid();
        int sm = sf.sign_at(mid);
        if (sm == 0) return Interval(mid, mid);
        if (slo != 0) {
            if (sm != slo) {
                iv.hi = mid;
                shi = sm;
            } else {
                iv.lo = mid;
                slo = sm;
            }
        } else if (shi != 0) {
            if (sm != shi) {
                iv.lo = mid;
                slo = sm;
            } else {
                iv.hi = mid;
                shi = sm;
            }
        } else {
            // both endpoints are roots of other factors; locate the inner root
            if (count_roots_in(sf, iv.lo, mid) == 1) {
                iv.hi = mid;
                shi = sm;
            } else {
                iv.lo = mid;
                slo = sm;
            }
        }
    }
    while (iv.width() > target_width) {
        Rat mid = iv.mid();
        int sm = sf.sign_at(mid);
        if (sm == 0) return Interval(mid, mid);
        if (sm == slo)
            iv.lo = mid;
        else
            iv.hi = mid;
    }
    return iv;
}

Interval refine(const RootSet& rs, size_t index, const Rat& target_width) {
    if (index >= rs.roots.size()) throw input_error("root index out of range");
    return refine_interval(rs.sf, rs.roots[index], target_width);
}

namespace {

// Sturm chain with positive-scalar normalization at each step
std::vector<ZPoly> sturm_chain(const ZPoly& p) {
    std::vector<ZPoly> chain;
    ZPoly s0 = zpoly_squarefree(p);
    if (s0.degree() <= 0) return chain;
    chain.push_back(s0);
    chain.push_back(s0.derivative().primitive());
    while (chain.back().degree() > 0) {
        QPoly r = qpoly_from_zpoly(chain[chain.size() - 2]).rem(qpoly_from_zpoly(chain.back()));
        if (r.is_zero()) break;
        // primitive positive-scalar copy of -rem keeps the Sturm sign pattern
        ZPoly next = zpoly_from_qpoly(r);
        for (auto& c : next.c) c = -c;
        chain.push_back(std::move(next));
    }
    return chain;
}

int sturm_variations(const std::vector<ZPoly>& chain, const Rat& x) {
    int v = 0, last = 0;
    for (const auto& s : chain) {
        int sg = s.sign_at(x);
        if (sg == 0) continue;
        if (last != 0 && sg != last) ++v;
        last = sg;
    }
    return v;
}

// divide out (X - r) while p(r) == 0
ZPoly deflate_at(ZPoly p, const Rat& r) {
    while (!p.is_zero() && p.degree() > 0 && p.sign_at(r) == 0) {
        QPoly q = qpoly_from_zpoly(p);
        QPoly lin;
        lin.c = {-r, Rat(1)};
        // synthetic division
        QPoly quot;
        quot.c.assign(static_cast<size_t>(q.degree()), Rat(0));
        Rat carry(0);
        for (int i = q.degree(); i >= 1; --i) {
            carry = q.c[static_cast<size_t>(i)] + carry * r;
            quot.c[static_cast<size_t>(i - 1)] = carry;
        }
        quot.trim();
        p = zpoly_from_qpoly(quot);
    }
    return p;
}

} // namespace

int count_roots_in(const ZPoly& p, const Rat& a, const Rat& b) {
    if (p.is_zero()) throw input_error("root counting for zero polynomial");
    if (!(a < b)) return 0;
    ZPoly q = zpoly_squarefree(p);
    q = deflate_at(q, a);
    q = deflate_at(q, b);
    if (q.degree() <= 0) return 0;
    auto chain = sturm_chain(q);
    if (chain.empty()) return 0;
    return sturm_variations(chain, a) - sturm_variations(chain, b);
}

int count_roots_in(const MPoly& p, const Rat& a, const Rat& b) {
    Var v = Var::x;
    int count = 0;
    for (int i = 0; i < kNumVars; ++i)
        if (p.depends_on(static_cast<Var>(i))) {
            v = static_cast<Var>(i);
            ++count;
        }
    if (count > 1) throw input_error("count_roots_in expects a univariate polynomial");
    if (count == 0) return 0;
    return count_roots_in(zpoly_from_mpoly(p, v), a, b);
}

Rat root_bound(const ZPoly& p) {
    if (p.is_zero()) throw input_error("root bound of zero polynomial");
    if (p.degree() == 0) throw input_error("root bound needs positive degree");
    Rat mx(0);
    Rat lead = rat_abs(Rat(p.lc()));
    for (int i = 0; i < p.degree(); ++i) {
        Rat v = rat_abs(Rat(p.c[static_cast<size_t>(i)])) / lead;
        if (v > mx) mx = v;
    }
    return mx + 1;
}

Rat root_bound(const MPoly& p) {
    Var v = Var::x;
    int count = 0;
    for (int i = 0; i < kNumVars; ++i)
        if (p.depends_on(static_cast<Var>(i))) {
            v = static_cast<Var>(i);
            ++count;
        }
    if (count != 1) throw input_error("root_bound expects a univariate polynomial");
    return root_bound(zpoly_from_mpoly(p, v));
}

Rat max_real_root_magnitude(const ZPoly& p) {
    if (p.is_zero() || p.degree() == 0) return Rat(0);
    RootSet rs = isolate_roots(p);
    Rat mx(0);
    Rat width = pow2(-30);
    for (size_t i = 0; i < rs.roots.size(); ++i) {
        Interval iv = refine_interval(rs.sf, rs.roots[i], width);
        Rat m = std::max(rat_abs(iv.lo), rat_abs(iv.hi));
        if (m > mx) mx = m;
    }
    return mx;
}

void AlgebraicReal::refine_to(const Rat& target_width) {
    if (exact()) return;
    iv = refine_interval(defining, iv, target_width);
}

int sign_at_algebraic(const ZPoly& S, AlgebraicReal& alpha) {
    if (S.is_zero()) return 0;
    if (alpha.exact()) return S.sign_at(alpha.iv.lo);
    // cheap path first: interval evaluation usually decides the sign
    for (int tries = 0; tries < 3; ++tries) {
        RatInterval val = S.eval(alpha.iv.as_rat_interval());
        if (sign(val.lo) > 0) return 1;
        if (sign(val.hi) < 0) return -1;
        alpha.refine_to(alpha.iv.width() / 16);
        if (alpha.iv.exact()) return S.sign_at(alpha.iv.lo);
    }
    // exact zero test: does S share alpha's root?
    ZPoly g = zpoly_gcd(S, alpha.defining);
    if (g.degree() > 0) {
        if (count_roots_in(g, alpha.iv.lo, alpha.iv.hi) > 0) return 0;
        if (g.sign_at(alpha.iv.lo) == 0 || g.sign_at(alpha.iv.hi) == 0) {
            // endpoint coincidence: push the enclosure off the shared root
            alpha.refine_to(alpha.iv.width() / 4);
            return sign_at_algebraic(S, alpha);
        }
    }
    for (;;) {
        RatInterval val = S.eval(alpha.iv.as_rat_interval());
        if (sign(val.lo) > 0) return 1;
        if (sign(val.hi) < 0) return -1;
        alpha.refine_to(alpha.iv.width() / 16);
        if (alpha.iv.exact()) return S.sign_at(alpha.iv.lo);
    }
}

} // namespace lgp
