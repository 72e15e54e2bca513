#include "lgp/resultant.hpp"

#include <algorithm>

#include "lgp/upoly.hpp"

namespace lgp {

namespace {

// polynomial viewed as dense coefficient vector in one variable
using CoeffVec = std::vector<MPoly>;

CoeffVec coeffs(const MPoly& p, Var v) { return p.coeffs_in(v); }

void trim(CoeffVec& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

int cdeg(const CoeffVec& a) { return static_cast<int>(a.size()) - 1; }

MPoly assemble(const CoeffVec& a, Var v) { return MPoly::from_coeffs(a, v); }

CoeffVec cmul_scalar(const CoeffVec& a, const MPoly& s) {
    CoeffVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    trim(r);
    return r;
}

CoeffVec cdiv_scalar_exact(const CoeffVec& a, const MPoly& s) {
    CoeffVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mpoly_div_exact(a[i], s);
    trim(r);
    return r;
}

// lc(b)^(deg a - deg b + 1) a = q b + rem
CoeffVec cprem(const CoeffVec& a, const CoeffVec& b) {
    CoeffVec r = a;
    trim(r);
    int db = cdeg(b);
    if (db < 0) throw input_error("pseudo-remainder by zero");
    const MPoly& lb = b.back();
    int steps = cdeg(r) - db + 1;
    if (steps <= 0) return r;
    while (cdeg(r) >= db && steps > 0) {
        MPoly rl = r.back();
        for (auto& c : r) c = c * lb;
        int off = cdeg(r) - db;
        for (int i = 0; i <= db; ++i)
            r[static_cast<size_t>(off + i)] -= rl * b[static_cast<size_t>(i)];
        trim(r);
        --steps;
        if (r.empty()) break;
    }
    while (steps-- > 0)
        for (auto& c : r) c = c * lb;
    trim(r);
    return r;
}

MPoly pow_mpoly(const MPoly& p, unsigned e) { return p.pow(e); }

bool is_one_like(const MPoly& p) { return p.is_constant() && !p.is_zero(); }

// ---------------------------------------------------------------------------
// interpolation path for large bivariate resultants

bool bivariate_in(const MPoly& p, const MPoly& q, Var v, Var& other) {
    unsigned seen = 0;
    for (int i = 0; i < kNumVars; ++i) {
        Var w = static_cast<Var>(i);
        if (p.depends_on(w) || q.depends_on(w)) seen |= 1u << i;
    }
    seen &= ~(1u << static_cast<int>(v));
    if (__builtin_popcount(seen) != 1) return false;
    other = static_cast<Var>(__builtin_ctz(seen));
    return true;
}

MPoly resultant_interpolated(const MPoly& p, const MPoly& q, Var v, Var u) {
    const int dvp = p.degree(v), dvq = q.degree(v);
    const int dup = p.degree(u), duq = q.degree(u);
    const int bound = dup * dvq + duq * dvp; // degree bound in u
    MPoly lcp = p.leading_coeff(v), lcq = q.leading_coeff(v);

    MPoly umask(Rat(0), MPoly::mask_of({u, v}));
    auto specialize = [&](const Rat& u0, const MPoly& g) {
        MPoly s = eval(g + umask, {{u, u0}});
        return zpoly_from_mpoly(s, v);
    };
    auto lc_at = [&](const MPoly& g, const Rat& u0) {
        return sign(eval(g + MPoly(Rat(0), MPoly::mask_of({u})), {{u, u0}}).constant_value());
    };

    // Newton divided differences at integer nodes (skipping lc roots)
    std::vector<Rat> xs, coef;
    long k = 0;
    while (static_cast<int>(xs.size()) <= bound) {
        Rat u0(k);
        k = k <= 0 ? -k + 1 : -k; // 0, 1, -1, 2, -2, ...
        if (lc_at(lcp, u0) == 0 || lc_at(lcq, u0) == 0) continue;
        ZPoly a = specialize(u0, p), b = specialize(u0, q);
        Rat val(zpoly_resultant(a, b));
        Rat acc(0), prod(1);
        for (size_t i = 0; i < xs.size(); ++i) {
            acc += coef[i] * prod;
            prod *= (u0 - xs[i]);
        }
        xs.push_back(u0);
        coef.push_back((val - acc) / prod);
    }
    // expand Newton form into a polynomial in u
    QPoly result;
    QPoly basis;
    basis.c = {Rat(1)};
    for (size_t i = 0; i < xs.size(); ++i) {
        result = result + basis * coef[i];
        QPoly lin;
        lin.c = {-xs[i], Rat(1)};
        basis = basis * lin;
    }
    MPoly out(Rat(0), MPoly::mask_of({u}));
    for (size_t i = 0; i < result.c.size(); ++i)
        if (sign(result.c[i]) != 0) out.add_term(exp_set(0, u, static_cast<unsigned>(i)), result.c[i]);
    return out;
}

// subresultant PRS resultant over MPoly coefficients (Ducos-free classic form)
MPoly resultant_prs(const MPoly& P0, const MPoly& Q0, Var v) {
    CoeffVec A = coeffs(P0, v), B = coeffs(Q0, v);
    trim(A);
    trim(B);
    int s = 1;
    if (cdeg(A) < cdeg(B)) {
        if ((cdeg(A) & 1) && (cdeg(B) & 1)) s = -s;
        std::swap(A, B);
    }
    if (cdeg(B) < 0) return MPoly(); // zero input
    if (cdeg(B) == 0) {
        MPoly r = pow_mpoly(B[0], static_cast<unsigned>(cdeg(A)));
        return s > 0 ? r : -r;
    }
    // content removal w.r.t. v
    MPoly PA = assemble(A, v), PB = assemble(B, v);
    MPoly ca = content_in(PA, v), cb = content_in(PB, v);
    MPoly t = pow_mpoly(ca, static_cast<unsigned>(cdeg(B))) *
              pow_mpoly(cb, static_cast<unsigned>(cdeg(A)));
    A = coeffs(mpoly_div_exact(PA, ca), v);
    B = coeffs(mpoly_div_exact(PB, cb), v);

    MPoly g(Rat(1)), h(Rat(1));
    for (;;) {
        int da = cdeg(A), db = cdeg(B);
        int delta = da - db;
        if ((da & 1) && (db & 1)) s = -s;
        CoeffVec R = cprem(A, B);
        A = B;
        MPoly div = g;
        for (int i = 0; i < delta; ++i) div = div * h;
        if (!(is_one_like(div) && div.constant_value() == 1)) R = cdiv_scalar_exact(R, div);
        B = R;
        g = A.back();
        if (delta > 0) {
            MPoly gp = pow_mpoly(g, static_cast<unsigned>(delta));
            if (delta == 1)
                h = gp;
            else
                h = mpoly_div_exact(gp, pow_mpoly(h, static_cast<unsigned>(delta - 1)));
        }
        if (B.empty()) return MPoly(); // common factor: resultant vanishes
        if (cdeg(B) == 0) {
            MPoly num = pow_mpoly(B[0], static_cast<unsigned>(cdeg(A)));
            MPoly den = pow_mpoly(h, static_cast<unsigned>(cdeg(A) - 1));
            MPoly r = t * mpoly_div_exact(num, den);
            return s > 0 ? r : -r;
        }
    }
}

} // namespace

// ---------------------------------------------------------------------------
// division

bool mpoly_divides(const MPoly& a, const MPoly& b, MPoly* qout) {
    if (b.is_zero()) return a.is_zero();
    if (a.is_zero()) {
        if (qout) *qout = MPoly();
        return true;
    }
    if (b.is_constant()) {
        if (qout) *qout = a * (Rat(1) / b.constant_value());
        return true;
    }
    // main variable: highest declared variable occurring in b
    Var v = Var::x;
    for (int i = 0; i < kNumVars; ++i)
        if (b.depends_on(static_cast<Var>(i))) {
            v = static_cast<Var>(i);
            break;
        }
    CoeffVec A = coeffs(a, v), B = coeffs(b, v);
    trim(A);
    trim(B);
    if (cdeg(A) < cdeg(B)) return false;
    CoeffVec Q(static_cast<size_t>(cdeg(A) - cdeg(B)) + 1);
    const MPoly& lb = B.back();
    while (cdeg(A) >= cdeg(B)) {
        MPoly qc;
        if (!mpoly_divides(A.back(), lb, &qc)) return false;
        int off = cdeg(A) - cdeg(B);
        Q[static_cast<size_t>(off)] = qc;
        for (int i = 0; i <= cdeg(B); ++i)
            A[static_cast<size_t>(off + i)] -= qc * B[static_cast<size_t>(i)];
        trim(A);
        if (A.empty()) break;
    }
    if (!A.empty()) return false;
    if (qout) *qout = assemble(Q, v);
    return true;
}

MPoly mpoly_div_exact(const MPoly& a, const MPoly& b) {
    MPoly q;
    if (!mpoly_divides(a, b, &q)) throw error("inexact polynomial division");
    return q;
}

// ---------------------------------------------------------------------------
// gcd

MPoly normalize_primitive(const MPoly& p) {
    if (p.is_zero()) return p;
    Int num_gcd = 0, den_lcm = 1;
    for (const auto& [k, c] : p.terms()) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Rat scale = make_rat(den_lcm, num_gcd);
    MPoly r = p * scale;
    if (sign(r.leading_term().second) < 0) r = -r;
    return r;
}

MPoly content_in(const MPoly& p, Var v) {
    CoeffVec cs = coeffs(p, v);
    MPoly g;
    for (const auto& c : cs) {
        g = gcd_poly(g, c);
        if (is_one_like(g) && g.constant_value() == 1) break;
    }
    return g;
}

MPoly primitive_part_in(const MPoly& p, Var v) {
    if (p.is_zero()) return p;
    return mpoly_div_exact(p, content_in(p, v));
}

namespace {

// gcd of primitive polynomials with positive degree in v (PRS on primitive parts)
MPoly prs_gcd(const MPoly& p, const MPoly& q, Var v) {
    CoeffVec A = coeffs(p, v), B = coeffs(q, v);
    trim(A);
    trim(B);
    if (cdeg(A) < cdeg(B)) std::swap(A, B);
    MPoly g(Rat(1)), h(Rat(1));
    for (;;) {
        int da = cdeg(A), db = cdeg(B);
        int delta = da - db;
        CoeffVec R = cprem(A, B);
        if (R.empty()) {
            MPoly last = assemble(B, v);
            return normalize_primitive(primitive_part_in(last, v));
        }
        A = B;
        MPoly div = g;
        for (int i = 0; i < delta; ++i) div = div * h;
        R = cdiv_scalar_exact(R, div);
        B = R;
        g = A.back();
        if (delta > 0) {
            MPoly gp = pow_mpoly(g, static_cast<unsigned>(delta));
            h = delta == 1 ? gp : mpoly_div_exact(gp, pow_mpoly(h, static_cast<unsigned>(delta - 1)));
        }
        if (cdeg(B) == 0) return MPoly(Rat(1));
    }
}

} // namespace

MPoly gcd_poly(const MPoly& p, const MPoly& q) {
    if (p.is_zero()) return normalize_primitive(q);
    if (q.is_zero()) return normalize_primitive(p);
    if (p.is_constant() || q.is_constant()) return MPoly(Rat(1));

    // univariate-in-the-same-variable fast path through modular arithmetic
    Var vp = Var::x, vq = Var::x;
    int nv_p = 0, nv_q = 0;
    for (int i = 0; i < kNumVars; ++i) {
        Var w = static_cast<Var>(i);
        if (p.depends_on(w)) {
            vp = w;
            ++nv_p;
        }
        if (q.depends_on(w)) {
            vq = w;
            ++nv_q;
        }
    }
    if (nv_p == 1 && nv_q == 1 && vp == vq) {
        ZPoly a = zpoly_from_mpoly(p, vp), b = zpoly_from_mpoly(q, vp);
        return normalize_primitive(mpoly_from_zpoly(zpoly_gcd(a, b), vp));
    }

    // main variable: lowest-index variable occurring in either
    Var v = Var::x;
    for (int i = 0; i < kNumVars; ++i) {
        Var w = static_cast<Var>(i);
        if (p.depends_on(w) || q.depends_on(w)) {
            v = w;
            break;
        }
    }
    if (!p.depends_on(v)) return gcd_poly(content_in(q, v), p);
    if (!q.depends_on(v)) return gcd_poly(content_in(p, v), q);

    MPoly cp = content_in(p, v), cq = content_in(q, v);
    MPoly c = gcd_poly(cp, cq);
    MPoly G = prs_gcd(mpoly_div_exact(p, cp), mpoly_div_exact(q, cq), v);
    return normalize_primitive(c * G);
}

MPoly squarefree_part(const MPoly& p) {
    if (p.is_zero()) throw input_error("squarefree part of zero polynomial");
    if (p.is_constant()) return MPoly(Rat(1));
    Var v = Var::x;
    for (int i = 0; i < kNumVars; ++i)
        if (p.depends_on(static_cast<Var>(i))) {
            v = static_cast<Var>(i);
            break;
        }
    MPoly c = content_in(p, v);
    MPoly P = mpoly_div_exact(p, c);
    MPoly G = gcd_poly(P, partial_derivative(P + MPoly(Rat(0), MPoly::mask_of({v})), v));
    MPoly r = mpoly_div_exact(P, G);
    MPoly rest = c.is_constant() ? MPoly(Rat(1)) : squarefree_part(c);
    return normalize_primitive(rest * r);
}

// ---------------------------------------------------------------------------
// resultant

MPoly resultant(const MPoly& p, const MPoly& q, Var v) {
    if (p.is_zero() || q.is_zero()) throw input_error("resultant of zero polynomial");
    int dp = p.degree(v), dq = q.degree(v);
    if (dp <= 0 && dq <= 0) throw input_error("no elimination variable");
    if (dp == 0) return p.pow(static_cast<unsigned>(dq));
    if (dq == 0) return q.pow(static_cast<unsigned>(dp));

    // rational scaling to integer-primitive inputs
    MPoly P = p, Q = q;
    auto split_scale = [](MPoly& f) {
        Int num_gcd = 0, den_lcm = 1;
        for (const auto& [k, c] : f.terms()) {
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        }
        Rat content = make_rat(num_gcd, den_lcm);
        if (sign(f.leading_term().second) < 0) content = -content;
        f = f * (Rat(1) / content);
        return content;
    };
    Rat sp = split_scale(P), sq = split_scale(Q);
    Rat scale(1);
    {
        Rat a(1), b(1);
        for (int i = 0; i < dq; ++i) a *= sp;
        for (int i = 0; i < dp; ++i) b *= sq;
        scale = a * b;
    }

    Var other;
    MPoly core;
    if (bivariate_in(P, Q, v, other) && static_cast<long>(dp) * dq >= 60) {
        core = resultant_interpolated(P, Q, v, other);
    } else {
        core = resultant_prs(P, Q, v);
    }
    return core * scale;
}

// ---------------------------------------------------------------------------
// subresultant chain

std::map<int, MPoly> subresultant_chain(const MPoly& p, const MPoly& q, Var v) {
    std::map<int, MPoly> S;
    MPoly P = p, Q = q;
    if (P.degree(v) < Q.degree(v)) std::swap(P, Q);
    int n = P.degree(v), m = Q.degree(v);
    if (m < 0) return S; // one input zero: empty chain
    if (n <= 0) return S;
    S[n] = P;
    if (n > m) {
        MPoly lq = Q.leading_coeff(v);
        S[m] = pow_mpoly(lq, static_cast<unsigned>(n - m - 1)) * Q;
    }
    if (m == 0) {
        // resultant = lc(Q)^n when Q is constant in v
        S[0] = Q.pow(static_cast<unsigned>(n));
        return S;
    }

    CoeffVec A = coeffs(Q, v);
    MPoly s = pow_mpoly(Q.leading_coeff(v), static_cast<unsigned>(n - m));
    CoeffVec B = cprem(coeffs(P, v), A);
    for (;;) {
        trim(B);
        if (B.empty()) break;
        int d = cdeg(A), e = cdeg(B);
        S[d - 1] = assemble(B, v);
        int delta = d - e;
        CoeffVec C;
        if (delta > 1) {
            // S_e = lc(B)^(delta-1) B / s^(delta-1)
            MPoly num = pow_mpoly(B.back(), static_cast<unsigned>(delta - 1));
            MPoly den = pow_mpoly(s, static_cast<unsigned>(delta - 1));
            C = cdiv_scalar_exact(cmul_scalar(B, num), den);
            S[e] = assemble(C, v);
        } else {
            C = B;
        }
        if (e == 0) break;
        CoeffVec R = cprem(A, B);
        MPoly den = pow_mpoly(s, static_cast<unsigned>(delta)) * A.back();
        B = cdiv_scalar_exact(R, den);
        A = C;
        s = A.back();
    }
    return S;
}

MPoly principal_subresultant(const std::map<int, MPoly>& chain, int j, Var v) {
    auto it = chain.find(j);
    if (it == chain.end()) return MPoly();
    auto cs = it->second.coeffs_in(v);
    if (static_cast<int>(cs.size()) <= j) return MPoly();
    return cs[static_cast<size_t>(j)];
}

} // namespace lgp
