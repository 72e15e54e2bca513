#include "lgp/upoly.hpp"

#include <algorithm>
#include <cstdint>

namespace lgp {

void ZPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

ZPoly ZPoly::operator-() const {
    ZPoly r(*this);
    for (auto& v : r.c) v = -v;
    return r;
}

ZPoly ZPoly::operator+(const ZPoly& o) const {
    ZPoly r;
    r.c.resize(std::max(c.size(), o.c.size()));
    for (size_t i = 0; i < r.c.size(); ++i) {
        if (i < c.size()) r.c[i] += c[i];
        if (i < o.c.size()) r.c[i] += o.c[i];
    }
    r.trim();
    return r;
}

ZPoly ZPoly::operator-(const ZPoly& o) const { return *this + (-o); }

ZPoly ZPoly::operator*(const ZPoly& o) const {
    if (is_zero() || o.is_zero()) return ZPoly();
    ZPoly r;
    r.c.assign(c.size() + o.c.size() - 1, Int(0));
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        for (size_t j = 0; j < o.c.size(); ++j) {
            if (o.c[j] == 0) continue;
            r.c[i + j] += c[i] * o.c[j];
        }
    }
    r.trim();
    return r;
}

ZPoly ZPoly::operator*(const Int& k) const {
    if (k == 0) return ZPoly();
    ZPoly r(*this);
    for (auto& v : r.c) v *= k;
    return r;
}

ZPoly ZPoly::derivative() const {
    ZPoly r;
    if (c.size() <= 1) return r;
    r.c.resize(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) r.c[i - 1] = c[i] * static_cast<long>(i);
    r.trim();
    return r;
}

Int ZPoly::eval(const Int& x) const {
    Int acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Rat ZPoly::eval(const Rat& x) const {
    // scaled Horner: p(n/d) * d^deg stays integral
    if (c.empty()) return Rat(0);
    const Int& n = x.get_num();
    const Int& d = x.get_den();
    Int acc = 0;
    Int dpow = 1;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * n + *it * dpow;
        if (it + 1 != c.rend()) dpow *= d;
    }
    Int den = 1;
    mpz_pow_ui(den.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(degree()));
    return make_rat(acc, den);
}

double ZPoly::eval(double x) const {
    double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
}

RatInterval ZPoly::eval(const RatInterval& x) const {
    RatInterval acc{Rat(0)};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + Rat(*it);
    return acc;
}

int ZPoly::sign_at(const Rat& x) const {
    if (c.empty()) return 0;
    const Int& n = x.get_num();
    const Int& d = x.get_den();
    Int acc = 0;
    Int dpow = 1;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * n + *it * dpow;
        if (it + 1 != c.rend()) dpow *= d;
    }
    return sgn(acc);
}

Int ZPoly::content() const {
    Int g = 0;
    for (const auto& v : c) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

ZPoly ZPoly::primitive() const {
    Int g = content();
    if (g == 0 || g == 1) return *this;
    ZPoly r(*this);
    for (auto& v : r.c) v /= g;
    return r;
}

ZPoly zpoly_div_exact(const ZPoly& a, const ZPoly& b) {
    auto q = zpoly_try_div(a, b);
    if (!q) throw error("inexact polynomial division");
    return *q;
}

std::optional<ZPoly> zpoly_try_div(const ZPoly& a, const ZPoly& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return ZPoly();
    if (a.degree() < b.degree()) return std::nullopt;
    ZPoly rem(a);
    ZPoly q;
    q.c.assign(static_cast<size_t>(a.degree() - b.degree()) + 1, Int(0));
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
        int top = k + b.degree();
        if (top >= static_cast<int>(rem.c.size()) || rem.c[top] == 0) continue;
        Int qc, r;
        mpz_tdiv_qr(qc.get_mpz_t(), r.get_mpz_t(), rem.c[top].get_mpz_t(), b.lc().get_mpz_t());
        if (r != 0) return std::nullopt;
        q.c[static_cast<size_t>(k)] = qc;
        for (int i = 0; i <= b.degree(); ++i) rem.c[static_cast<size_t>(k + i)] -= qc * b.c[static_cast<size_t>(i)];
    }
    rem.trim();
    if (!rem.is_zero()) return std::nullopt;
    q.trim();
    return q;
}

ZPoly zpoly_prem(const ZPoly& a, const ZPoly& b) {
    if (b.is_zero()) throw input_error("pseudo-remainder by zero");
    ZPoly r(a);
    int db = b.degree();
    int steps = a.degree() - db + 1;
    if (steps <= 0) return r;
    const Int& lb = b.lc();
    while (!r.is_zero() && r.degree() >= db && steps > 0) {
        int dr = r.degree();
        Int rl = r.lc();
        for (auto& v : r.c) v *= lb;
        for (int i = 0; i <= db; ++i)
            r.c[static_cast<size_t>(dr - db + i)] -= rl * b.c[static_cast<size_t>(i)];
        r.trim();
        --steps;
    }
    // remaining multiplier applications to match lc(b)^(da-db+1)
    while (steps-- > 0)
        for (auto& v : r.c) v *= lb;
    return r;
}

// ---------------------------------------------------------------------------
// modular gcd

namespace {

constexpr std::uint64_t kPrimes[] = {
    2305843009213693951ull, // 2^61 - 1
    4611686018427387847ull, 4611686018427387817ull, 4611686018427387787ull,
    4611686018427387761ull, 4611686018427387751ull, 4611686018427387737ull,
    4611686018427387733ull, 4611686018427387709ull, 4611686018427387701ull,
};

struct Mod {
    std::uint64_t p;
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        if (s >= p || s < a) s -= p;
        return s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p - b; }
    std::uint64_t pw(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    std::uint64_t inv(std::uint64_t a) const { return pw(a, p - 2); }
};

std::uint64_t mod_of(const Int& v, const Mod& m) {
    Int r;
    mpz_mod_ui(r.get_mpz_t(), v.get_mpz_t(), m.p);
    return r.get_ui();
}

using MPolyVec = std::vector<std::uint64_t>;

MPolyVec to_mod(const ZPoly& a, const Mod& m) {
    MPolyVec r(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) r[i] = mod_of(a.c[i], m);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

MPolyVec mod_gcd(MPolyVec a, MPolyVec b, const Mod& m) {
    while (!b.empty()) {
        // a mod b
        std::uint64_t binv = m.inv(b.back());
        while (a.size() >= b.size() && !a.empty()) {
            std::uint64_t q = m.mul(a.back(), binv);
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) a[off + i] = m.sub(a[off + i], m.mul(q, b[i]));
            while (!a.empty() && a.back() == 0) a.pop_back();
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        std::uint64_t ainv = m.inv(a.back());
        for (auto& v : a) v = m.mul(v, ainv);
    }
    return a;
}

} // namespace

ZPoly zpoly_gcd(const ZPoly& a, const ZPoly& b) {
    if (a.is_zero()) return b.primitive();
    if (b.is_zero()) return a.primitive();
    ZPoly A = a.primitive(), B = b.primitive();
    if (A.degree() < B.degree()) std::swap(A, B);
    if (B.degree() == 0) {
        ZPoly one;
        one.c = {Int(1)};
        return one;
    }
    Int lg;
    mpz_gcd(lg.get_mpz_t(), A.lc().get_mpz_t(), B.lc().get_mpz_t());

    // CRT accumulation of lg * monic-gcd images
    std::vector<Int> acc;   // symmetric residues
    Int modulus = 0;
    int best_deg = -1;
    for (size_t pi = 0;; ++pi) {
        if (pi >= std::size(kPrimes))
            throw error("modular gcd ran out of primes"); // would need bigger prime pool
        Mod m{kPrimes[pi]};
        if (mod_of(A.lc(), m) == 0 || mod_of(B.lc(), m) == 0) continue;
        MPolyVec g = mod_gcd(to_mod(A, m), to_mod(B, m), m);
        int dg = static_cast<int>(g.size()) - 1;
        if (dg == 0) {
            ZPoly one;
            one.c = {Int(1)};
            return one;
        }
        if (best_deg == -1 || dg < best_deg) {
            best_deg = dg;
            acc.clear();
            modulus = 0;
        } else if (dg > best_deg) {
            continue; // unlucky prime
        }
        std::uint64_t lgm = mod_of(lg, m);
        std::vector<Int> img(g.size());
        for (size_t i = 0; i < g.size(); ++i) img[i] = Int(m.mul(g[i], lgm));
        if (modulus == 0) {
            acc = img;
            modulus = Int(static_cast<unsigned long>(m.p));
        } else {
            // CRT combine
            Int newmod = modulus * Int(static_cast<unsigned long>(m.p));
            Int inv;
            Int pm(static_cast<unsigned long>(m.p));
            mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), pm.get_mpz_t());
            for (size_t i = 0; i < acc.size(); ++i) {
                Int r1 = acc[i] % modulus;
                if (r1 < 0) r1 += modulus;
                Int r2 = i < img.size() ? img[i] : Int(0);
                Int diff = ((r2 - r1) % pm + pm) % pm;
                acc[i] = r1 + modulus * ((diff * inv) % pm);
            }
            modulus = newmod;
        }
        // symmetric lift and divisibility test
        ZPoly cand;
        cand.c.resize(acc.size());
        Int half = modulus / 2;
        for (size_t i = 0; i < acc.size(); ++i) {
            Int v = acc[i] % modulus;
            if (v < 0) v += modulus;
            if (v > half) v -= modulus;
            cand.c[i] = v;
        }
        cand.trim();
        if (cand.is_zero()) continue;
        ZPoly candp = cand.primitive();
        if (zpoly_try_div(A, candp) && zpoly_try_div(B, candp)) {
            if (sgn(candp.lc()) < 0) candp = -candp;
            return candp;
        }
    }
}

ZPoly zpoly_squarefree(const ZPoly& p) {
    if (p.is_zero()) return p;
    ZPoly g = zpoly_gcd(p, p.derivative());
    ZPoly r = zpoly_div_exact(p.primitive(), g).primitive();
    if (sgn(r.lc()) < 0) r = -r;
    return r;
}

Int zpoly_resultant(const ZPoly& a, const ZPoly& b) {
    if (a.is_zero() || b.is_zero()) return Int(0);
    ZPoly A = a, B = b;
    int s = 1;
    if (A.degree() < B.degree()) {
        if ((A.degree() & 1) && (B.degree() & 1)) s = -s;
        std::swap(A, B);
    }
    if (B.degree() == 0) {
        Int r;
        mpz_pow_ui(r.get_mpz_t(), B.c[0].get_mpz_t(), static_cast<unsigned long>(A.degree()));
        return s > 0 ? r : Int(-r);
    }
    Int ca = A.content(), cb = B.content();
    A = A.primitive();
    B = B.primitive();
    Int t, tmp;
    mpz_pow_ui(t.get_mpz_t(), ca.get_mpz_t(), static_cast<unsigned long>(B.degree()));
    mpz_pow_ui(tmp.get_mpz_t(), cb.get_mpz_t(), static_cast<unsigned long>(A.degree()));
    t *= tmp;

    Int g = 1, h = 1;
    for (;;) {
        int da = A.degree(), db = B.degree();
        int delta = da - db;
        if ((da & 1) && (db & 1)) s = -s;
        ZPoly R = zpoly_prem(A, B);
        if (R.is_zero()) {
            if (db > 0) return Int(0);
        }
        A = B;
        // B = R / (g * h^delta)
        Int div = g;
        for (int i = 0; i < delta; ++i) div *= h;
        if (div != 1) {
            for (auto& v : R.c) {
                Int q, rr;
                mpz_tdiv_qr(q.get_mpz_t(), rr.get_mpz_t(), v.get_mpz_t(), div.get_mpz_t());
                if (rr != 0) throw error("subresultant division not exact");
                v = q;
            }
        }
        B = R;
        g = A.lc();
        // h = h^(1-delta) * g^delta
        if (delta > 0) {
            Int gp;
            mpz_pow_ui(gp.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(delta));
            if (delta == 1) {
                h = gp;
            } else {
                Int hp;
                mpz_pow_ui(hp.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta - 1));
                h = gp / hp;
            }
        }
        if (B.is_zero()) return Int(0);
        if (B.degree() == 0) {
            // res = s*t * lc(B)^deg(A) / h^(deg(A)-1)
            Int num;
            mpz_pow_ui(num.get_mpz_t(), B.c[0].get_mpz_t(), static_cast<unsigned long>(A.degree()));
            Int den;
            mpz_pow_ui(den.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(A.degree() - 1));
            Int r = num / den;
            r *= t;
            return s > 0 ? r : Int(-r);
        }
    }
}

ZPoly zpoly_from_mpoly(const MPoly& p, Var v, Rat* scale_out) {
    std::vector<Rat> cs(static_cast<size_t>(std::max(p.degree(v) + 1, 1)), Rat(0));
    for (const auto& [k, c] : p.terms()) {
        ExpKey rest = exp_set(k, v, 0);
        if (rest != 0) throw input_error("polynomial is not univariate in the requested variable");
        cs[exp_of(k, v)] = c;
    }
    // clear denominators
    Int den = 1;
    for (const auto& q : cs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
    ZPoly r;
    r.c.resize(cs.size());
    for (size_t i = 0; i < cs.size(); ++i) {
        Rat scaled = cs[i] * Rat(den);
        r.c[i] = scaled.get_num();
    }
    r.trim();
    if (scale_out) *scale_out = make_rat(Int(1), den);
    return r;
}

MPoly mpoly_from_zpoly(const ZPoly& p, Var v) {
    MPoly r(Rat(0), MPoly::mask_of({v}));
    for (size_t i = 0; i < p.c.size(); ++i) {
        if (p.c[i] == 0) continue;
        r.add_term(exp_set(0, v, static_cast<unsigned>(i)), Rat(p.c[i]));
    }
    return r;
}

// ---------------------------------------------------------------------------

void QPoly::trim() {
    while (!c.empty() && sign(c.back()) == 0) c.pop_back();
}

QPoly QPoly::operator+(const QPoly& o) const {
    QPoly r;
    r.c.resize(std::max(c.size(), o.c.size()), Rat(0));
    for (size_t i = 0; i < r.c.size(); ++i) {
        if (i < c.size()) r.c[i] += c[i];
        if (i < o.c.size()) r.c[i] += o.c[i];
    }
    r.trim();
    return r;
}

QPoly QPoly::operator-(const QPoly& o) const { return *this + o * Rat(-1); }

QPoly QPoly::operator*(const QPoly& o) const {
    if (is_zero() || o.is_zero()) return QPoly();
    QPoly r;
    r.c.assign(c.size() + o.c.size() - 1, Rat(0));
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    r.trim();
    return r;
}

QPoly QPoly::operator*(const Rat& k) const {
    if (sign(k) == 0) return QPoly();
    QPoly r(*this);
    for (auto& v : r.c) v *= k;
    return r;
}

QPoly QPoly::derivative() const {
    QPoly r;
    if (c.size() <= 1) return r;
    r.c.resize(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) r.c[i - 1] = c[i] * Rat(static_cast<long>(i));
    r.trim();
    return r;
}

Rat QPoly::eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double QPoly::eval(double x) const {
    double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + to_double(*it);
    return acc;
}

QPoly QPoly::rem(const QPoly& b) const {
    if (b.is_zero()) throw input_error("remainder by zero polynomial");
    QPoly r(*this);
    while (!r.is_zero() && r.degree() >= b.degree()) {
        Rat q = r.c.back() / b.c.back();
        int off = r.degree() - b.degree();
        for (int i = 0; i <= b.degree(); ++i)
            r.c[static_cast<size_t>(off + i)] -= q * b.c[static_cast<size_t>(i)];
        r.trim();
    }
    return r;
}

QPoly qpoly_from_zpoly(const ZPoly& p) {
    QPoly r;
    r.c.resize(p.c.size());
    for (size_t i = 0; i < p.c.size(); ++i) r.c[i] = Rat(p.c[i]);
    r.trim();
    return r;
}

ZPoly zpoly_from_qpoly(const QPoly& p) {
    Int den = 1;
    for (const auto& q : p.c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
    ZPoly r;
    r.c.resize(p.c.size());
    for (size_t i = 0; i < p.c.size(); ++i) {
        Rat scaled = p.c[i] * Rat(den);
        r.c[i] = scaled.get_num();
    }
    r.trim();
    return r.primitive();
}

} // namespace lgp
