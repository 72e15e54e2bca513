#include "lgp/rational.hpp"

#include <cmath>
#include <cstdlib>

namespace lgp {

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw input_error("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

Rat rat_from_string(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw input_error("empty rational literal");

    auto epos = s.find_first_of("eE");
    long exp10 = 0;
    if (epos != std::string::npos && s.find('/') == std::string::npos) {
        exp10 = std::strtol(s.c_str() + epos + 1, nullptr, 10);
        s = s.substr(0, epos);
    }
    Rat base;
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        long frac_len = static_cast<long>(s.size() - dot - 1);
        if (digits.empty() || digits == "-" || digits == "+")
            throw input_error("bad rational literal: " + text);
        Int num(digits, 10);
        Int den = 1;
        for (long i = 0; i < frac_len; ++i) den *= 10;
        base = make_rat(num, den);
    } else {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            Int num(s.substr(0, slash), 10);
            Int den(s.substr(slash + 1), 10);
            base = make_rat(num, den);
        } else {
            base = Rat(Int(s, 10));
        }
    }
    if (exp10 > 0)
        for (long i = 0; i < exp10; ++i) base *= 10;
    else
        for (long i = 0; i < -exp10; ++i) base /= 10;
    return base;
}

double to_double(const Rat& q) { return q.get_d(); }

Rat rat_from_double(double v) {
    if (!std::isfinite(v)) throw input_error("non-finite double");
    Rat q(v);
    q.canonicalize();
    return q;
}

int sign(const Rat& q) { return sgn(q); }

Rat rat_abs(const Rat& q) { return abs(q); }

Rat pow2(long k) {
    Rat q;
    if (k >= 0) {
        Int n = 1;
        mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
        q = Rat(n);
    } else {
        Int d = 1;
        mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
        q = make_rat(Int(1), d);
    }
    return q;
}

Rat largest_pow2_leq(const Rat& q) {
    if (sign(q) <= 0) throw input_error("largest_pow2_leq requires positive input");
    long k = 0;
    if (q >= 1) {
        while (pow2(k + 1) <= q) ++k;
    } else {
        while (pow2(k) > q) --k;
    }
    return pow2(k);
}

Rat shortest_dyadic_between(const Rat& a, const Rat& b) {
    if (!(a < b)) throw input_error("shortest_dyadic_between requires a < b");
    for (long k = 0;; ++k) {
        Rat scale = pow2(k);
        Rat lo = a * scale, hi = b * scale;
        Int mlo, mhi;
        mpz_fdiv_q(mlo.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
        mlo += 1;
        mpz_cdiv_q(mhi.get_mpz_t(), hi.get_num().get_mpz_t(), hi.get_den().get_mpz_t());
        mhi -= 1;
        if (mlo > mhi) continue;
        // pick the admissible integer nearest the interval midpoint
        Rat midk = (lo + hi) / 2;
        Int pick;
        mpz_fdiv_q(pick.get_mpz_t(), midk.get_num().get_mpz_t(), midk.get_den().get_mpz_t());
        if (pick < mlo) pick = mlo;
        if (pick > mhi) pick = mhi;
        return make_rat(pick, scale.get_num());
    }
}

Rat shortest_dyadic_near(double v, double tol) {
    if (tol <= 0) return rat_from_double(v);
    for (long k = 0;; ++k) {
        double scaled = std::ldexp(v, static_cast<int>(k));
        if (!std::isfinite(scaled)) return rat_from_double(v);
        double r = std::nearbyint(scaled);
        double cand = std::ldexp(r, -static_cast<int>(k));
        if (std::abs(cand - v) <= tol) {
            Rat q = rat_from_double(r) * pow2(-k);
            q.canonicalize();
            return q;
        }
        if (k > 80) return rat_from_double(v);
    }
}

namespace {
Int isqrt_floor(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}
} // namespace

Rat sqrt_lower(const Rat& q, unsigned bits) {
    if (sign(q) < 0) throw input_error("sqrt of negative rational");
    if (sign(q) == 0) return Rat(0);
    // sqrt(p/d) = sqrt(p*d)/d; scale by 4^m for precision
    Int p = q.get_num(), d = q.get_den();
    Int scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), 2 * bits);
    Int s = isqrt_floor(p * d * scale);
    Int den = d;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
    return make_rat(s, den);
}

Rat sqrt_upper(const Rat& q, unsigned bits) {
    if (sign(q) < 0) throw input_error("sqrt of negative rational");
    if (sign(q) == 0) return Rat(0);
    Int p = q.get_num(), d = q.get_den();
    Int scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), 2 * bits);
    Int s = isqrt_floor(p * d * scale) + 1;
    Int den = d;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
    return make_rat(s, den);
}

RatInterval::RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw input_error("interval with lo > hi");
}

int RatInterval::interval_sign() const {
    if (sign(lo) > 0) return 1;
    if (sign(hi) < 0) return -1;
    return 0;
}

RatInterval RatInterval::operator+(const RatInterval& o) const {
    return RatInterval(lo + o.lo, hi + o.hi);
}

RatInterval RatInterval::operator-(const RatInterval& o) const {
    return RatInterval(lo - o.hi, hi - o.lo);
}

RatInterval RatInterval::operator*(const RatInterval& o) const {
    Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    Rat mn = a, mx = a;
    for (const Rat* v : {&b, &c, &d}) {
        if (*v < mn) mn = *v;
        if (*v > mx) mx = *v;
    }
    return RatInterval(mn, mx);
}

RatInterval RatInterval::inverse() const {
    if (contains_zero()) throw input_error("interval inverse across zero");
    return RatInterval(1 / hi, 1 / lo);
}

Rat RatInterval::mag() const {
    Rat a = rat_abs(lo), b = rat_abs(hi);
    return a > b ? a : b;
}

Rat RatInterval::mig() const {
    if (contains_zero()) return Rat(0);
    Rat a = rat_abs(lo), b = rat_abs(hi);
    return a < b ? a : b;
}

RatInterval interval_sqrt(const RatInterval& v, unsigned bits) {
    Rat lo = sign(v.lo) <= 0 ? Rat(0) : sqrt_lower(v.lo, bits);
    if (sign(v.hi) < 0) throw input_error("sqrt of negative interval");
    return RatInterval(lo, sqrt_upper(v.hi, bits));
}

} // namespace lgp
