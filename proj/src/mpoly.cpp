#include "lgp/mpoly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace lgp {

const char* var_name(Var v) {
    switch (v) {
        case Var::x: return "x";
        case Var::y: return "y";
        case Var::z: return "z";
        case Var::t: return "t";
    }
    return "?";
}

Var var_from_name(char c) {
    switch (c) {
        case 'x': return Var::x;
        case 'y': return Var::y;
        case 'z': return Var::z;
        case 't': return Var::t;
    }
    throw input_error(std::string("unknown variable '") + c + "'");
}

MPoly::MPoly(Rat constant, unsigned vars_mask) : vars_mask_(vars_mask) {
    if (sign(constant) != 0) terms_[0] = std::move(constant);
}

MPoly MPoly::variable(Var v) {
    MPoly p;
    p.vars_mask_ = 1u << static_cast<int>(v);
    p.terms_[exp_set(0, v, 1)] = Rat(1);
    return p;
}

unsigned MPoly::mask_of(const std::vector<Var>& vars) {
    unsigned m = 0;
    for (Var v : vars) m |= 1u << static_cast<int>(v);
    return m;
}

std::vector<Var> MPoly::variables() const {
    std::vector<Var> out;
    for (int i = 0; i < kNumVars; ++i)
        if ((vars_mask_ >> i) & 1u) out.push_back(static_cast<Var>(i));
    return out;
}

bool MPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

Rat MPoly::constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant()) throw input_error("constant_value on non-constant polynomial");
    return terms_.begin()->second;
}

int MPoly::degree(Var v) const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, static_cast<int>(exp_of(k, v)));
    return d;
}

int MPoly::total_degree() const {
    int d = -1;
    for (const auto& [k, c] : terms_) {
        int s = 0;
        for (int i = 0; i < kNumVars; ++i) s += static_cast<int>(exp_of(k, static_cast<Var>(i)));
        d = std::max(d, s);
    }
    return d;
}

void MPoly::add_term(ExpKey k, const Rat& c) {
    if (sign(c) == 0) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
    } else {
        it->second += c;
        if (sign(it->second) == 0) terms_.erase(it);
    }
}

MPoly MPoly::operator-() const {
    MPoly r(*this);
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

MPoly MPoly::operator+(const MPoly& o) const {
    MPoly r(*this);
    r.vars_mask_ |= o.vars_mask_;
    for (const auto& [k, c] : o.terms_) r.add_term(k, c);
    return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
    MPoly r(*this);
    r.vars_mask_ |= o.vars_mask_;
    for (const auto& [k, c] : o.terms_) r.add_term(k, -c);
    return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
    MPoly r;
    r.vars_mask_ = vars_mask_ | o.vars_mask_;
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_) r.add_term(ka + kb, ca * cb);
    return r;
}

MPoly MPoly::operator*(const Rat& c) const {
    MPoly r;
    r.vars_mask_ = vars_mask_;
    if (sign(c) == 0) return r;
    for (const auto& [k, v] : terms_) r.terms_[k] = v * c;
    return r;
}

MPoly operator*(const Rat& c, const MPoly& p) { return p * c; }

MPoly MPoly::pow(unsigned e) const {
    MPoly r(Rat(1), vars_mask_);
    MPoly base(*this);
    while (e) {
        if (e & 1u) r *= base;
        base = (e >>= 1) ? base * base : base;
    }
    return r;
}

std::vector<MPoly> MPoly::coeffs_in(Var v) const {
    int d = degree(v);
    std::vector<MPoly> cs(static_cast<size_t>(std::max(d + 1, 1)));
    unsigned rest = vars_mask_ & ~(1u << static_cast<int>(v));
    for (auto& c : cs) c.vars_mask_ = rest;
    for (const auto& [k, c] : terms_) {
        unsigned e = exp_of(k, v);
        cs[e].add_term(exp_set(k, v, 0), c);
    }
    return cs;
}

MPoly MPoly::from_coeffs(const std::vector<MPoly>& cs, Var v) {
    MPoly r;
    for (size_t e = 0; e < cs.size(); ++e) {
        r.vars_mask_ |= cs[e].vars_mask_ | (1u << static_cast<int>(v));
        for (const auto& [k, c] : cs[e].terms_) r.add_term(exp_set(k, v, static_cast<unsigned>(e)), c);
    }
    return r;
}

MPoly MPoly::leading_coeff(Var v) const {
    if (is_zero()) return MPoly();
    auto cs = coeffs_in(v);
    return cs.back();
}

std::pair<ExpKey, Rat> MPoly::leading_term() const {
    if (terms_.empty()) throw input_error("leading_term of zero polynomial");
    auto it = terms_.rbegin();
    return {it->first, it->second};
}

std::string MPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Rat& c = it->second;
        Rat a = rat_abs(c);
        if (first) {
            if (sign(c) < 0) os << "-";
            first = false;
        } else {
            os << (sign(c) < 0 ? " - " : " + ");
        }
        bool has_var = it->first != 0;
        if (!has_var || a != 1) {
            os << a.get_str();
            if (has_var) os << "*";
        }
        bool inner_first = true;
        for (int i = 0; i < kNumVars; ++i) {
            unsigned e = exp_of(it->first, static_cast<Var>(i));
            if (!e) continue;
            if (!inner_first) os << "*";
            inner_first = false;
            os << var_name(static_cast<Var>(i));
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    unsigned allowed_mask;

    explicit Parser(const std::string& text, unsigned mask) : s(text), allowed_mask(mask) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw input_error("syntax error at position " + std::to_string(pos) + ": " + what);
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    Int integer() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        return Int(s.substr(start, pos - start), 10);
    }

    MPoly expr() {
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        MPoly acc = term();
        if (neg) acc = -acc;
        for (;;) {
            char c = peek();
            if (c == '+') {
                ++pos;
                acc += term();
            } else if (c == '-') {
                ++pos;
                acc -= term();
            } else {
                break;
            }
        }
        return acc;
    }

    MPoly term() {
        MPoly acc = factor();
        while (peek() == '*') {
            ++pos;
            acc *= factor();
        }
        return acc;
    }

    MPoly factor() {
        MPoly base = atom();
        if (peek() == '^') {
            ++pos;
            Int e = integer();
            if (e < 0 || e > 4096) fail("exponent out of range");
            base = base.pow(static_cast<unsigned>(e.get_ui()));
        }
        return base;
    }

    MPoly atom() {
        char c = peek();
        if (c == '(') {
            ++pos;
            MPoly inner = expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Int num = integer();
            if (peek() == '/') {
                ++pos;
                Int den = integer();
                if (den == 0) fail("zero denominator");
                return MPoly(make_rat(num, den), allowed_mask);
            }
            return MPoly(Rat(num), allowed_mask);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            Var v = var_from_name(c); // throws for unknown letters
            if (!((allowed_mask >> static_cast<int>(v)) & 1u))
                throw input_error(std::string("unknown variable '") + c + "' at position " +
                                  std::to_string(pos));
            ++pos;
            return MPoly::variable(v);
        }
        fail("unexpected character");
    }
};

} // namespace

MPoly parse_poly(const std::string& text, const std::vector<Var>& vars) {
    Parser p(text, MPoly::mask_of(vars));
    MPoly r = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    MPoly withmask = r + MPoly(Rat(0), MPoly::mask_of(vars));
    return withmask;
}

// ---------------------------------------------------------------------------
// evaluation / calculus

MPoly eval(const MPoly& p, const std::map<Var, Rat>& point) {
    for (const auto& [v, q] : point)
        if (!p.declares(v)) throw input_error(std::string("assigned variable ") + var_name(v) +
                                              " not declared by polynomial");
    unsigned rest = p.vars_mask();
    for (const auto& [v, q] : point) rest &= ~(1u << static_cast<int>(v));
    MPoly r(Rat(0), rest);
    for (const auto& [k, c] : p.terms()) {
        Rat coeff = c;
        ExpKey kk = k;
        for (const auto& [v, q] : point) {
            unsigned e = exp_of(k, v);
            if (e) {
                Rat pw = q;
                Rat acc(1);
                unsigned ee = e;
                while (ee) {
                    if (ee & 1u) acc *= pw;
                    ee >>= 1;
                    if (ee) pw *= pw;
                }
                coeff *= acc;
            }
            kk = exp_set(kk, v, 0);
        }
        r.add_term(kk, coeff);
    }
    return r;
}

double eval_double(const MPoly& p, double x, double y, double z, double t) {
    double coord[4] = {x, y, z, t};
    int maxdeg[4] = {0, 0, 0, 0};
    for (const auto& [k, c] : p.terms())
        for (int i = 0; i < 4; ++i)
            maxdeg[i] = std::max(maxdeg[i], static_cast<int>(exp_of(k, static_cast<Var>(i))));
    std::vector<double> pows[4];
    for (int i = 0; i < 4; ++i) {
        pows[i].resize(static_cast<size_t>(maxdeg[i]) + 1);
        pows[i][0] = 1.0;
        for (int e = 1; e <= maxdeg[i]; ++e) pows[i][e] = pows[i][e - 1] * coord[i];
    }
    double acc = 0;
    for (const auto& [k, c] : p.terms()) {
        double term = to_double(c);
        for (int i = 0; i < 4; ++i) term *= pows[i][exp_of(k, static_cast<Var>(i))];
        acc += term;
    }
    return acc;
}

RatInterval eval_interval(const MPoly& p, const std::vector<std::pair<Var, RatInterval>>& at) {
    RatInterval acc{Rat(0)};
    for (const auto& [k, c] : p.terms()) {
        RatInterval term{c};
        for (const auto& [v, iv] : at) {
            unsigned e = exp_of(k, v);
            for (unsigned i = 0; i < e; ++i) term = term * iv;
        }
        acc = acc + term;
    }
    return acc;
}

MPoly partial_derivative(const MPoly& p, Var v) {
    if (!p.declares(v)) throw input_error(std::string("derivative variable ") + var_name(v) +
                                          " not declared by polynomial");
    MPoly r(Rat(0), p.vars_mask());
    for (const auto& [k, c] : p.terms()) {
        unsigned e = exp_of(k, v);
        if (!e) continue;
        r.add_term(exp_set(k, v, e - 1), c * Rat(static_cast<long>(e)));
    }
    return r;
}

MPoly shear_yz(const MPoly& p, const Rat& s) {
    for (Var v : p.variables())
        if (v == Var::t) throw input_error("shear_yz expects a polynomial in x,y,z");
    MPoly r(Rat(0), p.vars_mask() | MPoly::mask_of({Var::y, Var::z}));
    for (const auto& [k, c] : p.terms()) {
        unsigned b = exp_of(k, Var::y);
        // y^b -> sum_j C(b,j) s^j z^j y^(b-j)
        Rat binom(1);
        Rat spow(1);
        for (unsigned j = 0; j <= b; ++j) {
            ExpKey kk = exp_set(k, Var::y, b - j);
            kk = exp_set(kk, Var::z, exp_of(k, Var::z) + j);
            r.add_term(kk, c * binom * spow);
            binom *= Rat(static_cast<long>(b - j));
            binom /= Rat(static_cast<long>(j + 1));
            spow *= s;
        }
    }
    return r;
}

} // namespace lgp
