#include "helixlab/real.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace helixlab {

namespace {

// Dense caching is only worthwhile (and affordable) for small exponents;
// large powers are computed on demand.
mpz_class pow10(unsigned long k) {
    constexpr unsigned long kCacheMax = 256;
    thread_local std::vector<mpz_class> cache{mpz_class(1)};
    if (k <= kCacheMax) {
        while (cache.size() <= k) cache.push_back(cache.back() * 10);
        return cache[k];
    }
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
    return r;
}

int ndigits(const mpz_class& a) {
    if (a == 0) return 0;
    size_t k = mpz_sizeinbase(a.get_mpz_t(), 10);  // exact or one too large
    if (k > 1 && mpz_cmpabs(a.get_mpz_t(), pow10(k - 1).get_mpz_t()) < 0) --k;
    return static_cast<int>(k);
}

constexpr long kMaxShift = 200000;  // digits; guards pathological alignment

}  // namespace

Real::Real(long v, int precision)
    : man_(v), exp_(0), prec_(std::max(precision, kMinDigits)) {
    normalize();
    round_to_precision(false);
}

Real::Real(mpz_class mantissa, long exponent, int precision)
    : man_(std::move(mantissa)), exp_(exponent), prec_(std::max(precision, kMinDigits)) {
    normalize();
    round_to_precision(false);
}

void Real::normalize() {
    if (man_ == 0) {
        exp_ = 0;
        return;
    }
    while (mpz_divisible_ui_p(man_.get_mpz_t(), 10u)) {
        man_ /= 10;
        ++exp_;
    }
}

void Real::round_to_precision(bool sticky) {
    int nd = ndigits(man_);
    if (nd <= prec_) {
        if (sticky && man_ == 0) return;  // underflow toward zero is fine here
        return;
    }
    long drop = nd - prec_;
    const mpz_class& p = pow10(static_cast<unsigned long>(drop));
    bool neg = man_ < 0;
    mpz_class a = neg ? mpz_class(-man_) : man_;
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    mpz_class twice = r * 2;
    int c = cmp(twice, p);
    if (c > 0 || (c == 0 && (sticky || mpz_odd_p(q.get_mpz_t())))) {
        q += 1;
    }
    man_ = neg ? mpz_class(-q) : q;
    exp_ += drop;
    normalize();
}

Real Real::parse(const std::string& text, int precision) {
    const char* s = text.c_str();
    size_t i = 0, n = text.size();
    bool neg = false;
    if (i < n && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    std::string digits;
    long exp = 0;
    bool any = false;
    while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) {
        digits += s[i++];
        any = true;
    }
    if (i < n && s[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) {
            digits += s[i++];
            --exp;
            any = true;
        }
    }
    if (!any) throw NumericError("invalid decimal literal: '" + text + "'");
    if (i < n && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < n && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
        if (i >= n || !std::isdigit(static_cast<unsigned char>(s[i])))
            throw NumericError("invalid exponent in literal: '" + text + "'");
        long e = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) {
            e = e * 10 + (s[i++] - '0');
            if (e > kMaxShift) throw NumericError("exponent out of range: '" + text + "'");
        }
        exp += eneg ? -e : e;
    }
    if (i != n) throw NumericError("trailing garbage in literal: '" + text + "'");
    mpz_class man(digits.empty() ? std::string("0") : digits, 10);
    if (neg) man = -man;
    return Real(std::move(man), exp, precision);
}

Real Real::with_precision(int precision) const {
    Real r = *this;
    r.prec_ = std::max(precision, kMinDigits);
    r.round_to_precision(false);
    return r;
}

Real Real::operator-() const {
    Real r = *this;
    r.man_ = -r.man_;
    return r;
}

Real Real::abs() const { return man_ < 0 ? -*this : *this; }

namespace {

// Exact aligned mantissas of a and b at a common exponent.
void align(const Real& a, const Real& b, mpz_class& ma, mpz_class& mb, long& e) {
    e = std::min(a.exponent(), b.exponent());
    long sa = a.exponent() - e;
    long sb = b.exponent() - e;
    if (sa > kMaxShift || sb > kMaxShift) throw NumericError("exponent range too wide");
    ma = a.mantissa();
    mb = b.mantissa();
    if (sa > 0) ma *= pow10(static_cast<unsigned long>(sa));
    if (sb > 0) mb *= pow10(static_cast<unsigned long>(sb));
}

}  // namespace

Real operator+(const Real& a, const Real& b) {
    mpz_class ma, mb;
    long e;
    align(a, b, ma, mb, e);
    return Real(ma + mb, e, std::max(a.precision(), b.precision()));
}

Real operator-(const Real& a, const Real& b) {
    mpz_class ma, mb;
    long e;
    align(a, b, ma, mb, e);
    return Real(ma - mb, e, std::max(a.precision(), b.precision()));
}

Real operator*(const Real& a, const Real& b) {
    return Real(a.mantissa() * b.mantissa(), a.exponent() + b.exponent(),
                std::max(a.precision(), b.precision()));
}

Real operator/(const Real& a, const Real& b) {
    if (b.is_zero()) throw NumericError("division by zero");
    int p = std::max(a.precision(), b.precision());
    if (a.is_zero()) return Real(0L, p);
    mpz_class num = ::abs(a.mantissa());
    mpz_class den = ::abs(b.mantissa());
    long shift = p + 2 + ndigits(den) - ndigits(num);
    if (shift < 0) shift = 0;
    if (shift > kMaxShift) throw NumericError("exponent range too wide");
    num *= pow10(static_cast<unsigned long>(shift));
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    bool neg = (a.sign() * b.sign()) < 0;
    Real out;
    out.man_ = neg ? mpz_class(-q) : q;
    out.exp_ = a.exponent() - b.exponent() - shift;
    out.prec_ = p;
    out.normalize();
    out.round_to_precision(r != 0);
    return out;
}

int Real::compare(const Real& b) const {
    int sa = sign(), sb = b.sign();
    if (sa != sb) return sa < sb ? -1 : 1;
    if (sa == 0) return 0;
    mpz_class ma, mb;
    long e;
    align(*this, b, ma, mb, e);
    return cmp(ma, mb);
}

Real Real::floor() const {
    if (exp_ >= 0) return *this;
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), man_.get_mpz_t(),
               pow10(static_cast<unsigned long>(-exp_)).get_mpz_t());
    return Real(std::move(q), 0, prec_);
}

Real Real::frac() const { return *this - floor(); }

mpz_class Real::floor_int() const { return floor().mantissa() * pow10(static_cast<unsigned long>(std::max(0L, floor().exponent()))); }

double Real::to_double() const {
    return std::strtod(str().c_str(), nullptr);
}

std::string Real::str() const {
    if (man_ == 0) return "0";
    std::string d = mpz_class(::abs(man_)).get_str();
    std::string sign = man_ < 0 ? "-" : "";
    long point = static_cast<long>(d.size()) + exp_;  // digits left of the point
    if (exp_ >= 0 && point <= 50) {
        return sign + d + std::string(static_cast<size_t>(exp_), '0');
    }
    if (exp_ < 0 && point > 0) {
        return sign + d.substr(0, static_cast<size_t>(point)) + "." +
               d.substr(static_cast<size_t>(point));
    }
    if (exp_ < 0 && point <= 0 && point > -50) {
        return sign + "0." + std::string(static_cast<size_t>(-point), '0') + d;
    }
    // scientific fallback for extreme magnitudes
    std::string m = d.substr(0, 1);
    if (d.size() > 1) m += "." + d.substr(1);
    return sign + m + "e" + std::to_string(point - 1);
}

Real Real::pow_int(const Real& base, long e) {
    int p = base.precision();
    if (e == 0) return Real(1L, p);
    bool inv = e < 0;
    unsigned long k = static_cast<unsigned long>(inv ? -e : e);
    Real acc = base;
    for (unsigned long i = 1; i < k; ++i) acc = acc * base;
    if (inv) acc = Real(1L, p) / acc;
    return acc;
}

// ---------------------------------------------------------------------------
// MPFR bridge for the transcendental kernels.

namespace {

struct MpfrVal {
    mpfr_t v;
    explicit MpfrVal(mpfr_prec_t bits) { mpfr_init2(v, bits); }
    ~MpfrVal() { mpfr_clear(v); }
    MpfrVal(const MpfrVal&) = delete;
    MpfrVal& operator=(const MpfrVal&) = delete;
};

mpfr_prec_t bits_for(int dec_digits, long extra_bits = 0) {
    double b = (dec_digits + 8) * 3.3220 + 24 + static_cast<double>(extra_bits);
    return static_cast<mpfr_prec_t>(b);
}

void to_mpfr(mpfr_t rop, const Real& x) {
    mpfr_set_z(rop, x.mantissa().get_mpz_t(), MPFR_RNDN);
    long e = x.exponent();
    if (e > 0) {
        mpfr_mul_z(rop, rop, pow10(static_cast<unsigned long>(e)).get_mpz_t(), MPFR_RNDN);
    } else if (e < 0) {
        mpfr_div_z(rop, rop, pow10(static_cast<unsigned long>(-e)).get_mpz_t(), MPFR_RNDN);
    }
}

Real from_mpfr(mpfr_t x, int prec) {
    if (!mpfr_number_p(x)) throw NumericError("non-finite transcendental result");
    if (mpfr_zero_p(x)) return Real(0L, prec);
    if (mpfr_get_exp(x) > kMaxShift * 4) {
        throw NumericError("result magnitude out of range");
    }
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(prec) + 2, x, MPFR_RNDN);
    std::string digits(s);
    mpfr_free_str(s);
    bool neg = !digits.empty() && digits[0] == '-';
    if (neg) digits.erase(digits.begin());
    mpz_class man(digits, 10);
    if (neg) man = -man;
    long exp = static_cast<long>(e) - static_cast<long>(digits.size());
    return Real(std::move(man), exp, prec);
}

long magnitude_bits(const Real& x) {
    if (x.is_zero()) return 0;
    long top = x.exponent() + ndigits(x.mantissa());
    return top > 0 ? top * 4 + 8 : 0;
}

}  // namespace

Real sin_pi(const Real& x) {
    int p = x.precision();
    // Reduce negative arguments by symmetry: x mod 2 for a tiny negative x
    // is 2 - |x|, which would round to exactly 2 and lose the argument.
    if (x < Real(0L, p)) return -sin_pi(-x);
    // x mod 2 is exact in decimal: x/2 multiplies the mantissa by 5.
    Real half(x.mantissa() * 5, x.exponent() - 1, p + 4 + ndigits(x.mantissa()));
    Real xr = x - (half.floor() * Real(2L, p));
    if (xr.is_integer()) return Real(0L, p);
    bool neg = false;
    Real one(1L, p);
    if (xr > one) {
        xr = xr - one;
        neg = true;
    }
    Real r;
    if (xr == Real(mpz_class(5), -1, p)) {
        r = one;
    } else {
        mpfr_prec_t b = bits_for(p);
        MpfrVal t(b), pi(b);
        to_mpfr(t.v, xr);
        mpfr_const_pi(pi.v, MPFR_RNDN);
        mpfr_mul(t.v, t.v, pi.v, MPFR_RNDN);
        mpfr_sin(t.v, t.v, MPFR_RNDN);
        r = from_mpfr(t.v, p);
        if (r > one) r = one;  // clamp against terminal rounding
    }
    return neg ? -r : r;
}

namespace {

Real trig(const Real& x, int (*fn)(mpfr_t, const mpfr_t, mpfr_rnd_t)) {
    int p = x.precision();
    mpfr_prec_t b = bits_for(p, magnitude_bits(x));
    MpfrVal t(b);
    to_mpfr(t.v, x);
    fn(t.v, t.v, MPFR_RNDN);
    Real r = from_mpfr(t.v, p);
    Real one(1L, p);
    if (r > one) r = one;
    if (r < -one) r = -one;
    return r;
}

}  // namespace

Real cos_r(const Real& x) { return trig(x, mpfr_cos); }
Real sin_r(const Real& x) { return trig(x, mpfr_sin); }

Real gamma(const Real& x) {
    if (x.is_integer() && x.sign() <= 0) {
        // An "integer" whose trailing zeros outnumber its significant digits
        // is only integral through rounding; whether it sits on a pole is
        // undecidable at this precision, and |gamma| there is out of range
        // either way.
        if (x.exponent() > x.precision()) {
            throw NumericError("gamma argument magnitude out of range");
        }
        throw PoleError("gamma pole at " + x.str());
    }
    int p = x.precision();
    mpfr_prec_t b = bits_for(p, magnitude_bits(x));
    MpfrVal t(b);
    to_mpfr(t.v, x);
    mpfr_gamma(t.v, t.v, MPFR_RNDN);
    return from_mpfr(t.v, p);
}

}  // namespace helixlab
