#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace helixlab {

// Thrown when gamma() is evaluated at a non-positive integer.
struct PoleError : std::domain_error {
    explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Arbitrary-precision signed decimal real.
//
// A value is mantissa * 10^exponent with the mantissa holding at most
// `precision()` significant decimal digits. Every arithmetic operation
// rounds to nearest, ties to even, at the result precision (the max of the
// operand precisions). Identical operand digit strings and precision always
// produce identical result digit strings.
class Real {
  public:
    static constexpr int kMinDigits = 15;

    Real() : man_(0), exp_(0), prec_(kMinDigits) {}
    explicit Real(long v, int precision = kMinDigits);
    Real(mpz_class mantissa, long exponent, int precision);

    // Parses a decimal string: [+-]digits[.digits][eE[+-]digits].
    static Real parse(const std::string& text, int precision);

    int precision() const { return prec_; }
    Real with_precision(int precision) const;

    bool is_zero() const { return man_ == 0; }
    bool is_negative() const { return man_ < 0; }
    // True iff the value is an exact integer at its current precision.
    bool is_integer() const { return exp_ >= 0 || man_ == 0; }
    int sign() const { return sgn(man_); }

    Real operator-() const;
    Real abs() const;

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);

    Real& operator+=(const Real& b) { return *this = *this + b; }
    Real& operator-=(const Real& b) { return *this = *this - b; }
    Real& operator*=(const Real& b) { return *this = *this * b; }
    Real& operator/=(const Real& b) { return *this = *this / b; }

    // Exact three-way comparison of the represented values.
    int compare(const Real& b) const;
    friend bool operator<(const Real& a, const Real& b) { return a.compare(b) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return a.compare(b) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return a.compare(b) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return a.compare(b) >= 0; }
    friend bool operator==(const Real& a, const Real& b) { return a.compare(b) == 0; }
    friend bool operator!=(const Real& a, const Real& b) { return a.compare(b) != 0; }

    // Exact floor / fractional part. frac() is in [0, 1).
    Real floor() const;
    Real frac() const;

    mpz_class floor_int() const;
    double to_double() const;

    // Canonical decimal string (no locale, trailing zeros stripped).
    std::string str() const;

    // Integer exponent power, evaluated by repeated multiplication so the
    // AST interpreter and the compiled program share one op order.
    static Real pow_int(const Real& base, long e);

    const mpz_class& mantissa() const { return man_; }
    long exponent() const { return exp_; }

  private:
    void normalize();
    void round_to_precision(bool sticky);

    mpz_class man_;
    long exp_;
    int prec_;

    friend class MpfrBridge;
};

// Special functions; results carry the argument's precision.
Real sin_pi(const Real& x);   // sin(pi*x), argument reduced exactly mod 2
Real cos_r(const Real& x);    // cos(x)
Real sin_r(const Real& x);    // sin(x)
Real gamma(const Real& x);    // throws PoleError at x in {0, -1, -2, ...}

}  // namespace helixlab
