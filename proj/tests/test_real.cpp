#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helixlab/real.hpp"

#include <cstdint>
#include <random>
#include <string>

using helixlab::Real;

namespace {

Real R(const std::string& s, int p = 20) { return Real::parse(s, p); }

// |a - b| <= 10^-digits
bool close(const Real& a, const Real& b, int digits) {
    Real tol(mpz_class(1), -digits, a.precision());
    return (a - b).abs() <= tol;
}

// Deterministic random decimal in [-span, span] with `digits` fractional digits.
Real random_real(std::mt19937_64& rng, int span, int digits, int prec) {
    std::uniform_int_distribution<std::int64_t> d(
        -span * static_cast<std::int64_t>(1000000000), span * 1000000000LL);
    mpz_class man(std::to_string(d(rng)));
    return Real(man, -9, prec).with_precision(prec);
}

}  // namespace

TEST_CASE("parse/str round trip") {
    CHECK(R("800000.93556582").str() == "800000.93556582");
    CHECK(R("-0.25").str() == "-0.25");
    CHECK(R("3").str() == "3");
    CHECK(R("1.50").str() == "1.5");
    CHECK(R("0.000").str() == "0");
    CHECK(R("2e3").str() == "2000");
    CHECK(R("1.5e-3").str() == "0.0015");
    CHECK_THROWS_AS(Real::parse("abc", 20), helixlab::NumericError);
    CHECK_THROWS_AS(Real::parse("1.2.3", 20), helixlab::NumericError);
}

TEST_CASE("basic arithmetic is exact when it fits") {
    CHECK((R("0.1") + R("0.2")).str() == "0.3");
    CHECK((R("1") - R("0.999")).str() == "0.001");
    CHECK((R("1.5") * R("2")).str() == "3");
    CHECK((R("1") / R("8")).str() == "0.125");
}

TEST_CASE("rounding is to nearest, ties to even") {
    // 5 significant digits minimum is 15; craft at the precision edge instead.
    Real a = Real::parse("1.0000000000000005", 16);  // 17 sig digits -> round
    CHECK(a.str() == "1");  // tie, even
    Real b = Real::parse("1.0000000000000015", 16);
    CHECK(b.str() == "1.000000000000002");  // tie, odd rounds up
    Real c = Real::parse("1.00000000000000051", 16);
    CHECK(c.str() == "1.000000000000001");  // above half
}

TEST_CASE("floor and frac") {
    CHECK(R("800000.93556582").frac().str() == "0.93556582");
    CHECK(R("-0.25").frac().str() == "0.75");
    CHECK(R("3").frac().str() == "0");
    CHECK(R("-2.5").floor().str() == "-3");
    CHECK(R("7.9").floor_int() == 7);
    CHECK(R("-7.9").floor_int() == -8);
}

TEST_CASE("comparison") {
    CHECK(R("1.25") < R("1.250001"));
    CHECK(R("-3") < R("0.001"));
    CHECK(R("2.0") == R("2"));
    CHECK(R("10") > R("9.999999"));
}

TEST_CASE("sin_pi exact points") {
    CHECK(helixlab::sin_pi(R("0.5")).str() == "1");
    CHECK(helixlab::sin_pi(R("1")).str() == "0");
    CHECK(helixlab::sin_pi(R("0")).str() == "0");
    CHECK(helixlab::sin_pi(R("1.5")).str() == "-1");
    CHECK(helixlab::sin_pi(R("2.5")).str() == "1");
    CHECK(helixlab::sin_pi(R("-0.5")).str() == "-1");
    CHECK(helixlab::sin_pi(R("41")).str() == "0");
}

TEST_CASE("sin_pi oracle values") {
    // frozen from an independent high-precision evaluator (mpmath)
    CHECK(close(helixlab::sin_pi(R("0.25")),
                R("0.70710678118654752440"), 18));
    CHECK(close(helixlab::sin_pi(Real::parse("0.1", 30)),
                Real::parse("0.309016994374947424102293417183", 30), 28));
}

TEST_CASE("sin_pi keeps tiny arguments alive") {
    // a tiny negative x must not collapse through the mod-2 reduction
    // (2 - |x| would round to exactly 2)
    Real x = Real(mpz_class(-863), -368, 30);  // -8.63e-366
    Real s = helixlab::sin_pi(x);
    CHECK_FALSE(s.is_zero());
    CHECK(s < Real(0L, 30));
    // sin(pi x) ~ pi x for tiny x
    Real ratio = s / x;
    CHECK(ratio > R("3.14"));
    CHECK(ratio < R("3.15"));
    CHECK(helixlab::sin_pi(-x) == -s);
}

TEST_CASE("gamma values and poles") {
    CHECK(helixlab::gamma(R("1")).str() == "1");
    CHECK(helixlab::gamma(R("5")).str() == "24");
    CHECK(close(helixlab::gamma(R("0.5")), R("1.7724538509055160273"), 18));
    CHECK(close(helixlab::gamma(R("3.7")), R("4.1706517837966031654"), 18));
    CHECK(close(helixlab::gamma(R("-2.5")), R("-0.94530872048294188123"), 18));
    CHECK_THROWS_AS(helixlab::gamma(R("0")), helixlab::PoleError);
    CHECK_THROWS_AS(helixlab::gamma(R("-3")), helixlab::PoleError);
}

TEST_CASE("cos_r / sin_r oracle values") {
    CHECK(helixlab::cos_r(R("0")).str() == "1");
    CHECK(helixlab::sin_r(R("0")).str() == "0");
    CHECK(close(helixlab::cos_r(R("1")), R("0.54030230586813971740"), 18));
    CHECK(close(helixlab::cos_r(R("2.5")), R("-0.80114361554693371483"), 18));
    CHECK(close(helixlab::sin_r(R("123456.789")),
                R("-0.99866408234344709787"), 18));
}

TEST_CASE("property: sin_pi bounded and odd") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 200; ++i) {
        Real x = random_real(rng, 10, 9, 30);
        Real s = helixlab::sin_pi(x);
        CHECK(s.abs() <= Real(1L, 30));
        Real sum = s + helixlab::sin_pi(-x);
        CHECK(close(sum, Real(0L, 30), 28));
    }
}

TEST_CASE("property: gamma recurrence") {
    std::mt19937_64 rng(7);
    int tested = 0;
    while (tested < 100) {
        Real x = random_real(rng, 5, 9, 30);
        if (x.is_integer() && x.sign() <= 0) continue;
        Real lhs = helixlab::gamma(x + Real(1L, 30));
        Real rhs = x * helixlab::gamma(x);
        Real scale = lhs.abs() + Real(1L, 30);
        CHECK((lhs - rhs).abs() <= scale * Real(mpz_class(1), -27, 30));
        ++tested;
    }
}

TEST_CASE("property: frac in [0,1) and x - frac(x) integral") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        Real x = random_real(rng, 1000, 9, 25);
        Real f = x.frac();
        CHECK(f >= Real(0L));
        CHECK(f < Real(1L));
        CHECK((x - f).is_integer());
    }
}

TEST_CASE("determinism: repeated evaluation gives identical digit strings") {
    Real x = R("1.2345678901234567", 40);
    std::string a = helixlab::sin_pi(x).str();
    std::string b = helixlab::sin_pi(Real::parse("1.2345678901234567", 40)).str();
    CHECK(a == b);
    std::string g1 = helixlab::gamma(R("2.718281828459045", 40)).str();
    std::string g2 = helixlab::gamma(R("2.718281828459045", 40)).str();
    CHECK(g1 == g2);
}
