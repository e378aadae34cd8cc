#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helixlab/engine.hpp"

#include <sstream>

using namespace helixlab;

namespace {

Real R(const std::string& s, int p = 40) { return Real::parse(s, p); }

const MapSpec& sine_drift() {
    static MapSpec m = parse_map("0.4*sinpi(x) + x + b", "sine-drift");
    return m;
}

}  // namespace

TEST_CASE("identity map stays constant") {
    Trajectory t = iterate(parse_map("x"), R("7"), {}, 100, 20,
                           WindowPolicy::tail_only(100));
    CHECK(t.length == 100);
    REQUIRE(t.window.size() == 100);
    for (const auto& p : t.window) CHECK(p.value.str() == "7");
    CHECK(t.min_value == t.max_value);
}

TEST_CASE("b=0.7 regime: integer and fractional parts of term 20000") {
    Trajectory t = iterate(sine_drift(), R("0.8"), {{"b", R("0.7")}}, 20000, 40,
                           WindowPolicy::tail_only(8));
    const Real* v = t.at(20000);
    REQUIRE(v != nullptr);
    CHECK(v->floor_int() == 13333);
    CHECK((v->frac() - R("0.7162148952")).abs() < R("1e-9"));
}

TEST_CASE("bounded step: u(n+1) - u(n) in [b - 0.4, b + 0.4]") {
    BoundMap f(sine_drift(), {{"b", R("0.882", 30)}}, 30);
    Real lo = R("0.482", 30), hi = R("1.282", 30);
    Real prev;
    bool have_prev = false;
    iterate_stream(f, R("0.5", 30), 2000, [&](std::uint64_t, const Real& u) {
        if (have_prev) {
            Real step = u - prev;
            CHECK(step >= lo);
            CHECK(step <= hi);
        }
        prev = u;
        have_prev = true;
        return true;
    });
}

TEST_CASE("restart consistency at full working precision") {
    Trajectory full = iterate(sine_drift(), R("0.5"), {{"b", R("0.8")}}, 5000, 40,
                              WindowPolicy::tail_only(4));
    Trajectory part1 = iterate(sine_drift(), R("0.5"), {{"b", R("0.8")}}, 2000, 40,
                               WindowPolicy::tail_only(4));
    Trajectory part2 = iterate_resume(sine_drift(), part1.final_value, 2000,
                                      {{"b", R("0.8")}}, 3000, 40,
                                      WindowPolicy::tail_only(4));
    CHECK(part2.final_value.str() == full.final_value.str());
}

TEST_CASE("determinism: identical inputs give bit-identical windows") {
    auto run = [] {
        return iterate(sine_drift(), R("0.3"), {{"b", R("0.95")}}, 3000, 40,
                       WindowPolicy::tail_only(64));
    };
    Trajectory t1 = run(), t2 = run();
    REQUIRE(t1.window.size() == t2.window.size());
    for (size_t i = 0; i < t1.window.size(); ++i) {
        CHECK(t1.window[i].n == t2.window[i].n);
        CHECK(t1.window[i].value.str() == t2.window[i].value.str());
    }
}

TEST_CASE("gamma pole marks the trajectory instead of discarding it") {
    // x -> x - 1 starting at 2 hits gamma(0) via gamma(x - 2) at the third term
    Trajectory t = iterate(parse_map("gamma(x - 2) + x - 1"), R("3.5"), {}, 100, 20,
                           WindowPolicy::tail_only(100));
    // runs fine (no pole for non-integer offsets)
    CHECK(!t.failure.has_value());

    Trajectory bad = iterate(parse_map("gamma(x) - 1"), R("1"), {}, 10, 20,
                             WindowPolicy::tail_only(10));
    REQUIRE(bad.failure.has_value());
    CHECK(bad.failure->index == 3);  // u(2) = gamma(1)-1 = 0, then gamma(0) pole
    CHECK(bad.length == 2);
}

TEST_CASE("window policy: stride plus tail") {
    WindowPolicy p;
    p.tail = 10;
    p.stride = 100;
    Trajectory t = iterate(sine_drift(), R("0.5"), {{"b", R("0.8")}}, 1000, 20, p);
    // strided: 100,200,...,1000; tail: 991..1000 (1000 deduped)
    REQUIRE(t.window.size() == 19);
    CHECK(t.window.front().n == 100);
    CHECK(t.window.back().n == 1000);
}

TEST_CASE("csv export shape") {
    Trajectory t = iterate(parse_map("x"), R("1.25"), {}, 3, 20,
                           WindowPolicy::tail_only(3));
    std::ostringstream os;
    t.write_csv(os);
    CHECK(os.str() == "n,value,frac\n1,1.25,0.25\n2,1.25,0.25\n3,1.25,0.25\n");
}

// ---------------------------------------------------------------------------
// L-word generation

TEST_CASE("lword_stream: L_1 prefix") {
    LSystemSpec l1 = parse_lsystem("axiom A; A -> A B; B -> B A");
    std::vector<int> w = lword_stream(l1, 16);
    std::string s;
    for (int id : w) s += l1.letter_name(id);
    CHECK(s == "ABBABAABBAABABBA");
}

TEST_CASE("lword_stream: constant system cycles its fixed word") {
    LSystemSpec c = parse_lsystem("axiom A; A -> A");
    std::vector<int> w = lword_stream(c, 5);
    CHECK(w == std::vector<int>({0, 0, 0, 0, 0}));
}

TEST_CASE("tm_letter matches lword_stream on a long prefix") {
    LSystemSpec l1 = parse_lsystem("axiom A; A -> A B; B -> B A");
    const std::uint64_t n = 1u << 16;
    std::vector<int> w = lword_stream(l1, n);
    for (std::uint64_t i = 1; i <= n; ++i) {
        REQUIRE(l1.letter_name(w[i - 1])[0] == tm_letter(i));
    }
}

TEST_CASE("tm_letter against explicit depth-16 rule expansion") {
    // independent oracle: expand by substitution on chars, no lword_stream
    std::string word = "A";
    for (int d = 0; d < 16; ++d) {
        std::string next;
        for (char c : word) next += (c == 'A') ? "AB" : "BA";
        word = std::move(next);
    }
    for (std::uint64_t i = 1; i <= word.size(); ++i) {
        REQUIRE(word[i - 1] == tm_letter(i));
    }
}

// ---------------------------------------------------------------------------
// L-iteration

namespace {

LBindings gamma_cos_bindings() {
    LBindings b;
    b.by_letter.push_back(parse_map("gamma(x + 1)"));
    b.by_letter.push_back(parse_map("cos(x)"));
    return b;
}

}  // namespace

TEST_CASE("literate: hand-composed oracle for the first terms") {
    LSystemSpec l1 = parse_lsystem("axiom A; A -> A B; B -> B A");
    Trajectory t = literate(l1, gamma_cos_bindings(), R("0", 20), 5, 20,
                            WindowPolicy::tail_only(6));
    // oracle: compose by hand in word order A B B A B
    int p = 20 + kGuardDigits;
    Real u0 = Real::parse("0", p);
    Real u1 = gamma(u0 + Real(1L, p));
    Real u2 = cos_r(u1);
    Real u3 = cos_r(u2);
    Real u4 = gamma(u3 + Real(1L, p));
    Real u5 = cos_r(u4);
    CHECK(t.at(0)->str() == u0.with_precision(20).str());
    CHECK(t.at(1)->str() == u1.with_precision(20).str());
    CHECK(t.at(2)->str() == u2.with_precision(20).str());
    CHECK(t.at(3)->str() == u3.with_precision(20).str());
    CHECK(t.at(4)->str() == u4.with_precision(20).str());
    CHECK(t.at(5)->str() == u5.with_precision(20).str());
    CHECK(t.at(1)->str() == "1");
    CHECK((*t.at(2) - R("0.54030230586813971740", 20)).abs() < R("1e-18", 20));
    CHECK((*t.at(3) - R("0.85755321584639341574", 20)).abs() < R("1e-18", 20));
}

TEST_CASE("literate: identity bindings keep the value") {
    LSystemSpec l1 = parse_lsystem("axiom A; A -> A B; B -> B A");
    LBindings b;
    b.by_letter.push_back(parse_map("x"));
    b.by_letter.push_back(parse_map("x"));
    Trajectory t = literate(l1, b, R("3.25", 20), 50, 20, WindowPolicy::tail_only(51));
    for (const auto& pt : t.window) CHECK(pt.value.str() == "3.25");
}

TEST_CASE("literate: cos-steps land in [-1, 1]") {
    LSystemSpec l1 = parse_lsystem("axiom A; A -> A B; B -> B A");
    std::vector<int> w = lword_stream(l1, 64);
    Trajectory t = literate(l1, gamma_cos_bindings(), R("2.7", 20), 64, 20,
                            WindowPolicy::tail_only(65));
    Real one(1L, 20);
    for (const auto& pt : t.window) {
        if (pt.n == 0) continue;
        if (l1.letter_name(w[pt.n - 1]) == "B") {
            CHECK(pt.value.abs() <= one);
        }
    }
}
