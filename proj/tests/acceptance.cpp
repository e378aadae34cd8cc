// End-to-end acceptance gate: one pass/fail line per criterion, exit 0 only
// when all twelve hold. Budgets here are the full desk-scale ones; expect a
// few minutes of wall time.

#include "helixlab/builtin.hpp"
#include "helixlab/manifest.hpp"
#include "helixlab/scan.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace helixlab;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::cout << "criterion " << criterion << ": " << (ok ? "pass" : "FAIL")
              << " — " << detail << "\n"
              << std::flush;
    if (!ok) ++g_failures;
}

void run(int criterion, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        auto [ok, detail] = body();
        report(criterion, ok, detail);
    } catch (const std::exception& e) {
        report(criterion, false, std::string("exception: ") + e.what());
    }
}

Real R(const std::string& s, int p = 40) { return Real::parse(s, p); }

const MapSpec& sine_drift() {
    static MapSpec m = builtin_map("sine-drift");
    return m;
}

Trajectory drift_traj(const std::string& b, const std::string& a, std::uint64_t N,
                      int digits = 40) {
    return iterate(sine_drift(), R(a, digits), {{"b", R(b, digits)}}, N, digits,
                   WindowPolicy::tail_only(4096));
}

SkidStats drift_skids(const std::string& b, const std::string& a, std::uint64_t N) {
    return skid_scan(sine_drift(), R(a), {{"b", R(b)}}, N, 40, 2, Real(2L, 40));
}

bool cycle_matches(const std::vector<Real>& got,
                   const std::vector<const char*>& want, const Real& tol) {
    if (got.size() != want.size()) return false;
    for (size_t i = 0; i < got.size(); ++i) {
        if ((got[i] - R(want[i])).abs() > tol) return false;
    }
    return true;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    // 1. period-10 helix with increment 8 at b=0.8, cycle digits to 1e-7
    run(1, [] {
        Trajectory t = drift_traj("0.8", "0.5", 1000000);
        auto h = detect_stable_helix(t, 16, R("1e-9"), 10000);
        if (!h) return std::make_pair(false, std::string("no helix detected"));
        bool ok = h->period == 10 && (h->increment - Real(8L, 40)).abs() < R("1e-9") &&
                  cycle_matches(h->fractional_cycle,
                                {"0.06027449", "0.93556582", "0.81598435",
                                 "0.39741014", "0.57681447", "0.98840510",
                                 "0.77383775", "0.83472582", "0.43624316",
                                 "0.62824609"},
                                R("1e-7"));
        return std::make_pair(ok, "b=0.8: j=" + std::to_string(h->period) +
                                      ", c=" + h->increment.with_precision(12).str() +
                                      ", 10-value cycle to 1e-7");
    });

    // 2. period-3 helix with increment 2 at b=0.7, cycle digits to 1e-9
    run(2, [] {
        Trajectory t = drift_traj("0.7", "0.8", 20000);
        auto h = detect_stable_helix(t, 16, R("1e-9"), 10000);
        if (!h) return std::make_pair(false, std::string("no helix detected"));
        bool ok = h->period == 3 && (h->increment - Real(2L, 40)).abs() < R("1e-9") &&
                  cycle_matches(h->fractional_cycle,
                                {"0.1049995507", "0.9345659839", "0.7162148952"},
                                R("1e-9"));
        return std::make_pair(ok, "b=0.7: j=" + std::to_string(h->period) +
                                      ", c=" + h->increment.with_precision(12).str() +
                                      ", 3-value cycle to 1e-9");
    });

    // 3. attractor atlas: twelve classifications
    run(3, [] {
        struct Row {
            const char* b;
            AttractorClass::Tag tag;
            std::uint64_t period;
        };
        const std::vector<Row> table{
            {"1.0", AttractorClass::Tag::Helix, 1},
            {"0.95", AttractorClass::Tag::Helix, 2},
            {"0.8811", AttractorClass::Tag::Helix, 9},
            {"0.881", AttractorClass::Tag::Helix, 18},
            {"0.88093", AttractorClass::Tag::Helix, 36},
            {"0.87", AttractorClass::Tag::Helix, 7},
            {"0.8698", AttractorClass::Tag::Helix, 14},
            {"0.801", AttractorClass::Tag::Helix, 20},
            {"0.799", AttractorClass::Tag::Helix, 10},
            {"0.7945", AttractorClass::Tag::Helix, 5},
            {"0.70", AttractorClass::Tag::Helix, 3},
            {"0.882", AttractorClass::Tag::Chaotic, 0},
        };
        int good = 0;
        std::string bad;
        for (const Row& row : table) {
            AttractorClass c = classify(sine_drift(), R(row.b));
            bool ok = c.tag == row.tag &&
                      (row.tag != AttractorClass::Tag::Helix || c.period == row.period);
            if (ok) {
                ++good;
            } else {
                bad += std::string(" b=") + row.b + "->" + to_string(c.tag) + "(" +
                       std::to_string(c.period) + ")";
            }
        }
        return std::make_pair(good == 12, std::to_string(good) +
                                              "/12 classifications match" + bad);
    });

    // 4. laminar-length statistics in the two skid regimes
    run(4, [] {
        SkidStats near = drift_skids("0.8872559", "0.5", 100000);
        SkidStats mid = drift_skids("0.8872", "0.8", 100000);
        bool ok_near = near.status == SkidStats::Status::Ok &&
                       std::fabs(near.mean_laminar - 6090.0) <= 0.15 * 6090.0;
        bool ok_mid = mid.status == SkidStats::Status::Ok &&
                      mid.mean_laminar >= 200.0 && mid.mean_laminar <= 350.0;
        std::ostringstream d;
        d << "mean_laminar " << near.mean_laminar << " (target 6090 +/- 15%), "
          << mid.mean_laminar << " (target [200, 350])";
        return std::make_pair(ok_near && ok_mid, d.str());
    });

    // 5. order point: power-law fit, bisection bracket, first-escape scale
    run(5, [] {
        std::vector<Real> bs{R("0.8870"), R("0.8871"), R("0.8872"), R("0.88725")};
        OrderPointFit fit = order_point_fit(sine_drift(), bs, "b", R("0.5"),
                                            1000000, 40, 2, Real(2L, 40));
        bool ok_fit = fit.b_star >= 0.887255 && fit.b_star <= 0.887257;

        ClassPredicate helix2 = [](const AttractorClass& c) {
            return c.tag == AttractorClass::Tag::Helix && c.period == 2;
        };
        auto [lo, hi] = refine_boundary(sine_drift(), R("0.8872"), R("0.89"),
                                        helix2, 14);
        bool ok_bis = lo >= R("0.887255") && hi <= R("0.887257");

        SkidStats st = drift_skids("0.88725598", "0.5", 1000000);
        bool ok_esc = st.status == SkidStats::Status::Ok &&
                      st.first_escape >= 5000 && st.first_escape <= 100000;

        std::ostringstream d;
        d << "b_star=" << fit.b_star << ", bisection ["
          << lo.with_precision(10).str() << ", " << hi.with_precision(10).str()
          << "], first_escape=" << st.first_escape;
        return std::make_pair(ok_fit && ok_bis && ok_esc, d.str());
    });

    // 6. chaotic drift scale and sign-changing divergence at b=0.41
    run(6, [] {
        Trajectory t = drift_traj("0.41", "0.5", 1000000);
        double u = t.final_value.to_double();
        DivergenceReport dv = divergence_probe(sine_drift(), R("0.5"), R("1e-6"),
                                               {{"b", R("0.41")}}, 1000000, 10000, 40);
        bool ok = u >= 9.0e4 && u <= 1.1e5 && dv.sign_changes >= 1;
        std::ostringstream d;
        d << "u(1e6)=" << u << ", sign_changes=" << dv.sign_changes;
        return std::make_pair(ok, d.str());
    });

    // 7. mutual attraction of the gamma/cos L-iterations
    run(7, [] {
        BuiltinLFamily fam = builtin_lfamily("lfam-gamma-cos");
        MutualAttractionReport r = mutual_attraction_check(
            fam.system, fam.bindings, {R("0.1", 30), R("0.5", 30), R("2.7", 30)},
            2000, R("1e-9", 30), 30);
        bool ok = r.converged;
        std::uint64_t worst = 0;
        for (const auto& p : r.pairs) {
            ok = ok && p.converged && p.n_epsilon <= 1000;
            worst = std::max(worst, p.n_epsilon);
        }
        return std::make_pair(ok, "converged=" + std::string(r.converged ? "true" : "false") +
                                      ", max N_epsilon=" + std::to_string(worst));
    });

    // 8. sensitive dependence in the gamma/sine family
    run(8, [] {
        BuiltinLFamily fam = builtin_lfamily("lfam-gamma-sin");
        auto orbit = [&](const std::string& a) {
            std::vector<Real> v;
            try {
                literate_stream(fam.system, fam.bindings, R(a, 35), 10000, 35,
                                [&](std::uint64_t, const Real& u) {
                                    v.push_back(u);
                                    return true;
                                });
            } catch (const EvalError&) {
                // the family is unbounded; an orbit may leave the
                // representable range, and the prefix is still evidence
            }
            return v;
        };
        std::vector<Real> va = orbit("0.3");
        std::vector<Real> vb = orbit("0.300000000001");
        Real one(1L, 35);
        std::uint64_t first = 0;
        bool found = false;
        for (size_t i = 0; i < std::min(va.size(), vb.size()) && !found; ++i) {
            bool big;
            try {
                big = (va[i] - vb[i]).abs() > one;
            } catch (const NumericError&) {
                big = true;  // exponents too far apart to align: gap >> 1
            }
            if (big) {
                found = true;
                first = i;
            }
        }
        return std::make_pair(found, found ? "first D(n) > 1 at n=" + std::to_string(first)
                                           : "no gap above 1 observed");
    });

    // 9. closed-form letters agree with the lazy word stream
    run(9, [] {
        BuiltinLFamily fam = builtin_lfamily("lfam-gamma-cos");
        const std::uint64_t n = 1ull << 20;
        std::vector<int> word = lword_stream(fam.system, n);
        std::string prefix;
        for (std::uint64_t i = 0; i < n; ++i) {
            char c = fam.system.letter_name(word[i])[0];
            if (i < 16) prefix += c;
            if (c != tm_letter(i + 1)) {
                return std::make_pair(false, "mismatch at letter " + std::to_string(i + 1));
            }
        }
        bool ok = prefix == "ABBABAABBAABABBA";
        return std::make_pair(ok, "2^20 letters agree, prefix " + prefix);
    });

    // 10. helix property of Fibonacci and of an exactly periodic sequence
    run(10, [] {
        std::vector<Real> fib;
        for (long v : {1, 1, 2, 3, 5, 8, 13, 21, 34}) fib.emplace_back(v, 20);
        std::vector<Real> alt;
        for (long v : {1, 2, 1, 2, 1, 2}) alt.emplace_back(v, 20);
        bool ok = verify_helix(fib, 3, Real(2L, 20)) &&
                  verify_helix(fib, 8, Real(3L, 20)) &&
                  verify_helix(fib, 6, Real(4L, 20)) &&
                  verify_helix(alt, 2, Real(0L, 20));
        return std::make_pair(ok, "fibonacci (3,2) (8,3) (6,4); 1,2,1,2 (2,0)");
    });

    // 11. transitivity: full coverage in chaos, sparse on a helix, no
    //     L-orbit ever reaches [10, 11]
    run(11, [] {
        CoverageReport chaos = transitivity_mod_r(sine_drift(), R("0.5"),
                                                  {{"b", R("0.882")}}, 1000000, 40,
                                                  Real(1L, 40), 100);
        CoverageReport helix = transitivity_mod_r(sine_drift(), R("0.8"),
                                                  {{"b", R("0.8")}}, 1000000, 40,
                                                  Real(1L, 40), 100);
        BuiltinLFamily fam = builtin_lfamily("lfam-gamma-cos");
        LsysTransitivityResult lt = lsys_transitivity_probe(
            fam.system, fam.bindings, Real(0L, 30), Real(1L, 30), Real(10L, 30),
            Real(11L, 30), 1000, 1000, 30);
        bool ok = chaos.coverage == 1.0 && helix.coverage <= 0.15 && !lt.k;
        std::ostringstream d;
        d << "coverage " << chaos.coverage << " (b=0.882), " << helix.coverage
          << " (b=0.8); L-probe " << (lt.k ? "hit" : "none");
        return std::make_pair(ok, d.str());
    });

    // 12. byte-identical data outputs when a CLI run is repeated
    run(12, [] {
        namespace fs = std::filesystem;
        fs::path base = fs::temp_directory_path() / "helixlab-acceptance";
        fs::remove_all(base);
        fs::create_directories(base / "run1");
        fs::create_directories(base / "run2");
        const std::string cli = HELIXLAB_CLI_PATH;
        for (const std::string& dir : {std::string("run1"), std::string("run2")}) {
            std::string prefix = (base / dir).string();
            std::string c1 = cli + " iterate --map sine-drift --param b=0.8"
                                   " --a 0.5 --n 20000 --out " +
                             prefix + "/it > /dev/null";
            std::string c2 = cli + " skids --map sine-drift --param b=0.8872"
                                   " --a 0.8 --n 30000 --out " +
                             prefix + "/sk > /dev/null";
            if (std::system(c1.c_str()) != 0 || std::system(c2.c_str()) != 0) {
                return std::make_pair(false, std::string("CLI run failed"));
            }
        }
        int compared = 0;
        for (const char* f : {"it.csv", "sk.json", "sk.episodes.csv"}) {
            std::string a = read_file(base / "run1" / f);
            std::string b = read_file(base / "run2" / f);
            if (a.empty() || a != b) {
                return std::make_pair(false, std::string("output differs: ") + f);
            }
            ++compared;
        }
        return std::make_pair(true, std::to_string(compared) +
                                        " data files byte-identical across runs");
    });

    std::cout << (g_failures == 0 ? "all criteria passed"
                                  : std::to_string(g_failures) + " criteria failed")
              << "\n";
    return g_failures == 0 ? 0 : 1;
}
