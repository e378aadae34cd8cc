#include "helixlab/scan.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace helixlab {

std::string to_string(AttractorClass::Tag tag) {
    switch (tag) {
        case AttractorClass::Tag::Helix: return "helix";
        case AttractorClass::Tag::PseudoHelix: return "pseudo-helix";
        case AttractorClass::Tag::Chaotic: return "chaotic";
        case AttractorClass::Tag::Unclassified: return "unclassified";
    }
    return "?";
}

namespace {

struct PeriodEstimate {
    std::uint64_t j = 0;
    double c = 0.0;
    double spread = 0.0;  // median |d_i - median(d_i)|
};

// Coarse (j, c) estimate for skid analysis: the j <= j_max whose increment
// series has the smallest median absolute deviation over the tail window.
PeriodEstimate estimate_period(const Trajectory& traj, std::uint64_t j_max) {
    std::vector<double> vals;
    // contiguous tail of the window
    const auto& w = traj.window;
    size_t begin = w.size();
    while (begin > 0 && (begin == w.size() || w[begin - 1].n + 1 == w[begin].n)) --begin;
    for (size_t i = begin; i < w.size(); ++i) vals.push_back(w[i].value.to_double());

    PeriodEstimate best;
    if (vals.size() < 2 * j_max + 2) return best;
    for (std::uint64_t j = 1; j <= j_max; ++j) {
        std::vector<double> d;
        d.reserve(vals.size() - j);
        for (size_t i = 0; i + j < vals.size(); ++i) d.push_back(vals[i + j] - vals[i]);
        auto mid = d.begin() + static_cast<long>(d.size() / 2);
        std::nth_element(d.begin(), mid, d.end());
        double med = *mid;
        std::vector<double> ad;
        ad.reserve(d.size());
        for (double x : d) ad.push_back(std::fabs(x - med));
        auto amid = ad.begin() + static_cast<long>(ad.size() / 2);
        std::nth_element(ad.begin(), amid, ad.end());
        double mad = *amid;
        if (best.j == 0 || mad < best.spread * 0.5) {  // prefer smaller j unless clearly better
            best = {j, med, mad};
        }
    }
    return best;
}

Real real_from_double(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return Real::parse(buf, digits);
}

}  // namespace

AttractorClass classify(const MapSpec& family, const Real& b,
                        const ClassifyConfig& cfg) {
    Params params{{cfg.b_param, b}};
    AttractorClass out;
    Real agree_tol(mpz_class(1), -6, cfg.digits);

    WindowPolicy wp = WindowPolicy::tail_only(
        std::max<std::uint64_t>(4096, 3 * cfg.j_max + 8));

    for (std::uint64_t N : {cfg.N, cfg.N_escalated}) {
        // --- Helix attempt
        std::vector<Trajectory> trajs;
        std::vector<std::optional<HelixDescriptor>> dets;
        for (const Real& a : cfg.a_set) {
            trajs.push_back(iterate(family, a, params, N, cfg.digits, wp));
            out.budget += N;
            dets.push_back(detect_stable_helix(trajs.back(), cfg.j_max, cfg.tol,
                                               cfg.transient));
        }
        bool all_helix = true;
        for (const auto& d : dets) all_helix = all_helix && d.has_value();
        if (all_helix) {
            bool agree = true;
            const HelixDescriptor& h0 = *dets.front();
            for (size_t i = 1; i < dets.size(); ++i) {
                const HelixDescriptor& h = *dets[i];
                if (h.period != h0.period ||
                    (h.increment - h0.increment).abs() > agree_tol) {
                    agree = false;
                    break;
                }
                for (size_t k = 0; k < h0.fractional_cycle.size(); ++k) {
                    if ((h.fractional_cycle[k] - h0.fractional_cycle[k]).abs() >
                        agree_tol) {
                        agree = false;
                        break;
                    }
                }
            }
            if (agree) {
                // confirm over the whole run, not just the tail window: a
                // pseudo-helix between skids looks exactly like a helix there
                try {
                    SkidStats confirm =
                        skid_scan(family, cfg.a_set.front(), params, N, cfg.digits,
                                  h0.period, h0.increment, cfg.theta, cfg.hysteresis);
                    out.budget += N;
                    if (confirm.status == SkidStats::Status::NoEpisodes) {
                        out.tag = AttractorClass::Tag::Helix;
                        out.period = h0.period;
                        out.increment = h0.increment;
                        out.evidence = static_cast<int>(dets.size());
                        return out;
                    }
                    if (confirm.episodes.size() >= 3) {
                        out.tag = AttractorClass::Tag::PseudoHelix;
                        out.period = h0.period;
                        out.increment = h0.increment;
                        out.mean_laminar = confirm.mean_laminar;
                        out.evidence = static_cast<int>(dets.size());
                        return out;
                    }
                    // 1-2 episodes: ambiguous, escalate (or give up below)
                    out.note = "tail looks periodic but " +
                               std::to_string(confirm.episodes.size()) +
                               " escape(s) observed";
                } catch (const NoLaminarPhase&) {
                    out.budget += N;
                }
            }
        }

        // --- PseudoHelix attempt
        PeriodEstimate est = estimate_period(trajs.front(), cfg.j_max);
        int laminar_free = 0;  // NoLaminarPhase verdicts
        if (est.j != 0) {
            Real c_est = std::fabs(est.c - std::round(est.c)) < 0.1
                             ? Real(static_cast<long>(std::llround(est.c)), cfg.digits)
                             : real_from_double(est.c, cfg.digits);
            int successes = 0;
            SkidStats first_ok;
            for (const Real& a : cfg.a_set) {
                try {
                    SkidStats st = skid_scan(family, a, params, N, cfg.digits, est.j,
                                             c_est, cfg.theta, cfg.hysteresis);
                    out.budget += N;
                    if (st.status == SkidStats::Status::Ok && st.episodes.size() >= 3) {
                        if (successes == 0) first_ok = st;
                        ++successes;
                    }
                } catch (const NoLaminarPhase&) {
                    out.budget += N;
                    ++laminar_free;
                }
            }
            if (successes > 0) {
                out.tag = AttractorClass::Tag::PseudoHelix;
                out.period = est.j;
                out.increment = c_est;
                out.mean_laminar = first_ok.mean_laminar;
                out.evidence = successes;
                return out;
            }
        }

        if (N == cfg.N_escalated ||
            (laminar_free == static_cast<int>(cfg.a_set.size()) && N >= cfg.N)) {
            // --- Chaotic check: no laminar phase anywhere + transitivity
            if (laminar_free == static_cast<int>(cfg.a_set.size())) {
                CoverageReport cov =
                    transitivity_mod_r(family, cfg.a_set.front(), params, N,
                                       cfg.digits, Real(1L, cfg.digits),
                                       cfg.coverage_bins);
                out.budget += N;
                if (cov.coverage >= cfg.min_coverage) {
                    out.tag = AttractorClass::Tag::Chaotic;
                    out.evidence = laminar_free;
                    return out;
                }
                out.note = "no laminar phase but coverage " +
                           std::to_string(cov.coverage) + " < " +
                           std::to_string(cfg.min_coverage);
            }
            if (N == cfg.N_escalated) break;
        }
    }
    out.tag = AttractorClass::Tag::Unclassified;
    return out;
}

std::vector<ScanRow> sweep(const MapSpec& family, const Real& b_from,
                           const Real& b_to, const Real& step,
                           const ClassifyConfig& cfg, unsigned jobs) {
    if (!(step > Real(0L))) throw std::invalid_argument("sweep: step must be > 0");
    if (b_from > b_to) throw std::invalid_argument("sweep: b_from must be <= b_to");
    std::vector<Real> bs;
    for (Real b = b_from; b < b_to; b = b + step) bs.push_back(b);
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

    std::vector<ScanRow> rows(bs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= bs.size()) return;
            rows[i] = ScanRow{bs[i], classify(family, bs[i], cfg), false};
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<size_t>(jobs, bs.size()); ++t) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) t.join();

    for (size_t i = 1; i < rows.size(); ++i) {
        const auto& a = rows[i - 1].cls;
        const auto& b = rows[i].cls;
        if (a.tag != b.tag || a.period != b.period) rows[i].boundary_candidate = true;
    }
    return rows;
}

std::pair<Real, Real> refine_boundary(const MapSpec& family, const Real& b_lo,
                                      const Real& b_hi, const ClassPredicate& pred,
                                      unsigned iterations, const ClassifyConfig& cfg) {
    bool p_lo = pred(classify(family, b_lo, cfg));
    bool p_hi = pred(classify(family, b_hi, cfg));
    if (p_lo == p_hi) {
        throw PredicateAgrees("predicate does not differ across the bracket");
    }
    Real lo = b_lo, hi = b_hi;
    Real two(2L, lo.precision());
    for (unsigned i = 0; i < iterations; ++i) {
        Real mid = (lo + hi) / two;
        bool pm = pred(classify(family, mid, cfg));
        if (pm == p_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

}  // namespace helixlab
