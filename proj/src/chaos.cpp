#include "helixlab/chaos.hpp"

#include <cmath>

namespace helixlab {

DivergenceReport divergence_probe(const MapSpec& map, const Real& a,
                                  const Real& epsilon, const Params& params,
                                  std::uint64_t N, std::uint64_t stride, int digits,
                                  const Real& lambda_threshold) {
    if (stride == 0 || N < 2 * stride) {
        throw std::invalid_argument("divergence_probe: need N >= 2*stride, stride > 0");
    }
    int prec = digits + kGuardDigits;
    BoundMap f(map, params, prec);
    DivergenceReport rep;
    rep.a = a.with_precision(digits);
    rep.epsilon = epsilon.with_precision(digits);
    rep.lambda_threshold = lambda_threshold;
    rep.N = N;

    Real ua = a.with_precision(prec);
    Real ub = (a + epsilon).with_precision(prec);
    int last_sign = 0;
    bool have_max = false, have_min = false;
    std::vector<double> log_n, log_maxd;
    Real max_so_far;

    for (std::uint64_t n = 1; n <= N; ++n) {
        if (n > 1) {
            try {
                ua = f(ua);
                ub = f(ub);
            } catch (const PoleError& e) {
                throw EvalError(n, e.what());
            }
        }
        Real diff = ua - ub;
        Real ad = diff.abs();
        if (!have_max || ad > rep.max_D) {
            rep.max_D = ad;
            have_max = true;
        }
        if (n >= N / 2 && (!have_min || ad < rep.min_D_tail)) {
            rep.min_D_tail = ad;
            have_min = true;
        }
        int s = diff.sign();
        if (s != 0) {
            if (last_sign != 0 && s != last_sign) ++rep.sign_changes;
            last_sign = s;
        }
        if (n % stride == 0 || n == 1 || n == N) {
            rep.checkpoints.push_back({n, ua.with_precision(digits),
                                       ub.with_precision(digits),
                                       diff.with_precision(digits)});
            double m = rep.max_D.to_double();
            // trend over the tail only, past the initial amplification phase
            if (m > 0 && n >= N / 2) {
                log_n.push_back(std::log(static_cast<double>(n)));
                log_maxd.push_back(std::log(m));
            }
        }
    }

    if (log_n.size() >= 3) {
        const size_t m = log_n.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < m; ++i) {
            sx += log_n[i];
            sy += log_maxd[i];
            sxx += log_n[i] * log_n[i];
            sxy += log_n[i] * log_maxd[i];
        }
        double denom = m * sxx - sx * sx;
        if (denom > 0) {
            double slope = (m * sxy - sx * sy) / denom;
            double intercept = (sy - slope * sx) / m;
            double ss = 0;
            for (size_t i = 0; i < m; ++i) {
                double r = log_maxd[i] - (intercept + slope * log_n[i]);
                ss += r * r;
            }
            rep.growth_slope = slope;
            if (m > 2) {
                rep.growth_slope_stderr =
                    std::sqrt(ss / (m - 2) / (sxx - sx * sx / m));
            }
        }
    }
    return rep;
}

CoverageReport transitivity_mod_r(const MapSpec& map, const Real& a,
                                  const Params& params, std::uint64_t N, int digits,
                                  const Real& r, std::uint64_t K) {
    if (!(r > Real(0L))) throw std::invalid_argument("transitivity_mod_r: r must be > 0");
    if (K < 2) throw std::invalid_argument("transitivity_mod_r: K must be >= 2");
    int prec = digits + kGuardDigits;
    BoundMap f(map, params, prec);
    CoverageReport rep;
    rep.r = r.with_precision(digits);
    rep.K = K;
    rep.N = N;
    rep.first_hit.assign(K, 0);
    Real rw = r.with_precision(prec);
    Real kw(static_cast<long>(K), prec);

    iterate_stream(f, a, N, [&](std::uint64_t n, const Real& u) {
        Real f01 = (u / rw).frac();  // in [0,1)
        long idx = mpz_get_si((f01 * kw).floor_int().get_mpz_t());
        if (idx < 0) idx = 0;
        if (idx >= static_cast<long>(K)) idx = static_cast<long>(K) - 1;
        if (rep.first_hit[static_cast<size_t>(idx)] == 0) {
            rep.first_hit[static_cast<size_t>(idx)] = n;
            ++rep.visited;
        }
        return rep.visited < K || n == N;
    });
    rep.coverage = static_cast<double>(rep.visited) / static_cast<double>(K);
    return rep;
}

LsysTransitivityResult lsys_transitivity_probe(const LSystemSpec& sys,
                                               const LBindings& bindings,
                                               const Real& u_lo, const Real& u_hi,
                                               const Real& v_lo, const Real& v_hi,
                                               std::uint64_t k_max,
                                               std::uint64_t samples, int digits) {
    if (samples < 1) throw std::invalid_argument("lsys_transitivity_probe: samples >= 1");
    if (u_hi < u_lo || v_hi < v_lo) {
        throw std::invalid_argument("lsys_transitivity_probe: empty interval");
    }
    int prec = digits + kGuardDigits;
    LsysTransitivityResult res;
    Real span = u_hi - u_lo;
    Real denom(static_cast<long>(samples > 1 ? samples - 1 : 1), prec);
    for (std::uint64_t s = 0; s < samples; ++s) {
        Real lambda = samples > 1
                          ? u_lo + span * Real(static_cast<long>(s), prec) / denom
                          : (u_lo + u_hi) / Real(2L, prec);
        ++res.samples_used;
        try {
            literate_stream(sys, bindings, lambda, k_max, prec,
                            [&](std::uint64_t k, const Real& w) {
                                if (k == 0) return true;
                                if (res.k && k >= *res.k) return false;
                                if (w >= v_lo && w <= v_hi) {
                                    res.k = k;
                                    res.witness_lambda = lambda.with_precision(digits);
                                    return false;
                                }
                                return true;
                            });
        } catch (const EvalError&) {
            ++res.samples_failed;
        }
        if (res.k && *res.k == 1) break;
    }
    return res;
}

MutualAttractionReport mutual_attraction_check(const LSystemSpec& sys,
                                               const LBindings& bindings,
                                               const std::vector<Real>& a_list,
                                               std::uint64_t N, const Real& tolerance,
                                               int digits) {
    if (a_list.size() < 2) {
        throw std::invalid_argument("mutual_attraction_check: need at least 2 values");
    }
    int prec = digits + kGuardDigits;
    const size_t m = a_list.size();

    std::vector<BoundMap> shared;  // programs shared across the lockstep runs
    for (const auto& spec : bindings.by_letter) {
        shared.emplace_back(spec, bindings.params, prec);
    }
    std::vector<int> word = lword_stream(sys, N);
    std::vector<Real> u;
    for (const auto& a : a_list) u.push_back(a.with_precision(prec));

    struct PairState {
        size_t i, j;
        std::uint64_t last_bad = 0;  // last n with gap >= tolerance (0 = never)
        bool ever_good = false;
    };
    std::vector<PairState> ps;
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 1; j < m; ++j) ps.push_back({i, j});
    }
    auto observe = [&](std::uint64_t n) {
        for (auto& p : ps) {
            Real gap = (u[p.i] - u[p.j]).abs();
            if (gap >= tolerance) {
                p.last_bad = n + 1;  // mark; first candidate index is n+1
            } else {
                p.ever_good = true;
            }
        }
    };
    observe(0);
    std::uint64_t observed = 0;  // last index actually observed
    for (std::uint64_t n = 1; n <= N; ++n) {
        int letter = word[n - 1];
        bool overflowed = false;
        for (size_t i = 0; i < m && !overflowed; ++i) {
            try {
                u[i] = shared[static_cast<size_t>(letter)](u[i]);
            } catch (const PoleError& e) {
                throw EvalError(n, e.what());
            } catch (const NumericError&) {
                // one orbit left the representable range; the gaps observed
                // so far still decide the verdict
                overflowed = true;
            }
        }
        if (overflowed) break;
        observe(n);
        observed = n;
    }

    MutualAttractionReport rep;
    rep.converged = true;
    for (const auto& p : ps) {
        bool conv = p.ever_good && p.last_bad <= observed;
        rep.pairs.push_back({p.i, p.j, conv, p.last_bad});
        if (!conv) rep.converged = false;
    }
    return rep;
}

}  // namespace helixlab
