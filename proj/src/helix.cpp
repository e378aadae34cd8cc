#include "helixlab/helix.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>

namespace helixlab {

bool verify_helix(const std::vector<Real>& seq, std::uint64_t j, const Real& r) {
    if (j == 0) throw LengthError("period must be positive");
    if (seq.size() <= j) throw LengthError("sequence has no pair a full period apart");
    int p = seq.front().precision();
    Real tol(mpz_class(1), -(p - 5), p);
    for (std::uint64_t i = 0; i < seq.size(); ++i) {
        for (std::uint64_t k = 1; i + k * j < seq.size(); ++k) {
            Real diff = seq[i + k * j] - seq[i];
            if (r.is_zero()) {
                if (diff.abs() > tol) return false;
            } else {
                Real q = diff / r;
                Real nearest = (q + Real::parse("0.5", p)).floor();
                if ((q - nearest).abs() > tol) return false;
            }
        }
    }
    return true;
}

namespace {

// Longest contiguous run of indices at the end of the window, restricted to
// n >= transient.
std::vector<const TrajPoint*> tail_run(const Trajectory& traj, std::uint64_t transient) {
    std::vector<const TrajPoint*> out;
    const auto& w = traj.window;
    if (w.empty()) return out;
    size_t end = w.size();
    size_t begin = end - 1;
    while (begin > 0 && w[begin - 1].n + 1 == w[begin].n && w[begin].n > transient) {
        --begin;
    }
    for (size_t i = begin; i < end; ++i) {
        if (w[i].n >= transient) out.push_back(&w[i]);
    }
    return out;
}

std::vector<Real> canonical_rotation(std::vector<Real> cycle) {
    const size_t j = cycle.size();
    size_t best = 0;
    for (size_t s = 1; s < j; ++s) {
        for (size_t k = 0; k < j; ++k) {
            int c = cycle[(s + k) % j].compare(cycle[(best + k) % j]);
            if (c < 0) best = s;
            if (c != 0) break;
        }
    }
    std::rotate(cycle.begin(), cycle.begin() + static_cast<long>(best), cycle.end());
    return cycle;
}

}  // namespace

std::optional<HelixDescriptor> detect_stable_helix(const Trajectory& traj,
                                                   std::uint64_t j_max,
                                                   const Real& tol,
                                                   std::uint64_t transient) {
    auto run = tail_run(traj, transient);
    if (run.size() < 2 * j_max + 2) {
        throw WindowError("retained window too small for j_max=" +
                          std::to_string(j_max));
    }
    int p = run.front()->value.precision();
    for (std::uint64_t j = 1; j <= j_max; ++j) {
        Real dmin, dmax;
        bool first = true;
        for (size_t i = 0; i + j < run.size(); ++i) {
            Real d = run[i + j]->value - run[i]->value;
            if (first) {
                dmin = dmax = d;
                first = false;
            } else {
                if (d < dmin) dmin = d;
                if (d > dmax) dmax = d;
            }
        }
        if ((dmax - dmin) <= tol + tol) {
            Real c = (dmax + dmin) / Real(2L, p);
            HelixDescriptor h;
            h.period = j;
            h.increment = c;
            h.modulo = c;
            h.multiplier = 1;
            Real res = (dmax - c).abs();
            Real res2 = (dmin - c).abs();
            h.residual = res > res2 ? res : res2;
            h.fractional_cycle = fractional_cycle(traj, j);
            return h;
        }
    }
    return std::nullopt;
}

std::vector<Real> fractional_cycle(const Trajectory& traj, std::uint64_t j) {
    const auto& w = traj.window;
    if (w.size() < j) throw WindowError("window shorter than one period");
    std::vector<Real> cycle;
    cycle.reserve(j);
    for (size_t i = w.size() - j; i < w.size(); ++i) {
        cycle.push_back(w[i].value.frac());
    }
    // order by trajectory index before rotating
    return canonical_rotation(std::move(cycle));
}

SkidStats skid_scan(const MapSpec& map, const Real& a, const Params& params,
                    std::uint64_t N, int digits, std::uint64_t j, const Real& c,
                    double theta, int hysteresis) {
    SkidStats st;
    st.theta = theta;
    st.hysteresis = hysteresis;

    BoundMap f(map, params, digits + kGuardDigits);
    Real cw = c.with_precision(digits + kGuardDigits);

    std::deque<Real> ring;  // last j+1 values
    // Transient: episodes are only counted once the trajectory has locked
    // into the laminar channel for the first time.
    enum class Phase { Transient, Laminar, Skid };
    Phase phase = Phase::Transient;
    int run = 0;
    std::uint64_t above = 0;

    iterate_stream(f, a, N, [&](std::uint64_t n, const Real& u) {
        ring.push_back(u);
        if (ring.size() <= j) return true;
        // residual for index n - j
        std::uint64_t idx = n - j;
        double s = (ring.back() - ring.front() - cw).abs().to_double();
        ring.pop_front();
        ++st.residual_count;
        if (s > st.max_residual) st.max_residual = s;
        if (s > theta) ++above;
        if (phase == Phase::Transient) {
            if (s < theta / 4) {
                if (++run >= hysteresis) {
                    phase = Phase::Laminar;
                    run = 0;
                }
            } else {
                run = 0;
            }
        } else if (phase == Phase::Laminar) {
            if (s > theta) {
                if (++run >= hysteresis) {
                    st.episodes.push_back({idx - static_cast<std::uint64_t>(hysteresis) + 1, idx});
                    phase = Phase::Skid;
                    run = 0;
                }
            } else {
                run = 0;
            }
        } else {
            st.episodes.back().end = idx;
            if (s < theta / 4) {
                if (++run >= hysteresis) {
                    st.episodes.back().end = idx - static_cast<std::uint64_t>(hysteresis) + 1;
                    phase = Phase::Laminar;
                    run = 0;
                }
            } else {
                run = 0;
            }
        }
        return true;
    });

    if (st.residual_count == 0) throw LengthError("trajectory shorter than one period");
    st.laminar_fraction =
        1.0 - static_cast<double>(above) / static_cast<double>(st.residual_count);
    if (static_cast<double>(above) >
        0.9 * static_cast<double>(st.residual_count)) {
        throw NoLaminarPhase("residual exceeds theta on more than 90% of indices");
    }
    if (phase == Phase::Transient) {
        throw NoLaminarPhase("trajectory never locked into a laminar phase");
    }
    if (st.episodes.empty()) {
        st.status = SkidStats::Status::NoEpisodes;
        return st;
    }
    // One physical escape can bounce several times before re-capture; count
    // episodes separated by less than min_gap laminar steps as one skid.
    std::vector<SkidEpisode> merged{st.episodes.front()};
    for (size_t i = 1; i < st.episodes.size(); ++i) {
        if (st.episodes[i].start - merged.back().end < kMinLaminarGap) {
            merged.back().end = st.episodes[i].end;
        } else {
            merged.push_back(st.episodes[i]);
        }
    }
    st.episodes = std::move(merged);
    st.status = SkidStats::Status::Ok;
    st.first_escape = st.episodes.front().start;
    for (size_t i = 1; i < st.episodes.size(); ++i) {
        st.laminar_lengths.push_back(st.episodes[i].start - st.episodes[i - 1].start);
    }
    if (!st.laminar_lengths.empty()) {
        double sum = 0;
        for (auto g : st.laminar_lengths) sum += static_cast<double>(g);
        st.mean_laminar = sum / static_cast<double>(st.laminar_lengths.size());
    }
    return st;
}

// ---------------------------------------------------------------------------
// Order-point fit

namespace {

struct LinFit {
    double slope, intercept, rms;
};

LinFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    LinFit f{};
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (size_t i = 0; i < n; ++i) {
        double r = ys[i] - (f.intercept + f.slope * xs[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

double sse_at(const std::vector<std::pair<double, double>>& samples, double b_star,
              LinFit* out = nullptr) {
    std::vector<double> xs, ys;
    for (auto [b, t] : samples) {
        xs.push_back(std::log(b_star - b));
        ys.push_back(std::log(t));
    }
    LinFit f = linear_fit(xs, ys);
    if (out) *out = f;
    return f.rms;
}

}  // namespace

OrderPointFit fit_power_law(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 4) throw FitDegenerate("need at least 4 samples");
    auto sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].second <= sorted[i - 1].second) {
            throw FitDegenerate("laminar means are not monotone in b");
        }
    }
    double b_max = sorted.back().first;
    // golden-section search for the b_star minimizing the log-space RMS
    double lo = b_max + 1e-9, hi = b_max + 1e-2;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = sse_at(sorted, x1), f2 = sse_at(sorted, x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = sse_at(sorted, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = sse_at(sorted, x2);
        }
    }
    OrderPointFit fit;
    fit.b_star = 0.5 * (lo + hi);
    LinFit lf;
    fit.fit_residual = sse_at(sorted, fit.b_star, &lf);
    fit.exponent = -lf.slope;
    fit.amplitude = std::exp(lf.intercept);
    fit.samples = sorted;
    return fit;
}

OrderPointFit order_point_fit(const MapSpec& map, const std::vector<Real>& b_samples,
                              const std::string& b_param, const Real& a,
                              std::uint64_t N, int digits, std::uint64_t j,
                              const Real& c, double theta, int hysteresis,
                              int min_episodes) {
    if (b_samples.size() < 4) throw FitDegenerate("need at least 4 b samples");
    std::vector<std::future<SkidStats>> futs;
    for (const Real& b : b_samples) {
        futs.push_back(std::async(std::launch::async, [&, b] {
            Params p{{b_param, b}};
            return skid_scan(map, a, p, N, digits, j, c, theta, hysteresis);
        }));
    }
    std::vector<std::pair<double, double>> samples;
    for (size_t i = 0; i < futs.size(); ++i) {
        SkidStats st = futs[i].get();
        if (st.status != SkidStats::Status::Ok ||
            static_cast<int>(st.episodes.size()) < min_episodes) {
            throw InsufficientEpisodes("b=" + b_samples[i].str() + " yielded " +
                                       std::to_string(st.episodes.size()) +
                                       " episodes (need " +
                                       std::to_string(min_episodes) + ")");
        }
        samples.emplace_back(b_samples[i].to_double(), st.mean_laminar);
    }
    return fit_power_law(samples);
}

}  // namespace helixlab
