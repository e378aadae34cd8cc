#include "helixlab/engine.hpp"

#include <algorithm>
#include <deque>

namespace helixlab {

bool WindowPolicy::keep_streamed(std::uint64_t n) const {
    if (stride != 0 && n % stride == 0) return true;
    for (const auto& [lo, hi] : ranges) {
        if (n >= lo && n <= hi) return true;
    }
    return false;
}

const Real* Trajectory::at(std::uint64_t n) const {
    auto it = std::lower_bound(window.begin(), window.end(), n,
                               [](const TrajPoint& p, std::uint64_t v) { return p.n < v; });
    if (it == window.end() || it->n != n) return nullptr;
    return &it->value;
}

void Trajectory::write_csv(std::ostream& os) const {
    os << "n,value,frac\n";
    for (const auto& p : window) {
        os << p.n << "," << p.value.str() << "," << p.value.frac().str() << "\n";
    }
}

namespace {

// Shared window/summary collector over a full-precision term stream.
class Collector {
  public:
    Collector(Trajectory& traj, const WindowPolicy& policy, int digits)
        : traj_(traj), policy_(policy), digits_(digits) {}

    void feed(std::uint64_t n, const Real& value) {
        Real rounded = value.with_precision(digits_);
        if (first_) {
            traj_.min_value = traj_.max_value = rounded;
            traj_.min_frac = traj_.max_frac = rounded.frac();
            first_ = false;
        } else {
            if (rounded < traj_.min_value) traj_.min_value = rounded;
            if (rounded > traj_.max_value) traj_.max_value = rounded;
            Real f = rounded.frac();
            if (f < traj_.min_frac) traj_.min_frac = f;
            if (f > traj_.max_frac) traj_.max_frac = f;
        }
        if (policy_.keep_streamed(n)) {
            streamed_.push_back({n, rounded});
        }
        if (policy_.tail > 0) {
            tail_.push_back({n, std::move(rounded)});
            if (tail_.size() > policy_.tail) tail_.pop_front();
        }
        traj_.length++;
        traj_.final_value = value;
    }

    void finish() {
        auto& w = traj_.window;
        w = std::move(streamed_);
        for (auto& p : tail_) w.push_back(std::move(p));
        std::sort(w.begin(), w.end(),
                  [](const TrajPoint& a, const TrajPoint& b) { return a.n < b.n; });
        w.erase(std::unique(w.begin(), w.end(),
                            [](const TrajPoint& a, const TrajPoint& b) {
                                return a.n == b.n;
                            }),
                w.end());
    }

  private:
    Trajectory& traj_;
    const WindowPolicy& policy_;
    int digits_;
    bool first_ = true;
    std::vector<TrajPoint> streamed_;
    std::deque<TrajPoint> tail_;
};

}  // namespace

void iterate_stream(const BoundMap& f, const Real& a, std::uint64_t N,
                    const StepSink& sink) {
    Real u = a.with_precision(f.precision());
    if (N == 0) return;
    if (!sink(1, u)) return;
    for (std::uint64_t n = 2; n <= N; ++n) {
        try {
            u = f(u);
        } catch (const PoleError& e) {
            throw EvalError(n, e.what());
        } catch (const NumericError& e) {
            throw EvalError(n, e.what());
        }
        if (!sink(n, u)) return;
    }
}

namespace {

Trajectory run_plain(const BoundMap& f, const Real& start, std::uint64_t first_index,
                     std::uint64_t count, int digits, const WindowPolicy& policy) {
    Trajectory traj;
    traj.digits = digits;
    traj.index_base = first_index;
    Collector col(traj, policy, digits);
    Real u = start.with_precision(f.precision());
    std::uint64_t n = first_index;
    col.feed(n, u);
    try {
        for (std::uint64_t i = 1; i < count; ++i) {
            ++n;
            try {
                u = f(u);
            } catch (const PoleError& e) {
                traj.failure = EvalFailure{n, e.what()};
                break;
            } catch (const NumericError& e) {
                traj.failure = EvalFailure{n, e.what()};
                break;
            }
            col.feed(n, u);
        }
    } catch (...) {
        col.finish();
        throw;
    }
    col.finish();
    return traj;
}

}  // namespace

Trajectory iterate(const MapSpec& map, const Real& a, const Params& params,
                   std::uint64_t N, int digits, const WindowPolicy& policy) {
    if (N < 1) throw std::invalid_argument("iterate: N must be >= 1");
    BoundMap f(map, params, digits + kGuardDigits);
    return run_plain(f, a, 1, N, digits, policy);
}

Trajectory iterate_resume(const MapSpec& map, const Real& checkpoint,
                          std::uint64_t first_index, const Params& params,
                          std::uint64_t steps, int digits,
                          const WindowPolicy& policy) {
    BoundMap f(map, params, digits + kGuardDigits);
    return run_plain(f, checkpoint, first_index, steps + 1, digits, policy);
}

void literate_stream(const LSystemSpec& sys, const LBindings& bindings,
                     const Real& a, std::uint64_t N, int prec,
                     const StepSink& sink) {
    if (bindings.by_letter.size() != sys.letters.size()) {
        throw LSystemError("bindings must cover every alphabet letter");
    }
    std::vector<BoundMap> fs;
    fs.reserve(bindings.by_letter.size());
    for (const auto& m : bindings.by_letter) fs.emplace_back(m, bindings.params, prec);
    std::vector<int> word = lword_stream(sys, N);
    Real u = a.with_precision(prec);
    if (!sink(0, u)) return;
    for (std::uint64_t n = 1; n <= N; ++n) {
        try {
            u = fs[static_cast<size_t>(word[n - 1])](u);
        } catch (const PoleError& e) {
            throw EvalError(n, e.what());
        } catch (const NumericError& e) {
            throw EvalError(n, e.what());
        }
        if (!sink(n, u)) return;
    }
}

Trajectory literate(const LSystemSpec& sys, const LBindings& bindings,
                    const Real& a, std::uint64_t N, int digits,
                    const WindowPolicy& policy) {
    Trajectory traj;
    traj.digits = digits;
    traj.index_base = 0;
    Collector col(traj, policy, digits);
    try {
        literate_stream(sys, bindings, a, N, digits + kGuardDigits,
                        [&](std::uint64_t n, const Real& v) {
                            col.feed(n, v);
                            return true;
                        });
    } catch (const EvalError& e) {
        traj.failure = EvalFailure{e.index, e.what()};
    }
    col.finish();
    return traj;
}

}  // namespace helixlab
