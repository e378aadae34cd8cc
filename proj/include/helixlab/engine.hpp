#pragma once

#include "helixlab/lsystem.hpp"
#include "helixlab/mapexpr.hpp"
#include "helixlab/real.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

namespace helixlab {

// Trajectory arithmetic carries this many extra significant digits beyond
// the requested display precision D.
constexpr int kGuardDigits = 5;

struct EvalError : std::runtime_error {
    EvalError(std::uint64_t index, const std::string& what)
        : std::runtime_error("evaluation failed at term " + std::to_string(index) +
                             ": " + what),
          index(index) {}
    std::uint64_t index;
};

struct EvalFailure {
    std::uint64_t index;
    std::string message;
};

// Which trajectory terms are retained. Default: the last `tail` terms plus
// every `stride`-th term. Explicit index ranges (inclusive) may be added.
struct WindowPolicy {
    std::uint64_t tail = 4096;
    std::uint64_t stride = 10000;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;

    static WindowPolicy tail_only(std::uint64_t k) { return {k, 0, {}}; }

    bool keep_streamed(std::uint64_t n) const;  // stride/ranges (tail handled separately)
};

struct TrajPoint {
    std::uint64_t n;
    Real value;
};

struct Trajectory {
    std::uint64_t length = 0;        // number of computed terms
    std::uint64_t index_base = 1;    // first index (1 plain, 0 L-iteration)
    int digits = 40;                 // display precision D
    std::vector<TrajPoint> window;   // sorted by n, values rounded to D
    Real final_value;                // last computed term at working precision
    Real min_value, max_value;
    Real min_frac, max_frac;
    std::optional<EvalFailure> failure;

    const Real* at(std::uint64_t n) const;
    void write_csv(std::ostream& os) const;  // header: n,value,frac
};

// Called for every term at full working precision; return false to stop.
using StepSink = std::function<bool(std::uint64_t n, const Real& value)>;

// Plain iteration u(1)=a, u(n+1)=f(u(n)). Streams terms 1..N into the sink.
// A PoleError inside f surfaces as EvalError with the failing index.
void iterate_stream(const BoundMap& f, const Real& a, std::uint64_t N,
                    const StepSink& sink);

Trajectory iterate(const MapSpec& map, const Real& a, const Params& params,
                   std::uint64_t N, int digits,
                   const WindowPolicy& policy = WindowPolicy{});

// Restart: continue a trajectory from a checkpointed value. `first_index`
// is the index of the checkpoint itself (already computed); terms
// first_index+1 .. first_index+steps are generated.
Trajectory iterate_resume(const MapSpec& map, const Real& checkpoint,
                          std::uint64_t first_index, const Params& params,
                          std::uint64_t steps, int digits,
                          const WindowPolicy& policy = WindowPolicy{});

// L-iteration: U(0)=a, U(n)=f_{L(n)}(U(n-1)). Streams terms 0..N.
struct LBindings {
    std::vector<MapSpec> by_letter;  // one map per alphabet letter
    Params params;
};

void literate_stream(const LSystemSpec& sys, const LBindings& bindings,
                     const Real& a, std::uint64_t N, int prec,
                     const StepSink& sink);

Trajectory literate(const LSystemSpec& sys, const LBindings& bindings,
                    const Real& a, std::uint64_t N, int digits,
                    const WindowPolicy& policy = WindowPolicy{});

}  // namespace helixlab
