#pragma once

#include "helixlab/engine.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace helixlab {

struct DivergenceReport {
    Real a, epsilon;
    struct Checkpoint {
        std::uint64_t n;
        Real u_a, u_b;
        Real diff;  // u_a - u_b
    };
    std::vector<Checkpoint> checkpoints;
    Real max_D;        // finite-horizon limsup proxy: max over n <= N
    Real min_D_tail;   // finite-horizon liminf proxy: min over n >= N/2
    std::uint64_t sign_changes = 0;
    Real lambda_threshold;
    // growth-trend statistic for the boundedness question: slope of a linear
    // fit of log(max-so-far D) against log(n), with its standard error
    double growth_slope = 0.0;
    double growth_slope_stderr = 0.0;
    std::uint64_t N = 0;
};

DivergenceReport divergence_probe(const MapSpec& map, const Real& a,
                                  const Real& epsilon, const Params& params,
                                  std::uint64_t N, std::uint64_t stride, int digits,
                                  const Real& lambda_threshold = Real(1L));

struct CoverageReport {
    Real r;
    std::uint64_t K = 0;
    std::vector<std::uint64_t> first_hit;  // per bin, 0 = never visited
    std::uint64_t visited = 0;
    double coverage = 0.0;
    std::uint64_t N = 0;
};

// Bins frac(u(n)/r)*r into K cells of [0, r) and records coverage.
CoverageReport transitivity_mod_r(const MapSpec& map, const Real& a,
                                  const Params& params, std::uint64_t N, int digits,
                                  const Real& r, std::uint64_t K);

struct LsysTransitivityResult {
    std::optional<std::uint64_t> k;  // smallest k with a sampled orbit in V
    Real witness_lambda;             // the sample achieving it (if k)
    std::uint64_t samples_used = 0;
    std::uint64_t samples_failed = 0;  // EvalError'd samples, skipped
};

// Deterministic uniform grid of `samples` points over U; for each, runs the
// L-iteration and looks for the first k <= k_max with the orbit value in V.
// An empty result is evidence, not proof, of non-transitivity.
LsysTransitivityResult lsys_transitivity_probe(const LSystemSpec& sys,
                                               const LBindings& bindings,
                                               const Real& u_lo, const Real& u_hi,
                                               const Real& v_lo, const Real& v_hi,
                                               std::uint64_t k_max,
                                               std::uint64_t samples, int digits);

struct MutualAttractionReport {
    bool converged = false;
    struct Pair {
        size_t i, j;
        bool converged;
        std::uint64_t n_epsilon;  // first index with all later gaps < tolerance
    };
    std::vector<Pair> pairs;
};

// Lockstep L-iteration of all initial values; per pair, the first index
// after which every observed gap stays below the tolerance up to N.
MutualAttractionReport mutual_attraction_check(const LSystemSpec& sys,
                                               const LBindings& bindings,
                                               const std::vector<Real>& a_list,
                                               std::uint64_t N, const Real& tolerance,
                                               int digits);

}  // namespace helixlab
