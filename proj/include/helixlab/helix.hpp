#pragma once

#include "helixlab/engine.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace helixlab {

struct LengthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct WindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoLaminarPhase : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientEpisodes : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FitDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HelixDescriptor {
    std::uint64_t period = 0;            // j, minimal among detected periods
    Real increment;                      // c = u(i+j) - u(i), constant
    Real modulo;                         // r; reporting convention r = c
    long multiplier = 1;                 // m; constant-increment convention
    Real residual;                       // max |d_i - c| over the window
    std::vector<Real> fractional_cycle;  // canonical rotation, values in [0,1)
};

// Definition check: (seq(i+kj) - seq(i)) / r is an integer to tolerance
// 10^-(P-5) for every valid (i, k); r = 0 means exact periodicity to the
// same tolerance. P is the precision of the sequence values. The sequence
// must contain at least one pair a full period apart.
bool verify_helix(const std::vector<Real>& seq, std::uint64_t j, const Real& r);

// Finds the minimal j <= j_max with d_i = u(i+j) - u(i) constant within tol
// over the trajectory's retained contiguous tail (restricted to indices
// >= transient). Returns nothing if no period qualifies.
std::optional<HelixDescriptor> detect_stable_helix(const Trajectory& traj,
                                                   std::uint64_t j_max,
                                                   const Real& tol,
                                                   std::uint64_t transient);

// Frac values over one period from the trajectory tail, rotated to the
// lexicographically smallest rotation.
std::vector<Real> fractional_cycle(const Trajectory& traj, std::uint64_t j);

struct SkidEpisode {
    std::uint64_t start = 0;
    std::uint64_t end = 0;
};

struct SkidStats {
    enum class Status { Ok, NoEpisodes };
    Status status = Status::NoEpisodes;
    std::vector<SkidEpisode> episodes;
    std::vector<std::uint64_t> laminar_lengths;  // gaps between episode starts
    double mean_laminar = 0.0;
    std::uint64_t first_escape = 0;  // start of episode 1 (0 if none)
    double theta = 0.0;
    int hysteresis = 0;
    std::uint64_t residual_count = 0;
    double max_residual = 0.0;
    double laminar_fraction = 0.0;  // share of indices with s(n) <= theta
};

// Episodes separated by fewer than this many laminar steps are merged into
// one skid (a single escape can bounce several times before re-capture).
constexpr std::uint64_t kMinLaminarGap = 22;

// Streams the trajectory and detects skid episodes from the residual
// s(n) = |u(n+j) - u(n) - c|. An episode starts after `hysteresis`
// consecutive residuals above theta and ends after `hysteresis` consecutive
// residuals below theta/4. Throws NoLaminarPhase when more than 90% of
// residuals exceed theta.
SkidStats skid_scan(const MapSpec& map, const Real& a, const Params& params,
                    std::uint64_t N, int digits, std::uint64_t j, const Real& c,
                    double theta = 0.02, int hysteresis = 3);

struct OrderPointFit {
    double b_star = 0.0;
    double amplitude = 0.0;     // C in T = C * (b_star - b)^(-gamma)
    double exponent = 0.0;      // gamma (reported, not asserted)
    double fit_residual = 0.0;  // RMS residual of the log-space fit
    std::vector<std::pair<double, double>> samples;  // (b, mean_laminar)
};

// Fits mean_laminar(b) = C * (b_star - b)^(-gamma) in log space over
// candidate b_star values; every sample must yield at least
// `min_episodes` laminar episodes.
OrderPointFit order_point_fit(const MapSpec& map, const std::vector<Real>& b_samples,
                              const std::string& b_param, const Real& a,
                              std::uint64_t N, int digits, std::uint64_t j,
                              const Real& c, double theta = 0.02, int hysteresis = 3,
                              int min_episodes = 10);

// Direct fit of already-measured (b, mean_laminar) pairs; the scan above is
// a driver around this.
OrderPointFit fit_power_law(const std::vector<std::pair<double, double>>& samples);

}  // namespace helixlab
