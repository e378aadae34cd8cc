#pragma once

#include "helixlab/chaos.hpp"
#include "helixlab/helix.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace helixlab {

struct PredicateAgrees : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AttractorClass {
    enum class Tag { Helix, PseudoHelix, Chaotic, Unclassified };
    Tag tag = Tag::Unclassified;
    std::uint64_t period = 0;    // Helix / PseudoHelix
    Real increment;              // c
    double mean_laminar = 0.0;   // PseudoHelix
    int evidence = 0;            // initial values agreeing with the verdict
    std::uint64_t budget = 0;    // iterations spent
    std::string note;
};

std::string to_string(AttractorClass::Tag tag);

struct ClassifyConfig {
    std::vector<Real> a_set{Real::parse("0.3", 40), Real::parse("0.5", 40),
                            Real::parse("0.8", 40)};
    std::uint64_t N = 200000;
    std::uint64_t N_escalated = 1000000;
    int digits = 40;
    std::uint64_t j_max = 64;
    Real tol = Real(mpz_class(1), -9, 40);
    std::uint64_t transient = 10000;
    double theta = 0.02;
    int hysteresis = 3;
    std::uint64_t coverage_bins = 100;
    double min_coverage = 0.9;
    std::string b_param = "b";
};

// Decision order: Helix -> PseudoHelix -> Chaotic -> Unclassified, with one
// escalation to N_escalated when both Helix and PseudoHelix fail at N.
AttractorClass classify(const MapSpec& family, const Real& b,
                        const ClassifyConfig& cfg = ClassifyConfig{});

struct ScanRow {
    Real b;
    AttractorClass cls;
    bool boundary_candidate = false;  // differs from the previous row's period
};

// One row per sampled b in [b_from, b_to] stepping by `step`; rows are
// computed independently (up to `jobs` concurrently) and merged in b order.
std::vector<ScanRow> sweep(const MapSpec& family, const Real& b_from,
                           const Real& b_to, const Real& step,
                           const ClassifyConfig& cfg = ClassifyConfig{},
                           unsigned jobs = 0);

using ClassPredicate = std::function<bool(const AttractorClass&)>;

// Bisection: narrows [b_lo, b_hi] by `iterations` halvings; the predicate
// must differ at the endpoints.
std::pair<Real, Real> refine_boundary(const MapSpec& family, const Real& b_lo,
                                      const Real& b_hi, const ClassPredicate& pred,
                                      unsigned iterations,
                                      const ClassifyConfig& cfg = ClassifyConfig{});

}  // namespace helixlab
