#pragma once

#include <cstdint>
#include <vector>

#include "pnpbell/bell.hpp"
#include "pnpbell/quantum.hpp"
#include "pnpbell/rational.hpp"

namespace pnpbell {

// Monte Carlo model of the lossy N-parallel experiment. All randomness is
// counter-based on (seed, trial): slot 0 draws Alice's setting tuple, slot 1
// Bob's, slot 2 Alice's click, slot 3 Bob's click, slot 4+i the outcome of
// copy i. Unused slots are simply never evaluated, so partitioning trials
// across threads cannot change any draw.
struct ExperimentConfig {
    QuantumModel strategy;  // per-copy state, observables, no-click assignments
    int N = 1;
    double eta = 1.0;
    double v = 1.0;
    uint64_t trials = 1;
    uint64_t seed = 0;
    int threads = 1;
};

struct ExperimentResult {
    // Per observed setting pair, counts normalized; setting pairs with no
    // trials are filled uniformly and counted in unobserved_settings.
    BehaviorD empirical_behavior;
    // Uniform-weight product value over observed setting pairs only; equals
    // the product expression evaluated on empirical_behavior whenever every
    // setting pair was observed.
    double product_value_estimate = 0;
    double penalty_a = 0;  // plug-in estimates, biased upward by sampling noise
    double penalty_b = 0;
    double pnp_estimate = 0;  // product estimate minus kappa * (penalties)
    double std_error = 0;     // binomial, on the win-all-games indicator
    std::vector<uint64_t> setting_counts;  // indexed x * n^N + y
    uint64_t wins = 0;
    int unobserved_settings = 0;
    bool coverage_warning = false;
    double kappa = 0;

    ExperimentResult() : empirical_behavior(1, 2, 2) {}
};

ExperimentResult run_experiment(const ExperimentConfig& config, const Rat& kappa);

// Noisy per-copy game terms of a strategy and the lossy expectation they
// imply; the analytic oracle the simulator is tested against.
struct LossyExpectation {
    double Q = 0;
    double A = 0;
    double B = 0;
    double value = 0;
};

LossyExpectation lossy_expectation(const QuantumModel& strategy, double v, double eta, int N);

struct PenaltyProbeStats {
    uint64_t trials = 0;
    int repeats = 0;
    double mean = 0;
    double stddev = 0;  // population spread across repeats
    double min = 0;
    double max = 0;
    std::vector<double> penalties;
};

// Repeats the experiment with seeds seed, seed+1, ... and reports the spread
// of the (positively biased) empirical penalty of a product strategy.
PenaltyProbeStats penalty_bias_probe(const ExperimentConfig& config, int repeats);

}  // namespace pnpbell
