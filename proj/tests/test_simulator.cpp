#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pnpbell/pnp.hpp"
#include "pnpbell/simulator.hpp"

using namespace pnpbell;

namespace {

ExperimentConfig make_config(double q, int N, double eta, double v, uint64_t trials,
                             uint64_t seed) {
    ExperimentConfig config;
    config.strategy = make_quantum_model(q);
    config.N = N;
    config.eta = eta;
    config.v = v;
    config.trials = trials;
    config.seed = seed;
    return config;
}

}  // namespace

TEST_CASE("same seed, same result; different seed, different trajectory") {
    const ExperimentConfig config = make_config(0.9, 2, 0.85, 0.98, 20000, 11);
    const Rat kappa(7, 8);
    const ExperimentResult a = run_experiment(config, kappa);
    const ExperimentResult b = run_experiment(config, kappa);
    CHECK(a.wins == b.wins);
    CHECK(a.product_value_estimate == b.product_value_estimate);
    CHECK(a.penalty_a == b.penalty_a);
    CHECK(a.penalty_b == b.penalty_b);
    CHECK(a.pnp_estimate == b.pnp_estimate);
    CHECK(a.setting_counts == b.setting_counts);

    ExperimentConfig other = config;
    other.seed = 12;
    CHECK(run_experiment(other, kappa).wins != a.wins);
}

TEST_CASE("trial partitioning across threads does not change any draw") {
    ExperimentConfig config = make_config(0.7, 2, 0.8, 1.0, 30000, 5);
    const Rat kappa(7, 8);
    config.threads = 1;
    const ExperimentResult one = run_experiment(config, kappa);
    config.threads = 4;
    const ExperimentResult four = run_experiment(config, kappa);
    CHECK(one.wins == four.wins);
    CHECK(one.setting_counts == four.setting_counts);
    CHECK(one.product_value_estimate == four.product_value_estimate);
    CHECK(one.pnp_estimate == four.pnp_estimate);
}

TEST_CASE("perfect detectors at maximal entanglement hit the quantum value") {
    const ExperimentConfig config = make_config(1.0, 1, 1.0, 1.0, 1000000, 42);
    const ExperimentResult res = run_experiment(config, Rat(1, 4));
    CHECK(std::abs(res.product_value_estimate - tsirelson_bound()) < 3 * res.std_error);
    CHECK(res.std_error > 0);
    CHECK_FALSE(res.coverage_warning);
}

TEST_CASE("dead detectors collapse to the assignment strategy exactly") {
    const ExperimentConfig config = make_config(0.8, 2, 0.0, 1.0, 100000, 3);
    const ExperimentResult res = run_experiment(config, Rat(7, 8));
    // with full coverage the all-assignment behavior is deterministic per
    // block, so the stratified estimate has no sampling noise left
    CHECK_FALSE(res.coverage_warning);
    CHECK(res.product_value_estimate == 0.5625);
    CHECK(res.penalty_a == 0.0);
    CHECK(res.penalty_b == 0.0);
}

TEST_CASE("lossy expectation oracle: noiseless reductions") {
    const QuantumModel m = make_quantum_model(1.0);
    const LossyExpectation at_one = lossy_expectation(m, 1.0, 1.0, 2);
    CHECK(at_one.Q == doctest::Approx(m.Q).epsilon(1e-13));
    CHECK(at_one.A == doctest::Approx(m.A).epsilon(1e-13));
    CHECK(at_one.B == doctest::Approx(m.B).epsilon(1e-13));
    CHECK(at_one.value == doctest::Approx(m.Q * m.Q).epsilon(1e-13));

    const LossyExpectation noisy = lossy_expectation(m, 0.9, 1.0, 1);
    CHECK(noisy.Q == doctest::Approx(0.9 * m.Q + 0.05).epsilon(1e-13));
}

TEST_CASE("lossy runs land on the analytic expectation") {
    const ExperimentConfig config = make_config(1.0, 2, 0.8, 1.0, 1000000, 17);
    const ExperimentResult res = run_experiment(config, Rat(7, 8));
    const LossyExpectation oracle = lossy_expectation(config.strategy, 1.0, 0.8, 2);
    CHECK(std::abs(res.product_value_estimate - oracle.value) < 3 * res.std_error);
}

TEST_CASE("estimate is consistent with the expectation across many seeds") {
    int hits = 0;
    for (uint64_t seed = 100; seed < 120; ++seed) {
        const ExperimentConfig config = make_config(0.9, 2, 0.75, 0.97, 100000, seed);
        const ExperimentResult res = run_experiment(config, Rat(7, 8));
        const LossyExpectation oracle = lossy_expectation(config.strategy, 0.97, 0.75, 2);
        if (std::abs(res.product_value_estimate - oracle.value) < 3 * res.std_error) hits++;
    }
    CHECK(hits >= 19);
}

TEST_CASE("full-coverage estimates equal library recomputations on the table") {
    const ExperimentConfig config = make_config(0.9, 2, 0.7, 1.0, 200000, 23);
    const ExperimentResult res = run_experiment(config, Rat(7, 8));
    CHECK_FALSE(res.coverage_warning);
    res.empirical_behavior.validate(1e-12);
    const double product =
        evaluate_product_bell<double>(make_chsh(), 2, res.empirical_behavior);
    CHECK(res.product_value_estimate == product);
    CHECK(res.penalty_a == penalty_terms(res.empirical_behavior, Party::alice));
    CHECK(res.penalty_b == penalty_terms(res.empirical_behavior, Party::bob));
    CHECK(res.pnp_estimate ==
          res.product_value_estimate - res.kappa * (res.penalty_a + res.penalty_b));
}

TEST_CASE("deterministic product strategy has penalty exactly zero") {
    for (const uint64_t trials : {1000ULL, 30000ULL}) {
        const ExperimentConfig config = make_config(0.0, 2, 1.0, 1.0, trials, 7);
        const ExperimentResult res = run_experiment(config, Rat(7, 8));
        CHECK(res.penalty_a == 0.0);
        CHECK(res.penalty_b == 0.0);
    }
}

TEST_CASE("empirical penalty of a product strategy shrinks like one over root trials") {
    ExperimentConfig config = make_config(0.8, 2, 1.0, 1.0, 1000, 2024);
    const PenaltyProbeStats small = penalty_bias_probe(config, 6);
    config.trials = 100000;
    const PenaltyProbeStats large = penalty_bias_probe(config, 6);

    CHECK(small.repeats == 6);
    for (const double p : small.penalties) CHECK(p > 0.0);
    for (const double p : large.penalties) CHECK(p > 0.0);
    const double ratio = small.mean / large.mean;
    CHECK(ratio >= 5.0);
    CHECK(ratio <= 20.0);

    const PenaltyProbeStats empty = penalty_bias_probe(config, 0);
    CHECK(empty.penalties.empty());
    CHECK(empty.mean == 0.0);
}

TEST_CASE("sparse sampling of a large setting space raises the coverage flag") {
    const ExperimentConfig config = make_config(0.9, 3, 1.0, 1.0, 10, 1);
    const ExperimentResult res = run_experiment(config, Rat(0));
    CHECK(res.coverage_warning);
    CHECK(res.unobserved_settings > 0);
    res.empirical_behavior.validate(1e-12);  // uniform fills stay normalized
    CHECK(std::isfinite(res.pnp_estimate));
}

TEST_CASE("configuration guards") {
    ExperimentConfig config = make_config(0.5, 4, 1.0, 1.0, 10, 1);
    CHECK_THROWS_AS((void)run_experiment(config, Rat(0)), std::invalid_argument);
    config.N = 2;
    config.trials = 0;
    CHECK_THROWS_AS((void)run_experiment(config, Rat(0)), std::invalid_argument);
    config.trials = 10;
    config.eta = 1.2;
    CHECK_THROWS_AS((void)run_experiment(config, Rat(0)), std::invalid_argument);
}
