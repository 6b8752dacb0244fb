#include "pnpbell/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include "pnpbell/efficiency.hpp"
#include "pnpbell/parallel.hpp"
#include "pnpbell/pnp.hpp"
#include "pnpbell/rng.hpp"

namespace pnpbell {

namespace {

// Single-copy sampling tables of the noisy strategy: joint cdf per setting
// pair and marginal cdfs per party setting.
struct CopyTables {
    double joint[2][2][4];
    double amarg[2][2];
    double bmarg[2][2];
};

CopyTables build_tables(const QuantumModel& strategy, double v) {
    const BehaviorD beh = apply_visibility(quantum_behavior(strategy), v);
    CopyTables t{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double acc = 0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    acc += beh.at(a, b, x, y);
                    t.joint[x][y][a * 2 + b] = acc;
                }
            t.joint[x][y][3] = 1.0;  // guard the top against rounding
        }
    for (int x = 0; x < 2; ++x) {
        t.amarg[x][0] = beh.at(0, 0, x, 0) + beh.at(0, 1, x, 0);
        t.amarg[x][1] = 1.0;
    }
    for (int y = 0; y < 2; ++y) {
        t.bmarg[y][0] = beh.at(0, 0, 0, y) + beh.at(1, 0, 0, y);
        t.bmarg[y][1] = 1.0;
    }
    return t;
}

int sample_cdf(const double* cdf, int size, double r) {
    for (int i = 0; i + 1 < size; ++i)
        if (r < cdf[i]) return i;
    return size - 1;
}

void check_config(const ExperimentConfig& config) {
    if (config.N < 1 || config.N > 3)
        throw std::invalid_argument("copy count capped at 3 for simulation");
    if (config.eta < 0 || config.eta > 1)
        throw std::invalid_argument("efficiency must be in [0,1]");
    if (config.v < 0 || config.v > 1) throw std::invalid_argument("visibility must be in [0,1]");
    if (config.trials < 1) throw std::invalid_argument("need at least one trial");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const Rat& kappa) {
    check_config(config);
    const int N = config.N;
    const int S = ipow(2, N);
    const int O = S;
    const size_t blocks = static_cast<size_t>(S) * S;
    const size_t cells = blocks * O * O;
    const CopyTables tables = build_tables(config.strategy, config.v);
    const CounterRng rng(config.seed, 0);
    const int threads = config.threads < 1 ? default_threads() : config.threads;

    struct Tally {
        std::vector<uint64_t> cell;
        std::vector<uint64_t> setting;
        uint64_t wins = 0;
    };
    std::vector<Tally> parts(static_cast<size_t>(std::max(threads, 1)));

    parallel_chunks(config.trials, threads, [&](int chunk, uint64_t begin, uint64_t end) {
        Tally& t = parts[static_cast<size_t>(chunk)];
        t.cell.assign(cells, 0);
        t.setting.assign(blocks, 0);
        for (uint64_t trial = begin; trial < end; ++trial) {
            const int x = static_cast<int>(rng.range(trial, 0, static_cast<uint64_t>(S)));
            const int y = static_cast<int>(rng.range(trial, 1, static_cast<uint64_t>(S)));
            const bool aclick = rng.real(trial, 2) < config.eta;
            const bool bclick = rng.real(trial, 3) < config.eta;
            int a_code = 0;
            int b_code = 0;
            bool win = true;
            for (int i = 0; i < N; ++i) {
                const int xi = tuple_digit(x, i, N, 2);
                const int yi = tuple_digit(y, i, N, 2);
                int ai, bi;
                if (aclick && bclick) {
                    const double r = rng.real(trial, 4 + static_cast<uint64_t>(i));
                    const int idx = sample_cdf(tables.joint[xi][yi], 4, r);
                    ai = idx >> 1;
                    bi = idx & 1;
                } else if (aclick) {
                    const double r = rng.real(trial, 4 + static_cast<uint64_t>(i));
                    ai = sample_cdf(tables.amarg[xi], 2, r);
                    bi = config.strategy.beta(yi);
                } else if (bclick) {
                    const double r = rng.real(trial, 4 + static_cast<uint64_t>(i));
                    bi = sample_cdf(tables.bmarg[yi], 2, r);
                    ai = config.strategy.alpha(xi);
                } else {
                    ai = config.strategy.alpha(xi);
                    bi = config.strategy.beta(yi);
                }
                a_code = a_code * 2 + ai;
                b_code = b_code * 2 + bi;
                win = win && ((ai ^ bi) == (xi & yi));
            }
            const size_t block = static_cast<size_t>(x) * S + static_cast<size_t>(y);
            t.cell[(block * O + static_cast<size_t>(a_code)) * O + static_cast<size_t>(b_code)]++;
            t.setting[block]++;
            if (win) t.wins++;
        }
    });

    std::vector<uint64_t> cell(cells, 0);
    ExperimentResult result;
    result.setting_counts.assign(blocks, 0);
    for (const Tally& t : parts) {
        if (t.cell.empty()) continue;
        for (size_t i = 0; i < cells; ++i) cell[i] += t.cell[i];
        for (size_t i = 0; i < blocks; ++i) result.setting_counts[i] += t.setting[i];
        result.wins += t.wins;
    }

    result.empirical_behavior = BehaviorD(N, 2, 2);
    double product = 0;
    const double block_weight = 1.0 / static_cast<double>(blocks);
    for (int x = 0; x < S; ++x)
        for (int y = 0; y < S; ++y) {
            const size_t block = static_cast<size_t>(x) * S + static_cast<size_t>(y);
            const uint64_t n_xy = result.setting_counts[block];
            if (n_xy == 0) {
                result.unobserved_settings++;
                const double u = 1.0 / (O * O);
                for (int a = 0; a < O; ++a)
                    for (int b = 0; b < O; ++b) result.empirical_behavior.at(a, b, x, y) = u;
                continue;  // zero-count settings contribute nothing
            }
            uint64_t block_wins = 0;
            for (int a = 0; a < O; ++a)
                for (int b = 0; b < O; ++b) {
                    const uint64_t c =
                        cell[(block * O + static_cast<size_t>(a)) * O + static_cast<size_t>(b)];
                    result.empirical_behavior.at(a, b, x, y) =
                        static_cast<double>(c) / static_cast<double>(n_xy);
                    bool w = true;
                    for (int i = 0; i < N; ++i)
                        w = w && ((tuple_digit(a, i, N, 2) ^ tuple_digit(b, i, N, 2)) ==
                                  (tuple_digit(x, i, N, 2) & tuple_digit(y, i, N, 2)));
                    if (w) block_wins += c;
                }
            product += block_weight * static_cast<double>(block_wins) /
                       static_cast<double>(n_xy);
        }
    result.coverage_warning = result.unobserved_settings > 0;
    // With full coverage the estimate IS the product expression evaluated on
    // the published table; go through the library call so the recomputation
    // matches bit for bit. Uniform fills would bias it, hence the branch.
    result.product_value_estimate =
        result.coverage_warning
            ? product
            : evaluate_product_bell<double>(make_chsh(), N, result.empirical_behavior);
    result.penalty_a = penalty_terms(result.empirical_behavior, Party::alice);
    result.penalty_b = penalty_terms(result.empirical_behavior, Party::bob);
    result.kappa = rat_double(kappa);
    result.pnp_estimate =
        result.product_value_estimate - result.kappa * (result.penalty_a + result.penalty_b);
    const double phat =
        static_cast<double>(result.wins) / static_cast<double>(config.trials);
    result.std_error = std::sqrt(phat * (1.0 - phat) / static_cast<double>(config.trials));
    return result;
}

LossyExpectation lossy_expectation(const QuantumModel& strategy, double v, double eta, int N) {
    const BehaviorD noisy = apply_visibility(quantum_behavior(strategy), v);
    LossyExpectation e;
    e.Q = evaluate_bell(make_chsh(), noisy);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int o = 0; o < 2; ++o) {
                const double pa = noisy.at(o, 0, x, y) + noisy.at(o, 1, x, y);
                const double pb = noisy.at(0, o, x, y) + noisy.at(1, o, x, y);
                if ((o ^ strategy.beta(y)) == (x & y)) e.A += 0.25 * pa;
                if ((strategy.alpha(x) ^ o) == (x & y)) e.B += 0.25 * pb;
            }
    EfficiencyQuery query;
    query.Q = e.Q;
    query.A = e.A;
    query.B = e.B;
    query.N = N;
    query.eta = eta;
    e.value = pnp_value_with_efficiency(query);
    return e;
}

PenaltyProbeStats penalty_bias_probe(const ExperimentConfig& config, int repeats) {
    PenaltyProbeStats stats;
    stats.trials = config.trials;
    stats.repeats = repeats;
    if (repeats <= 0) return stats;
    const Rat kappa = kappa_sufficient(make_chsh(), config.N);
    for (int r = 0; r < repeats; ++r) {
        ExperimentConfig cfg = config;
        cfg.seed = config.seed + static_cast<uint64_t>(r);
        const ExperimentResult res = run_experiment(cfg, kappa);
        stats.penalties.push_back(res.penalty_a + res.penalty_b);
    }
    double sum = 0, sq = 0;
    stats.min = stats.penalties.front();
    stats.max = stats.penalties.front();
    for (const double p : stats.penalties) {
        sum += p;
        sq += p * p;
        stats.min = std::min(stats.min, p);
        stats.max = std::max(stats.max, p);
    }
    const double n = static_cast<double>(repeats);
    stats.mean = sum / n;
    stats.stddev = std::sqrt(std::max(0.0, sq / n - stats.mean * stats.mean));
    return stats;
}

}  // namespace pnpbell
