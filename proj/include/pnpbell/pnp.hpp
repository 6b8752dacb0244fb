#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "pnpbell/bell.hpp"
#include "pnpbell/rational.hpp"

namespace pnpbell {

namespace detail {
inline Rat abs_of(const Rat& r) { return rat_abs(r); }
inline double abs_of(double d) { return std::abs(d); }
}  // namespace detail

// Single-party marginal of copy `copy` showing outcome `a_v` under setting
// tuple `code`, averaged uniformly over the other party's setting tuples so
// it is also defined for signaling (empirical) tables. For non-signaling
// behaviors the average equals every individual term.
template <class T>
T copy_marginal(const BehaviorT<T>& beh, Party party, int copy, int a_v, int code) {
    const int S = beh.setting_tuples();
    const int O = beh.outcome_tuples();
    const int N = beh.copies();
    const int m = beh.outcomes();
    T acc(0);
    for (int other = 0; other < S; ++other)
        for (int a = 0; a < O; ++a)
            for (int b = 0; b < O; ++b) {
                const int own = (party == Party::alice) ? a : b;
                if (tuple_digit(own, copy, N, m) != a_v) continue;
                acc += (party == Party::alice) ? beh.at(a, b, code, other)
                                               : beh.at(a, b, other, code);
            }
    return acc / T(S);
}

// Sum over copies, ordered pairs of setting tuples that agree on that copy's
// setting, and non-final outcomes, of the absolute marginal mismatch.
template <class T>
T penalty_terms(const BehaviorT<T>& beh, Party party) {
    const int S = beh.setting_tuples();
    const int N = beh.copies();
    const int n = beh.settings();
    const int m = beh.outcomes();
    T total(0);
    for (int i = 0; i < N; ++i)
        for (int p = 0; p < S; ++p)
            for (int q = 0; q < S; ++q) {
                if (p == q || tuple_digit(p, i, N, n) != tuple_digit(q, i, N, n)) continue;
                for (int a_v = 0; a_v + 1 < m; ++a_v)
                    total += detail::abs_of(copy_marginal(beh, party, i, a_v, p) -
                                            copy_marginal(beh, party, i, a_v, q));
            }
    return total;
}

// Product value minus kappa times both parties' penalties.
template <class T>
T pnp_value(const BellExpression& expr, int N, const T& kappa, const BehaviorT<T>& beh) {
    return evaluate_product_bell<T>(expr, N, beh) -
           kappa * (penalty_terms(beh, Party::alice) + penalty_terms(beh, Party::bob));
}

// n^(N-1) (sigma_N - C^N). sigma_N defaults to the algebraic bound of the
// product game, sigma^N; a tighter product bound can be passed instead.
Rat kappa_sufficient(const BellExpression& expr, int N,
                     const std::optional<Rat>& product_sigma_override = std::nullopt);

struct CertifyOptions {
    int max_rounds = 2000;
    uint64_t lp_pivot_cap = 2000000;
    int random_columns = 64;
    uint64_t seed = 20240801;
    int columns_per_round = 8;
};

struct SupportAtom {
    DeterministicStrategy alice;
    DeterministicStrategy bob;
    Rat weight;
};

struct CertifyResult {
    Rat bound;
    bool pricing_sound = false;  // final exact sweep found no improving vertex
    int rounds = 0;
    int columns = 0;
    uint64_t pivots = 0;
    std::vector<SupportAtom> support;
};

// Exact LP value of  max  product value - kappa (A + B)  over all mixtures of
// deterministic strategy pairs, by column generation over the vertex set.
CertifyResult certify_pnp_lhv_bound(const BellExpression& expr, int N, const Rat& kappa,
                                    const CertifyOptions& opts = {});

// certify at each kappa in turn; returns (kappa, certified bound) rows.
std::vector<std::pair<Rat, Rat>> certify_scan(const BellExpression& expr, int N,
                                              const std::vector<Rat>& kappas,
                                              const CertifyOptions& opts = {});

// Exact LP max of an arbitrary joint objective over LHV mixtures whose
// single-copy marginals are flat on both sides (every penalty term zero).
// The objective tensor is indexed like BehaviorT: ((x S + y) O + a) O + b.
struct ConstrainedLpResult {
    Rat value;
    bool pricing_sound = false;
    int rounds = 0;
    std::vector<SupportAtom> support;
};

ConstrainedLpResult joint_constrained_lhv_max(int N, int n, int m,
                                              const std::vector<Rat>& objective,
                                              const CertifyOptions& opts = {});

}  // namespace pnpbell
