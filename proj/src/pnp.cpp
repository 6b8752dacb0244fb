#include "pnpbell/pnp.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "pnpbell/lhv.hpp"
#include "pnpbell/rng.hpp"
#include "pnpbell/simplex.hpp"

namespace pnpbell {

namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::lcm;
using boost::multiprecision::numerator;

// One penalty term: marginals of `copy` showing `a_v` under setting tuples
// code_p and code_q, which agree on that copy's setting. Kept as unordered
// pairs; the ordered-pair sum in the definition doubles each one.
struct PairRow {
    Party party;
    int copy;
    int a_v;
    int code_p;
    int code_q;
};

std::vector<PairRow> build_pair_rows(int N, int n, int m) {
    std::vector<PairRow> rows;
    const int S = ipow(n, N);
    for (Party pt : {Party::alice, Party::bob})
        for (int i = 0; i < N; ++i)
            for (int s = 0; s < n; ++s) {
                std::vector<int> group;
                for (int c = 0; c < S; ++c)
                    if (tuple_digit(c, i, N, n) == s) group.push_back(c);
                for (size_t p = 0; p < group.size(); ++p)
                    for (size_t q = p + 1; q < group.size(); ++q)
                        for (int a_v = 0; a_v + 1 < m; ++a_v)
                            rows.push_back({pt, i, a_v,
                                            group[p], group[q]});
            }
    return rows;
}

// Deterministic-strategy marginal difference for one pair row: each marginal
// is a 0/1 indicator, so this lands in {-1, 0, 1}.
int dval(const std::vector<int>& table, const PairRow& pr, int N, int m) {
    const int dp = tuple_digit(table[static_cast<size_t>(pr.code_p)], pr.copy, N, m) == pr.a_v;
    const int dq = tuple_digit(table[static_cast<size_t>(pr.code_q)], pr.copy, N, m) == pr.a_v;
    return dp - dq;
}

std::vector<int> decode_table(int code, int S, int O) {
    std::vector<int> t(static_cast<size_t>(S));
    for (int x = 0; x < S; ++x) {
        t[static_cast<size_t>(x)] = code % O;
        code /= O;
    }
    return t;
}

DeterministicStrategy to_strategy(Party party, int code, int N, int n, int m) {
    DeterministicStrategy s;
    s.party = party;
    s.N = N;
    s.n = n;
    s.m = m;
    s.table = decode_table(code, ipow(n, N), ipow(m, N));
    return s;
}

// Joint objective scaled onto int64 with a single rational denominator.
struct ScaledTensor {
    int S = 0;
    int O = 0;
    std::vector<int64_t> w;
    Int denom = 1;

    int64_t at(int x, int a, int y, int b) const {
        return w[((static_cast<size_t>(x) * S + y) * O + a) * O + b];
    }
};

int64_t checked_int64(const Int& v) {
    if (v > Int(int64_t(1) << 62) || v < -Int(int64_t(1) << 62))
        throw std::overflow_error("scaled objective entry too large");
    return static_cast<int64_t>(v);
}

ScaledTensor scale_raw_tensor(int N, int n, int m, const std::vector<Rat>& obj) {
    ScaledTensor t;
    t.S = ipow(n, N);
    t.O = ipow(m, N);
    const size_t want = static_cast<size_t>(t.S) * t.S * t.O * t.O;
    if (obj.size() != want) throw std::invalid_argument("objective tensor size mismatch");
    Int d(1);
    for (const Rat& r : obj) d = lcm(d, denominator(r));
    t.denom = d;
    t.w.reserve(want);
    for (const Rat& r : obj) t.w.push_back(checked_int64(numerator(r) * (d / denominator(r))));
    return t;
}

ScaledTensor scale_product_tensor(const BellExpression& expr, int N) {
    const int n = expr.n();
    const int m = expr.m();
    Int L(1);
    for (const Rat& c : expr.coeffs()) L = lcm(L, denominator(c));
    std::vector<int64_t> base(static_cast<size_t>(m) * m * n * n);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) {
                    const Rat& c = expr.coeff(a, b, x, y);
                    base[static_cast<size_t>(((a * m + b) * n + x) * n + y)] =
                        checked_int64(numerator(c) * (L / denominator(c)));
                }
    ScaledTensor t;
    t.S = ipow(n, N);
    t.O = ipow(m, N);
    t.denom = numerator(rat_pow(Rat(L, Int(1)), N));
    t.w.resize(static_cast<size_t>(t.S) * t.S * t.O * t.O);
    for (int x = 0; x < t.S; ++x)
        for (int y = 0; y < t.S; ++y)
            for (int a = 0; a < t.O; ++a)
                for (int b = 0; b < t.O; ++b) {
                    Int prod(1);
                    for (int i = 0; i < N; ++i)
                        prod *= base[static_cast<size_t>(
                            ((tuple_digit(a, i, N, m) * m + tuple_digit(b, i, N, m)) * n +
                             tuple_digit(x, i, N, n)) *
                                n +
                            tuple_digit(y, i, N, n))];
                    t.w[((static_cast<size_t>(x) * t.S + y) * t.O + a) * t.O + b] =
                        checked_int64(prod);
                }
    return t;
}

// Everything the pricing loop needs about one party-strategy universe:
// the per-strategy game table VS[code][y][o] = sum_x W[x][table(x)][y][o]
// and the per-strategy pair-row differences.
struct PricingData {
    int N, n, m, S, O;
    int strategies;
    ScaledTensor tensor;
    std::vector<PairRow> pairs;
    std::vector<int> alice_pair_idx;  // indices into pairs
    std::vector<int> bob_pair_idx;
    std::vector<std::vector<int>> tables;     // decoded per code
    std::vector<int64_t> vs;                  // [code][y][o]
    std::vector<std::vector<int>> d_alice;    // [code][alice pair slot]
    std::vector<std::vector<int>> d_bob;      // [code][bob pair slot]

    int64_t vs_at(int code, int y, int o) const {
        return vs[(static_cast<size_t>(code) * S + y) * O + o];
    }

    int64_t value_num(int ka, int kb) const {
        const auto& tb = tables[static_cast<size_t>(kb)];
        int64_t acc = 0;
        for (int y = 0; y < S; ++y) acc += vs_at(ka, y, tb[static_cast<size_t>(y)]);
        return acc;
    }

    Rat value(int ka, int kb) const { return Rat(Int(value_num(ka, kb)), tensor.denom); }
};

PricingData build_pricing(int N, int n, int m, ScaledTensor tensor, uint64_t strategy_cap) {
    PricingData pd;
    pd.N = N;
    pd.n = n;
    pd.m = m;
    pd.S = ipow(n, N);
    pd.O = ipow(m, N);
    pd.tensor = std::move(tensor);

    double logcount = pd.S * std::log2(static_cast<double>(pd.O));
    if (logcount > std::log2(static_cast<double>(strategy_cap)))
        throw std::invalid_argument("strategy universe too large for exact certification");
    int strategies = 1;
    for (int x = 0; x < pd.S; ++x) strategies *= pd.O;
    pd.strategies = strategies;

    pd.pairs = build_pair_rows(N, n, m);
    for (size_t j = 0; j < pd.pairs.size(); ++j)
        (pd.pairs[j].party == Party::alice ? pd.alice_pair_idx : pd.bob_pair_idx)
            .push_back(static_cast<int>(j));

    pd.tables.reserve(static_cast<size_t>(strategies));
    for (int code = 0; code < strategies; ++code) pd.tables.push_back(decode_table(code, pd.S, pd.O));

    pd.vs.assign(static_cast<size_t>(strategies) * pd.S * pd.O, 0);
    for (int code = 0; code < strategies; ++code) {
        const auto& ta = pd.tables[static_cast<size_t>(code)];
        for (int y = 0; y < pd.S; ++y)
            for (int o = 0; o < pd.O; ++o) {
                int64_t acc = 0;
                for (int x = 0; x < pd.S; ++x)
                    acc += pd.tensor.at(x, ta[static_cast<size_t>(x)], y, o);
                pd.vs[(static_cast<size_t>(code) * pd.S + y) * pd.O + o] = acc;
            }
    }

    pd.d_alice.resize(static_cast<size_t>(strategies));
    pd.d_bob.resize(static_cast<size_t>(strategies));
    for (int code = 0; code < strategies; ++code) {
        for (int j : pd.alice_pair_idx)
            pd.d_alice[static_cast<size_t>(code)].push_back(
                dval(pd.tables[static_cast<size_t>(code)], pd.pairs[static_cast<size_t>(j)], N, m));
        for (int j : pd.bob_pair_idx)
            pd.d_bob[static_cast<size_t>(code)].push_back(
                dval(pd.tables[static_cast<size_t>(code)], pd.pairs[static_cast<size_t>(j)], N, m));
    }
    return pd;
}

// Common denominator form of the dual vector: y_r = p[r] / q.
void scale_duals(const std::vector<Rat>& y, std::vector<Int>& p, Int& q) {
    q = 1;
    for (const Rat& r : y) q = lcm(q, denominator(r));
    p.clear();
    p.reserve(y.size());
    for (const Rat& r : y) p.push_back(numerator(r) * (q / denominator(r)));
}

struct Candidate {
    Int rc_scaled;
    int ka;
    int kb;
};

// Best strictly-improving vertices under the current duals. `combo` maps a
// pair-row index to its dual weight; value rows enter through ra/rb.
std::vector<Candidate> price_all(const PricingData& pd, const Int& q, const Int& p0,
                                 const std::vector<Int>& alice_combo,
                                 const std::vector<Int>& bob_combo, int keep,
                                 const std::set<std::pair<int, int>>& used) {
    const Int& D = pd.tensor.denom;
    std::vector<Int> ra(static_cast<size_t>(pd.strategies));
    std::vector<Int> rb(static_cast<size_t>(pd.strategies));
    for (int code = 0; code < pd.strategies; ++code) {
        Int acc = p0;
        const auto& da = pd.d_alice[static_cast<size_t>(code)];
        for (size_t t = 0; t < da.size(); ++t)
            if (da[t] != 0) acc += alice_combo[t] * da[t];
        ra[static_cast<size_t>(code)] = D * acc;
        Int accb(0);
        const auto& db = pd.d_bob[static_cast<size_t>(code)];
        for (size_t t = 0; t < db.size(); ++t)
            if (db[t] != 0) accb += bob_combo[t] * db[t];
        rb[static_cast<size_t>(code)] = D * accb;
    }

    std::vector<Candidate> best;
    for (int ka = 0; ka < pd.strategies; ++ka)
        for (int kb = 0; kb < pd.strategies; ++kb) {
            Int rc = q * pd.value_num(ka, kb) - ra[static_cast<size_t>(ka)] -
                     rb[static_cast<size_t>(kb)];
            if (rc <= 0 || used.count({ka, kb})) continue;
            best.push_back({std::move(rc), ka, kb});
            std::push_heap(best.begin(), best.end(), [](const Candidate& a, const Candidate& b) {
                return a.rc_scaled > b.rc_scaled;  // min-heap on rc
            });
            if (static_cast<int>(best.size()) > keep) {
                std::pop_heap(best.begin(), best.end(),
                              [](const Candidate& a, const Candidate& b) {
                                  return a.rc_scaled > b.rc_scaled;
                              });
                best.pop_back();
            }
        }
    std::sort(best.begin(), best.end(),
              [](const Candidate& a, const Candidate& b) { return a.rc_scaled > b.rc_scaled; });
    return best;
}

}  // namespace

Rat kappa_sufficient(const BellExpression& expr, int N,
                     const std::optional<Rat>& product_sigma_override) {
    if (N < 1) throw std::invalid_argument("need at least one copy");
    const Rat sigma_n =
        product_sigma_override ? *product_sigma_override
                               : rat_pow(expr.algebraic_bound_sigma(), N);
    const Rat c_n = product_strategy_bound(expr, N);
    if (sigma_n < c_n)
        throw std::invalid_argument("product bound override below the product strategy bound");
    return rat_pow(Rat(expr.n()), N - 1) * (sigma_n - c_n);
}

CertifyResult certify_pnp_lhv_bound(const BellExpression& expr, int N, const Rat& kappa,
                                    const CertifyOptions& opts) {
    if (kappa < 0) throw std::invalid_argument("kappa must be nonnegative");
    const int n = expr.n();
    const int m = expr.m();
    PricingData pd = build_pricing(N, n, m, scale_product_tensor(expr, N), 65536);
    const int P = static_cast<int>(pd.pairs.size());

    std::vector<Rat> rhs(static_cast<size_t>(1 + 2 * P), Rat(0));
    rhs[0] = 1;
    ExactSimplex lp(rhs);

    // t_j cushions the absolute value; u_j and v_j are the two slacks.
    // Ordered pairs double each unordered term, hence the 2 kappa.
    for (int j = 0; j < P; ++j) {
        std::vector<Rat> col(static_cast<size_t>(1 + 2 * P), Rat(0));
        col[static_cast<size_t>(1 + 2 * j)] = -1;
        col[static_cast<size_t>(2 + 2 * j)] = -1;
        lp.add_column(col, Rat(-2) * kappa);
    }
    for (int j = 0; j < P; ++j) {
        std::vector<Rat> col(static_cast<size_t>(1 + 2 * P), Rat(0));
        col[static_cast<size_t>(1 + 2 * j)] = 1;
        lp.add_column(col, Rat(0));
        std::vector<Rat> col2(static_cast<size_t>(1 + 2 * P), Rat(0));
        col2[static_cast<size_t>(2 + 2 * j)] = 1;
        lp.add_column(col2, Rat(0));
    }

    std::set<std::pair<int, int>> used;
    std::vector<std::pair<int, int>> vertex_of_column;  // parallel to lp structural order
    const int fixed_columns = lp.columns();

    auto add_vertex = [&](int ka, int kb) {
        if (!used.insert({ka, kb}).second) return;
        std::vector<Rat> col(static_cast<size_t>(1 + 2 * P), Rat(0));
        col[0] = 1;
        for (size_t t = 0; t < pd.alice_pair_idx.size(); ++t) {
            const int j = pd.alice_pair_idx[t];
            const int d = pd.d_alice[static_cast<size_t>(ka)][t];
            col[static_cast<size_t>(1 + 2 * j)] = d;
            col[static_cast<size_t>(2 + 2 * j)] = -d;
        }
        for (size_t t = 0; t < pd.bob_pair_idx.size(); ++t) {
            const int j = pd.bob_pair_idx[t];
            const int d = pd.d_bob[static_cast<size_t>(kb)][t];
            col[static_cast<size_t>(1 + 2 * j)] = d;
            col[static_cast<size_t>(2 + 2 * j)] = -d;
        }
        lp.add_column(col, pd.value(ka, kb));
        vertex_of_column.push_back({ka, kb});
    };

    add_vertex(0, 0);  // all-zero outputs: flat marginals, so it is feasible alone
    SequentialRng rng(opts.seed);
    for (int k = 0; k < opts.random_columns; ++k)
        add_vertex(static_cast<int>(rng.range(static_cast<uint64_t>(pd.strategies))),
                   static_cast<int>(rng.range(static_cast<uint64_t>(pd.strategies))));

    CertifyResult out;
    if (lp.solve(opts.lp_pivot_cap) != ExactSimplex::Status::optimal)
        throw std::runtime_error("certification lp did not reach optimality");

    for (int round = 0; round < opts.max_rounds; ++round) {
        const std::vector<Rat> y = lp.duals();
        std::vector<Int> p;
        Int q;
        scale_duals(y, p, q);
        std::vector<Int> alice_combo, bob_combo;
        for (int j : pd.alice_pair_idx)
            alice_combo.push_back(p[static_cast<size_t>(1 + 2 * j)] -
                                  p[static_cast<size_t>(2 + 2 * j)]);
        for (int j : pd.bob_pair_idx)
            bob_combo.push_back(p[static_cast<size_t>(1 + 2 * j)] -
                                p[static_cast<size_t>(2 + 2 * j)]);
        const auto cand =
            price_all(pd, q, p[0], alice_combo, bob_combo, opts.columns_per_round, used);
        out.rounds = round + 1;
        if (cand.empty()) {
            out.pricing_sound = true;
            break;
        }
        for (const auto& c : cand) add_vertex(c.ka, c.kb);
        if (lp.solve(opts.lp_pivot_cap) != ExactSimplex::Status::optimal)
            throw std::runtime_error("certification lp did not reach optimality");
    }
    if (!out.pricing_sound)
        throw std::runtime_error("column generation hit the round cap before pricing out");

    out.bound = lp.objective();
    out.columns = lp.columns();
    out.pivots = lp.pivots();
    const auto x = lp.primal();
    for (size_t c = 0; c < vertex_of_column.size(); ++c) {
        const Rat& w = x[static_cast<size_t>(fixed_columns) + c];
        if (w == 0) continue;
        const auto [ka, kb] = vertex_of_column[c];
        out.support.push_back({to_strategy(Party::alice, ka, N, n, m),
                               to_strategy(Party::bob, kb, N, n, m), w});
    }
    return out;
}

std::vector<std::pair<Rat, Rat>> certify_scan(const BellExpression& expr, int N,
                                              const std::vector<Rat>& kappas,
                                              const CertifyOptions& opts) {
    std::vector<std::pair<Rat, Rat>> rows;
    for (const Rat& k : kappas)
        rows.emplace_back(k, certify_pnp_lhv_bound(expr, N, k, opts).bound);
    return rows;
}

ConstrainedLpResult joint_constrained_lhv_max(int N, int n, int m,
                                              const std::vector<Rat>& objective,
                                              const CertifyOptions& opts) {
    PricingData pd = build_pricing(N, n, m, scale_raw_tensor(N, n, m, objective), 65536);
    const int P = static_cast<int>(pd.pairs.size());

    std::vector<Rat> rhs(static_cast<size_t>(1 + P), Rat(0));
    rhs[0] = 1;
    ExactSimplex lp(rhs);

    std::set<std::pair<int, int>> used;
    std::vector<std::pair<int, int>> vertex_of_column;

    auto add_vertex = [&](int ka, int kb) {
        if (!used.insert({ka, kb}).second) return;
        std::vector<Rat> col(static_cast<size_t>(1 + P), Rat(0));
        col[0] = 1;
        for (size_t t = 0; t < pd.alice_pair_idx.size(); ++t)
            col[static_cast<size_t>(1 + pd.alice_pair_idx[t])] =
                pd.d_alice[static_cast<size_t>(ka)][t];
        for (size_t t = 0; t < pd.bob_pair_idx.size(); ++t)
            col[static_cast<size_t>(1 + pd.bob_pair_idx[t])] =
                pd.d_bob[static_cast<size_t>(kb)][t];
        lp.add_column(col, pd.value(ka, kb));
        vertex_of_column.push_back({ka, kb});
    };

    add_vertex(0, 0);
    SequentialRng rng(opts.seed);
    for (int k = 0; k < opts.random_columns; ++k)
        add_vertex(static_cast<int>(rng.range(static_cast<uint64_t>(pd.strategies))),
                   static_cast<int>(rng.range(static_cast<uint64_t>(pd.strategies))));

    ConstrainedLpResult out;
    if (lp.solve(opts.lp_pivot_cap) != ExactSimplex::Status::optimal)
        throw std::runtime_error("constrained lp did not reach optimality");

    for (int round = 0; round < opts.max_rounds; ++round) {
        const std::vector<Rat> y = lp.duals();
        std::vector<Int> p;
        Int q;
        scale_duals(y, p, q);
        std::vector<Int> alice_combo, bob_combo;
        for (int j : pd.alice_pair_idx) alice_combo.push_back(p[static_cast<size_t>(1 + j)]);
        for (int j : pd.bob_pair_idx) bob_combo.push_back(p[static_cast<size_t>(1 + j)]);
        const auto cand =
            price_all(pd, q, p[0], alice_combo, bob_combo, opts.columns_per_round, used);
        out.rounds = round + 1;
        if (cand.empty()) {
            out.pricing_sound = true;
            break;
        }
        for (const auto& c : cand) add_vertex(c.ka, c.kb);
        if (lp.solve(opts.lp_pivot_cap) != ExactSimplex::Status::optimal)
            throw std::runtime_error("constrained lp did not reach optimality");
    }
    if (!out.pricing_sound)
        throw std::runtime_error("column generation hit the round cap before pricing out");

    out.value = lp.objective();
    const auto x = lp.primal();
    for (size_t c = 0; c < vertex_of_column.size(); ++c) {
        const Rat& w = x[c];
        if (w == 0) continue;
        const auto [ka, kb] = vertex_of_column[c];
        out.support.push_back({to_strategy(Party::alice, ka, N, n, m),
                               to_strategy(Party::bob, kb, N, n, m), w});
    }
    return out;
}

}  // namespace pnpbell
