#include "pnpbell/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

#include "pnpbell/parallel.hpp"

namespace pnpbell {

namespace {

// Coefficients scaled to integers by the common denominator L; a strategy's
// value accumulates as int64 and is divided by L^N once at the end. The
// overflow budget is checked up front: |value| <= S^2 * gmax^N.
struct ScaledCoeffs {
    std::vector<int64_t> g;  // [(a*m+b)*n+x]*n+y
    Int denom;
    int n, m;

    int64_t at(int a, int b, int x, int y) const {
        return g[static_cast<size_t>(((a * m + b) * n + x) * n + y)];
    }
};

ScaledCoeffs scale_coeffs(const BellExpression& expr, int N) {
    ScaledCoeffs sc;
    sc.n = expr.n();
    sc.m = expr.m();
    Int lcm = 1;
    for (const Rat& c : expr.coeffs()) {
        const Int d = denominator(c);
        lcm = lcm / gcd(lcm, d) * d;
    }
    sc.denom = lcm;
    int64_t gmax = 0;
    sc.g.reserve(expr.coeffs().size());
    for (const Rat& c : expr.coeffs()) {
        const Int scaled = numerator(c) * (lcm / denominator(c));
        if (scaled > Int(int64_t(1) << 40)) throw std::overflow_error("coefficients too large");
        sc.g.push_back(scaled.convert_to<int64_t>());
        gmax = std::max(gmax, sc.g.back());
    }
    const double S = std::pow(double(sc.n), N);
    double budget = S * S;
    for (int i = 0; i < N; ++i) budget *= double(gmax);
    if (budget >= std::ldexp(1.0, 62)) throw std::overflow_error("int64 value budget exceeded");
    return sc;
}

bool has_joint_flip_symmetry(const BellExpression& expr) {
    if (expr.m() != 2) return false;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < expr.n(); ++x)
                for (int y = 0; y < expr.n(); ++y)
                    if (expr.coeff(a, b, x, y) != expr.coeff(a ^ 1, b ^ 1, x, y)) return false;
    return true;
}

struct ScanResult {
    int64_t best = -1;
    std::vector<int> best_table;
    uint64_t evaluated = 0;
};

// Walks an odometer over Alice's table entries for strategy indices
// [begin, end), maintaining acc[y*O+b] = sum_x T[x][sa(x)][y*O+b]. Digits
// after `fixed` form the counter, most significant first.
ScanResult scan_range(const std::vector<std::vector<std::vector<int64_t>>>& T, int S, int O,
                      int fixed, uint64_t begin, uint64_t end,
                      const std::function<void(uint64_t)>& tick) {
    ScanResult res;
    const int digits = S - fixed;
    std::vector<int> table(static_cast<size_t>(S), 0);
    uint64_t idx = begin;
    for (int d = digits - 1; d >= 0; --d) {
        table[static_cast<size_t>(fixed + d)] = static_cast<int>(idx % static_cast<uint64_t>(O));
        idx /= static_cast<uint64_t>(O);
    }
    std::vector<int64_t> acc(static_cast<size_t>(S) * O, 0);
    for (int x = 0; x < S; ++x) {
        const auto& row = T[static_cast<size_t>(x)][static_cast<size_t>(table[static_cast<size_t>(x)])];
        for (size_t k = 0; k < acc.size(); ++k) acc[k] += row[k];
    }
    for (uint64_t cur = begin; cur < end; ++cur) {
        int64_t value = 0;
        for (int y = 0; y < S; ++y) {
            int64_t m = acc[static_cast<size_t>(y) * O];
            for (int b = 1; b < O; ++b) m = std::max(m, acc[static_cast<size_t>(y) * O + b]);
            value += m;
        }
        ++res.evaluated;
        if (value > res.best) {
            res.best = value;
            res.best_table = table;
        }
        if ((res.evaluated & ((uint64_t(1) << 20) - 1)) == 0 && tick) tick(res.evaluated);
        if (cur + 1 == end) break;
        int p = S - 1;
        while (true) {
            const int old = table[static_cast<size_t>(p)];
            const auto& oldrow = T[static_cast<size_t>(p)][static_cast<size_t>(old)];
            const int next = old + 1 == O ? 0 : old + 1;
            const auto& newrow = T[static_cast<size_t>(p)][static_cast<size_t>(next)];
            for (size_t k = 0; k < acc.size(); ++k) acc[k] += newrow[k] - oldrow[k];
            table[static_cast<size_t>(p)] = next;
            if (next != 0) break;
            --p;  // carry; p >= fixed is guaranteed while cur+1 < end
        }
    }
    return res;
}

}  // namespace

BoundResult product_lhv_bound(const BellExpression& expr, int N, const ProductBoundOptions& opts) {
    if (expr.m() != 2) throw std::invalid_argument("bound machinery requires m = 2");
    const int S = ipow(expr.n(), N);
    const int O = ipow(expr.m(), N);
    const double raw_count = std::pow(double(O), S);
    if (raw_count > double(opts.cap))
        throw std::length_error("strategy enumeration cap exceeded");

    const ScaledCoeffs sc = scale_coeffs(expr, N);

    // T[x][o][y*O+b] = product over copies of the scaled coefficient.
    std::vector<std::vector<std::vector<int64_t>>> T(
        static_cast<size_t>(S),
        std::vector<std::vector<int64_t>>(static_cast<size_t>(O),
                                          std::vector<int64_t>(static_cast<size_t>(S) * O)));
    for (int x = 0; x < S; ++x)
        for (int o = 0; o < O; ++o)
            for (int y = 0; y < S; ++y)
                for (int b = 0; b < O; ++b) {
                    int64_t prod = 1;
                    for (int i = 0; i < N; ++i) {
                        prod *= sc.at(tuple_digit(o, i, N, expr.m()), tuple_digit(b, i, N, expr.m()),
                                      tuple_digit(x, i, N, expr.n()), tuple_digit(y, i, N, expr.n()));
                        if (prod == 0) break;
                    }
                    T[static_cast<size_t>(x)][static_cast<size_t>(o)]
                     [static_cast<size_t>(y) * O + b] = prod;
                }

    const bool prune = opts.prune_symmetry && has_joint_flip_symmetry(expr);
    const int fixed = prune ? 1 : 0;
    uint64_t total = 1;
    for (int d = 0; d < S - fixed; ++d) total *= static_cast<uint64_t>(O);

    std::mutex mtx;
    uint64_t done = 0;
    std::vector<ScanResult> parts(static_cast<size_t>(std::max(1, opts.threads)));
    parallel_chunks(total, std::max(1, opts.threads), [&](int chunk, uint64_t b, uint64_t e) {
        std::function<void(uint64_t)> tick;
        if (opts.progress)
            tick = [&, chunk](uint64_t) {
                std::lock_guard<std::mutex> lock(mtx);
                done += uint64_t(1) << 20;
                opts.progress(done, total);
            };
        parts[static_cast<size_t>(chunk)] = scan_range(T, S, O, fixed, b, e, tick);
    });

    ScanResult best;
    for (const auto& part : parts) {
        best.evaluated += part.evaluated;
        if (part.best > best.best) {
            best.best = part.best;
            best.best_table = part.best_table;
        }
    }

    BoundResult out;
    out.symmetry_pruned = prune;
    out.strategies_scanned = best.evaluated;
    out.value = Rat(Int(best.best), 1) / rat_pow(Rat(sc.denom, Int(1)), N);

    out.witness_alice = DeterministicStrategy{Party::alice, N, expr.n(), expr.m(), best.best_table};
    // Bob's best response to the winning Alice table, lowest index on ties.
    std::vector<int64_t> acc(static_cast<size_t>(S) * O, 0);
    for (int x = 0; x < S; ++x) {
        const auto& row =
            T[static_cast<size_t>(x)][static_cast<size_t>(best.best_table[static_cast<size_t>(x)])];
        for (size_t k = 0; k < acc.size(); ++k) acc[k] += row[k];
    }
    std::vector<int> bob(static_cast<size_t>(S), 0);
    for (int y = 0; y < S; ++y) {
        int arg = 0;
        for (int b = 1; b < O; ++b)
            if (acc[static_cast<size_t>(y) * O + b] > acc[static_cast<size_t>(y) * O + arg]) arg = b;
        bob[static_cast<size_t>(y)] = arg;
    }
    out.witness_bob = DeterministicStrategy{Party::bob, N, expr.n(), expr.m(), bob};
    return out;
}

BoundResult lhv_bound(const BellExpression& expr) {
    if (expr.n() > 4) throw std::length_error("single-copy enumeration supports n <= 4");
    ProductBoundOptions opts;
    opts.prune_symmetry = false;
    return product_lhv_bound(expr, 1, opts);
}

Rat product_strategy_bound(const BellExpression& expr, int N) {
    Rat C;
    if (expr.has_lhv_bound()) {
        C = expr.lhv_bound_C();
    } else {
        C = lhv_bound(expr).value;
    }
    return rat_pow(C, N);
}

}  // namespace pnpbell
