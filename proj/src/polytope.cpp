#include "pnpbell/polytope.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "pnpbell/rng.hpp"

namespace pnpbell {

namespace {

int coord_index(int block, int subset_mask, int coords_per_block) {
    return block * coords_per_block + (subset_mask - 1);
}

// Exact rank of an integer matrix by fraction-free elimination.
int int_rank(std::vector<std::vector<int64_t>> m) {
    if (m.empty()) return 0;
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    int rank = 0;
    int64_t prev = 1;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int i = rank; i < rows; ++i)
            if (m[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[static_cast<size_t>(rank)], m[static_cast<size_t>(piv)]);
        for (int i = rank + 1; i < rows; ++i) {
            for (int j = col + 1; j < cols; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    (m[static_cast<size_t>(rank)][static_cast<size_t>(col)] *
                         m[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                     m[static_cast<size_t>(i)][static_cast<size_t>(col)] *
                         m[static_cast<size_t>(rank)][static_cast<size_t>(j)]) /
                    prev;
            m[static_cast<size_t>(i)][static_cast<size_t>(col)] = 0;
        }
        prev = m[static_cast<size_t>(rank)][static_cast<size_t>(col)];
        ++rank;
    }
    return rank;
}

std::vector<int64_t> to_int_row(const LinearForm& f) {
    std::vector<int64_t> row;
    row.reserve(f.coeffs.size() + 1);
    for (const Rat& c : f.coeffs) {
        if (denominator(c) != 1) throw std::logic_error("non-integer constraint row");
        row.push_back(static_cast<int64_t>(numerator(c)));
    }
    if (denominator(f.rhs) != 1) throw std::logic_error("non-integer constraint rhs");
    row.push_back(static_cast<int64_t>(numerator(f.rhs)));
    return row;
}

// Solve the stacked square-rank system exactly. Returns false when the tight
// set does not determine a unique point.
bool solve_unique(std::vector<std::vector<int64_t>> m, int dim, std::vector<Rat>& out) {
    const int rows = static_cast<int>(m.size());
    if (rows < dim) return false;
    int64_t prev = 1;
    for (int step = 0; step < dim; ++step) {
        int piv = -1;
        for (int i = step; i < rows; ++i)
            if (m[static_cast<size_t>(i)][static_cast<size_t>(step)] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return false;  // free column, not a vertex of this subset
        std::swap(m[static_cast<size_t>(step)], m[static_cast<size_t>(piv)]);
        for (int i = step + 1; i < rows; ++i) {
            for (int j = step + 1; j <= dim; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    (m[static_cast<size_t>(step)][static_cast<size_t>(step)] *
                         m[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                     m[static_cast<size_t>(i)][static_cast<size_t>(step)] *
                         m[static_cast<size_t>(step)][static_cast<size_t>(j)]) /
                    prev;
            m[static_cast<size_t>(i)][static_cast<size_t>(step)] = 0;
        }
        prev = m[static_cast<size_t>(step)][static_cast<size_t>(step)];
    }
    for (int i = dim; i < rows; ++i)
        if (m[static_cast<size_t>(i)][static_cast<size_t>(dim)] != 0) return false;  // inconsistent

    out.assign(static_cast<size_t>(dim), Rat(0));
    for (int i = dim - 1; i >= 0; --i) {
        Rat acc(m[static_cast<size_t>(i)][static_cast<size_t>(dim)]);
        for (int j = i + 1; j < dim; ++j)
            acc -= Rat(m[static_cast<size_t>(i)][static_cast<size_t>(j)]) * out[static_cast<size_t>(j)];
        out[static_cast<size_t>(i)] = acc / Rat(m[static_cast<size_t>(i)][static_cast<size_t>(i)]);
    }
    return true;
}

std::string point_key(const std::vector<Rat>& z) {
    std::string key;
    for (const Rat& c : z) {
        key += rat_str(c);
        key += ',';
    }
    return key;
}

}  // namespace

std::vector<MarginalItem> all_marginal_items(int N, int n) {
    std::vector<MarginalItem> items;
    for (int i = 0; i < N; ++i)
        for (int s = 0; s < n; ++s)
            for (int a = 0; a < 2; ++a) items.push_back({i, s, a});
    return items;
}

MarginalPolytope build_marginal_polytope(int N, int n, const std::vector<MarginalItem>& items) {
    if (N < 1 || N > 4) throw std::invalid_argument("copies out of range");
    if (n < 2) throw std::invalid_argument("need at least two settings");
    MarginalPolytope poly;
    poly.N = N;
    poly.n = n;
    poly.blocks = ipow(n, N);
    poly.coords_per_block = (1 << N) - 1;
    poly.dim = poly.blocks * poly.coords_per_block;

    // One facet per block and outcome code: P(a|e) >= 0 expanded through
    // inclusion-exclusion over the copies forced to answer 1.
    for (int e = 0; e < poly.blocks; ++e)
        for (int a = 0; a < (1 << N); ++a) {
            LinearForm f;
            f.coeffs.assign(static_cast<size_t>(poly.dim), Rat(0));
            int zero_mask = 0;
            for (int i = 0; i < N; ++i)
                if (tuple_digit(a, i, N, 2) == 0) zero_mask |= 1 << i;
            const int comp = ((1 << N) - 1) & ~zero_mask;
            Rat constant(0);
            for (int v = comp;; v = (v - 1) & comp) {
                const int T = zero_mask | v;
                const Rat sign = (__builtin_popcount(static_cast<unsigned>(v)) % 2 == 0)
                                     ? Rat(1)
                                     : Rat(-1);
                if (T == 0)
                    constant += sign;
                else
                    f.coeffs[static_cast<size_t>(coord_index(e, T, poly.coords_per_block))] += sign;
                if (v == 0) break;
            }
            f.rhs = -constant;
            poly.facets.push_back(std::move(f));
        }

    // Chain equalities per item across the blocks sharing that copy's setting.
    // Both outcome values of an item give the same kernel; the a=1 rows are
    // stored negated and the rank computation collapses them.
    poly.listed_items = static_cast<int>(items.size());
    for (const auto& it : items) {
        if (it.copy < 0 || it.copy >= N || it.setting < 0 || it.setting >= n ||
            it.outcome < 0 || it.outcome > 1)
            throw std::invalid_argument("marginal item out of range");
        std::vector<int> group;
        for (int e = 0; e < poly.blocks; ++e)
            if (tuple_digit(e, it.copy, N, n) == it.setting) group.push_back(e);
        const int singleton = 1 << it.copy;
        const Rat sgn = (it.outcome == 0) ? Rat(1) : Rat(-1);
        for (size_t k = 0; k + 1 < group.size(); ++k) {
            LinearForm eq;
            eq.coeffs.assign(static_cast<size_t>(poly.dim), Rat(0));
            eq.coeffs[static_cast<size_t>(
                coord_index(group[k], singleton, poly.coords_per_block))] = sgn;
            eq.coeffs[static_cast<size_t>(
                coord_index(group[k + 1], singleton, poly.coords_per_block))] = -sgn;
            eq.rhs = 0;
            poly.equalities.push_back(std::move(eq));
        }
    }

    std::vector<std::vector<int64_t>> eq_rows;
    for (const auto& eq : poly.equalities) eq_rows.push_back(to_int_row(eq));
    poly.equality_rank = int_rank(eq_rows);
    return poly;
}

std::vector<std::vector<Rat>> enumerate_vertices(const MarginalPolytope& poly) {
    std::vector<std::vector<int64_t>> eq_rows;
    for (const auto& eq : poly.equalities) eq_rows.push_back(to_int_row(eq));
    std::vector<std::vector<int64_t>> facet_rows;
    for (const auto& f : poly.facets) facet_rows.push_back(to_int_row(f));

    const int need = poly.dim - poly.equality_rank;
    const int F = static_cast<int>(facet_rows.size());
    if (need < 0 || need > F) return {};

    std::vector<std::vector<Rat>> vertices;
    std::set<std::string> seen;

    std::vector<int> pick(static_cast<size_t>(need));
    for (int i = 0; i < need; ++i) pick[static_cast<size_t>(i)] = i;
    while (true) {
        std::vector<std::vector<int64_t>> sys = eq_rows;
        for (int i : pick) sys.push_back(facet_rows[static_cast<size_t>(i)]);

        std::vector<Rat> z;
        if (solve_unique(std::move(sys), poly.dim, z)) {
            bool ok = true;
            for (const auto& f : poly.facets) {
                Rat acc(0);
                for (size_t j = 0; j < f.coeffs.size(); ++j)
                    if (f.coeffs[j] != 0) acc += f.coeffs[j] * z[j];
                if (acc < f.rhs) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                for (const auto& eq : poly.equalities) {
                    Rat acc(0);
                    for (size_t j = 0; j < eq.coeffs.size(); ++j)
                        if (eq.coeffs[j] != 0) acc += eq.coeffs[j] * z[j];
                    if (acc != eq.rhs) {
                        ok = false;
                        break;
                    }
                }
            if (ok && seen.insert(point_key(z)).second) vertices.push_back(std::move(z));
        }

        // next combination
        int i = need - 1;
        while (i >= 0 && pick[static_cast<size_t>(i)] == F - need + i) --i;
        if (i < 0) break;
        ++pick[static_cast<size_t>(i)];
        for (int j = i + 1; j < need; ++j)
            pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
    }
    return vertices;
}

Rat cg_outcome_prob(const std::vector<Rat>& z, int N, int n, int block, int outcome_code) {
    const int cpb = (1 << N) - 1;
    int zero_mask = 0;
    for (int i = 0; i < N; ++i)
        if (tuple_digit(outcome_code, i, N, 2) == 0) zero_mask |= 1 << i;
    const int comp = ((1 << N) - 1) & ~zero_mask;
    Rat acc(0);
    for (int v = comp;; v = (v - 1) & comp) {
        const int T = zero_mask | v;
        const Rat sign =
            (__builtin_popcount(static_cast<unsigned>(v)) % 2 == 0) ? Rat(1) : Rat(-1);
        if (T == 0)
            acc += sign;
        else
            acc += sign * z[static_cast<size_t>(coord_index(block, T, cpb))];
        if (v == 0) break;
    }
    return acc;
}

Rat cg_copy_marginal(const std::vector<Rat>& z, int N, int n, int block, int copy, int a) {
    const int cpb = (1 << N) - 1;
    const Rat u = z[static_cast<size_t>(coord_index(block, 1 << copy, cpb))];
    return a == 0 ? u : Rat(1) - u;
}

SubsetScanResult scan_marginal_subsets(int N, int n) {
    const auto items = all_marginal_items(N, n);
    const int K = static_cast<int>(items.size());
    if (K > 20) throw std::invalid_argument("item list too large to scan exhaustively");

    SubsetScanResult out;
    out.subsets = 1 << K;
    out.overall_min_nonzero = Rat(2);  // above any probability

    // geometry: which (copy, setting) pairs carry at least one item
    std::map<uint32_t, std::pair<int, Rat>> memo;
    for (uint32_t mask = 0; mask < static_cast<uint32_t>(1 << K); ++mask) {
        uint32_t geo = 0;
        for (int j = 0; j < K; ++j)
            if (mask & (1u << j))
                geo |= 1u << (items[static_cast<size_t>(j)].copy * n +
                              items[static_cast<size_t>(j)].setting);
        auto found = memo.find(geo);
        if (found == memo.end()) {
            std::vector<MarginalItem> subset;
            for (int j = 0; j < K; ++j)
                if (mask & (1u << j)) subset.push_back(items[static_cast<size_t>(j)]);
            const auto poly = build_marginal_polytope(N, n, subset);
            const auto verts = enumerate_vertices(poly);
            Rat min_nz(2);
            for (const auto& z : verts)
                for (int e = 0; e < poly.blocks; ++e)
                    for (int i = 0; i < N; ++i)
                        for (int a = 0; a < 2; ++a) {
                            const Rat p = cg_copy_marginal(z, N, n, e, i, a);
                            if (p != 0 && p < min_nz) min_nz = p;
                        }
            found = memo.emplace(geo, std::make_pair(static_cast<int>(verts.size()), min_nz))
                        .first;
        }
        out.rows.push_back({mask, found->second.first, found->second.second});
        if (found->second.second < out.overall_min_nonzero)
            out.overall_min_nonzero = found->second.second;
    }
    out.distinct_geometries = static_cast<int>(memo.size());
    return out;
}

Rat vertex_product_max(const std::vector<std::vector<Rat>>& alice_vertices,
                       const std::vector<std::vector<Rat>>& bob_vertices, int N, int n,
                       const std::vector<Rat>& objective) {
    const int S = ipow(n, N);
    const int O = 1 << N;
    if (objective.size() != static_cast<size_t>(S) * S * O * O)
        throw std::invalid_argument("objective tensor size mismatch");

    auto prob_tables = [&](const std::vector<std::vector<Rat>>& verts) {
        std::vector<std::vector<Rat>> tables;
        tables.reserve(verts.size());
        for (const auto& z : verts) {
            std::vector<Rat> t(static_cast<size_t>(S) * O);
            for (int e = 0; e < S; ++e)
                for (int a = 0; a < O; ++a)
                    t[static_cast<size_t>(e) * O + a] = cg_outcome_prob(z, N, n, e, a);
            tables.push_back(std::move(t));
        }
        return tables;
    };
    const auto ta = prob_tables(alice_vertices);
    const auto tb = prob_tables(bob_vertices);

    std::vector<std::pair<size_t, Rat>> nz;
    for (size_t idx = 0; idx < objective.size(); ++idx)
        if (objective[idx] != 0) nz.emplace_back(idx, objective[idx]);

    Rat best;
    bool first = true;
    for (const auto& pa : ta)
        for (const auto& pb : tb) {
            Rat acc(0);
            for (const auto& [idx, c] : nz) {
                const int b = static_cast<int>(idx) % O;
                const int a = static_cast<int>(idx / O) % O;
                const int y = static_cast<int>(idx / (static_cast<size_t>(O) * O)) % S;
                const int x = static_cast<int>(idx / (static_cast<size_t>(O) * O * S));
                const Rat& qa = pa[static_cast<size_t>(x) * O + a];
                if (qa == 0) continue;
                const Rat& qb = pb[static_cast<size_t>(y) * O + b];
                if (qb == 0) continue;
                acc += c * qa * qb;
            }
            if (first || acc > best) {
                best = acc;
                first = false;
            }
        }
    if (first) throw std::invalid_argument("no vertices given");
    return best;
}

DecompositionTrial check_one_objective(int N, int n, const std::vector<Rat>& objective,
                                       const CertifyOptions& opts) {
    const auto poly = build_marginal_polytope(N, n, all_marginal_items(N, n));
    const auto verts = enumerate_vertices(poly);
    DecompositionTrial t;
    t.lp_value = joint_constrained_lhv_max(N, n, 2, objective, opts).value;
    t.product_value = vertex_product_max(verts, verts, N, n, objective);
    if (t.lp_value < t.product_value)
        throw std::logic_error("lp relaxation fell below a feasible product point");
    t.equal = (t.lp_value == t.product_value);
    return t;
}

DecompositionReport check_lp_vs_vertex_products(int N, int n, int trials, uint64_t seed,
                                                const CertifyOptions& opts) {
    const auto poly = build_marginal_polytope(N, n, all_marginal_items(N, n));
    const auto verts = enumerate_vertices(poly);
    const int S = ipow(n, N);
    const int O = 1 << N;
    const size_t entries = static_cast<size_t>(S) * S * O * O;

    CounterRng rng(seed, 0);
    DecompositionReport rep;
    rep.max_gap = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<Rat> obj(entries);
        for (size_t idx = 0; idx < entries; ++idx)
            obj[idx] = Rat(static_cast<int>(
                               rng.range(static_cast<uint64_t>(t), static_cast<uint64_t>(idx), 9)),
                           8);
        DecompositionTrial row;
        row.lp_value = joint_constrained_lhv_max(N, n, 2, obj, opts).value;
        row.product_value = vertex_product_max(verts, verts, N, n, obj);
        if (row.lp_value < row.product_value)
            throw std::logic_error("lp relaxation fell below a feasible product point");
        row.equal = (row.lp_value == row.product_value);
        if (!row.equal) {
            ++rep.violations;
            const Rat gap = row.lp_value - row.product_value;
            if (gap > rep.max_gap) rep.max_gap = gap;
        }
        rep.trials.push_back(std::move(row));
    }
    return rep;
}

}  // namespace pnpbell
