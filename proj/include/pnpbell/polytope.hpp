#pragma once

#include <cstdint>
#include <vector>

#include "pnpbell/pnp.hpp"
#include "pnpbell/rational.hpp"

namespace pnpbell {

// Single-party marginal polytope for binary outcomes in product form: one
// probability simplex per setting tuple, written in correlation coordinates.
// Coordinate u_T(e) is the probability that every copy in the nonempty set T
// answers 0 under setting tuple e; a block therefore carries 2^N - 1 numbers
// and the outcome probabilities come back via inclusion-exclusion.

struct LinearForm {
    std::vector<Rat> coeffs;  // length dim
    Rat rhs;                  // coeffs . z >= rhs (facet) or == rhs (equality)
};

struct MarginalItem {
    int copy;     // which copy's marginal
    int setting;  // that copy's setting value
    int outcome;  // which outcome's probability is pinned flat
};

struct MarginalPolytope {
    int N = 0;
    int n = 0;
    int blocks = 0;
    int coords_per_block = 0;
    int dim = 0;
    std::vector<LinearForm> facets;
    std::vector<LinearForm> equalities;
    int listed_items = 0;   // items as given, duplicates in effect included
    int equality_rank = 0;  // exact rank of the equality system
};

// The full item list: every (copy, setting, outcome) triple.
std::vector<MarginalItem> all_marginal_items(int N, int n);

MarginalPolytope build_marginal_polytope(int N, int n,
                                         const std::vector<MarginalItem>& items);

// All vertices, exactly, by enumerating facet subsets on top of the equality
// system. Deduplicated; every returned point satisfies every constraint.
std::vector<std::vector<Rat>> enumerate_vertices(const MarginalPolytope& poly);

// Outcome-code probability of one block of a CG point.
Rat cg_outcome_prob(const std::vector<Rat>& z, int N, int n, int block, int outcome_code);
// P(copy's outcome == a | block), from the same point.
Rat cg_copy_marginal(const std::vector<Rat>& z, int N, int n, int block, int copy, int a);

// Exhaustive run over every subset of the item list. Geometrically equal
// subsets (same induced equality set) share one vertex enumeration.
struct SubsetScanRow {
    uint32_t mask;
    int vertex_count;
    Rat min_nonzero;  // smallest nonzero single-copy marginal over vertices
};

struct SubsetScanResult {
    std::vector<SubsetScanRow> rows;
    Rat overall_min_nonzero;
    int subsets = 0;
    int distinct_geometries = 0;
};

SubsetScanResult scan_marginal_subsets(int N, int n);

// Largest objective value over products of one vertex from each party's
// fully constrained polytope. The objective tensor is indexed like BehaviorT.
Rat vertex_product_max(const std::vector<std::vector<Rat>>& alice_vertices,
                       const std::vector<std::vector<Rat>>& bob_vertices, int N, int n,
                       const std::vector<Rat>& objective);

// One decomposition comparison: the constrained-LP optimum against the best
// product of constrained vertices, for the same objective.
struct DecompositionTrial {
    Rat lp_value;
    Rat product_value;
    bool equal = false;
};

DecompositionTrial check_one_objective(int N, int n, const std::vector<Rat>& objective,
                                       const CertifyOptions& opts = {});

struct DecompositionReport {
    std::vector<DecompositionTrial> trials;
    int violations = 0;
    Rat max_gap;
};

// Random-objective sweep; entries are integers 0..8 over denominator 8 drawn
// from the counter generator at (seed, trial, entry).
DecompositionReport check_lp_vs_vertex_products(int N, int n, int trials, uint64_t seed,
                                                const CertifyOptions& opts = {});

}  // namespace pnpbell
