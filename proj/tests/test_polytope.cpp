#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "pnpbell/lhv.hpp"
#include "pnpbell/polytope.hpp"

using namespace pnpbell;

namespace {

std::vector<Rat> chsh_product_tensor() {
    const BellExpression chsh = make_chsh();
    const int S = 4, O = 4, N = 2;
    std::vector<Rat> obj(static_cast<size_t>(S) * S * O * O, Rat(0));
    for (int x = 0; x < S; ++x)
        for (int y = 0; y < S; ++y)
            for (int a = 0; a < O; ++a)
                for (int b = 0; b < O; ++b) {
                    Rat prod(1);
                    for (int i = 0; i < N; ++i)
                        prod *= chsh.coeff(tuple_digit(a, i, N, 2), tuple_digit(b, i, N, 2),
                                           tuple_digit(x, i, N, 2), tuple_digit(y, i, N, 2));
                    obj[((static_cast<size_t>(x) * S + y) * O + a) * O + b] = prod;
                }
    return obj;
}

}  // namespace

TEST_CASE("two-copy polytope shape: 12 coordinates, 16 facets") {
    const auto poly = build_marginal_polytope(2, 2, {});
    CHECK(poly.dim == 12);
    CHECK(poly.blocks == 4);
    CHECK(poly.coords_per_block == 3);
    CHECK(poly.facets.size() == 16);
    CHECK(poly.equalities.empty());
    CHECK(poly.equality_rank == 0);
}

TEST_CASE("full item list: eight rows listed, rank four") {
    const auto items = all_marginal_items(2, 2);
    CHECK(items.size() == 8);
    const auto poly = build_marginal_polytope(2, 2, items);
    CHECK(poly.listed_items == 8);
    CHECK(poly.equalities.size() == 8);
    CHECK(poly.equality_rank == 4);  // the two outcome values of an item coincide
}

TEST_CASE("unconstrained vertices are the 0/1 tables") {
    const auto poly1 = build_marginal_polytope(1, 2, {});
    const auto v1 = enumerate_vertices(poly1);
    CHECK(v1.size() == 4);

    const auto poly2 = build_marginal_polytope(2, 2, {});
    const auto v2 = enumerate_vertices(poly2);
    CHECK(v2.size() == 256);
    for (const auto& z : v2)
        for (const Rat& c : z) CHECK((c == 0 || c == 1));
}

TEST_CASE("unconstrained vertex set is closed under flipping every outcome") {
    const auto poly = build_marginal_polytope(2, 2, {});
    const auto verts = enumerate_vertices(poly);
    std::set<std::vector<Rat>> vset(verts.begin(), verts.end());
    const int O = 4;
    for (const auto& z : verts) {
        // flip: P'(a|e) = P(~a|e); rebuild CG coordinates from the flipped table
        std::vector<Rat> flipped(z.size());
        for (int e = 0; e < poly.blocks; ++e) {
            std::vector<Rat> p(static_cast<size_t>(O));
            for (int a = 0; a < O; ++a)
                p[static_cast<size_t>(a)] = cg_outcome_prob(z, 2, 2, e, (O - 1) - a);
            // u1 = P(00)+P(01), u2 = P(00)+P(10), w = P(00)
            flipped[static_cast<size_t>(e * 3 + 0)] = p[0] + p[1];
            flipped[static_cast<size_t>(e * 3 + 1)] = p[0] + p[2];
            flipped[static_cast<size_t>(e * 3 + 2)] = p[0];
        }
        CHECK(vset.count(flipped) == 1);
    }
}

TEST_CASE("fully constrained vertices: 24 points with half-integer marginals") {
    const auto poly = build_marginal_polytope(2, 2, all_marginal_items(2, 2));
    const auto verts = enumerate_vertices(poly);
    CHECK(verts.size() == 24);
    Rat min_nz(2);
    for (const auto& z : verts)
        for (int e = 0; e < poly.blocks; ++e)
            for (int i = 0; i < 2; ++i)
                for (int a = 0; a < 2; ++a) {
                    const Rat p = cg_copy_marginal(z, 2, 2, e, i, a);
                    CHECK((p == 0 || p == Rat(1, 2) || p == 1));
                    if (p != 0 && p < min_nz) min_nz = p;
                }
    CHECK(min_nz == Rat(1, 2));
}

TEST_CASE("subset scan: 256 subsets fold onto 16 geometries, all marginals >= 1/2") {
    const auto scan = scan_marginal_subsets(2, 2);
    CHECK(scan.subsets == 256);
    CHECK(scan.rows.size() == 256);
    CHECK(scan.distinct_geometries == 16);
    CHECK(scan.overall_min_nonzero == Rat(1, 2));
    for (const auto& row : scan.rows) CHECK(row.min_nonzero >= Rat(1, 2));

    // vertex counts depend only on how many (copy, setting) pairs are pinned
    std::map<int, std::set<int>> counts_by_rank;
    for (const auto& row : scan.rows) {
        int geo_bits = 0;
        const auto items = all_marginal_items(2, 2);
        std::set<std::pair<int, int>> pairs;
        for (int j = 0; j < 8; ++j)
            if (row.mask & (1u << j))
                pairs.insert({items[static_cast<size_t>(j)].copy,
                              items[static_cast<size_t>(j)].setting});
        geo_bits = static_cast<int>(pairs.size());
        counts_by_rank[geo_bits].insert(row.vertex_count);
    }
    CHECK(counts_by_rank[0] == std::set<int>{256});
    CHECK(counts_by_rank[1] == std::set<int>{128});
    CHECK(counts_by_rank[2] == std::set<int>{64});
    CHECK(counts_by_rank[3] == std::set<int>{32});
    CHECK(counts_by_rank[4] == std::set<int>{24});
}

TEST_CASE("unconstrained vertex products recover the product game bound") {
    const auto poly = build_marginal_polytope(2, 2, {});
    const auto verts = enumerate_vertices(poly);
    const auto obj = chsh_product_tensor();
    CHECK(vertex_product_max(verts, verts, 2, 2, obj) == Rat(10, 16));
}

TEST_CASE("constrained lp exceeds constrained vertex products on the product game") {
    const auto t = check_one_objective(2, 2, chsh_product_tensor());
    CHECK(t.lp_value == Rat(10, 16));
    CHECK(t.product_value == Rat(9, 16));
    CHECK_FALSE(t.equal);
}

TEST_CASE("random objectives expose the gap rather than close it") {
    const auto rep = check_lp_vs_vertex_products(2, 2, 10, 42);
    CHECK(rep.trials.size() == 10);
    CHECK(rep.violations > 0);  // the decomposition claim fails generically
    for (const auto& t : rep.trials) CHECK(t.lp_value >= t.product_value);
}
