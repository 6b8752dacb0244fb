#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "pnpbell/rng.hpp"
#include "pnpbell/simplex.hpp"

using namespace pnpbell;
using Status = ExactSimplex::Status;

TEST_CASE("one-row lp with a slack") {
    ExactSimplex lp({Rat(1)});
    const int x = lp.add_column({Rat(1)}, Rat(2));
    const int s = lp.add_column({Rat(1)}, Rat(0));
    REQUIRE(lp.solve() == Status::optimal);
    CHECK(lp.objective() == Rat(2));
    const auto sol = lp.primal();
    CHECK(sol[static_cast<size_t>(x)] == Rat(1));
    CHECK(sol[static_cast<size_t>(s)] == Rat(0));
    const auto y = lp.duals();
    CHECK(y[0] == Rat(2));  // binding row, dual equals the objective gain per unit rhs
}

TEST_CASE("negative rhs rows are reoriented internally") {
    // -x - s = -1 with x,s >= 0 is x + s = 1
    ExactSimplex lp({Rat(-1)});
    lp.add_column({Rat(-1)}, Rat(5));
    lp.add_column({Rat(-1)}, Rat(0));
    REQUIRE(lp.solve() == Status::optimal);
    CHECK(lp.objective() == Rat(5));
    // duals come back in the caller's orientation: d(obj)/d(rhs) with rhs=-1
    CHECK(lp.duals()[0] == Rat(-5));
}

TEST_CASE("infeasible and unbounded cases are reported") {
    ExactSimplex bad({Rat(1)});
    bad.add_column({Rat(-1)}, Rat(1));  // -x = 1 has no x >= 0 solution
    CHECK(bad.solve() == Status::infeasible);

    ExactSimplex unb({Rat(0)});
    unb.add_column({Rat(1)}, Rat(1));   // x - s = 0, maximize x
    unb.add_column({Rat(-1)}, Rat(0));
    CHECK(unb.solve() == Status::unbounded);
}

TEST_CASE("two-variable lp with equality coupling") {
    // maximize 3u + 2v  s.t.  u + v = 4, u - v = 0  ->  u = v = 2, obj 10
    ExactSimplex lp({Rat(4), Rat(0)});
    lp.add_column({Rat(1), Rat(1)}, Rat(3));
    lp.add_column({Rat(1), Rat(-1)}, Rat(2));
    REQUIRE(lp.solve() == Status::optimal);
    CHECK(lp.objective() == Rat(10));
    const auto sol = lp.primal();
    CHECK(sol[0] == Rat(2));
    CHECK(sol[1] == Rat(2));
}

TEST_CASE("redundant rows stay inert until a later column touches them") {
    // x + y = 1 stated twice; second row is redundant for these columns
    ExactSimplex lp({Rat(1), Rat(1)});
    lp.add_column({Rat(1), Rat(1)}, Rat(1));  // x
    lp.add_column({Rat(1), Rat(1)}, Rat(0));  // y
    REQUIRE(lp.solve() == Status::optimal);
    CHECK(lp.objective() == Rat(1));

    // z enters with different weights on the two copies, which revives the
    // dependency row as the constraint z = 0. A huge objective on z must not
    // change the optimum.
    lp.add_column({Rat(1), Rat(2)}, Rat(1000));
    REQUIRE(lp.solve() == Status::optimal);
    CHECK(lp.objective() == Rat(1));
    const auto sol = lp.primal();
    CHECK(sol[2] == Rat(0));
}

TEST_CASE("warm start accepts improving columns") {
    ExactSimplex lp({Rat(1)});
    lp.add_column({Rat(1)}, Rat(1));
    REQUIRE(lp.solve() == Status::optimal);
    CHECK(lp.objective() == Rat(1));
    CHECK(lp.price({Rat(1)}, Rat(3)) > 0);  // pricing sees the improvement
    lp.add_column({Rat(1)}, Rat(3));
    REQUIRE(lp.solve() == Status::optimal);
    CHECK(lp.objective() == Rat(3));
    CHECK(lp.price({Rat(1)}, Rat(3)) == Rat(0));  // now part of the optimum
}

TEST_CASE("random bounded lps satisfy exact optimality conditions") {
    SequentialRng rng(424242);
    for (int trial = 0; trial < 25; ++trial) {
        const int m = 2 + static_cast<int>(rng.range(3));  // 2..4 rows
        const int nv = m + 1 + static_cast<int>(rng.range(4));
        std::vector<std::vector<Rat>> cols;
        std::vector<Rat> objs;
        ExactSimplex lp(std::vector<Rat>(static_cast<size_t>(m), Rat(1)));
        // one slack per row keeps every instance feasible; random columns and
        // objectives do the stressing
        for (int i = 0; i < m; ++i) {
            std::vector<Rat> e(static_cast<size_t>(m), Rat(0));
            e[static_cast<size_t>(i)] = 1;
            cols.push_back(e);
            objs.push_back(Rat(0));
            lp.add_column(e, Rat(0));
        }
        for (int j = m; j < nv; ++j) {
            std::vector<Rat> col;
            for (int i = 0; i < m; ++i) col.push_back(Rat(static_cast<int>(rng.range(5))));
            const Rat obj = Rat(static_cast<int>(rng.range(9)) - 2);
            cols.push_back(col);
            objs.push_back(obj);
            lp.add_column(col, obj);
        }
        REQUIRE(lp.solve() == Status::optimal);

        // primal feasibility, recomputed from the caller's own copies
        const auto x = lp.primal();
        REQUIRE(x.size() == cols.size());
        for (int i = 0; i < m; ++i) {
            Rat lhs(0);
            for (size_t j = 0; j < cols.size(); ++j)
                lhs += cols[j][static_cast<size_t>(i)] * x[j];
            CHECK(lhs == Rat(1));
        }
        Rat val(0);
        for (size_t j = 0; j < cols.size(); ++j) {
            CHECK(x[j] >= 0);
            val += objs[j] * x[j];
        }
        CHECK(val == lp.objective());

        // dual feasibility: no column prices positive at the optimum
        for (size_t j = 0; j < cols.size(); ++j) CHECK(lp.price(cols[j], objs[j]) <= 0);
    }
}
