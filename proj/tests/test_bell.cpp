#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pnpbell/bell.hpp"

using namespace pnpbell;

TEST_CASE("chsh game coefficients, algebraic sum, and known classical bound") {
    const BellExpression chsh = make_chsh();
    CHECK(chsh.n() == 2);
    CHECK(chsh.m() == 2);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const Rat want = ((a ^ b) == (x & y)) ? Rat(1, 4) : Rat(0);
                    CHECK(chsh.coeff(a, b, x, y) == want);
                }
    CHECK(chsh.algebraic_bound_sigma() == Rat(1));
    CHECK(chsh.has_lhv_bound());
    CHECK(chsh.lhv_bound_C() == Rat(3, 4));
}

TEST_CASE("negative coefficients are rejected") {
    std::vector<Rat> c(16, Rat(0));
    c[0] = Rat(-1, 4);
    CHECK_THROWS(BellExpression(2, 2, std::move(c)));
}

TEST_CASE("tuple digits read most significant first") {
    // code 2 over two base-2 digits is (1,0)
    CHECK(tuple_digit(2, 0, 2, 2) == 1);
    CHECK(tuple_digit(2, 1, 2, 2) == 0);
    // code 7 over two base-4 digits is (1,3)
    CHECK(tuple_digit(7, 0, 2, 4) == 1);
    CHECK(tuple_digit(7, 1, 2, 4) == 3);
}

TEST_CASE("deterministic all-zero strategies win chsh with probability 3/4") {
    const BellExpression chsh = make_chsh();
    DeterministicStrategy sa{Party::alice, 1, 2, 2, {0, 0}};
    DeterministicStrategy sb{Party::bob, 1, 2, 2, {0, 0}};
    const auto beh = behavior_from_strategies<Rat>(sa, sb);
    beh.validate();
    beh.validate_nonsignaling();
    CHECK(evaluate_bell<Rat>(chsh, beh) == Rat(3, 4));
}

TEST_CASE("behavior validation flags signaling and bad normalization") {
    BehaviorQ beh(1, 2, 2);
    // Alice's marginal depends on Bob's setting: P(a=0|x=0) is 1 under y=0
    // but 0 under y=1.
    beh.at(0, 0, 0, 0) = 1;
    beh.at(1, 0, 0, 1) = 1;
    beh.at(0, 0, 1, 0) = 1;
    beh.at(0, 0, 1, 1) = 1;
    beh.validate();  // normalized, just signaling
    CHECK_THROWS(beh.validate_nonsignaling());

    BehaviorQ bad(1, 2, 2);
    bad.at(0, 0, 0, 0) = Rat(1, 2);  // block (0,0) sums to 1/2 only
    CHECK_THROWS(bad.validate());
}

TEST_CASE("product behavior of single-copy strategies matches the joint strategy table") {
    DeterministicStrategy sa1{Party::alice, 1, 2, 2, {0, 1}};
    DeterministicStrategy sb1{Party::bob, 1, 2, 2, {1, 1}};
    const auto one = behavior_from_strategies<Rat>(sa1, sb1);
    const auto prod = product_behavior<Rat>({one, one});

    // same thing built directly on two copies
    AssignmentStrategy aa{Party::alice, 2, 2, {0, 1}};
    AssignmentStrategy ab{Party::bob, 2, 2, {1, 1}};
    const auto big = behavior_from_strategies<Rat>(assignment_to_strategy(aa, 2),
                                                   assignment_to_strategy(ab, 2));
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) CHECK(prod.at(a, b, x, y) == big.at(a, b, x, y));
    prod.validate();
}

TEST_CASE("product evaluation multiplies single-copy values") {
    const BellExpression chsh = make_chsh();
    DeterministicStrategy sa{Party::alice, 1, 2, 2, {0, 0}};
    DeterministicStrategy sb{Party::bob, 1, 2, 2, {0, 0}};
    const auto one = behavior_from_strategies<Rat>(sa, sb);
    const auto two = product_behavior<Rat>({one, one});
    const auto three = product_behavior<Rat>({one, one, one});
    CHECK(evaluate_product_bell<Rat>(chsh, 2, two) == Rat(9, 16));
    CHECK(evaluate_product_bell<Rat>(chsh, 3, three) == Rat(27, 64));
    CHECK(evaluate_product_bell<Rat>(chsh, 1, one) == evaluate_bell<Rat>(chsh, one));
}

TEST_CASE("assignment strategies expand copy by copy") {
    // two copies, outcome of copy i is the other copy's setting
    AssignmentStrategy id{Party::alice, 2, 2, {0, 1}};
    const auto s = assignment_to_strategy(id, 2);
    REQUIRE(s.table.size() == 4);
    // x-code 2 = (1,0) maps to outcome tuple (1,0) = code 2
    CHECK(s.table[0] == 0);
    CHECK(s.table[1] == 1);
    CHECK(s.table[2] == 2);
    CHECK(s.table[3] == 3);
}

TEST_CASE("bell expressions round-trip through json") {
    const BellExpression chsh = make_chsh();
    const std::string text = serialize_bell(chsh);
    const BellExpression back = deserialize_bell(text);
    CHECK(back.n() == chsh.n());
    CHECK(back.m() == chsh.m());
    CHECK(back.coeffs() == chsh.coeffs());
    CHECK(back.lhv_bound_C() == chsh.lhv_bound_C());
    CHECK(back.algebraic_bound_sigma() == chsh.algebraic_bound_sigma());
}
