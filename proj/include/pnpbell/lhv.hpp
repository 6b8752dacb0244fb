#pragma once

#include <cstdint>
#include <functional>

#include "pnpbell/bell.hpp"

namespace pnpbell {

struct BoundResult {
    Rat value;
    DeterministicStrategy witness_alice;
    DeterministicStrategy witness_bob;
    uint64_t strategies_scanned = 0;
    bool symmetry_pruned = false;
};

struct ProductBoundOptions {
    uint64_t cap = 20000000;     // on the raw Alice strategy count (m^N)^(n^N)
    bool prune_symmetry = true;  // only applied when the joint output flip preserves coefficients
    int threads = 1;
    std::function<void(uint64_t, uint64_t)> progress;  // (done, total), called every 2^20
};

// Exact maximum over deterministic strategy pairs; Bob's side is a per-setting
// best response, so only Alice's strategies are enumerated.
BoundResult lhv_bound(const BellExpression& expr);

BoundResult product_lhv_bound(const BellExpression& expr, int N,
                              const ProductBoundOptions& opts = {});

// C^N, the bound over product strategies. Uses the stored LHV bound when
// present and computes it otherwise.
Rat product_strategy_bound(const BellExpression& expr, int N);

}  // namespace pnpbell
