#pragma once

#include <cstdint>
#include <vector>

#include "pnpbell/rational.hpp"

namespace pnpbell {

// Exact primal simplex on   maximize c.x  s.t.  A x = b, x >= 0,
// dense rational tableau, Bland's rule, two phases with explicit artificials.
// Columns can be added after a solve; the tableau is warm-started, which is
// what the column-generation callers rely on. Redundant rows are detected in
// phase 1 (their artificial cannot be pivoted out) and go inert.
class ExactSimplex {
  public:
    enum class Status { optimal, infeasible, unbounded, iteration_limit };

    explicit ExactSimplex(std::vector<Rat> rhs);

    // Returns the structural variable's index (0-based over structurals).
    int add_column(const std::vector<Rat>& col, const Rat& obj);

    Status solve(uint64_t max_pivots = 1000000);

    const Rat& objective() const { return objective_; }
    // Value per structural variable, in add_column order.
    std::vector<Rat> primal() const;
    // Dual multiplier per row, in the caller's original row orientation.
    std::vector<Rat> duals() const;
    Rat price(const std::vector<Rat>& col, const Rat& obj) const;

    int rows() const { return m_; }
    int columns() const { return static_cast<int>(obj_.size()); }
    uint64_t pivots() const { return pivots_; }

  private:
    int var_count() const { return m_ + static_cast<int>(obj_.size()); }
    Rat& tab(int row, int var) { return tab_[static_cast<size_t>(row)][static_cast<size_t>(var)]; }
    const Rat& tab(int row, int var) const {
        return tab_[static_cast<size_t>(row)][static_cast<size_t>(var)];
    }
    void pivot(int row, int var);
    Status run(const std::vector<Rat>& cost, bool allow_artificial_entering, uint64_t max_pivots);
    void drive_out_artificials();
    std::vector<Rat> phase2_cost() const;

    int m_;
    std::vector<int> sign_;             // original row orientation (+1/-1)
    std::vector<std::vector<Rat>> tab_; // m_ rows: [artificials | structurals]
    std::vector<Rat> rhs_;
    std::vector<int> basis_;            // variable index basic in each row
    std::vector<Rat> obj_;              // structural objective coefficients
    std::vector<bool> dead_row_;
    Rat objective_;
    bool phase1_done_ = false;
    bool feasible_ = false;
    uint64_t pivots_ = 0;
};

}  // namespace pnpbell
