#include "pnpbell/simplex.hpp"

#include <stdexcept>

namespace pnpbell {

ExactSimplex::ExactSimplex(std::vector<Rat> rhs) : m_(static_cast<int>(rhs.size())) {
    if (m_ == 0) throw std::invalid_argument("need at least one row");
    sign_.assign(static_cast<size_t>(m_), 1);
    rhs_ = std::move(rhs);
    for (int i = 0; i < m_; ++i) {
        if (rhs_[static_cast<size_t>(i)] < 0) {
            rhs_[static_cast<size_t>(i)] = -rhs_[static_cast<size_t>(i)];
            sign_[static_cast<size_t>(i)] = -1;
        }
    }
    tab_.assign(static_cast<size_t>(m_), std::vector<Rat>(static_cast<size_t>(m_), Rat(0)));
    basis_.resize(static_cast<size_t>(m_));
    dead_row_.assign(static_cast<size_t>(m_), false);
    for (int i = 0; i < m_; ++i) {
        tab(i, i) = 1;  // artificial identity block; doubles as B^{-1} later
        basis_[static_cast<size_t>(i)] = i;
    }
}

int ExactSimplex::add_column(const std::vector<Rat>& col, const Rat& obj) {
    if (static_cast<int>(col.size()) != m_) throw std::invalid_argument("column size mismatch");
    // Tableau form of the new column is B^{-1} (sign-adjusted col); the
    // artificial block of the tableau is exactly B^{-1}.
    std::vector<Rat> cur(static_cast<size_t>(m_), Rat(0));
    for (int i = 0; i < m_; ++i) {
        Rat acc(0);
        for (int k = 0; k < m_; ++k) {
            const Rat& a = col[static_cast<size_t>(k)];
            if (a == 0) continue;
            acc += tab(i, k) * (sign_[static_cast<size_t>(k)] < 0 ? Rat(-a) : a);
        }
        cur[static_cast<size_t>(i)] = acc;
    }
    for (int i = 0; i < m_; ++i) tab_[static_cast<size_t>(i)].push_back(cur[static_cast<size_t>(i)]);
    obj_.push_back(obj);
    const int idx = static_cast<int>(obj_.size()) - 1;

    // Invariant after phase 1: rows whose basic variable is an artificial are
    // all-zero across structural columns, so the artificial can never leave
    // zero. A fresh column may break that on a formerly redundant row; restore
    // it with a degenerate pivot (rhs is 0 there, so either sign works).
    if (phase1_done_) {
        for (int i = 0; i < m_; ++i) {
            if (basis_[static_cast<size_t>(i)] < m_ && tab(i, m_ + idx) != 0) {
                if (rhs_[static_cast<size_t>(i)] != 0)
                    throw std::logic_error("artificial row with nonzero rhs");
                pivot(i, m_ + idx);
                drive_out_artificials();
                break;
            }
        }
    }
    return idx;
}

void ExactSimplex::pivot(int row, int var) {
    auto& prow = tab_[static_cast<size_t>(row)];
    const Rat inv = Rat(1) / prow[static_cast<size_t>(var)];
    for (auto& v : prow) v *= inv;
    rhs_[static_cast<size_t>(row)] *= inv;
    for (int i = 0; i < m_; ++i) {
        if (i == row) continue;
        const Rat f = tab(i, var);
        if (f == 0) continue;
        auto& irow = tab_[static_cast<size_t>(i)];
        for (size_t j = 0; j < irow.size(); ++j) {
            if (prow[j] != 0) irow[j] -= f * prow[j];
        }
        rhs_[static_cast<size_t>(i)] -= f * rhs_[static_cast<size_t>(row)];
    }
    basis_[static_cast<size_t>(row)] = var;
    ++pivots_;
}

ExactSimplex::Status ExactSimplex::run(const std::vector<Rat>& cost, bool allow_artificial,
                                       uint64_t max_pivots) {
    const int nv = var_count();
    for (uint64_t it = 0; it < max_pivots; ++it) {
        // reduced costs: rc_j = c_j - c_B . column_j; Bland picks the smallest
        // eligible variable index
        int enter = -1;
        for (int j = 0; j < nv; ++j) {
            if (!allow_artificial && j < m_) continue;
            bool basic = false;
            for (int i = 0; i < m_; ++i)
                if (basis_[static_cast<size_t>(i)] == j) { basic = true; break; }
            if (basic) continue;
            Rat rc = cost[static_cast<size_t>(j)];
            for (int i = 0; i < m_; ++i) {
                const Rat& cb = cost[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
                if (cb != 0 && tab(i, j) != 0) rc -= cb * tab(i, j);
            }
            if (rc > 0) { enter = j; break; }
        }
        if (enter < 0) return Status::optimal;
        int leave_row = -1;
        Rat best_ratio(0);
        for (int i = 0; i < m_; ++i) {
            const Rat& a = tab(i, enter);
            if (a <= 0) continue;
            const Rat ratio = rhs_[static_cast<size_t>(i)] / a;
            if (leave_row < 0 || ratio < best_ratio ||
                (ratio == best_ratio &&
                 basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave_row)])) {
                leave_row = i;
                best_ratio = ratio;
            }
        }
        if (leave_row < 0) return Status::unbounded;
        pivot(leave_row, enter);
    }
    return Status::iteration_limit;
}

void ExactSimplex::drive_out_artificials() {
    dead_row_.assign(static_cast<size_t>(m_), false);
    for (int i = 0; i < m_; ++i) {
        if (basis_[static_cast<size_t>(i)] >= m_) continue;
        // basic artificial sits at value 0; swap in any structural with a
        // nonzero entry, otherwise the row is redundant and goes inert
        int found = -1;
        for (int j = m_; j < var_count(); ++j) {
            if (tab(i, j) != 0) { found = j; break; }
        }
        if (found >= 0) {
            pivot(i, found);
        } else {
            dead_row_[static_cast<size_t>(i)] = true;
        }
    }
}

std::vector<Rat> ExactSimplex::phase2_cost() const {
    std::vector<Rat> cost(static_cast<size_t>(var_count()), Rat(0));
    for (size_t j = 0; j < obj_.size(); ++j) cost[static_cast<size_t>(m_) + j] = obj_[j];
    return cost;
}

ExactSimplex::Status ExactSimplex::solve(uint64_t max_pivots) {
    if (!phase1_done_) {
        std::vector<Rat> cost(static_cast<size_t>(var_count()), Rat(0));
        for (int k = 0; k < m_; ++k) cost[static_cast<size_t>(k)] = -1;
        const Status s = run(cost, true, max_pivots);
        if (s == Status::iteration_limit) return s;
        Rat infeas(0);
        for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<size_t>(i)] < m_) infeas += rhs_[static_cast<size_t>(i)];
        if (infeas != 0) return Status::infeasible;
        drive_out_artificials();
        phase1_done_ = true;
        feasible_ = true;
    }
    const Status s = run(phase2_cost(), false, max_pivots);
    if (s == Status::optimal) {
        objective_ = 0;
        const auto x = primal();
        for (size_t j = 0; j < obj_.size(); ++j)
            if (x[j] != 0) objective_ += obj_[j] * x[j];
    }
    return s;
}

std::vector<Rat> ExactSimplex::primal() const {
    std::vector<Rat> x(obj_.size(), Rat(0));
    for (int i = 0; i < m_; ++i) {
        const int v = basis_[static_cast<size_t>(i)];
        if (v >= m_) x[static_cast<size_t>(v - m_)] = rhs_[static_cast<size_t>(i)];
    }
    return x;
}

std::vector<Rat> ExactSimplex::duals() const {
    const auto cost = phase2_cost();
    std::vector<Rat> y(static_cast<size_t>(m_), Rat(0));
    for (int k = 0; k < m_; ++k) {
        Rat acc(0);
        for (int i = 0; i < m_; ++i) {
            const Rat& cb = cost[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
            if (cb != 0 && tab(i, k) != 0) acc += cb * tab(i, k);
        }
        y[static_cast<size_t>(k)] = sign_[static_cast<size_t>(k)] < 0 ? Rat(-acc) : acc;
    }
    return y;
}

Rat ExactSimplex::price(const std::vector<Rat>& col, const Rat& obj) const {
    const auto y = duals();
    Rat rc = obj;
    for (int k = 0; k < m_; ++k)
        if (col[static_cast<size_t>(k)] != 0) rc -= y[static_cast<size_t>(k)] * col[static_cast<size_t>(k)];
    return rc;
}

}  // namespace pnpbell
