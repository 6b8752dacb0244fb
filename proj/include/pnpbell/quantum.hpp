#pragma once

#include <array>
#include <complex>
#include <vector>

#include "pnpbell/bell.hpp"
#include "pnpbell/rng.hpp"

namespace pnpbell {

using Cx = std::complex<double>;

// Dense complex matrix, only ever 2x2 or 4x4 here.
class CMat {
  public:
    explicit CMat(int d) : d_(d), v_(static_cast<size_t>(d) * d, Cx(0, 0)) {}

    static CMat identity(int d) {
        CMat m(d);
        for (int i = 0; i < d; ++i) m.at(i, i) = 1;
        return m;
    }

    int dim() const { return d_; }
    Cx& at(int r, int c) { return v_[static_cast<size_t>(r) * d_ + c]; }
    const Cx& at(int r, int c) const { return v_[static_cast<size_t>(r) * d_ + c]; }

    CMat operator+(const CMat& o) const {
        CMat m(d_);
        for (size_t i = 0; i < v_.size(); ++i) m.v_[i] = v_[i] + o.v_[i];
        return m;
    }
    CMat operator-(const CMat& o) const {
        CMat m(d_);
        for (size_t i = 0; i < v_.size(); ++i) m.v_[i] = v_[i] - o.v_[i];
        return m;
    }
    CMat operator*(const CMat& o) const {
        CMat m(d_);
        for (int r = 0; r < d_; ++r)
            for (int k = 0; k < d_; ++k) {
                const Cx f = at(r, k);
                if (f == Cx(0, 0)) continue;
                for (int c = 0; c < d_; ++c) m.at(r, c) += f * o.at(k, c);
            }
        return m;
    }
    CMat scaled(Cx s) const {
        CMat m(d_);
        for (size_t i = 0; i < v_.size(); ++i) m.v_[i] = v_[i] * s;
        return m;
    }
    CMat dagger() const {
        CMat m(d_);
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c) m.at(c, r) = std::conj(at(r, c));
        return m;
    }
    Cx trace() const {
        Cx t(0, 0);
        for (int i = 0; i < d_; ++i) t += at(i, i);
        return t;
    }

    static CMat kron(const CMat& a, const CMat& b) {
        CMat m(a.d_ * b.d_);
        for (int r1 = 0; r1 < a.d_; ++r1)
            for (int c1 = 0; c1 < a.d_; ++c1)
                for (int r2 = 0; r2 < b.d_; ++r2)
                    for (int c2 = 0; c2 < b.d_; ++c2)
                        m.at(r1 * b.d_ + r2, c1 * b.d_ + c2) = a.at(r1, c1) * b.at(r2, c2);
        return m;
    }

    // trace out the second factor of a d x d = (d/2 * 2) system
    CMat partial_trace_second() const {
        const int h = d_ / 2;
        CMat m(h);
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < h; ++c)
                for (int k = 0; k < 2; ++k) m.at(r, c) += at(r * 2 + k, c * 2 + k);
        return m;
    }
    CMat partial_trace_first() const {
        const int h = d_ / 2;
        CMat m(2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                for (int k = 0; k < h; ++k) m.at(r, c) += at(k * 2 + r, k * 2 + c);
        return m;
    }

  private:
    int d_;
    std::vector<Cx> v_;
};

inline CMat pauli_x() {
    CMat m(2);
    m.at(0, 1) = 1;
    m.at(1, 0) = 1;
    return m;
}
inline CMat pauli_y() {
    CMat m(2);
    m.at(0, 1) = Cx(0, -1);
    m.at(1, 0) = Cx(0, 1);
    return m;
}
inline CMat pauli_z() {
    CMat m(2);
    m.at(0, 0) = 1;
    m.at(1, 1) = -1;
    return m;
}

inline double tsirelson_bound() { return 0.5 + 0.25 * std::sqrt(2.0); }

// Closed forms for the one-parameter family of partially entangled states.
double closed_form_Q(double q);
double tradeoff_A_of_Q(double Q);

// State, measurements, no-click assignments, and the resulting game terms
// for one value of the entanglement parameter.
struct QuantumModel {
    double q = 0;
    CMat rho{4};
    std::array<CMat, 2> alice_obs{CMat(2), CMat(2)};
    std::array<CMat, 2> bob_obs{CMat(2), CMat(2)};
    AssignmentStrategy alpha{Party::alice, 2, 2, {0, 0}};  // no-click outputs
    AssignmentStrategy beta{Party::bob, 2, 2, {0, 0}};
    double Q = 0;  // all three computed from the tensors, not the closed forms
    double A = 0;
    double B = 0;
};

QuantumModel make_quantum_model(double q);

// Single-copy quantum behavior P(ab|xy) of a model.
BehaviorD quantum_behavior(const QuantumModel& model);

// Mix toward white noise: v P + (1 - v) uniform.
BehaviorD apply_visibility(const BehaviorD& beh, double v);

// chsh value of a random pure two-qubit strategy (Haar-ish state, uniform
// Bloch observables); used to probe the quantum bound.
double random_strategy_chsh(SequentialRng& rng);

// Best chsh value for a fixed state over measurements, by alternating
// closed-form observable updates from random starts.
double best_chsh_for_state(const CMat& rho, int restarts, SequentialRng& rng);

}  // namespace pnpbell
