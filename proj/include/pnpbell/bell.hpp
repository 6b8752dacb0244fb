#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnpbell/rational.hpp"

namespace pnpbell {

enum class Party { alice, bob };

inline int ipow(int base, int exp) {
    int64_t acc = 1;
    for (int i = 0; i < exp; ++i) {
        acc *= base;
        if (acc > (int64_t(1) << 40)) throw std::overflow_error("ipow overflow");
    }
    return static_cast<int>(acc);
}

// Tuple codes are big-endian base-`base` integers: copy 0 is the most
// significant digit, so at N=2, n=2 the setting pair (x1,x2) has code 2*x1+x2.
inline int tuple_digit(int code, int i, int len, int base) {
    return (code / ipow(base, len - 1 - i)) % base;
}

// Bell expression with nonnegative coefficients, Eq-form value
// sum_{a,b,x,y} c[a,b,x,y] P(a,b|x,y).
class BellExpression {
  public:
    BellExpression(int n, int m, std::vector<Rat> coeffs);

    int n() const { return n_; }
    int m() const { return m_; }
    const Rat& coeff(int a, int b, int x, int y) const {
        return coeffs_[static_cast<size_t>(((a * m_ + b) * n_ + x) * n_ + y)];
    }
    const std::vector<Rat>& coeffs() const { return coeffs_; }

    bool has_lhv_bound() const { return has_lhv_bound_; }
    const Rat& lhv_bound_C() const;
    void set_lhv_bound(const Rat& c);

    // sum_{x,y} max_{a,b} c[a,b,x,y]: the algebraic (no-signaling) maximum.
    const Rat& algebraic_bound_sigma() const { return sigma_; }

  private:
    int n_;
    int m_;
    std::vector<Rat> coeffs_;
    Rat sigma_;
    Rat lhv_bound_;
    bool has_lhv_bound_ = false;
};

BellExpression make_chsh();

std::string serialize_bell(const BellExpression& expr);
BellExpression deserialize_bell(const std::string& json_text);

// Joint conditional probability table P(a,b|x,y) over outcome/setting tuples,
// stored per setting pair. T is Rat for exact work and double for curves.
template <class T>
class BehaviorT {
  public:
    BehaviorT(int N, int n, int m)
        : N_(N), n_(n), m_(m), S_(ipow(n, N)), O_(ipow(m, N)) {
        const int64_t total = int64_t(S_) * S_ * O_ * O_;
        if (total > (int64_t(1) << 24)) throw std::length_error("behavior table too large");
        p_.assign(static_cast<size_t>(total), T(0));
    }

    int copies() const { return N_; }
    int settings() const { return n_; }
    int outcomes() const { return m_; }
    int setting_tuples() const { return S_; }
    int outcome_tuples() const { return O_; }

    T& at(int a, int b, int x, int y) { return p_[index(a, b, x, y)]; }
    const T& at(int a, int b, int x, int y) const { return p_[index(a, b, x, y)]; }

    // Exactly 1 for Rat, within tol for double; entries nonnegative.
    void validate(double tol = 1e-12) const;
    // Separate from validate(): empirical frequency tables are allowed to
    // signal a little, model behaviors are not.
    void validate_nonsignaling(double tol = 1e-12) const;

    size_t index(int a, int b, int x, int y) const {
        return (static_cast<size_t>(x) * S_ + y) * O_ * O_ + static_cast<size_t>(a) * O_ + b;
    }

  private:
    int N_, n_, m_, S_, O_;
    std::vector<T> p_;
};

using BehaviorQ = BehaviorT<Rat>;
using BehaviorD = BehaviorT<double>;

// One party's deterministic map from setting tuples to outcome tuples.
struct DeterministicStrategy {
    Party party;
    int N, n, m;
    std::vector<int> table;  // size n^N, entries are outcome-tuple codes in [0, m^N)

    void validate() const {
        if (static_cast<int>(table.size()) != ipow(n, N))
            throw std::invalid_argument("strategy table not total");
        for (int o : table)
            if (o < 0 || o >= ipow(m, N)) throw std::invalid_argument("outcome code out of range");
    }
};

// Per-copy assignment map [n] -> [m] used on no-click events.
struct AssignmentStrategy {
    Party party;
    int n, m;
    std::vector<int> map;  // size n

    int operator()(int x) const { return map[static_cast<size_t>(x)]; }
};

// Lifts a per-copy assignment to the product deterministic strategy on N copies.
DeterministicStrategy assignment_to_strategy(const AssignmentStrategy& as, int N);

template <class T = Rat>
BehaviorT<T> behavior_from_strategies(const DeterministicStrategy& sa,
                                      const DeterministicStrategy& sb) {
    if (sa.N != sb.N || sa.n != sb.n || sa.m != sb.m)
        throw std::invalid_argument("strategy dimension mismatch");
    sa.validate();
    sb.validate();
    BehaviorT<T> beh(sa.N, sa.n, sa.m);
    for (int x = 0; x < beh.setting_tuples(); ++x)
        for (int y = 0; y < beh.setting_tuples(); ++y)
            beh.at(sa.table[x], sb.table[y], x, y) = T(1);
    return beh;
}

// Product of N single-copy behaviors (independent copies).
template <class T>
BehaviorT<T> product_behavior(const std::vector<BehaviorT<T>>& copies) {
    if (copies.empty()) throw std::invalid_argument("no copies");
    const int n = copies[0].settings();
    const int m = copies[0].outcomes();
    const int N = static_cast<int>(copies.size());
    for (const auto& c : copies)
        if (c.copies() != 1 || c.settings() != n || c.outcomes() != m)
            throw std::invalid_argument("copies must be single-copy behaviors of equal shape");
    BehaviorT<T> beh(N, n, m);
    const int S = beh.setting_tuples();
    const int O = beh.outcome_tuples();
    for (int x = 0; x < S; ++x)
        for (int y = 0; y < S; ++y)
            for (int a = 0; a < O; ++a)
                for (int b = 0; b < O; ++b) {
                    T prod(1);
                    for (int i = 0; i < N; ++i) {
                        prod = prod * copies[static_cast<size_t>(i)].at(
                                          tuple_digit(a, i, N, m), tuple_digit(b, i, N, m),
                                          tuple_digit(x, i, N, n), tuple_digit(y, i, N, n));
                    }
                    beh.at(a, b, x, y) = prod;
                }
    return beh;
}

namespace detail {
inline Rat to_value(const Rat& r) { return r; }
inline double to_value(double d) { return d; }
template <class T>
T coeff_as(const BellExpression& expr, int a, int b, int x, int y);
template <>
inline Rat coeff_as<Rat>(const BellExpression& expr, int a, int b, int x, int y) {
    return expr.coeff(a, b, x, y);
}
template <>
inline double coeff_as<double>(const BellExpression& expr, int a, int b, int x, int y) {
    return rat_double(expr.coeff(a, b, x, y));
}
}  // namespace detail

template <class T>
T evaluate_bell(const BellExpression& expr, const BehaviorT<T>& beh) {
    if (beh.copies() != 1 || beh.settings() != expr.n() || beh.outcomes() != expr.m())
        throw std::invalid_argument("behavior does not match expression");
    T acc(0);
    for (int x = 0; x < expr.n(); ++x)
        for (int y = 0; y < expr.n(); ++y)
            for (int a = 0; a < expr.m(); ++a)
                for (int b = 0; b < expr.m(); ++b)
                    acc += beh.at(a, b, x, y) * detail::coeff_as<T>(expr, a, b, x, y);
    return acc;
}

// Value of the N-product expression; product coefficients are formed digit by
// digit instead of materializing the m^2N x n^2N tensor.
template <class T>
T evaluate_product_bell(const BellExpression& expr, int N, const BehaviorT<T>& beh) {
    if (beh.copies() != N || beh.settings() != expr.n() || beh.outcomes() != expr.m())
        throw std::invalid_argument("behavior does not match expression/copies");
    const int S = beh.setting_tuples();
    const int O = beh.outcome_tuples();
    T acc(0);
    for (int x = 0; x < S; ++x)
        for (int y = 0; y < S; ++y)
            for (int a = 0; a < O; ++a)
                for (int b = 0; b < O; ++b) {
                    const T& pv = beh.at(a, b, x, y);
                    if (pv == T(0)) continue;
                    T prod(1);
                    for (int i = 0; i < N; ++i) {
                        prod = prod * detail::coeff_as<T>(
                                          expr, tuple_digit(a, i, N, expr.m()),
                                          tuple_digit(b, i, N, expr.m()),
                                          tuple_digit(x, i, N, expr.n()),
                                          tuple_digit(y, i, N, expr.n()));
                        if (prod == T(0)) break;
                    }
                    acc += pv * prod;
                }
    return acc;
}

}  // namespace pnpbell
