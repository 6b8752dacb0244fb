#include "pnpbell/bell.hpp"

#include <json.hpp>

namespace pnpbell {

BellExpression::BellExpression(int n, int m, std::vector<Rat> coeffs)
    : n_(n), m_(m), coeffs_(std::move(coeffs)) {
    if (n < 1 || m < 1) throw std::invalid_argument("n and m must be positive");
    if (coeffs_.size() != static_cast<size_t>(n) * n * m * m)
        throw std::invalid_argument("coefficient tensor has wrong size");
    for (const Rat& c : coeffs_)
        if (c < 0) throw std::invalid_argument("negative coefficient; shift/rescale first");
    sigma_ = 0;
    for (int x = 0; x < n_; ++x)
        for (int y = 0; y < n_; ++y) {
            Rat best = coeff(0, 0, x, y);
            for (int a = 0; a < m_; ++a)
                for (int b = 0; b < m_; ++b)
                    if (coeff(a, b, x, y) > best) best = coeff(a, b, x, y);
            sigma_ += best;
        }
}

const Rat& BellExpression::lhv_bound_C() const {
    if (!has_lhv_bound_) throw std::logic_error("LHV bound not set");
    return lhv_bound_;
}

void BellExpression::set_lhv_bound(const Rat& c) {
    lhv_bound_ = c;
    has_lhv_bound_ = true;
}

BellExpression make_chsh() {
    const int n = 2, m = 2;
    std::vector<Rat> c(static_cast<size_t>(n) * n * m * m, Rat(0));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    if ((a ^ b) == (x & y))
                        c[static_cast<size_t>(((a * m + b) * n + x) * n + y)] = make_rat(1, 4);
    BellExpression expr(n, m, std::move(c));
    expr.set_lhv_bound(make_rat(3, 4));
    return expr;
}

template <class T>
void BehaviorT<T>::validate(double tol) const {
    for (int x = 0; x < S_; ++x)
        for (int y = 0; y < S_; ++y) {
            T sum(0);
            for (int a = 0; a < O_; ++a)
                for (int b = 0; b < O_; ++b) {
                    const T& v = at(a, b, x, y);
                    if constexpr (std::is_same_v<T, double>) {
                        if (v < -1e-15) throw std::invalid_argument("negative probability");
                    } else {
                        if (v < 0) throw std::invalid_argument("negative probability");
                    }
                    sum += v;
                }
            if constexpr (std::is_same_v<T, double>) {
                if (std::abs(sum - 1.0) > tol)
                    throw std::invalid_argument("setting block not normalized");
            } else {
                if (sum != T(1)) throw std::invalid_argument("setting block not normalized");
            }
        }
}

template void BehaviorT<Rat>::validate(double) const;
template void BehaviorT<double>::validate(double) const;

template <class T>
void BehaviorT<T>::validate_nonsignaling(double tol) const {
    auto differs = [tol](const T& u, const T& v) {
        if constexpr (std::is_same_v<T, double>) {
            return std::abs(u - v) > tol;
        } else {
            (void)tol;
            return u != v;
        }
    };
    for (int x = 0; x < S_; ++x)
        for (int a = 0; a < O_; ++a) {
            T ref(0);
            for (int b = 0; b < O_; ++b) ref += at(a, b, x, 0);
            for (int y = 1; y < S_; ++y) {
                T sum(0);
                for (int b = 0; b < O_; ++b) sum += at(a, b, x, y);
                if (differs(sum, ref)) throw std::invalid_argument("alice marginal signals");
            }
        }
    for (int y = 0; y < S_; ++y)
        for (int b = 0; b < O_; ++b) {
            T ref(0);
            for (int a = 0; a < O_; ++a) ref += at(a, b, 0, y);
            for (int x = 1; x < S_; ++x) {
                T sum(0);
                for (int a = 0; a < O_; ++a) sum += at(a, b, x, y);
                if (differs(sum, ref)) throw std::invalid_argument("bob marginal signals");
            }
        }
}

template void BehaviorT<Rat>::validate_nonsignaling(double) const;
template void BehaviorT<double>::validate_nonsignaling(double) const;

DeterministicStrategy assignment_to_strategy(const AssignmentStrategy& as, int N) {
    DeterministicStrategy s;
    s.party = as.party;
    s.N = N;
    s.n = as.n;
    s.m = as.m;
    const int S = ipow(as.n, N);
    s.table.resize(static_cast<size_t>(S));
    for (int x = 0; x < S; ++x) {
        int out = 0;
        for (int i = 0; i < N; ++i) out = out * as.m + as.map[static_cast<size_t>(tuple_digit(x, i, N, as.n))];
        s.table[static_cast<size_t>(x)] = out;
    }
    return s;
}

std::string serialize_bell(const BellExpression& expr) {
    nlohmann::json j;
    j["n"] = expr.n();
    j["m"] = expr.m();
    auto rows = nlohmann::json::array();
    for (int a = 0; a < expr.m(); ++a) {
        auto ra = nlohmann::json::array();
        for (int b = 0; b < expr.m(); ++b) {
            auto rb = nlohmann::json::array();
            for (int x = 0; x < expr.n(); ++x) {
                auto rx = nlohmann::json::array();
                for (int y = 0; y < expr.n(); ++y) rx.push_back(rat_str(expr.coeff(a, b, x, y)));
                rb.push_back(rx);
            }
            ra.push_back(rb);
        }
        rows.push_back(ra);
    }
    j["coeffs"] = rows;
    if (expr.has_lhv_bound()) j["C"] = rat_str(expr.lhv_bound_C());
    j["sigma"] = rat_str(expr.algebraic_bound_sigma());
    return j.dump();
}

BellExpression deserialize_bell(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    std::vector<Rat> c(static_cast<size_t>(n) * n * m * m, Rat(0));
    const auto& rows = j.at("coeffs");
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    c[static_cast<size_t>(((a * m + b) * n + x) * n + y)] =
                        parse_rat(rows.at(a).at(b).at(x).at(y).get<std::string>());
    BellExpression expr(n, m, std::move(c));
    if (j.contains("C")) expr.set_lhv_bound(parse_rat(j.at("C").get<std::string>()));
    if (j.contains("sigma")) {
        const Rat sigma = parse_rat(j.at("sigma").get<std::string>());
        if (sigma != expr.algebraic_bound_sigma())
            throw std::invalid_argument("stored sigma disagrees with recomputation");
    }
    return expr;
}

}  // namespace pnpbell
