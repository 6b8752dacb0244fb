#include "pnpbell/efficiency.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "pnpbell/pnp.hpp"
#include "pnpbell/rational.hpp"

namespace pnpbell {

namespace {

constexpr int kGridPoints = 10000;  // intervals of the dense scan
constexpr double kGoldenTol = 1e-10;

double mixed_Q(double q, double v) { return v * closed_form_Q(q) + (1.0 - v) / 2; }
double mixed_A(double q, double v) {
    return v * tradeoff_A_of_Q(closed_form_Q(q)) + (1.0 - v) / 2;
}

struct ScanResult {
    double value = 0;
    double q = 0;
    bool boundary = false;
};

// Dense grid over [q_min, 1] plus golden-section refinement around the grid
// argmin. The functions here are smooth with at most one interior dip, but
// near q -> 0 they go flat, which is exactly what the grid stage handles.
ScanResult minimize_over_q(const std::function<double(double)>& f, double q_min) {
    const double span = 1.0 - q_min;
    int best_i = 0;
    double best = f(q_min);
    for (int i = 1; i <= kGridPoints; ++i) {
        const double q = q_min + span * i / kGridPoints;
        const double y = f(q);
        if (y < best) {
            best = y;
            best_i = i;
        }
    }
    double lo = q_min + span * std::max(0, best_i - 1) / kGridPoints;
    double hi = q_min + span * std::min(kGridPoints, best_i + 1) / kGridPoints;

    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > kGoldenTol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        }
    }
    const double qr = 0.5 * (lo + hi);
    const double fr = f(qr);

    ScanResult r;
    if (fr <= best) {
        r.value = fr;
        r.q = qr;
    } else {
        r.value = best;
        r.q = q_min + span * best_i / kGridPoints;
    }
    r.boundary = best_i <= 1;  // the minimum hugs the lower end of the grid
    return r;
}

}  // namespace

double pnp_value_with_efficiency(const EfficiencyQuery& query) {
    if (query.eta < 0 || query.eta > 1)
        throw std::invalid_argument("efficiency must be in [0,1]");
    if (query.epsilon < 0) throw std::invalid_argument("residual penalty must be nonnegative");
    if (query.N < 1) throw std::invalid_argument("need at least one copy");
    const double qn = std::pow(query.Q, query.N);
    const double an = std::pow(query.A, query.N);
    const double bn = std::pow(query.B, query.N);
    const double cn = std::pow(query.C, query.N);
    const double e = query.eta;
    return e * e * qn + e * (1.0 - e) * (an + bn) + (1.0 - e) * (1.0 - e) * cn -
           query.kappa * query.epsilon;
}

RequiredEta required_eta(double Q, double A, double B, int N, double C) {
    if (N < 1) throw std::invalid_argument("need at least one copy");
    if (Q <= C) throw std::domain_error("no violation: the threshold is undefined for Q <= C");
    const double qn = std::pow(Q, N);
    const double an = std::pow(A, N);
    const double bn = std::pow(B, N);
    const double cn = std::pow(C, N);
    const double num = 2 * cn - an - bn;
    const double den = qn + cn - an - bn;
    if (den <= 0) throw std::domain_error("nonpositive denominator in the threshold formula");
    if (num <= 0) return {0.0, true};
    return {num / den, false};
}

CurvePoint critical_eta(int N, double q_min) {
    if (N < 1) throw std::invalid_argument("need at least one copy");
    if (q_min <= 0 || q_min >= 1) throw std::invalid_argument("q_min must be in (0,1)");
    const auto f = [N](double q) {
        const double Q = closed_form_Q(q);
        const double A = tradeoff_A_of_Q(Q);
        return required_eta(Q, A, A, N).eta;
    };
    const ScanResult r = minimize_over_q(f, q_min);
    return {N, r.value, r.q, r.boundary, r.value <= 1.0};
}

double asymptotic_eta(double C, double Q, double delta, int N) {
    if (Q <= C) throw std::invalid_argument("no violation: Q must exceed C");
    if (delta < 0 || delta >= 1) throw std::invalid_argument("delta must be in [0,1)");
    if (N < 1) throw std::invalid_argument("need at least one copy");
    return 2.0 * std::pow(C / Q, N) * (1.0 - std::pow(delta, N));
}

CurvePoint min_visibility(double eta, int N) {
    if (eta <= 0 || eta > 1) throw std::invalid_argument("efficiency must be in (0,1]");
    if (N < 1) throw std::invalid_argument("need at least one copy");
    const double q_min = 1e-4;
    const double cn = std::pow(0.75, N);

    // Largest slack over q at a given visibility; threshold is where it
    // crosses zero.
    const auto slack = [&](double v) {
        const auto neg = [&](double q) {
            EfficiencyQuery query;
            query.Q = mixed_Q(q, v);
            query.A = query.B = mixed_A(q, v);
            query.N = N;
            query.eta = eta;
            return -(pnp_value_with_efficiency(query) - cn);
        };
        return minimize_over_q(neg, q_min);
    };

    const ScanResult at_one = slack(1.0);
    if (-at_one.value <= 0) return {N, 1.0, at_one.q, at_one.boundary, false};

    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        if (-slack(mid).value > 0)
            hi = mid;
        else
            lo = mid;
    }
    const ScanResult at_thr = slack(hi);
    return {N, hi, at_thr.q, at_thr.boundary, true};
}

CurvePoint eta_with_penalty_and_visibility(double v, int N, double epsilon) {
    if (v < 0 || v > 1) throw std::invalid_argument("visibility must be in [0,1]");
    if (epsilon < 0) throw std::invalid_argument("residual penalty must be nonnegative");
    if (N < 1) throw std::invalid_argument("need at least one copy");
    const double kappa = rat_double(kappa_sufficient(make_chsh(), N));
    const double cn = std::pow(0.75, N);

    const auto f = [&](double q) {
        const double qvn = std::pow(mixed_Q(q, v), N);
        const double avn = std::pow(mixed_A(q, v), N);
        const double d = qvn + cn - 2 * avn;
        const double e = 2 * avn - 2 * cn;
        const double disc = e * e + 4 * d * kappa * epsilon;
        return (-e + std::sqrt(disc)) / (2 * d);
    };
    const ScanResult r = minimize_over_q(f, 1e-4);
    return {N, r.value, r.q, r.boundary, r.value <= 1.0};
}

}  // namespace pnpbell
