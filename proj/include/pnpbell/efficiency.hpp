#pragma once

#include "pnpbell/quantum.hpp"

namespace pnpbell {

struct EfficiencyQuery {
    double Q = 0;
    double A = 0;
    double B = 0;
    int N = 1;
    double C = 0.75;
    double eta = 1.0;
    double epsilon = 0;  // assumed residual penalty total, the observed A + B
    double kappa = 0;
};

// Expected value of the penalized expression with symmetric lossy detectors:
// both-click, single-click, and no-click branches weighted by eta^2,
// eta(1-eta), (1-eta)^2, minus the penalty charge kappa * epsilon.
double pnp_value_with_efficiency(const EfficiencyQuery& query);

struct RequiredEta {
    double eta = 0;
    bool degenerate = false;  // A = B = C: assignments already saturate the bound
};

// Efficiency at which the lossy value crosses C^N:
// (2C^N - A^N - B^N) / (Q^N + C^N - A^N - B^N). Throws when Q <= C.
RequiredEta required_eta(double Q, double A, double B, int N, double C = 0.75);

struct CurvePoint {
    int N = 1;
    double value = 0;
    double q_opt = 0;
    bool boundary = false;   // infimum pressed against the q_min end of the grid
    bool attainable = true;  // false when no threshold <= 1 exists
};

// Minimum of required_eta along the partially-entangled frontier
// (Q(q), A(q), A(q)), by dense grid plus golden-section refinement. The
// q -> 0 plateau at 2/3 is an infimum, not a minimum, hence the flag.
CurvePoint critical_eta(int N, double q_min = 1e-4);

// Large-N approximation 2 (C/Q)^N (1 - delta^N) for A = B = delta C.
double asymptotic_eta(double C, double Q, double delta, int N);

// Smallest visibility at which detectors of efficiency eta still violate,
// by bisection over v with an inner optimization over q.
CurvePoint min_visibility(double eta, int N);

// Threshold efficiency with both noise and a residual penalty charge
// kappa * epsilon, kappa taken from the sufficient-penalty formula. Per q
// the threshold is a quadratic root; the outer 1-D optimization matches
// critical_eta, which this reproduces at v = 1, epsilon = 0.
CurvePoint eta_with_penalty_and_visibility(double v, int N, double epsilon);

}  // namespace pnpbell
