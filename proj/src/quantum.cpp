#include "pnpbell/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace pnpbell {

namespace {

CMat bloch(double x, double y, double z) {
    return pauli_x().scaled(x) + pauli_y().scaled(y) + pauli_z().scaled(z);
}

CMat outcome_projector(const CMat& obs, int outcome) {
    const double s = (outcome == 0) ? 1.0 : -1.0;
    return (CMat::identity(2) + obs.scaled(s)).scaled(0.5);
}

double chsh_coeff(int a, int b, int x, int y) {
    return ((a ^ b) == (x & y)) ? 0.25 : 0.0;
}

// Traceless Bloch part, normalized; keeps `fallback` when the direction is
// degenerate.
CMat sign_direction(const CMat& d, const CMat& fallback) {
    const double vx = d.at(0, 1).real();
    const double vy = -d.at(0, 1).imag();
    const double vz = 0.5 * (d.at(0, 0).real() - d.at(1, 1).real());
    const double norm = std::sqrt(vx * vx + vy * vy + vz * vz);
    if (norm < 1e-14) return fallback;
    return bloch(vx / norm, vy / norm, vz / norm);
}

double behavior_value(const CMat& rho, const std::array<CMat, 2>& aobs,
                      const std::array<CMat, 2>& bobs) {
    double acc = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double c = chsh_coeff(a, b, x, y);
                    if (c == 0) continue;
                    const CMat proj = CMat::kron(outcome_projector(aobs[static_cast<size_t>(x)], a),
                                                 outcome_projector(bobs[static_cast<size_t>(y)], b));
                    acc += c * (rho * proj).trace().real();
                }
    return acc;
}

}  // namespace

double closed_form_Q(double q) { return 0.5 + 0.25 * std::sqrt(1.0 + q * q); }

double tradeoff_A_of_Q(double Q) {
    const double t = 4.0 * Q - 2.0;
    double q2 = t * t - 1.0;
    if (q2 < 0 && q2 > -1e-12) q2 = 0;
    if (q2 < 0 || q2 > 1 + 1e-12)
        throw std::invalid_argument("game value outside the family's range");
    const double q = std::sqrt(std::min(q2, 1.0));
    return 0.5 + 0.25 * std::sqrt((1.0 - q) * (1.0 + q / std::sqrt(1.0 + q * q)));
}

QuantumModel make_quantum_model(double q) {
    if (q < 0 || q > 1) throw std::invalid_argument("entanglement parameter must be in [0,1]");
    QuantumModel model;
    model.q = q;

    const double root = std::sqrt(std::max(0.0, 1.0 - q * q));
    const double p = 0.5 * (1.0 + root);
    model.rho.at(0, 0) = p;
    model.rho.at(3, 3) = 1.0 - p;
    model.rho.at(0, 3) = 0.5 * q;
    model.rho.at(3, 0) = 0.5 * q;

    const double s = std::sqrt(1.0 + q * q);
    for (int x = 0; x < 2; ++x) {
        const double sgn = (x == 0) ? 1.0 : -1.0;
        const double zc = std::sqrt(std::max(0.0, (1.0 + sgn * q / s) / (1.0 + q)));
        const double xc = std::sqrt(std::max(0.0, q * (1.0 - sgn / s) / (1.0 + q)));
        model.alice_obs[static_cast<size_t>(x)] = bloch(sgn * xc, 0, zc);
        model.bob_obs[static_cast<size_t>(x)] = bloch(-sgn * xc, 0, zc);
    }

    const CMat rho_a = model.rho.partial_trace_second();
    const CMat rho_b = model.rho.partial_trace_first();
    double pa[2][2];
    double pb[2][2];
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) {
            pa[x][a] =
                (outcome_projector(model.alice_obs[static_cast<size_t>(x)], a) * rho_a)
                    .trace()
                    .real();
            pb[x][a] =
                (outcome_projector(model.bob_obs[static_cast<size_t>(x)], a) * rho_b)
                    .trace()
                    .real();
        }

    // No-click assignments: among deterministic pairs whose pure-assignment
    // value hits the classical 3/4, take the one with the largest A + B.
    double best_sum = -1;
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1)
            for (int b0 = 0; b0 < 2; ++b0)
                for (int b1 = 0; b1 < 2; ++b1) {
                    const int alpha[2] = {a0, a1};
                    const int beta[2] = {b0, b1};
                    double cterm = 0;
                    for (int x = 0; x < 2; ++x)
                        for (int y = 0; y < 2; ++y) cterm += chsh_coeff(alpha[x], beta[y], x, y);
                    if (std::abs(cterm - 0.75) > 1e-12) continue;
                    double a_term = 0, b_term = 0;
                    for (int x = 0; x < 2; ++x)
                        for (int y = 0; y < 2; ++y)
                            for (int o = 0; o < 2; ++o) {
                                a_term += chsh_coeff(o, beta[y], x, y) * pa[x][o];
                                b_term += chsh_coeff(alpha[x], o, x, y) * pb[y][o];
                            }
                    if (a_term + b_term > best_sum + 1e-15) {
                        best_sum = a_term + b_term;
                        model.alpha.map = {a0, a1};
                        model.beta.map = {b0, b1};
                        model.A = a_term;
                        model.B = b_term;
                    }
                }

    model.Q = behavior_value(model.rho, model.alice_obs, model.bob_obs);
    return model;
}

BehaviorD quantum_behavior(const QuantumModel& model) {
    BehaviorD beh(1, 2, 2);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const CMat proj =
                        CMat::kron(outcome_projector(model.alice_obs[static_cast<size_t>(x)], a),
                                   outcome_projector(model.bob_obs[static_cast<size_t>(y)], b));
                    beh.at(a, b, x, y) = (model.rho * proj).trace().real();
                }
    return beh;
}

BehaviorD apply_visibility(const BehaviorD& beh, double v) {
    if (v < 0 || v > 1) throw std::invalid_argument("visibility must be in [0,1]");
    BehaviorD out(beh.copies(), beh.settings(), beh.outcomes());
    const double o2 = static_cast<double>(beh.outcome_tuples()) * beh.outcome_tuples();
    for (int x = 0; x < beh.setting_tuples(); ++x)
        for (int y = 0; y < beh.setting_tuples(); ++y)
            for (int a = 0; a < beh.outcome_tuples(); ++a)
                for (int b = 0; b < beh.outcome_tuples(); ++b)
                    out.at(a, b, x, y) = v * beh.at(a, b, x, y) + (1.0 - v) / o2;
    return out;
}

double random_strategy_chsh(SequentialRng& rng) {
    // Haar-ish pure state: i.i.d. complex normal amplitudes, normalized
    std::array<Cx, 4> psi;
    double norm2 = 0;
    for (auto& c : psi) {
        c = Cx(rng.normal(), rng.normal());
        norm2 += std::norm(c);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    CMat rho(4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            rho.at(r, c) = psi[static_cast<size_t>(r)] * std::conj(psi[static_cast<size_t>(c)]) *
                           (inv * inv);

    auto random_obs = [&rng]() {
        const double cz = 2.0 * rng.real() - 1.0;
        const double phi = 2.0 * 3.14159265358979323846 * rng.real();
        const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
        return bloch(sz * std::cos(phi), sz * std::sin(phi), cz);
    };
    const std::array<CMat, 2> aobs{random_obs(), random_obs()};
    const std::array<CMat, 2> bobs{random_obs(), random_obs()};
    return behavior_value(rho, aobs, bobs);
}

double best_chsh_for_state(const CMat& rho, int restarts, SequentialRng& rng) {
    auto random_obs = [&rng]() {
        const double cz = 2.0 * rng.real() - 1.0;
        const double phi = 2.0 * 3.14159265358979323846 * rng.real();
        const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
        return bloch(sz * std::cos(phi), sz * std::sin(phi), cz);
    };

    double best = 0;
    for (int r = 0; r < restarts; ++r) {
        std::array<CMat, 2> aobs{random_obs(), random_obs()};
        std::array<CMat, 2> bobs{random_obs(), random_obs()};
        double value = behavior_value(rho, aobs, bobs);
        for (int iter = 0; iter < 500; ++iter) {
            // Alice update: per setting, the optimal observable is the sign
            // direction of the effective score difference.
            for (int x = 0; x < 2; ++x) {
                CMat f0(2), f1(2);
                for (int y = 0; y < 2; ++y)
                    for (int b = 0; b < 2; ++b) {
                        const CMat qb = outcome_projector(bobs[static_cast<size_t>(y)], b);
                        const double c0 = chsh_coeff(0, b, x, y);
                        const double c1 = chsh_coeff(1, b, x, y);
                        if (c0 != 0) f0 = f0 + qb.scaled(c0);
                        if (c1 != 0) f1 = f1 + qb.scaled(c1);
                    }
                const CMat e0 = (rho * CMat::kron(CMat::identity(2), f0)).partial_trace_second();
                const CMat e1 = (rho * CMat::kron(CMat::identity(2), f1)).partial_trace_second();
                aobs[static_cast<size_t>(x)] =
                    sign_direction(e0 - e1, aobs[static_cast<size_t>(x)]);
            }
            for (int y = 0; y < 2; ++y) {
                CMat f0(2), f1(2);
                for (int x = 0; x < 2; ++x)
                    for (int a = 0; a < 2; ++a) {
                        const CMat qa = outcome_projector(aobs[static_cast<size_t>(x)], a);
                        const double c0 = chsh_coeff(a, 0, x, y);
                        const double c1 = chsh_coeff(a, 1, x, y);
                        if (c0 != 0) f0 = f0 + qa.scaled(c0);
                        if (c1 != 0) f1 = f1 + qa.scaled(c1);
                    }
                const CMat e0 = (rho * CMat::kron(f0, CMat::identity(2))).partial_trace_first();
                const CMat e1 = (rho * CMat::kron(f1, CMat::identity(2))).partial_trace_first();
                bobs[static_cast<size_t>(y)] =
                    sign_direction(e0 - e1, bobs[static_cast<size_t>(y)]);
            }
            const double next = behavior_value(rho, aobs, bobs);
            if (next - value < 1e-15) {
                value = std::max(value, next);
                break;
            }
            value = next;
        }
        if (value > best) best = value;
    }
    return best;
}

}  // namespace pnpbell
