"""Independent oracle for the detection-efficiency curves.

Recomputes the critical-efficiency / visibility / penalized-threshold values
with scipy's scalar optimizer so the C++ grid+golden implementation can be
pinned against numbers produced by a different method.
"""

import math

from scipy.optimize import minimize_scalar

C = 0.75


def Q_of(q):
    return 0.5 + 0.25 * math.sqrt(1 + q * q)


def A_of(q):
    return 0.5 + 0.25 * math.sqrt((1 - q) * (1 + q / math.sqrt(1 + q * q)))


def required_eta(Q, A, B, N, C1=C):
    qn, an, bn, cn = Q**N, A**N, B**N, C1**N
    return (2 * cn - an - bn) / (qn + cn - an - bn)


def crit_eta(N, qmin=1e-4):
    f = lambda q: required_eta(Q_of(q), A_of(q), A_of(q), N)
    res = minimize_scalar(f, bounds=(qmin, 1), method="bounded",
                          options={"xatol": 1e-12})
    grid_vals = [f(qmin + (1 - qmin) * i / 100000) for i in range(100001)]
    best = min(min(grid_vals), f(res.x))
    qopt = res.x if f(res.x) <= min(grid_vals) else qmin + (1 - qmin) * grid_vals.index(min(grid_vals)) / 100000
    return best, qopt


def noisy(q, v):
    return (v * Q_of(q) + (1 - v) / 2, v * A_of(q) + (1 - v) / 2)


def value(eta, Qv, Av, N):
    return eta * eta * Qv**N + eta * (1 - eta) * 2 * Av**N + (1 - eta) ** 2 * C**N


def min_visibility(eta, N):
    def slack(v):
        g = lambda q: -(value(eta, *noisy(q, v), N) - C**N)
        r = minimize_scalar(g, bounds=(1e-4, 1), method="bounded",
                            options={"xatol": 1e-12})
        return -r.fun

    lo, hi = 0.0, 1.0
    assert slack(1.0) > 0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if slack(mid) > 0:
            hi = mid
        else:
            lo = mid
    return hi


def fig2_eta(v, N, eps):
    kappa = 2 ** (N - 1) * (1 - 0.75**N)

    def eta_star(q):
        Qv, Av = noisy(q, v)
        D = Qv**N + C**N - 2 * Av**N
        E = 2 * Av**N - 2 * C**N
        disc = E * E + 4 * D * kappa * eps
        return (-E + math.sqrt(disc)) / (2 * D)

    r = minimize_scalar(eta_star, bounds=(1e-4, 1), method="bounded",
                        options={"xatol": 1e-12})
    grid = min(eta_star(1e-4 + (1 - 1e-4) * i / 100000) for i in range(100001))
    return min(r.fun, grid)


print("required_eta(q=1,N=1) =", required_eta(Q_of(1), 0.5, 0.5, 1))
print("required_eta(q=1,N=2) =", required_eta(Q_of(1), 0.5, 0.5, 2))
for N in (1, 2, 3, 4, 5, 6, 8, 10, 12, 14):
    v, qopt = crit_eta(N)
    print(f"crit_eta({N}) = {v:.12f}  q_opt = {qopt:.8f}")
for N in (1, 3, 5, 10):
    print(f"min_visibility(0.75, {N}) = {min_visibility(0.75, N):.10f}")
for v in (1.0, 0.99, 0.95, 0.9, 0.85):
    print(f"fig2 eta(v={v}, N=6, eps=1e-5) = {fig2_eta(v, 6, 1e-5):.10f}")
print("fig2 v=1 eps=0 N=5 =", fig2_eta(1.0, 5, 0.0), "vs crit", crit_eta(5)[0])

# asymptotic remainder bound, criterion-style sweep
delta, Qf = 2 / 3, 0.85
worst = 0.0
for N in range(5, 21):
    exact = required_eta(Qf, delta * C, delta * C, N)
    asym = 2 * (C / Qf) ** N * (1 - delta**N)
    worst = max(worst, abs(exact - asym) / (C / Qf) ** (2 * N))
print("asymptotic remainder ratio max (N=5..20) =", worst)
