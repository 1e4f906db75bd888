"""Acceptance checks, one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or directly
with ``python tests/test_acceptance.py``.
"""
import math
import time
from functools import lru_cache

import numpy as np

from cwbarriers.barriers import (
    BarrierQuery,
    SearchConfig,
    alpha_consistency_check,
    barrier_alpha,
    barrier_curve,
    barrier_omega,
    barrier_omega_at_theta,
)
from cwbarriers.entropy import (
    SupportDistribution,
    brute_force_max,
    maximize_entropy,
    objective,
    objective_gradient,
)
from cwbarriers.functionals import zeta_matmul_closed, zeta_upper
from cwbarriers.symmetry import cw_standard_action, orbits
from cwbarriers.tensors import (
    Tensor,
    builtin_tensor,
    direct_sum,
    kronecker,
    make_cw_big,
)

# q: (barrier, theta1, theta2 = theta3)
TABLE = {
    1: (3.0551, 0.09, 0.455), 2: (3.0625, 0.10, 0.45), 3: (3.0725, 0.11, 0.445),
    4: (3.0831, 0.12, 0.44), 5: (3.0936, 0.13, 0.435), 6: (3.1038, 0.14, 0.43),
    7: (3.1137, 0.14, 0.43), 8: (3.1232, 0.15, 0.425), 9: (3.1322, 0.16, 0.42),
    10: (3.1408, 0.17, 0.415), 11: (3.1491, 0.17, 0.415), 12: (3.1568, 0.18, 0.41),
    13: (3.1643, 0.18, 0.41), 14: (3.1713, 0.18, 0.41),
}

THETAS = [(1 / 3, 1 / 3, 1 / 3), (0.09, 0.455, 0.455), (0.6, 0.3, 0.1), (1.0, 0.0, 0.0), (0.05, 0.15, 0.8)]


@lru_cache(maxsize=None)
def alpha_cw(q):
    return barrier_alpha(BarrierQuery.from_id(f"cw:{q}")).value


def report(label, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} {label}: {detail}")
    assert ok, detail


def _random_tensor(rng, dims=(2, 2, 3), max_points=4):
    cells = [(i, j, k) for i in range(dims[0]) for j in range(dims[1]) for k in range(dims[2])]
    idx = rng.choice(len(cells), rng.integers(1, max_points + 1), replace=False)
    return Tensor.from_points(dims, [cells[i] for i in idx])


def test_criterion_1_table_regression():
    start = time.perf_counter()
    worst_opt = worst_at = 0.0
    for q, (value, t1, t23) in TABLE.items():
        query = BarrierQuery.from_id(f"cw:{q}", p=2.0, rank=q + 2)
        worst_opt = max(worst_opt, abs(barrier_omega(query).value - value))
        worst_at = max(worst_at, abs(barrier_omega_at_theta(query, (t1, t23, t23)) - value))
    elapsed = time.perf_counter() - start
    ok = worst_opt <= 2e-3 and worst_at <= 1e-3 and elapsed < 60
    report("1 table regression", ok,
           f"max |optimized - table| = {worst_opt:.2e} (tol 2e-3), "
           f"max |at table theta - table| = {worst_at:.2e} (tol 1e-3), runtime {elapsed:.1f}s (limit 60s)")


def test_criterion_2a_alpha_cw6():
    value = alpha_cw(6)
    report("2a alpha barrier CW_6", abs(value - 0.543) <= 5e-3, f"{value:.6f} vs 0.543 (tol 5e-3)")


def test_criterion_2b_alpha_max_over_q():
    values = {q: alpha_cw(q) for q in range(1, 15)}
    q_star = max(values, key=values.get)
    best = values[q_star]
    report("2b max alpha barrier over q in 1..14", abs(best - 0.625) <= 5e-3,
           f"{best:.6f} at q={q_star} vs 0.625 (tol 5e-3); q=2..14 max is "
           f"{max(v for q, v in values.items() if q >= 2):.6f}")


def test_companion_alpha_max_over_q_from_2():
    # same check with q = 1 left out, matching the plotted range
    values = {q: alpha_cw(q) for q in range(2, 15)}
    q_star = max(values, key=values.get)
    report("2b' max alpha barrier over q in 2..14", abs(values[q_star] - 0.625) <= 5e-3,
           f"{values[q_star]:.6f} at q={q_star} vs 0.625 (tol 5e-3)")


def test_criterion_3_closed_form():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(50):
        a, b, c = (int(x) for x in rng.integers(1, 5, 3))
        theta = tuple(rng.dirichlet(np.ones(3)))
        got = zeta_upper(builtin_tensor(f"mm:{a},{b},{c}").support, theta).log2_value
        worst = max(worst, abs(got - zeta_matmul_closed(a, b, c, theta).log2_value))
    report("3 closed form on matrix multiplication supports", worst <= 1e-6,
           f"max error {worst:.2e} over 50 draws (tol 1e-6)")


def test_criterion_4_unit_tensor():
    worst = 0.0
    for n in (2, 3, 5):
        for p in (0.0, 0.5, 1.0, 2.0, 3.0):
            value = barrier_omega(BarrierQuery.from_id(f"diag:{n}", p=p)).value
            worst = max(worst, abs(value - max(2.0, 1.0 + p)))
        worst = max(worst, abs(barrier_alpha(BarrierQuery.from_id(f"diag:{n}")).value - 1.0))
    report("4 unit tensor gives trivial barriers", worst <= 1e-9, f"max error {worst:.2e} (tol 1e-9)")


def _small_builtins():
    ids = [f"diag:{n}" for n in range(1, 6)] + ["cwsmall:1"]
    for l in range(1, 6):
        for m in range(1, 6):
            for n in range(1, 6):
                if l * m * n <= 5:
                    ids.append(f"mm:{l},{m},{n}")
    return ids


def test_criterion_5_brute_force():
    worst, where = 0.0, ""
    for tid in _small_builtins():
        S = builtin_tensor(tid).support
        for theta in THETAS:
            d = abs(maximize_entropy(S, theta).value_bits - brute_force_max(S, theta, 0.01))
            if d > worst:
                worst, where = d, f"{tid} theta={theta}"
    for q in (1, 2, 3):
        S = make_cw_big(q).support
        part = orbits(S, cw_standard_action(q))
        for theta in THETAS[:3]:
            d = abs(maximize_entropy(S, theta, part).value_bits - brute_force_max(S, theta, 0.01, part))
            if d > worst:
                worst, where = d, f"cw:{q} reduced theta={theta}"
    report("5 solver vs brute-force grid (step 0.01)", worst <= 1e-2,
           f"max difference {worst:.2e} at {where} (tol 1e-2)")


def _multiplicative_additive(rng):
    worst = 0.0
    for _ in range(10):
        S, T = _random_tensor(rng), _random_tensor(rng)
        theta = tuple(rng.dirichlet(np.ones(3)))
        zs, zt = zeta_upper(S.support, theta).log2_value, zeta_upper(T.support, theta).log2_value
        worst = max(worst, abs(zeta_upper(kronecker(S, T).support, theta).log2_value - zs - zt))
        worst = max(worst, abs(zeta_upper(direct_sum(S, T).support, theta).value - 2 ** zs - 2 ** zt))
    return worst


def _gradient(rng):
    worst = 0.0
    S = make_cw_big(2).support
    for theta in THETAS:
        dist = SupportDistribution(S, rng.dirichlet(np.ones(len(S))))
        g = objective_gradient(dist, None, theta) / math.log(2)
        for _ in range(5):
            i, j = rng.choice(len(S), 2, replace=False)
            d = np.zeros(len(S))
            d[i], d[j] = 1.0, -1.0
            h = 1e-6
            fd = (objective(SupportDistribution(S, dist.masses + h * d), None, theta)
                  - objective(SupportDistribution(S, dist.masses - h * d), None, theta)) / (2 * h)
            worst = max(worst, abs(fd - g @ d) / max(1.0, abs(g @ d)))
    return worst


def _concavity(rng):
    worst = 0.0
    S = make_cw_big(3).support
    for theta in THETAS:
        for _ in range(20):
            x, y = rng.dirichlet(np.ones(len(S))), rng.dirichlet(np.ones(len(S)))
            lam = rng.uniform()
            mid = objective(SupportDistribution(S, lam * x + (1 - lam) * y), None, theta)
            ends = (lam * objective(SupportDistribution(S, x), None, theta)
                    + (1 - lam) * objective(SupportDistribution(S, y), None, theta))
            worst = max(worst, ends - mid)
    return worst


def _monotonicity():
    coarse = SearchConfig(theta_step=0.02)
    worst = 0.0
    for q in (1, 4):
        values = [r.value for _, r in barrier_curve(BarrierQuery.from_id(f"cw:{q}"), 0.0, 3.0, 0.25, coarse)]
        worst = max(worst, max(a - b for a, b in zip(values, values[1:])))
        kv = [barrier_omega(BarrierQuery.from_id(f"cw:{q}", p=1.5, kappa=k), coarse).value
              for k in (0.0, 0.25, 0.5, 1.0, 2.0)]
        worst = max(worst, max(a - b for a, b in zip(kv, kv[1:])))
    return worst


def test_criterion_6_properties():
    rng = np.random.default_rng(99)
    mult = _multiplicative_additive(rng)
    grad = _gradient(rng)
    conc = _concavity(rng)
    mono = _monotonicity()
    cons = max(abs(alpha_consistency_check(BarrierQuery.from_id(f"cw:{q}")) - 2.0) for q in range(1, 9))
    ok = mult <= 1e-6 and grad <= 1e-6 and conc <= 1e-10 and mono <= 1e-9 and cons <= 1e-3
    report("6 property suite", ok,
           f"tensor/direct-sum {mult:.1e} (1e-6), gradient {grad:.1e} (1e-6), "
           f"concavity {max(conc, 0):.1e} (1e-10), monotone drop {max(mono, 0):.1e}, "
           f"consistency {cons:.1e} (1e-3)")


def test_criterion_7_exclusions():
    # laser-method points are out of scope; a barrier must still sit above them
    alpha5 = alpha_cw(5)
    report("7 excluded figure points (consistency only)", alpha5 >= 0.3029,
           f"alpha barrier CW_5 = {alpha5:.4f} is above the laser-method value 0.3029")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
