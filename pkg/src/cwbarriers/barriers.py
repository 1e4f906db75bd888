"""Barriers for upper bounds on omega(p) and for lower bounds on alpha.

For a monotone multiplicative functional F and an intermediate tensor T with
asymptotic rank R~(T), any upper bound on omega(p) obtained through T obeys

    omega_hat(p) >= N R / D + kappa (R / D - 1)

with N = log F(<2,2,2^p>), D = log F(T), R = log R~(T), and kappa the
catalyticity exponent (0 for plain methods).  Each theta in the simplex gives
one such F; the barrier is the maximum over theta.  Solving the omega bound
for the largest p with omega_hat(p) = 2 gives the alpha barrier

    alpha_hat <= 2 D / (R (1 - t1)) - (1 + t1) / (1 - t1),

minimized over theta.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .entropy import DEFAULT_TOL, SupportDistribution, Theta
from .functionals import quasi_value, zeta_upper
from .symmetry import OrbitPartition, axis_swap_symmetric, cw_standard_action, orbits
from .tensors import TensorError, TensorSupport, asymptotic_rank, builtin_tensor

METHOD_LABELS = ("restriction", "degeneration", "monomial-degeneration", "monomial-restriction")
RANK_MODES = ("product-heuristic", "user-supplied")
THREADS_ENV = "CWBARRIERS_THREADS"
#: theta_2 + theta_3 must stay at least this large in the alpha search.
ALPHA_EDGE = 1e-6
#: Golden ratio conjugate.
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchConfig:
    theta_step: float = 0.005
    resolution: float = 1e-4
    tol: float = DEFAULT_TOL
    symmetric: bool | None = None
    threads: int | None = None

    def __post_init__(self):
        if not 0 < self.theta_step <= 0.5:
            raise ValueError(f"theta_step must lie in (0, 0.5], got {self.theta_step}")
        if not 0 < self.resolution <= self.theta_step:
            raise ValueError("resolution must be positive and at most theta_step")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def worker_count(self) -> int:
        if self.threads is not None:
            return max(1, int(self.threads))
        return max(1, int(os.environ.get(THREADS_ENV, "1")))


@dataclass(frozen=True)
class BarrierQuery:
    support: TensorSupport
    asymptotic_rank: float
    tensor_id: str = "tensor"
    p: float = 0.0
    kappa: float = 0.0
    method_label: str = "degeneration"
    orbit_partition: OrbitPartition | None = None
    presentations: tuple = ()
    rank_mode: str = "user-supplied"

    def __post_init__(self):
        if not self.asymptotic_rank > 1:
            raise ValueError(f"asymptotic rank must exceed 1, got {self.asymptotic_rank}")
        for name in ("p", "kappa"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and nonnegative, got {v}")
        if self.method_label not in METHOD_LABELS:
            raise ValueError(f"unknown method label {self.method_label!r}")

    @classmethod
    def from_id(cls, tensor_id: str, p: float = 0.0, kappa: float = 0.0,
                rank: float | None = None, symmetry: str | None = "auto", **kw) -> "BarrierQuery":
        """Query for a built-in tensor, using the rank registry unless ``rank`` is given."""
        T = builtin_tensor(tensor_id)
        mode = "user-supplied"
        if rank is None:
            entry = asymptotic_rank(tensor_id)
            if entry is None:
                raise TensorError(f"no built-in asymptotic rank for {tensor_id!r}; supply one")
            rank, mode = entry.asymptotic_rank, "registry"
        partition = None
        if symmetry == "cw" or (symmetry == "auto" and tensor_id.startswith("cw:")):
            q = int(tensor_id.partition(":")[2])
            partition = orbits(T.support, cw_standard_action(q))
        return cls(T.support, float(rank), tensor_id, p, kappa,
                   orbit_partition=partition, rank_mode=mode, **kw)

    @property
    def log2_rank(self) -> float:
        return math.log2(self.asymptotic_rank)


@dataclass(frozen=True)
class BarrierResult:
    """Optimal barrier and its certificate.

    For omega barriers ``numerator_bits`` is the quasitensor exponent and
    ``denominator_bits`` the functional exponent of T.  For alpha barriers
    the value is ``numerator_bits / denominator_bits`` with numerator
    ``2 D - R (1 + t1)`` and denominator ``R (1 - t1)``, before clamping.
    """

    value: float
    theta_star: Theta
    numerator_bits: float
    denominator_bits: float
    inner_distribution: SupportDistribution | None
    search_diagnostics: dict = field(default_factory=dict)
    clamped: bool = False
    rank_mode: str = "user-supplied"
    tensor_id: str = "tensor"
    p: float = 0.0
    kappa: float = 0.0


@dataclass(frozen=True)
class MixedFactor:
    support: TensorSupport
    weight: float
    asymptotic_rank: float | None = None
    orbit_partition: OrbitPartition | None = None
    tensor_id: str = "factor"

    def __post_init__(self):
        if not self.weight > 0:
            raise ValueError(f"factor weights must be positive, got {self.weight}")


@dataclass(frozen=True)
class MixedSequence:
    """Sequence S_1^(w_1 n) x S_2^(w_2 n) x ... with a per-n asymptotic rank.

    In ``product-heuristic`` mode the rank per unit n is taken as
    prod_j R~(S_j)^(w_j), an upper bound on the true limit; the resulting
    barrier can therefore overstate and is labeled heuristic.
    """

    factors: tuple[MixedFactor, ...]
    rank_mode: str = "product-heuristic"
    asymptotic_rank: float | None = None
    tensor_id: str = "mixed"

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a mixed sequence needs at least one factor")
        if self.rank_mode not in RANK_MODES:
            raise ValueError(f"rank_mode must be one of {RANK_MODES}")
        if self.rank_mode == "user-supplied":
            if self.asymptotic_rank is None:
                raise ValueError("user-supplied rank mode requires asymptotic_rank")
            if not self.asymptotic_rank > 1:
                raise ValueError("asymptotic rank must exceed 1")
        elif any(f.asymptotic_rank is None for f in self.factors):
            raise ValueError("product-heuristic rank mode needs every factor's asymptotic rank")

    def log2_rank(self) -> float:
        if self.rank_mode == "user-supplied":
            return math.log2(self.asymptotic_rank)
        return sum(f.weight * math.log2(f.asymptotic_rank) for f in self.factors)


# ---------------------------------------------------------------- denominators

class _Denominator:
    """Cached theta -> (D in bits, inner distribution) for one intermediate."""

    def __init__(self, parts, tol):
        # parts: list of (weight, [(name, support, partition), ...])
        self.parts = parts
        self.tol = tol
        self._cache: dict = {}

    @classmethod
    def for_query(cls, query: BarrierQuery, tol: float) -> "_Denominator":
        options = [(query.tensor_id, query.support, query.orbit_partition)]
        for entry in query.presentations:
            name, support = entry if isinstance(entry, tuple) else ("alt", entry)
            options.append((name, support, None))
        return cls([(1.0, options)], tol)

    @classmethod
    def for_mixed(cls, mixed: MixedSequence, tol: float) -> "_Denominator":
        return cls([(f.weight, [(f.tensor_id, f.support, f.orbit_partition)]) for f in mixed.factors], tol)

    def __call__(self, theta: Theta, tol: float | None = None):
        tol = self.tol if tol is None else tol
        key = (theta.t1, theta.t2, theta.t3, tol)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        total = 0.0
        dist = None
        for weight, options in self.parts:
            best = None
            for name, support, partition in options:
                val = zeta_upper(support, theta, partition, tol, presentation_id=name)
                if best is None or val.log2_value < best.log2_value:
                    best = val
            total += weight * best.log2_value
            if dist is None:
                dist = best.report.distribution
        out = (total, dist if len(self.parts) == 1 else None)
        self._cache[key] = out
        return out

    def symmetric(self) -> bool:
        for _, options in self.parts:
            for _, support, _ in options:
                if support.dims[1] != support.dims[2] or not axis_swap_symmetric(support):
                    return False
        return True


def _omega_value(N: float, D: float, R: float, kappa: float):
    """Barrier from exponents; ``inf`` marks a theta giving no constraint."""
    if D <= 0:
        return math.inf, False
    ratio = R / D
    clamped = ratio < 1.0
    if clamped:
        ratio = 1.0
    return N * ratio + kappa * (ratio - 1.0), clamped


def _alpha_value(D: float, R: float, t1: float):
    clamped = D > R
    if clamped:
        D = R
    num = 2.0 * D - R * (1.0 + t1)
    den = R * (1.0 - t1)
    return num / den, num, den, clamped


# ---------------------------------------------------------------- theta search

def _map(fn, items, workers):
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _simplex_grid(step: float, t1_max: float, symmetric: bool) -> list[Theta]:
    n = int(round(1.0 / step))
    t1s = [i * step for i in range(n + 1) if i * step <= t1_max + 1e-12]
    if t1s[-1] < t1_max - 1e-12:
        t1s.append(t1_max)
    t1s = [min(t, t1_max) for t in t1s]
    if symmetric:
        return [Theta.symmetric(t) for t in t1s]
    grid = []
    for t1 in t1s:
        rest = 1.0 - t1
        m = int(math.floor(rest / step + 1e-9))
        t2s = [j * step for j in range(m + 1)]
        if rest - t2s[-1] > 1e-12:
            t2s.append(rest)
        for t2 in t2s:
            t2 = min(t2, rest)
            grid.append(Theta(t1, t2, max(0.0, 1.0 - t1 - t2)))
    return grid


def _search(score: Callable[[Theta], float], symmetric: bool, config: SearchConfig,
            t1_max: float = 1.0, maximize: bool = True, seeds: Sequence[Theta] = ()):
    """Grid then local refinement; returns (theta*, score*, diagnostics).

    Non-finite scores are excluded.  Ties keep the lexicographically smallest
    theta, applied after all grid values are collected.
    """
    sign = 1.0 if maximize else -1.0

    def key(theta):
        s = score(theta)
        return sign * s if math.isfinite(s) else -math.inf

    grid = _simplex_grid(config.theta_step, t1_max, symmetric)
    grid += [Theta.coerce(s) for s in seeds]
    values = _map(key, grid, config.worker_count())
    best_v = -math.inf
    best_t = None
    for theta, v in sorted(zip(grid, values), key=lambda tv: tuple(tv[0])):
        if v > best_v:
            best_t, best_v = theta, v
    diag = {"grid_step": config.theta_step, "grid_points": len(grid), "refinements": 0,
            "symmetric": symmetric, "resolution": config.resolution}
    if best_t is None:
        return None, math.nan, diag

    def consider(theta):
        nonlocal best_t, best_v
        v = key(theta)
        diag["refinements"] += 1
        if v > best_v or (v == best_v and tuple(theta) < tuple(best_t)):
            best_t, best_v = theta, v
        return v

    if symmetric:
        lo = max(0.0, best_t.t1 - config.theta_step)
        hi = min(t1_max, best_t.t1 + config.theta_step)
        a, b = lo, hi
        c = b - _INVPHI * (b - a)
        d = a + _INVPHI * (b - a)
        fc, fd = consider(Theta.symmetric(c)), consider(Theta.symmetric(d))
        while b - a > config.resolution:
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - _INVPHI * (b - a)
                fc = consider(Theta.symmetric(c))
            else:
                a, c, fc = c, d, fd
                d = a + _INVPHI * (b - a)
                fd = consider(Theta.symmetric(d))
    else:
        h = config.theta_step / 2.0
        moves = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)]
        while h >= config.resolution:
            improved = False
            for d1, d2 in moves:
                t1 = best_t.t1 + d1 * h
                t2 = best_t.t2 + d2 * h
                t3 = 1.0 - t1 - t2
                if min(t1, t2) < 0 or t3 < -1e-15 or t1 > t1_max:
                    continue
                before = best_v
                consider(Theta(t1, t2, max(t3, 0.0)))
                improved |= best_v > before
            if not improved:
                h /= 2.0
    return best_t, sign * best_v, diag


def _resolve_symmetric(config: SearchConfig, denom: _Denominator) -> bool:
    if config.symmetric is not None:
        if config.symmetric and not denom.symmetric():
            raise ValueError("symmetric theta search requested for a support without axis-2/3 symmetry")
        return config.symmetric
    return denom.symmetric()


# ---------------------------------------------------------------- public API

def barrier_omega_at_theta(query: BarrierQuery, theta, tol: float = DEFAULT_TOL) -> float:
    """Barrier value for one theta; ``inf`` when theta gives no constraint (D = 0)."""
    theta = Theta.coerce(theta)
    D, _ = _Denominator.for_query(query, tol)(theta)
    N = quasi_value(query.p, theta).log2_value
    return _omega_value(N, D, query.log2_rank, query.kappa)[0]


def _omega_search(denom: _Denominator, R: float, p: float, kappa: float,
                  config: SearchConfig, symmetric: bool, seeds=()):
    def score(theta):
        D, _ = denom(theta)
        return _omega_value(quasi_value(p, theta).log2_value, D, R, kappa)[0]

    theta, value, diag = _search(score, symmetric, config, seeds=seeds)
    if theta is None:
        raise ValueError("no theta gives a finite barrier (functional exponent is zero everywhere)")
    D, dist = denom(theta)
    N = quasi_value(p, theta).log2_value
    _, clamped = _omega_value(N, D, R, kappa)
    return value, theta, N, D, dist, clamped, diag


def barrier_omega(query: BarrierQuery, config: SearchConfig | None = None,
                  _denom: _Denominator | None = None, _seeds=()) -> BarrierResult:
    config = config or SearchConfig()
    denom = _denom or _Denominator.for_query(query, config.tol)
    symmetric = _resolve_symmetric(config, denom)
    value, theta, N, D, dist, clamped, diag = _omega_search(
        denom, query.log2_rank, query.p, query.kappa, config, symmetric, _seeds)
    return BarrierResult(value, theta, N, D, dist, diag, clamped, query.rank_mode,
                         query.tensor_id, query.p, query.kappa)


def barrier_curve(query: BarrierQuery, p_min: float, p_max: float, step: float,
                  config: SearchConfig | None = None) -> list[tuple[float, BarrierResult]]:
    """Barriers on the grid p_min, p_min + step, ..., p_max (inclusive)."""
    if not (0 <= p_min <= p_max) or not step > 0:
        raise ValueError("need 0 <= p_min <= p_max and step > 0")
    config = config or SearchConfig()
    denom = _Denominator.for_query(query, config.tol)
    count = int(math.floor((p_max - p_min) / step + 1e-9))
    ps = [round(p_min + i * step, 12) for i in range(count + 1)]
    out = []
    seeds: list[Theta] = []
    for p in ps:
        res = barrier_omega(replace(query, p=p), config, _denom=denom, _seeds=seeds)
        seeds = [res.theta_star]
        out.append((p, res))
    return out


def barrier_alpha(query: BarrierQuery, config: SearchConfig | None = None) -> BarrierResult:
    """Upper bound on any lower bound for alpha obtainable through the query's tensor.

    Minimizes over theta with t2 + t3 >= 1e-6; the minimum typically sits at
    that edge.  Near the edge the inner tolerance is tightened in proportion
    to ``1 - t1`` because the expression divides by it.
    """
    config = config or SearchConfig()
    denom = _Denominator.for_query(query, config.tol)
    symmetric = _resolve_symmetric(config, denom)
    R = query.log2_rank

    def inner_tol(theta):
        return min(config.tol, config.tol * R * (1.0 - theta.t1))

    def score(theta):
        D, _ = denom(theta, inner_tol(theta))
        return _alpha_value(D, R, theta.t1)[0]

    theta, _, diag = _search(score, symmetric, config, t1_max=1.0 - ALPHA_EDGE, maximize=False)
    D, dist = denom(theta, inner_tol(theta))
    value, num, den, clamped = _alpha_value(D, R, theta.t1)
    if value < 0.0 or value > 1.0:
        clamped = True
    value = min(1.0, max(0.0, value))
    return BarrierResult(value, theta, num, den, dist, diag, clamped, query.rank_mode,
                         query.tensor_id, math.nan, 0.0)


def barrier_mixed(mixed: MixedSequence, p: float, kappa: float = 0.0,
                  config: SearchConfig | None = None) -> BarrierResult:
    """Barrier for a mixed sequence; D(theta) = sum_j w_j D_j(theta) bounds log F({T_n})."""
    if not (math.isfinite(p) and p >= 0 and math.isfinite(kappa) and kappa >= 0):
        raise ValueError("p and kappa must be finite and nonnegative")
    config = config or SearchConfig()
    denom = _Denominator.for_mixed(mixed, config.tol)
    symmetric = _resolve_symmetric(config, denom)
    value, theta, N, D, dist, clamped, diag = _omega_search(
        denom, mixed.log2_rank(), p, kappa, config, symmetric)
    return BarrierResult(value, theta, N, D, dist, diag, clamped, mixed.rank_mode,
                         mixed.tensor_id, p, kappa)


def omega_from_alpha(alpha: float) -> float:
    """omega <= 6 / (2 + alpha), from omega + (omega / 2) alpha <= 3."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return 6.0 / (2.0 + alpha)


def alpha_consistency_check(query: BarrierQuery, config: SearchConfig | None = None) -> float:
    """omega barrier at p = alpha barrier; equals 2 when both paths agree."""
    alpha = barrier_alpha(query, config)
    return barrier_omega(replace(query, p=alpha.value), config).value
