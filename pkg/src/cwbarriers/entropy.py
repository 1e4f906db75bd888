"""Maximization of weighted marginal entropies over distributions on a support.

The program is

    max_P  sum_i theta_i H(P_i)      over probability vectors P on supp(T),

where P_i is the i-th marginal.  Internally everything is in nats; reported
values are in bits.  With an orbit partition the search is restricted to
distributions that are constant on orbits, and the variables become orbit
totals.

The solver is a damped Newton ascent in log-mass coordinates (softmax
parametrization), which reaches masses that are optimal at tiny positive
values (e.g. ``1e-100``) without active-set bookkeeping.  A Frank-Wolfe step
toward the best vertex revives mass that the log-parametrization cannot.
Every accepted step is non-decreasing in the objective.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.special import entr

from .symmetry import OrbitPartition
from .tensors import CapacityError, TensorSupport

LN2 = math.log(2.0)
MASS_FLOOR = 1e-300
DEFAULT_TOL = 1e-9
MAX_ITER = 1_000_000
STALL_WINDOW = 50
#: Largest grid the brute-force oracle will enumerate.
MAX_GRID_NODES = 200_000_000


class SolverError(RuntimeError):
    """Iteration cap reached; carries the best value and residual gap (bits)."""

    def __init__(self, message, best_value, gap, report=None):
        super().__init__(f"{message} (best value {best_value:.12g} bits, gap {gap:.3g} bits)")
        self.best_value = best_value
        self.gap = gap
        self.report = report


@dataclass(frozen=True)
class Theta:
    t1: float
    t2: float
    t3: float

    def __post_init__(self):
        vals = (float(self.t1), float(self.t2), float(self.t3))
        if any(not math.isfinite(v) or v < 0 for v in vals):
            raise ValueError(f"theta entries must be nonnegative, got {vals}")
        if abs(sum(vals) - 1.0) > 1e-12:
            raise ValueError(f"theta must sum to 1, got {vals} (sum {sum(vals)!r})")
        for name, v in zip(("t1", "t2", "t3"), vals):
            object.__setattr__(self, name, v)

    @classmethod
    def coerce(cls, theta) -> "Theta":
        if isinstance(theta, Theta):
            return theta
        return cls(*theta)

    @classmethod
    def symmetric(cls, t1: float) -> "Theta":
        """The point (t1, (1-t1)/2, (1-t1)/2) on the axis-2/3 symmetric line."""
        rest = (1.0 - t1) / 2.0
        return cls(t1, rest, 1.0 - t1 - rest)

    def __iter__(self):
        return iter((self.t1, self.t2, self.t3))

    def as_array(self) -> np.ndarray:
        return np.array([self.t1, self.t2, self.t3])


@dataclass(frozen=True)
class SupportDistribution:
    """Point masses aligned with ``support.points``."""

    support: TensorSupport
    masses: np.ndarray
    orbit_partition: OrbitPartition | None = None

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float)
        if m.shape != (len(self.support),):
            raise ValueError(f"expected {len(self.support)} masses, got shape {m.shape}")
        if np.any(m < 0) or abs(m.sum() - 1.0) > 1e-12:
            raise ValueError("masses must be nonnegative and sum to 1")
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)

    @classmethod
    def uniform(cls, support: TensorSupport) -> "SupportDistribution":
        return cls(support, np.full(len(support), 1.0 / len(support)))

    @classmethod
    def point_mass(cls, support: TensorSupport, point) -> "SupportDistribution":
        m = np.zeros(len(support))
        m[support.index_of(point)] = 1.0
        return cls(support, m)

    def mass(self, point) -> float:
        return float(self.masses[self.support.index_of(point)])

    def orbit_masses(self) -> list[float]:
        """Mass per point on each orbit (meaningful for orbit-constant distributions)."""
        if self.orbit_partition is None:
            return list(self.masses)
        return [self.mass(orbit[0]) for orbit in self.orbit_partition.orbits]


@dataclass(frozen=True)
class EntropyReport:
    value_bits: float
    marginals: tuple[np.ndarray, np.ndarray, np.ndarray]
    iterations: int
    gap: float
    distribution: SupportDistribution


# ------------------------------------------------------------------ basics

def _entropy_nats(p: np.ndarray) -> float:
    return float(entr(p).sum())


def marginals(dist: SupportDistribution, support: TensorSupport | None = None):
    """The three axis marginals as probability vectors of lengths ``dims``."""
    support = dist.support if support is None else support
    arr = support.as_array()
    return tuple(
        np.bincount(arr[:, a], weights=dist.masses, minlength=support.dims[a])
        for a in range(3)
    )


def objective(dist: SupportDistribution, support: TensorSupport | None, theta) -> float:
    """sum_i theta_i H(P_i) in bits, with 0 log 0 = 0."""
    theta = Theta.coerce(theta)
    margs = marginals(dist, support)
    return sum(t * _entropy_nats(P) for t, P in zip(theta, margs)) / LN2


def objective_gradient(dist: SupportDistribution, support: TensorSupport | None, theta) -> np.ndarray:
    """Partial derivatives in nats w.r.t. each point mass.

    Component at x is ``sum_i theta_i (-ln P_i(x_i) - 1)``.  Points of zero
    mass are on the simplex boundary and get ``nan`` as a flag.
    """
    support = dist.support if support is None else support
    theta = Theta.coerce(theta)
    arr = support.as_array()
    g = np.zeros(len(support))
    for a, (t, P) in enumerate(zip(theta, marginals(dist, support))):
        with np.errstate(divide="ignore", invalid="ignore"):
            g += t * (-np.log(P[arr[:, a]]) - 1.0)
    g[dist.masses <= 0] = np.nan
    return g


# ------------------------------------------------------------------ program

class _Program:
    """Linear maps from variable masses (points or orbit totals) to marginals."""

    def __init__(self, support: TensorSupport, orbit_partition: OrbitPartition | None):
        self.support = support
        self.partition = orbit_partition
        if orbit_partition is None:
            groups = [(p,) for p in support.points]
        else:
            covered = sorted(p for orbit in orbit_partition.orbits for p in orbit)
            if covered != list(support.points):
                raise ValueError("orbit partition does not partition the support")
            groups = orbit_partition.orbits
        self.groups = groups
        k = len(groups)
        self.maps = []
        for a in range(3):
            A = np.zeros((support.dims[a], k))
            for o, members in enumerate(groups):
                w = 1.0 / len(members)
                for p in members:
                    A[p[a], o] += w
            self.maps.append(A)
        sizes = np.array([len(g) for g in groups], dtype=float)
        self._point_var = np.empty(len(support), dtype=np.int64)
        for o, members in enumerate(groups):
            for p in members:
                self._point_var[support.index_of(p)] = o
        self._point_scale = 1.0 / sizes[self._point_var]

    @property
    def nvars(self) -> int:
        return len(self.groups)

    def evaluate(self, m: np.ndarray, theta: np.ndarray):
        """Objective (nats), gradient w.r.t. variables, and marginals."""
        f = 0.0
        g = np.zeros_like(m)
        margs = []
        for t, A in zip(theta, self.maps):
            P = A @ m
            margs.append(P)
            if t == 0.0:
                continue
            f += t * _entropy_nats(P)
            g += t * (A.T @ (-np.log(np.maximum(P, MASS_FLOOR)) - 1.0))
        return f, g, margs

    def hessian(self, theta: np.ndarray, margs) -> np.ndarray:
        H = np.zeros((self.nvars, self.nvars))
        for t, A, P in zip(theta, self.maps, margs):
            if t == 0.0:
                continue
            H -= t * (A.T / np.maximum(P, MASS_FLOOR)) @ A
        return H

    def point_masses(self, m: np.ndarray) -> np.ndarray:
        return m[self._point_var] * self._point_scale


def _softmax(u: np.ndarray) -> np.ndarray:
    z = np.exp(u - u.max())
    m = np.maximum(z / z.sum(), MASS_FLOOR)
    return m / m.sum()


def _ascent(prog: _Program, theta: np.ndarray, tol: float, max_iter: int):
    """Return (masses, value_nats, iterations, gap_nats, converged)."""
    k = prog.nvars
    u = np.zeros(k)
    m = _softmax(u)
    f, g, margs = prog.evaluate(m, theta)
    tol_nats = tol * LN2
    history = [f]
    noise = 4e-16
    for it in range(max_iter):
        lam = float(m @ g)
        gap = float(g.max() - lam)
        if gap <= tol_nats:
            return m, f, it, gap, True
        if len(history) > STALL_WINDOW and history[-1] - history[-1 - STALL_WINDOW] <= tol_nats / 100:
            return m, f, it, gap, True

        # Newton direction in u = log m, with eigenvalues flipped/floored to make it an ascent
        s = m * (g - lam)
        J = np.diag(m) - np.outer(m, m)
        H = prog.hessian(theta, margs)
        N = -(J @ H @ J + np.diag(s) - np.outer(m, s) - np.outer(s, m))
        w, V = np.linalg.eigh(N)
        scale = max(float(np.abs(w).max()), MASS_FLOOR)
        w = np.maximum(np.abs(w), 1e-10 * scale)
        d = V @ ((V.T @ s) / w)
        d -= d.mean()
        dmax = float(np.abs(d).max())
        if dmax > 20.0:
            d *= 20.0 / dmax

        accepted = False
        step = 1.0
        while step > 1e-12:
            u_new = u + step * d
            u_new = np.maximum(u_new - u_new.max(), math.log(MASS_FLOOR))
            m_new = _softmax(u_new)
            f_new, g_new, margs_new = prog.evaluate(m_new, theta)
            if f_new >= f - noise * max(1.0, abs(f)):
                accepted = True
                break
            step *= 0.5

        stalled = len(history) > 10 and history[-1] - history[-11] <= tol_nats / 100
        if not accepted or stalled:
            # Frank-Wolfe step toward the vertex with the largest partial derivative
            vertex = np.zeros(k)
            vertex[int(np.argmax(g))] = 1.0
            gamma = 1.0
            fw_ok = False
            while gamma > 1e-16:
                cand = (1.0 - gamma) * m + gamma * vertex
                f_c, g_c, margs_c = prog.evaluate(cand, theta)
                if f_c > f and (not accepted or f_c > f_new):
                    m_new, f_new, g_new, margs_new = cand, f_c, g_c, margs_c
                    u_new = np.log(np.maximum(cand, MASS_FLOOR))
                    fw_ok = True
                    break
                gamma *= 0.5
            if not (accepted or fw_ok):
                return m, f, it, gap, True
        u, m, f, g, margs = u_new, m_new, f_new, g_new, margs_new
        history.append(f)
    lam = float(m @ g)
    return m, f, max_iter, float(g.max() - lam), False


def maximize_entropy(
    support: TensorSupport,
    theta,
    orbit_partition: OrbitPartition | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = MAX_ITER,
) -> EntropyReport:
    """Maximize sum_i theta_i H(P_i) over distributions on ``support``.

    Stops when the first-order optimality gap ``max_x g(x) - <P, g>`` drops
    to ``tol`` bits, or when the value has moved by at most ``tol/100`` over
    the last 50 iterations.  The first rule certifies the value to within
    ``tol``; the second covers optima whose support masses lie below the
    ``1e-300`` floor.  Raises :class:`SolverError` at the iteration cap.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    theta = Theta.coerce(theta)
    prog = _Program(support, orbit_partition)
    th = theta.as_array()
    m, f, iters, gap, converged = _ascent(prog, th, tol, max_iter)
    masses = prog.point_masses(m)
    masses = masses / masses.sum()
    dist = SupportDistribution(support, masses, orbit_partition)
    margs = marginals(dist)
    value = objective(dist, support, theta)
    report = EntropyReport(value, margs, iters, gap / LN2, dist)
    if not converged:
        raise SolverError("iteration cap reached", value, gap / LN2, report)
    return report


# ------------------------------------------------------------------ oracle

@njit(cache=True)
def _grid_kernel(weights, table, theta, steps):
    """Walk every composition of ``steps`` into ``k`` parts; return the best objective.

    ``weights[a]`` maps a variable to integer cell counts on axis ``a``;
    ``table[j]`` is ``-x log x`` at the cell value ``x`` encoded by ``j``.
    Marginals are kept as integer cell totals and updated incrementally.
    """
    k = weights.shape[1]
    ncell = weights.shape[2]
    x = np.zeros(k, dtype=np.int64)
    x[k - 1] = steps
    cells = np.zeros((3, ncell), dtype=np.int64)
    for a in range(3):
        for c in range(ncell):
            cells[a, c] = steps * weights[a, k - 1, c]
    best = -1.0
    while True:
        val = 0.0
        for a in range(3):
            if theta[a] != 0.0:
                acc = 0.0
                for c in range(ncell):
                    acc += table[cells[a, c]]
                val += theta[a] * acc
        if val > best:
            best = val
        # odometer over x[0..k-2]; x[k-1] absorbs the remainder
        pos = k - 2
        while pos >= 0:
            if x[k - 1] > 0:
                x[pos] += 1
                x[k - 1] -= 1
                for a in range(3):
                    for c in range(ncell):
                        cells[a, c] += weights[a, pos, c] - weights[a, k - 1, c]
                break
            moved = x[pos]
            x[pos] = 0
            x[k - 1] += moved
            for a in range(3):
                for c in range(ncell):
                    cells[a, c] += moved * (weights[a, k - 1, c] - weights[a, pos, c])
            pos -= 1
        if pos < 0:
            return best


def grid_size(nvars: int, steps: int) -> int:
    return math.comb(steps + nvars - 1, nvars - 1)


def brute_force_max(
    support: TensorSupport,
    theta,
    grid_step: float = 0.01,
    orbit_partition: OrbitPartition | None = None,
    max_nodes: int = MAX_GRID_NODES,
) -> float:
    """Exhaustive maximum of the objective (bits) over a rational simplex grid.

    The grid is every vector of multiples of ``grid_step`` summing to one,
    over support points, or over orbit totals when a partition is given.
    """
    theta = Theta.coerce(theta)
    if not 0 < grid_step < 1:
        raise ValueError("grid_step must lie in (0, 1)")
    steps = round(1.0 / grid_step)
    if abs(steps * grid_step - 1.0) > 1e-9:
        raise ValueError(f"1/grid_step must be an integer, got {1.0 / grid_step}")

    if orbit_partition is None:
        groups = [(p,) for p in support.points]
    else:
        groups = list(orbit_partition.orbits)
    k = len(groups)
    nodes = grid_size(k, steps)
    if nodes > max_nodes:
        raise CapacityError(f"oracle grid has {nodes} nodes, limit {max_nodes}")

    # a variable of orbit size s puts 1/s of its mass on each member; scale by lcm
    scale = math.lcm(*(len(g) for g in groups))
    ncell = max(support.dims)
    weights = np.zeros((3, k, ncell), dtype=np.int64)
    for o, members in enumerate(groups):
        for p in members:
            for a in range(3):
                weights[a, o, p[a]] += scale // len(members)
    denom = steps * scale
    table = entr(np.arange(denom + 1) / denom)
    best = _grid_kernel(weights, table, theta.as_array(), steps)
    return float(best) / LN2
