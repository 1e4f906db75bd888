"""Upper support functional values, as base-2 logarithms.

``zeta_upper`` evaluates the entropy maximum on one given presentation of a
tensor.  The true functional also minimizes over basis changes; no search
over basis changes is attempted, so the value here is an upper bound.  Since
every barrier expression is antitone in the functional value, using the
upper bound keeps barriers valid.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

from .entropy import DEFAULT_TOL, EntropyReport, Theta, maximize_entropy
from .symmetry import OrbitPartition
from .tensors import TensorSupport


class RankExceededWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FunctionalValue:
    log2_value: float
    theta: Theta
    presentation_id: str = "given"
    report: EntropyReport | None = None

    @property
    def value(self) -> float:
        return 2.0 ** self.log2_value


def zeta_upper(
    support: TensorSupport,
    theta,
    orbit_partition: OrbitPartition | None = None,
    tol: float = DEFAULT_TOL,
    presentation_id: str = "given",
    asymptotic_rank: float | None = None,
) -> FunctionalValue:
    theta = Theta.coerce(theta)
    report = maximize_entropy(support, theta, orbit_partition, tol)
    value = max(report.value_bits, 0.0)
    if asymptotic_rank is not None and value > math.log2(asymptotic_rank) + tol:
        warnings.warn(
            f"presentation bound 2^{value:.6f} exceeds the asymptotic rank {asymptotic_rank}",
            RankExceededWarning,
            stacklevel=2,
        )
    return FunctionalValue(value, theta, presentation_id, report)


def zeta_matmul_closed(a: int, b: int, c: int, theta) -> FunctionalValue:
    """Closed form for <a,b,c>: a^(t1+t3) b^(t1+t2) c^(t2+t3)."""
    if min(a, b, c) < 1:
        raise ValueError(f"matrix dimensions must be positive, got {(a, b, c)}")
    t1, t2, t3 = theta = Theta.coerce(theta)
    log2_value = (t1 + t3) * math.log2(a) + (t1 + t2) * math.log2(b) + (t2 + t3) * math.log2(c)
    return FunctionalValue(log2_value, theta, f"mm:{a},{b},{c}")


def quasi_value(p: float, theta) -> FunctionalValue:
    """Value on the quasitensor <2,2,2^p>, i.e. F(<2,1,1>) F(<1,2,1>) F(<1,1,2>)^p.

    In logs: 2 t1 + t2 + t3 + p (t2 + t3).  Real p needs no tensor power.
    """
    if not (math.isfinite(p) and p >= 0):
        raise ValueError(f"p must be finite and nonnegative, got {p}")
    t1, t2, t3 = theta = Theta.coerce(theta)
    return FunctionalValue(2 * t1 + t2 + t3 + p * (t2 + t3), theta, f"quasi:{p:g}")


def zeta_min_over_presentations(
    presentations: Sequence[TensorSupport | tuple[str, TensorSupport]],
    theta,
    tol: float = DEFAULT_TOL,
    orbit_partitions: Sequence[OrbitPartition | None] | None = None,
) -> FunctionalValue:
    """Minimum of ``zeta_upper`` over supports the caller asserts are equivalent.

    Entries are supports or ``(name, support)`` pairs; ties keep the first.
    """
    if not presentations:
        raise ValueError("need at least one presentation")
    if orbit_partitions is None:
        orbit_partitions = [None] * len(presentations)
    best = None
    for idx, (entry, part) in enumerate(zip(presentations, orbit_partitions)):
        if isinstance(entry, tuple):
            name, support = entry
        else:
            name, support = f"presentation-{idx}", entry
        val = zeta_upper(support, theta, part, tol, presentation_id=name)
        if best is None or val.log2_value < best.log2_value:
            best = val
    return best
