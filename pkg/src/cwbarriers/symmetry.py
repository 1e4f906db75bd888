"""Orbits of a tensor support under coordinate-wise index permutations.

Averaging a feasible distribution over a symmetry group of the support keeps
it feasible and, by concavity, does not lower the entropy objective.  The
maximum can therefore be searched over orbit-constant distributions.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .tensors import TensorError, TensorSupport

Permutation = tuple[int, ...]
Generator = tuple[Permutation, Permutation, Permutation]


class InvalidActionError(TensorError):
    pass


@dataclass(frozen=True)
class SupportAction:
    """Generators ``(pi1, pi2, pi3)``; ``pi_a[x]`` is the image of index ``x`` on axis ``a``."""

    generators: tuple[Generator, ...] = ()

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if len(g) != 3:
                raise InvalidActionError("each generator needs one permutation per axis")
            perms = tuple(tuple(int(x) for x in pi) for pi in g)
            for a, pi in enumerate(perms):
                if sorted(pi) != list(range(len(pi))):
                    raise InvalidActionError(f"axis {a + 1} map {pi} is not a permutation")
            gens.append(perms)
        object.__setattr__(self, "generators", tuple(gens))

    def apply(self, gen: Generator, point) -> tuple[int, int, int]:
        return tuple(pi[x] for pi, x in zip(gen, point))

    def validate(self, support: TensorSupport) -> None:
        for g in self.generators:
            for a, (pi, n) in enumerate(zip(g, support.dims)):
                if len(pi) != n:
                    raise InvalidActionError(
                        f"axis {a + 1} permutation has length {len(pi)}, expected {n}")
            for p in support.points:
                image = self.apply(g, p)
                if image not in support:
                    raise InvalidActionError(
                        f"generator maps support point {p} to {image}, outside the support")


@dataclass(frozen=True)
class OrbitPartition:
    orbits: tuple[tuple[tuple[int, int, int], ...], ...]
    point_to_orbit: dict

    def __len__(self):
        return len(self.orbits)

    @property
    def sizes(self) -> list[int]:
        return [len(o) for o in self.orbits]

    @classmethod
    def trivial(cls, support: TensorSupport) -> "OrbitPartition":
        return orbits(support, SupportAction())


def orbits(support: TensorSupport, action: SupportAction) -> OrbitPartition:
    """Partition the support into orbits of the group generated by ``action``.

    Closure is a breadth-first search over generator images of support
    points, so the group itself is never enumerated.  Orbits are ordered by
    their least member and each orbit is sorted.
    """
    action.validate(support)
    seen: dict = {}
    found = []
    for start in support.points:
        if start in seen:
            continue
        orbit = {start}
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for g in action.generators:
                image = action.apply(g, p)
                if image not in orbit:
                    orbit.add(image)
                    queue.append(image)
        members = tuple(sorted(orbit))
        for p in members:
            seen[p] = len(found)
        found.append(members)
    # support.points is sorted, so orbits are discovered in order of least member
    return OrbitPartition(tuple(found), seen)


def _cycle(labels: list[int], n: int) -> Permutation:
    perm = list(range(n))
    for a, b in zip(labels, labels[1:] + labels[:1]):
        perm[a] = b
    return tuple(perm)


def cw_standard_action(q: int) -> SupportAction:
    """S_q permuting the labels 1..q identically on all axes of CW_q.

    Labels 0 and q+1 are fixed.  The same permutations also act on the small
    CW tensor once truncated to its q+1 indices; see :func:`cw_small_action`.
    """
    if q < 1:
        raise TensorError(f"q must be positive, got {q}")
    n = q + 2
    transposition = _cycle([1, 2], n) if q >= 2 else tuple(range(n))
    rotation = _cycle(list(range(1, q + 1)), n)
    return SupportAction(((transposition,) * 3, (rotation,) * 3))


def cw_small_action(q: int) -> SupportAction:
    return SupportAction(tuple(tuple(pi[:-1] for pi in g) for g in cw_standard_action(q).generators))


def group_closure(action: SupportAction, limit: int = 100_000) -> set:
    """All group elements as tuples of axis permutations; small groups only."""
    if not action.generators:
        return set()
    n = [len(pi) for pi in action.generators[0]]
    identity = tuple(tuple(range(k)) for k in n)
    elements = {identity}
    queue = deque([identity])
    while queue:
        h = queue.popleft()
        for g in action.generators:
            prod = tuple(tuple(gp[x] for x in hp) for gp, hp in zip(g, h))
            if prod not in elements:
                if len(elements) >= limit:
                    raise InvalidActionError(f"group order exceeds {limit}")
                elements.add(prod)
                queue.append(prod)
    return elements


def axis_swap_symmetric(support: TensorSupport) -> bool:
    """True iff transposing the last two entries of every triple preserves the support."""
    if support.dims[1] != support.dims[2]:
        raise TensorError(
            f"axes 2 and 3 have different dimensions {support.dims[1]} and {support.dims[2]}")
    return all((i, k, j) in support for i, j, k in support.points)


def parse_action(document: str) -> SupportAction:
    """Read generators from ``axis1: ...``/``axis2: ...``/``axis3: ...`` line triples."""
    gens = []
    current: dict[int, Permutation] = {}
    for lineno, raw in enumerate(document.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in ("axis1", "axis2", "axis3"):
            raise InvalidActionError(f"line {lineno}: expected 'axisN: images...'")
        axis = int(key[-1])
        if axis in current:
            raise InvalidActionError(f"line {lineno}: axis{axis} repeated within a generator")
        try:
            current[axis] = tuple(int(x) for x in rest.split())
        except ValueError:
            raise InvalidActionError(f"line {lineno}: non-integer image") from None
        if len(current) == 3:
            gens.append((current[1], current[2], current[3]))
            current = {}
    if current:
        raise InvalidActionError("incomplete generator at end of document")
    return SupportAction(tuple(gens))
