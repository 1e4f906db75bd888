"""Sparse 3-tensors given by their support and exact rational coefficients.

Only the support of a tensor enters the functionals, so the representation
is a set of index triples plus a coefficient per triple.  Pair indices
produced by ``make_matmul`` and ``kronecker`` are flattened row-major:
the pair ``(a, b)`` with ``b < m`` becomes ``a * m + b``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

Triple = tuple[int, int, int]

#: Largest support (number of triples) any constructor will build.
MAX_SUPPORT_SIZE = 2_000_000
#: Largest dimension along any axis.
MAX_DIMENSION = 2**31 - 1


class TensorError(ValueError):
    pass


class CapacityError(TensorError):
    pass


class TensorParseError(TensorError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field


@dataclass(frozen=True)
class TensorSupport:
    """Dimensions and the sorted tuple of nonzero index triples."""

    dims: tuple[int, int, int]
    points: tuple[Triple, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if len(dims) != 3 or any(n < 1 for n in dims):
            raise TensorError(f"invalid dimensions {self.dims!r}")
        if any(n > MAX_DIMENSION for n in dims):
            raise CapacityError(f"dimension exceeds {MAX_DIMENSION}: {dims}")
        pts = [tuple(int(x) for x in p) for p in self.points]
        if not pts:
            raise TensorError("support must be nonempty")
        if len(set(pts)) != len(pts):
            raise TensorError("duplicate triple in support")
        for p in pts:
            if len(p) != 3 or any(not 0 <= x < n for x, n in zip(p, dims)):
                raise TensorError(f"triple {p} out of range for dims {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "points", tuple(sorted(pts)))

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point) -> bool:
        return tuple(point) in self._point_set

    @property
    def _point_set(self) -> frozenset:
        cached = self.__dict__.get("_set")
        if cached is None:
            cached = frozenset(self.points)
            object.__setattr__(self, "_set", cached)
        return cached

    def as_array(self) -> np.ndarray:
        """Support as an integer array of shape ``(len(self), 3)``."""
        return np.array(self.points, dtype=np.int64).reshape(-1, 3)

    def index_of(self, point) -> int:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {p: i for i, p in enumerate(self.points)}
            object.__setattr__(self, "_index", idx)
        return idx[tuple(point)]


@dataclass(frozen=True)
class Tensor:
    support: TensorSupport
    coeffs: Mapping[Triple, Fraction] = field(compare=True)

    def __post_init__(self):
        coeffs = {tuple(k): Fraction(v) for k, v in dict(self.coeffs).items()}
        if set(coeffs) != set(self.support.points):
            raise TensorError("coefficients must be keyed exactly by the support")
        zero = [k for k, v in coeffs.items() if v == 0]
        if zero:
            raise TensorError(f"zero coefficient at {zero[0]}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_points(cls, dims, points: Iterable[Triple], coeffs=None) -> "Tensor":
        points = list(points)
        if coeffs is None:
            coeffs = {tuple(p): Fraction(1) for p in points}
        return cls(TensorSupport(tuple(dims), tuple(points)), coeffs)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.support.dims

    def __len__(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class RankRegistryEntry:
    tensor_id: str
    asymptotic_rank: float
    provenance: str

    def __post_init__(self):
        if not self.asymptotic_rank >= 1:
            raise TensorError(f"asymptotic rank must be >= 1, got {self.asymptotic_rank}")


def _check_positive(**kwargs):
    for name, value in kwargs.items():
        if int(value) != value or value < 1:
            raise TensorError(f"{name} must be a positive integer, got {value!r}")


def _check_capacity(dims, size):
    if any(n > MAX_DIMENSION for n in dims):
        raise CapacityError(f"resulting dimensions {dims} exceed {MAX_DIMENSION}")
    if size > MAX_SUPPORT_SIZE:
        raise CapacityError(f"resulting support size {size} exceeds {MAX_SUPPORT_SIZE}")


def make_diagonal(n: int) -> Tensor:
    """The unit tensor <n> = sum_i x_i y_i z_i."""
    _check_positive(n=n)
    return Tensor.from_points((n, n, n), [(i, i, i) for i in range(n)])


def make_matmul(l: int, m: int, n: int) -> Tensor:
    """The matrix multiplication tensor <l,m,n> = sum x_ij y_jk z_ki."""
    _check_positive(l=l, m=m, n=n)
    _check_capacity((l * m, m * n, n * l), l * m * n)
    pts = [
        (i * m + j, j * n + k, k * l + i)
        for i in range(l)
        for j in range(m)
        for k in range(n)
    ]
    return Tensor.from_points((l * m, m * n, n * l), pts)


def make_cw_big(q: int) -> Tensor:
    _check_positive(q=q)
    pts = []
    for i in range(1, q + 1):
        pts += [(i, i, 0), (i, 0, i), (0, i, i)]
    pts += [(0, 0, q + 1), (0, q + 1, 0), (q + 1, 0, 0)]
    return Tensor.from_points((q + 2,) * 3, pts)


def make_cw_small(q: int) -> Tensor:
    _check_positive(q=q)
    pts = []
    for i in range(1, q + 1):
        pts += [(i, i, 0), (i, 0, i), (0, i, i)]
    return Tensor.from_points((q + 1,) * 3, pts)


def kronecker(S: Tensor, T: Tensor) -> Tensor:
    """Kronecker product; index pairs (a, b) flatten to a * dim_T + b."""
    dims = tuple(a * b for a, b in zip(S.dims, T.dims))
    _check_capacity(dims, len(S) * len(T))
    n1, n2, n3 = T.dims
    coeffs = {}
    for (a1, a2, a3), c in S.coeffs.items():
        for (b1, b2, b3), d in T.coeffs.items():
            coeffs[(a1 * n1 + b1, a2 * n2 + b2, a3 * n3 + b3)] = c * d
    return Tensor.from_points(dims, coeffs.keys(), coeffs)


def direct_sum(S: Tensor, T: Tensor) -> Tensor:
    dims = tuple(a + b for a, b in zip(S.dims, T.dims))
    _check_capacity(dims, len(S) + len(T))
    o1, o2, o3 = S.dims
    coeffs = dict(S.coeffs)
    for (b1, b2, b3), d in T.coeffs.items():
        coeffs[(b1 + o1, b2 + o2, b3 + o3)] = d
    return Tensor.from_points(dims, coeffs.keys(), coeffs)


# ---------------------------------------------------------------- documents

_HEADER = re.compile(r"^dims\s+(\S+)\s+(\S+)\s+(\S+)$")


def _parse_int(text: str, line: int, name: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise TensorParseError(f"expected an integer, got {text!r}", line, name) from None
    return value


def parse_tensor(document: str) -> Tensor:
    """Parse the line-oriented tensor format.

    ``dims n1 n2 n3`` followed by one ``i j k num/den`` line per support point.
    ``#`` starts a comment.  Errors carry the offending line and field.
    """
    dims = None
    coeffs: dict[Triple, Fraction] = {}
    for lineno, raw in enumerate(document.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if dims is None:
            m = _HEADER.match(line)
            if not m:
                raise TensorParseError("expected header 'dims n1 n2 n3'", lineno, "dims")
            dims = tuple(_parse_int(t, lineno, f"n{a + 1}") for a, t in enumerate(m.groups()))
            if any(n < 1 for n in dims):
                raise TensorParseError(f"dimensions must be positive, got {dims}", lineno, "dims")
            continue
        parts = line.split()
        if len(parts) != 4:
            raise TensorParseError(f"expected 'i j k coefficient', got {line!r}", lineno)
        idx = tuple(_parse_int(t, lineno, "ijk"[a]) for a, t in enumerate(parts[:3]))
        for a, (x, n) in enumerate(zip(idx, dims)):
            if not 0 <= x < n:
                raise TensorParseError(f"index {x} out of range [0, {n})", lineno, "ijk"[a])
        try:
            c = Fraction(parts[3])
        except (ValueError, ZeroDivisionError):
            raise TensorParseError(f"bad coefficient {parts[3]!r}", lineno, "coefficient") from None
        if c == 0:
            raise TensorParseError("zero coefficient", lineno, "coefficient")
        if idx in coeffs:
            raise TensorParseError(f"duplicate triple {idx}", lineno)
        coeffs[idx] = c
    if dims is None:
        raise TensorParseError("missing 'dims' header")
    if not coeffs:
        raise TensorParseError("tensor has no support points")
    return Tensor.from_points(dims, coeffs.keys(), coeffs)


def serialize_tensor(T: Tensor) -> str:
    lines = ["dims %d %d %d" % T.dims]
    for p in T.support.points:
        c = T.coeffs[p]
        lines.append(f"{p[0]} {p[1]} {p[2]} {c.numerator}/{c.denominator}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- built-ins

def _int_args(text: str, count: int, tensor_id: str) -> list[int]:
    parts = text.split(",")
    if len(parts) != count:
        raise TensorError(f"tensor id {tensor_id!r} expects {count} integer argument(s)")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise TensorError(f"non-integer argument in tensor id {tensor_id!r}") from None


def builtin_tensor(tensor_id: str) -> Tensor:
    """Resolve ``diag:n``, ``mm:l,m,n``, ``cw:q`` or ``cwsmall:q``."""
    kind, _, args = tensor_id.partition(":")
    if kind == "diag":
        return make_diagonal(*_int_args(args, 1, tensor_id))
    if kind == "mm":
        return make_matmul(*_int_args(args, 3, tensor_id))
    if kind == "cw":
        return make_cw_big(*_int_args(args, 1, tensor_id))
    if kind == "cwsmall":
        return make_cw_small(*_int_args(args, 1, tensor_id))
    raise TensorError(f"unknown tensor id {tensor_id!r}")


def asymptotic_rank(tensor_id: str) -> RankRegistryEntry | None:
    """Built-in asymptotic ranks; ``None`` when the value must be user-supplied."""
    kind, _, args = tensor_id.partition(":")
    if kind == "cw":
        (q,) = _int_args(args, 1, tensor_id)
        _check_positive(q=q)
        return RankRegistryEntry(tensor_id, float(q + 2), "degeneration: R(CW_q) = q + 2")
    if kind == "diag":
        (n,) = _int_args(args, 1, tensor_id)
        _check_positive(n=n)
        return RankRegistryEntry(tensor_id, float(n), "unit tensor: R(<n>) = n")
    return None

