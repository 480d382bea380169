"""Dimension bounds from exactness.

An exact sequence 0 -> V_0 -> V_1 -> ... -> V_{m-1} -> 0 is encoded by the
ranks r_j of the maps V_j -> V_{j+1}; exactness at V_j says
dim V_j = r_{j-1} + r_j.  Given interval knowledge of some dimensions and
some ranks, the set of values each dimension can take is an interval, and
because the constraints form a path it can be found exactly with one
forward and one backward sweep.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import KVCertError

__all__ = ["DimInterval", "solve_sequence", "InconsistentSequence"]

INF = None


class InconsistentSequence(KVCertError):
    """No choice of ranks is compatible with the given dimensions."""


@dataclass(frozen=True)
class DimInterval:
    lower: int
    upper: int | None = None  # None: no upper bound known

    def __post_init__(self):
        if self.lower < 0:
            object.__setattr__(self, "lower", 0)
        if self.upper is not None and self.upper < self.lower:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    @classmethod
    def exact(cls, v: int) -> "DimInterval":
        return cls(v, v)

    @classmethod
    def unknown(cls) -> "DimInterval":
        return cls(0, None)

    @property
    def is_exact(self) -> bool:
        return self.upper == self.lower

    @property
    def value(self) -> int:
        if not self.is_exact:
            raise ValueError(f"{self} is not exact")
        return self.lower

    def contains(self, v: int) -> bool:
        return v >= self.lower and (self.upper is None or v <= self.upper)

    def intersect(self, other: "DimInterval") -> "DimInterval":
        lo = max(self.lower, other.lower)
        hi = _min_opt(self.upper, other.upper)
        if hi is not None and hi < lo:
            raise InconsistentSequence(f"{self} and {other} are disjoint")
        return DimInterval(lo, hi)

    def __add__(self, other: "DimInterval") -> "DimInterval":
        hi = None if self.upper is None or other.upper is None else self.upper + other.upper
        return DimInterval(self.lower + other.lower, hi)

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "exact": self.is_exact}

    def __str__(self) -> str:
        if self.is_exact:
            return str(self.lower)
        return f"[{self.lower}, {'inf' if self.upper is None else self.upper}]"


def _min_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _minus(d: DimInterval, r: DimInterval) -> DimInterval | None:
    """Values v >= 0 with u + v in d for some u in r (None if empty)."""
    lo = d.lower - (r.upper if r.upper is not None else d.lower)
    if r.upper is None:
        lo = 0
    hi = None if d.upper is None else d.upper - r.lower
    lo = max(lo, 0)
    if hi is not None and hi < lo:
        return None
    return DimInterval(lo, hi)


def solve_sequence(
    dims: Sequence[DimInterval],
    ranks: Sequence[DimInterval | None] | None = None,
) -> tuple[list[DimInterval], list[DimInterval]]:
    """Tightest intervals for every term and every map rank of an exact sequence.

    ``dims[j]`` bounds dim V_j; ``ranks[j]`` (optional) bounds the rank of
    V_j -> V_{j+1}.  The sequence is taken to start and end with 0, so the
    last entry of ``ranks`` is ignored.  Raises InconsistentSequence if no
    assignment exists.
    """
    m = len(dims)
    if ranks is None:
        ranks = [None] * m
    # r[0] is the (zero) map into V_0, r[j+1] the map out of V_j
    dom = [DimInterval.exact(0)]
    for j in range(m):
        if j == m - 1:
            dom.append(DimInterval.exact(0))
        else:
            dom.append(ranks[j] if ranks[j] is not None else DimInterval.unknown())

    left = [dom[0]]
    for j in range(m):
        step = _minus(dims[j], left[j])
        if step is None:
            raise InconsistentSequence(f"no consistent rank at term {j}")
        left.append(_intersect_or_raise(step, dom[j + 1], j))

    right = [None] * (m + 1)
    right[m] = dom[m]
    for j in range(m - 1, -1, -1):
        step = _minus(dims[j], right[j + 1])
        if step is None:
            raise InconsistentSequence(f"no consistent rank at term {j}")
        right[j] = _intersect_or_raise(step, dom[j], j)

    out_dims = []
    for j in range(m):
        s = left[j] + right[j + 1]
        out_dims.append(_intersect_or_raise(s, dims[j], j))
    out_ranks = [_intersect_or_raise(left[j], right[j], j) for j in range(m + 1)]
    return out_dims, out_ranks[1:]


def _intersect_or_raise(a: DimInterval, b: DimInterval, j: int) -> DimInterval:
    try:
        return a.intersect(b)
    except InconsistentSequence as exc:
        raise InconsistentSequence(f"inconsistent constraints near term {j}: {exc}") from None
