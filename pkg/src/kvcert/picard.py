"""Divisor-class arithmetic on Pic(X) = Z^3.

A class (a, b; c) stands for pi^* O_Y(a,b) (x) O_pi(c), where
pi : X = P(F*G') -> Y is the projective bundle of the rank n-1 bundle
F*G' = F*G (x) O_Y(0,p) in the quotient convention (pi_* O_pi(1) = F*G').
Canonical classes are derived by explicit rewrite rules so that every
derivation carries a trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidParams
from .ring import RingParams

__all__ = [
    "PicClass",
    "Derivation",
    "omega_Y",
    "omega_X",
    "omega_X_closed_form",
    "very_ample_pattern",
    "fano_witness",
    "dim_X",
    "dim_Y",
]


@dataclass(frozen=True, order=True)
class PicClass:
    a: int
    b: int
    c: int = 0

    def __add__(self, other: "PicClass") -> "PicClass":
        return PicClass(self.a + other.a, self.b + other.b, self.c + other.c)

    def __neg__(self) -> "PicClass":
        return PicClass(-self.a, -self.b, -self.c)

    def __sub__(self, other: "PicClass") -> "PicClass":
        return self + (-other)

    def __mul__(self, k: int) -> "PicClass":
        return PicClass(k * self.a, k * self.b, k * self.c)

    __rmul__ = __mul__

    @property
    def is_pullback(self) -> bool:
        return self.c == 0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __str__(self) -> str:
        return f"({self.a},{self.b};{self.c})"


ZERO = PicClass(0, 0, 0)


def dim_X(n: int) -> int:
    return 3 * n - 3


def dim_Y(n: int) -> int:
    return 2 * n - 1


@dataclass(frozen=True)
class Derivation:
    """A class together with the rewrite steps that produced it."""

    result: PicClass
    trace: tuple[str, ...] = field(default=())
    dim_X: int | None = None
    dim_Y: int | None = None

    def to_json(self) -> dict:
        return {
            "class": list(self.result.as_tuple()),
            "trace": list(self.trace),
            "dim_X": self.dim_X,
            "dim_Y": self.dim_Y,
        }


def omega_Y(n: int) -> Derivation:
    """Canonical class of Y in |O_W(1,1)| by adjunction."""
    if n < 2:
        raise InvalidParams(f"n = {n}: need n >= 2")
    omega_W = PicClass(-n - 1, -n - 1)
    divisor = PicClass(1, 1)
    res = omega_W + divisor
    trace = (
        f"omega_W = O(-n-1,-n-1) = {omega_W}",
        f"Y has ideal sheaf O_W(-1,-1), so O(Y)|_Y = {divisor}",
        f"adjunction: omega_Y = (omega_W + Y)|_Y = {res}",
    )
    return Derivation(res, trace, None, dim_Y(n))


def omega_X(p: int, n: int) -> Derivation:
    """Canonical class of X = P(F*G') by determinant additivity and the relative canonical formula."""
    RingParams(p, n)
    steps = []
    # det B = det(V^dual (x) O) - det O(0,1) from 0 -> B -> V^dual (x) O_Y -> O_Y(0,1) -> 0
    det_B = ZERO - PicClass(0, 1)
    det_FB = p * det_B
    steps.append(f"det F*B = F*(det of ker(V^dual (x) O -> O(0,1))) = p*{det_B} = {det_FB}")
    det_FG = det_FB - PicClass(-p, 0)
    steps.append(f"det F*G = det F*B - det O(-p,0) = {det_FG}")
    r = n - 1
    det_FGp = det_FG + r * PicClass(0, p)
    steps.append(f"det F*G' = det(F*G (x) O(0,p)) = det F*G + {r}*(0,{p}) = {det_FGp}")
    rel = PicClass(det_FGp.a, det_FGp.b, -r)
    steps.append(f"relative canonical of P(E), rank E = {r}: O_pi(-{r}) + pi^* det E = {rel}")
    wy = omega_Y(n).result
    res = rel + wy
    steps.append(f"omega_X = omega_(X/Y) + pi^* omega_Y = {rel} + {wy} = {res}")
    closed = omega_X_closed_form(p, n)
    if res != closed:
        raise AssertionError(f"rule chain gave {res}, closed form gives {closed}")
    steps.append(f"agrees with (p-n, p(n-2)-n; -n+1) = {closed}")
    return Derivation(res, tuple(steps), dim_X(n), dim_Y(n))


def omega_X_closed_form(p: int, n: int) -> PicClass:
    return PicClass(p - n, p * (n - 2) - n, -n + 1)


def very_ample_pattern(c: PicClass) -> bool:
    """True iff c = (1,1;q) with q > 0 (a cited pattern, not a proof of ampleness)."""
    return c.a == 1 and c.b == 1 and c.c > 0


def fano_witness(p: int, n: int) -> Derivation:
    """Whether -omega_X matches the very-ample pattern; the verdict is in ``trace[-1]``."""
    d = omega_X(p, n)
    anti = -d.result
    ok = very_ample_pattern(anti)
    trace = d.trace + (
        f"-omega_X = {anti}",
        f"very-ample pattern (1,1;q>0): {'matches' if ok else 'does not match'}",
    )
    return _Witness(anti, trace, d.dim_X, d.dim_Y, ok)


@dataclass(frozen=True)
class _Witness(Derivation):
    holds: bool = False

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        out = super().to_json()
        out["holds"] = self.holds
        return out
