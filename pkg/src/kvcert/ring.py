"""The bigraded ring S = F_p[x_0..x_n; y_0..y_n] and its quotient R = S/(q).

q = sum_i x_i y_i.  Under lex order x_0 > ... > x_n > y_0 > ... > y_n the
leading monomial of q is x_0 y_0, and a principal ideal's generator is a
Groebner basis of it, so the monomials of R_(a,b) not divisible by x_0 y_0
form a basis.  Monomials are enumerated in descending lex order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, NamedTuple

import numpy as np

from .errors import DegreeMismatch, InvalidParams
from .ffield import FpMatrix, is_prime

__all__ = [
    "RingParams",
    "BiMonomial",
    "BiPoly",
    "dim_S",
    "basis_S",
    "basis_R",
    "basis_index",
    "normal_form",
    "mult_matrix",
    "mult_triplets",
    "compositions",
    "DEFAULT_DEGREE_CAP",
]

DEFAULT_DEGREE_CAP = 32


@dataclass(frozen=True)
class RingParams:
    """Characteristic p and projective dimension n, with p >= n - 1 >= 2."""

    p: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidParams(f"p = {self.p} is not prime")
        if not (self.p >= self.n - 1 >= 2):
            raise InvalidParams(f"need p >= n - 1 >= 2, got p = {self.p}, n = {self.n}")


class BiMonomial(NamedTuple):
    """x^alpha y^beta.  Tuple comparison is lex on the concatenation (alpha, beta)."""

    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    @property
    def bidegree(self) -> tuple[int, int]:
        return sum(self.alpha), sum(self.beta)

    def __mul__(self, other: "BiMonomial") -> "BiMonomial":  # type: ignore[override]
        return BiMonomial(
            tuple(u + v for u, v in zip(self.alpha, other.alpha)),
            tuple(u + v for u, v in zip(self.beta, other.beta)),
        )

    def is_reduced(self) -> bool:
        return not (self.alpha[0] and self.beta[0])

    def __str__(self) -> str:
        parts = []
        for name, exps in (("x", self.alpha), ("y", self.beta)):
            for i, e in enumerate(exps):
                if e == 1:
                    parts.append(f"{name}{i}")
                elif e:
                    parts.append(f"{name}{i}^{e}")
        return "*".join(parts) or "1"


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Exponent vectors of length ``parts`` summing to ``total``, descending lex."""
    if total < 0:
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def dim_S(n: int, a: int, b: int) -> int:
    if a < 0 or b < 0:
        return 0
    return comb(a + n, n) * comb(b + n, n)


@lru_cache(maxsize=None)
def basis_S(n: int, a: int, b: int) -> tuple[BiMonomial, ...]:
    if a < 0 or b < 0:
        return ()
    xs = list(compositions(a, n + 1))
    ys = list(compositions(b, n + 1))
    return tuple(BiMonomial(al, be) for al in xs for be in ys)


@lru_cache(maxsize=None)
def basis_R(n: int, a: int, b: int) -> tuple[BiMonomial, ...]:
    """Basis of R_(a,b): bidegree-(a,b) monomials not divisible by x_0 y_0."""
    return tuple(m for m in basis_S(n, a, b) if m.is_reduced())


@lru_cache(maxsize=None)
def basis_index(n: int, a: int, b: int) -> dict[BiMonomial, int]:
    return {m: i for i, m in enumerate(basis_R(n, a, b))}


class BiPoly:
    """A bihomogeneous polynomial over F_p.

    ``terms`` maps BiMonomial -> nonzero residue.  The zero polynomial still
    carries its bidegree.
    """

    __slots__ = ("p", "n", "bidegree", "terms")

    def __init__(self, p: int, n: int, terms: dict, bidegree: tuple[int, int] | None = None):
        self.p = p
        self.n = n
        clean: dict[BiMonomial, int] = {}
        for m, c in terms.items():
            m = BiMonomial(tuple(m[0]), tuple(m[1]))
            c %= p
            if c:
                clean[m] = c
        degs = {m.bidegree for m in clean}
        if len(degs) > 1:
            raise DegreeMismatch(f"polynomial is not bihomogeneous: bidegrees {sorted(degs)}")
        if degs:
            (deg,) = degs
            if bidegree is not None and tuple(bidegree) != deg:
                raise DegreeMismatch(f"declared bidegree {bidegree} but terms have {deg}")
            bidegree = deg
        elif bidegree is None:
            raise ValueError("zero polynomial needs an explicit bidegree")
        self.bidegree = tuple(bidegree)
        self.terms = clean

    # constructors -------------------------------------------------------

    @classmethod
    def one(cls, p: int, n: int) -> "BiPoly":
        z = (0,) * (n + 1)
        return cls(p, n, {BiMonomial(z, z): 1})

    @classmethod
    def monomial(cls, p: int, n: int, alpha=None, beta=None, coeff: int = 1) -> "BiPoly":
        z = (0,) * (n + 1)
        return cls(p, n, {BiMonomial(tuple(alpha or z), tuple(beta or z)): coeff})

    @classmethod
    def x(cls, p: int, n: int, i: int, e: int = 1) -> "BiPoly":
        alpha = [0] * (n + 1)
        alpha[i] = e
        return cls.monomial(p, n, alpha=alpha)

    @classmethod
    def y(cls, p: int, n: int, i: int, e: int = 1) -> "BiPoly":
        beta = [0] * (n + 1)
        beta[i] = e
        return cls.monomial(p, n, beta=beta)

    @classmethod
    def q(cls, p: int, n: int) -> "BiPoly":
        """The relation sum_i x_i y_i."""
        terms = {}
        for i in range(n + 1):
            e = tuple(int(j == i) for j in range(n + 1))
            terms[BiMonomial(e, e)] = 1
        return cls(p, n, terms)

    # arithmetic ---------------------------------------------------------

    def _check(self, other: "BiPoly"):
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "BiPoly") -> "BiPoly":
        self._check(other)
        if self.bidegree != other.bidegree:
            raise DegreeMismatch(f"cannot add bidegrees {self.bidegree} and {other.bidegree}")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return BiPoly(self.p, self.n, terms, self.bidegree)

    def __neg__(self) -> "BiPoly":
        return BiPoly(self.p, self.n, {m: -c for m, c in self.terms.items()}, self.bidegree)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def scale(self, c: int) -> "BiPoly":
        return BiPoly(self.p, self.n, {m: c * v for m, v in self.terms.items()}, self.bidegree)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        self._check(other)
        terms: dict[BiMonomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                terms[m] = terms.get(m, 0) + c1 * c2
        deg = (self.bidegree[0] + other.bidegree[0], self.bidegree[1] + other.bidegree[1])
        return BiPoly(self.p, self.n, terms, deg)

    def __pow__(self, e: int) -> "BiPoly":
        out = BiPoly.one(self.p, self.n)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return (self.p, self.n, self.bidegree, self.terms) == (other.p, other.n, other.bidegree, other.terms)

    def __hash__(self):
        return hash((self.p, self.n, self.bidegree, tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        if not self.terms:
            return f"0{self.bidegree}"
        items = sorted(self.terms.items(), reverse=True)
        return " + ".join(str(m) if c == 1 else f"{c}*{m}" for m, c in items)


@lru_cache(maxsize=None)
def _multinomial_mod(ks: tuple[int, ...], p: int) -> int:
    out = factorial(sum(ks))
    for k in ks:
        out //= factorial(k)
    return out % p


@lru_cache(maxsize=None)
def _reduce_monomial(m: BiMonomial, p: int) -> tuple[tuple[BiMonomial, int], ...]:
    # Rewriting x0 y0 -> -(x1 y1 + ... + xn yn) until no x0 y0 remains is the
    # same as substituting (x0 y0)^k once, k = min(alpha_0, beta_0): the
    # replacement terms contain neither x0 nor y0.
    k = min(m.alpha[0], m.beta[0])
    if k == 0:
        return ((m, 1),)
    n = len(m.alpha) - 1
    sign = -1 if k % 2 else 1
    out = []
    for ks in compositions(k, n):
        c = sign * _multinomial_mod(ks, p) % p
        if not c:
            continue
        alpha = (m.alpha[0] - k,) + tuple(u + s for u, s in zip(m.alpha[1:], ks))
        beta = (m.beta[0] - k,) + tuple(u + s for u, s in zip(m.beta[1:], ks))
        out.append((BiMonomial(alpha, beta), c))
    return tuple(out)


def normal_form(f: BiPoly) -> BiPoly:
    """Representative of f modulo (q) supported on x_0 y_0-free monomials."""
    terms: dict[BiMonomial, int] = {}
    for m, c in f.terms.items():
        for mm, cc in _reduce_monomial(m, f.p):
            terms[mm] = (terms.get(mm, 0) + c * cc) % f.p
    return BiPoly(f.p, f.n, terms, f.bidegree)


def mult_triplets(g: BiPoly, source: tuple[int, int]):
    """Sparse form of multiplication by g on R_source: (shape, rows, cols, vals)."""
    p, n = g.p, g.n
    a, b = source
    d1, d2 = g.bidegree
    src = basis_R(n, a, b)
    tgt_index = basis_index(n, a + d1, b + d2)
    rows, cols, vals = [], [], []
    for j, m in enumerate(src):
        for gm, gc in g.terms.items():
            for mm, cc in _reduce_monomial(m * gm, p):
                rows.append(tgt_index[mm])
                cols.append(j)
                vals.append(gc * cc)
    return (len(tgt_index), len(src)), rows, cols, vals


def mult_matrix(g: BiPoly, source: tuple[int, int]) -> FpMatrix:
    """Matrix of multiplication by g from R_source to R_(source + deg g).

    Shape (dim target, dim source); column j is the normal form of
    g * basis_R(source)[j] in the target basis.
    """
    shape, rows, cols, vals = mult_triplets(g, source)
    M = np.zeros(shape, dtype=np.int64)
    np.add.at(M, (np.asarray(rows, dtype=np.intp), np.asarray(cols, dtype=np.intp)), vals)
    return FpMatrix(g.p, M)
