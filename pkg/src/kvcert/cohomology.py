"""Cohomology of line bundles on P^n, on W = P^n x P^n, and on Y = {q = 0} in W.

H^n(P^n, O(a)) is modelled by Laurent monomials x^alpha with every
alpha_i <= -1 and sum alpha = a; multiplication by x^gamma sends x^alpha to
x^(alpha + gamma) when all exponents stay <= -1 and to zero otherwise.
H^k(W, O(a,b)) is the Kuenneth sum of tensor sectors H^i(a) (x) H^j(b),
nonzero only for k in {0, n, 2n}.

For Y the long exact sequence of 0 -> O_W(a-1,b-1) --q--> O_W(a,b) -> O_Y(a,b) -> 0
gives, for n >= 2,

    H^i(Y, O_Y(a,b)) = coker(q on H^i(W)) (+) ker(q on H^(i+1)(W))

and at most one of the two summands is nonzero.  H^0 uses the normal-form
basis of R_(a,b) instead of the cokernel of q on S.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .errors import DegreeMismatch, UnsupportedDimension
from .ffield import FpMatrix, Subspace, image, kernel, matmul_mod, rank, sparse_rank
from .ring import BiPoly, basis_R, compositions, mult_matrix

__all__ = [
    "h_pn",
    "chi_pn",
    "chi_W",
    "h_W",
    "model_W",
    "times_q_map",
    "h_Y",
    "model_Y",
    "induced_map_Y",
    "CohModel",
    "WSpace",
    "laurent_exps",
    "poly_exps",
    "w_space",
    "w_mult_triplets",
]


def h_pn(n: int, a: int, i: int) -> int:
    if i == 0 and a >= 0:
        return comb(a + n, n)
    if i == n and a <= -n - 1:
        return comb(-a - 1, n)
    return 0


def chi_pn(n: int, a: int) -> int:
    """Euler characteristic of O(a) on P^n: the polynomial (a+1)...(a+n)/n!."""
    num = 1
    for j in range(1, n + 1):
        num *= a + j
    return num // factorial(n)


def chi_W(n: int, a: int, b: int) -> int:
    return chi_pn(n, a) * chi_pn(n, b)


@lru_cache(maxsize=None)
def poly_exps(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(compositions(d, n + 1))


@lru_cache(maxsize=None)
def laurent_exps(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Basis of H^n(P^n, O(d)), descending lex on the exponent vector."""
    slack = -d - (n + 1)
    if slack < 0:
        return ()
    # alpha = -1 - u, so descending alpha is ascending u
    return tuple(tuple(-1 - u for u in us) for us in reversed(list(compositions(slack, n + 1))))


def _factor_basis(n: int, d: int, deg: int) -> tuple[tuple[int, ...], ...]:
    if deg == 0:
        return poly_exps(n, d)
    return laurent_exps(n, d)


def _sectors(n: int, k: int) -> list[tuple[int, int]]:
    cands = [(n, n)] if k == 2 * n else [(i, k - i) for i in (n, 0)]
    return [(i, j) for i, j in cands if i in (0, n) and j in (0, n) and i + j == k]


@dataclass(frozen=True)
class WSpace:
    """Basis of H^k(W, O(a,b)) as a list of (alpha, beta) exponent pairs."""

    n: int
    twist: tuple[int, int]
    k: int
    elements: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    sectors: tuple[tuple[int, int, int], ...]  # (i, j, dim) for each nonzero sector
    index: dict = field(compare=False, repr=False, hash=False)

    @property
    def dim(self) -> int:
        return len(self.elements)


@lru_cache(maxsize=1024)
def w_space(n: int, a: int, b: int, k: int) -> WSpace:
    elements = []
    sectors = []
    for i, j in _sectors(n, k):
        xs = _factor_basis(n, a, i)
        ys = _factor_basis(n, b, j)
        if xs and ys:
            sectors.append((i, j, len(xs) * len(ys)))
            elements.extend((al, be) for al in xs for be in ys)
    index = {e: t for t, e in enumerate(elements)}
    return WSpace(n, (a, b), k, tuple(elements), tuple(sectors), index)


def w_mult_triplets(g: BiPoly, src: WSpace, tgt: WSpace):
    """Multiplication by g between Kuenneth models as (rows, cols, vals)."""
    rows, cols, vals = [], [], []
    if src.dim and tgt.dim:
        terms = [(m.alpha, m.beta, c) for m, c in g.terms.items()]
        lookup = tgt.index
        for col, (al, be) in enumerate(src.elements):
            for ga, gb, c in terms:
                key = (tuple(u + v for u, v in zip(al, ga)), tuple(u + v for u, v in zip(be, gb)))
                row = lookup.get(key)
                # Laurent exponents leaving the <= -1 region are not in tgt: product is zero
                if row is not None:
                    rows.append(row)
                    cols.append(col)
                    vals.append(c)
    return rows, cols, vals


def _w_mult(g: BiPoly, src: WSpace, tgt: WSpace) -> FpMatrix:
    """Matrix of multiplication by g between Kuenneth models (shape tgt x src)."""
    rows, cols, vals = w_mult_triplets(g, src, tgt)
    M = np.zeros((tgt.dim, src.dim), dtype=np.int64)
    np.add.at(M, (np.asarray(rows, dtype=np.intp), np.asarray(cols, dtype=np.intp)), vals)
    return FpMatrix(g.p, M)


def h_W(n: int, twist: tuple[int, int], k: int) -> int:
    a, b = twist
    return sum(h_pn(n, a, i) * h_pn(n, b, k - i) for i in range(k + 1))


def times_q_map(n: int, twist: tuple[int, int], k: int, p: int = 2) -> FpMatrix:
    """Multiplication by q from H^k(W, O(a-1,b-1)) to H^k(W, O(a,b))."""
    a, b = twist
    return _q_matrix(n, a, b, k, p)


@lru_cache(maxsize=16)
def _q_matrix(n: int, a: int, b: int, k: int, p: int) -> FpMatrix:
    return _w_mult(BiPoly.q(p, n), w_space(n, a - 1, b - 1, k), w_space(n, a, b, k))


@lru_cache(maxsize=None)
def _q_rank(n: int, a: int, b: int, k: int, p: int) -> int:
    src, tgt = w_space(n, a - 1, b - 1, k), w_space(n, a, b, k)
    if src.dim == 0 or tgt.dim == 0:
        return 0
    rows, cols, vals = w_mult_triplets(BiPoly.q(p, n), src, tgt)
    return sparse_rank(p, (tgt.dim, src.dim), rows, cols, vals)


@dataclass(frozen=True, eq=False)
class CohModel:
    """Explicit basis model of a cohomology group.

    kind is one of
      "H0"       basis = basis_R(a, b)
      "kernel"   basis = echelon basis of ``subspace`` = ker(q) inside H^k(W, O(a-1,b-1))
      "cokernel" basis = unit vectors at the non-pivot columns of ``subspace`` = im(q)
                 inside H^k(W, O(a,b))
      "sectors"  a Kuenneth model of H^k(W) itself
      "zero"
    """

    variety: str
    n: int
    twist: tuple[int, int]
    degree: int
    kind: str
    dim: int
    p: int = 2
    w_degree: int | None = None
    sectors: tuple = ()
    qmap: FpMatrix | None = None
    subspace: Subspace | None = None

    def summary(self) -> dict:
        return {
            "variety": self.variety,
            "twist": list(self.twist),
            "degree": self.degree,
            "kind": self.kind,
            "dim": self.dim,
            "w_degree": self.w_degree,
            "sectors": [list(s) for s in self.sectors],
        }


def model_W(n: int, twist: tuple[int, int], k: int) -> CohModel:
    sp = w_space(n, twist[0], twist[1], k)
    return CohModel("W", n, tuple(twist), k, "sectors", sp.dim, w_degree=k, sectors=sp.sectors)


def _check_n(n: int):
    if n < 2:
        raise UnsupportedDimension(f"n = {n}: the hypersurface model needs n >= 2")


def _live_degrees(n: int) -> tuple[int, ...]:
    return (0, n, 2 * n)


def h_Y(n: int, twist: tuple[int, int], i: int, p: int = 2) -> int:
    """dim H^i(Y, O_Y(a,b)) over F_p."""
    _check_n(n)
    a, b = twist
    if i < 0 or i > 2 * n - 1:
        return 0
    if i == 0:
        return len(basis_R(n, a, b))
    total = 0
    if i in _live_degrees(n):
        total += w_space(n, a, b, i).dim - _q_rank(n, a, b, i, p)
    if i + 1 in _live_degrees(n):
        total += w_space(n, a - 1, b - 1, i + 1).dim - _q_rank(n, a, b, i + 1, p)
    return total


@lru_cache(maxsize=64)
def model_Y(n: int, twist: tuple[int, int], i: int, p: int = 2) -> CohModel:
    _check_n(n)
    a, b = twist
    if i == 0:
        basis = basis_R(n, a, b)
        return CohModel("Y", n, (a, b), 0, "H0" if basis else "zero", len(basis), p, 0)
    if i in _live_degrees(n) and 0 < i <= 2 * n - 1:
        Q = _q_matrix(n, a, b, i, p)
        sp = w_space(n, a, b, i)
        im = image(Q)
        d = sp.dim - im.dim
        if d:
            return CohModel("Y", n, (a, b), i, "cokernel", d, p, i, sp.sectors, Q, im)
    if i + 1 in _live_degrees(n) and 0 < i <= 2 * n - 1:
        Q = _q_matrix(n, a, b, i + 1, p)
        sp = w_space(n, a - 1, b - 1, i + 1)
        ker = kernel(Q)
        if ker.dim:
            return CohModel("Y", n, (a, b), i, "kernel", ker.dim, p, i + 1, sp.sectors, Q, ker)
    return CohModel("Y", n, (a, b), i, "zero", 0, p)


def induced_map_Y(g: BiPoly, i: int, source: tuple[int, int], target: tuple[int, int]) -> FpMatrix:
    """Matrix of H^i(Y, O(source)) -> H^i(Y, O(target)) induced by multiplication by g.

    Rows index the target model basis, columns the source model basis.
    """
    n, p = g.n, g.p
    source, target = tuple(source), tuple(target)
    if (target[0] - source[0], target[1] - source[1]) != g.bidegree:
        raise DegreeMismatch(f"g has bidegree {g.bidegree} but twists differ by "
                             f"{(target[0] - source[0], target[1] - source[1])}")
    src = model_Y(n, source, i, p)
    tgt = model_Y(n, target, i, p)
    if src.dim == 0 or tgt.dim == 0:
        return FpMatrix.zeros(p, tgt.dim, src.dim)
    if i == 0:
        return mult_matrix(g, source)
    if src.kind != tgt.kind:
        # kernel and cokernel summands sit over different W-degrees; g preserves W-degree
        return FpMatrix.zeros(p, tgt.dim, src.dim)
    if src.kind == "kernel":
        k = src.w_degree
        G = _w_mult(g, w_space(n, source[0] - 1, source[1] - 1, k),
                    w_space(n, target[0] - 1, target[1] - 1, k))
        imgs = matmul_mod(G.data, src.subspace.basis.T, p)
        return FpMatrix(p, tgt.subspace.coordinates(imgs))
    k = src.w_degree
    G = _w_mult(g, w_space(n, source[0], source[1], k), w_space(n, target[0], target[1], k))
    cols = G.data[:, src.subspace.non_pivots()]
    red = tgt.subspace.reduce(cols)
    return FpMatrix(p, red[tgt.subspace.non_pivots(), :])
