"""Cohomology of the Frobenius-pulled-back bundles on Y.

Notation (all twisted by O_Y(a,b)):

    E0      = F*(V^dual (x) O_Y) = O_Y^(n+1), basis e_0..e_n
    eta1    : E0 -> O_Y(0,p),              e_i -> y_i^p
    F*B     = ker eta1
    eulercol: O_Y(-p,0) -> E0,             1 -> (x_0^p, ..., x_n^p)   (lands in F*B)
    F*G     = F*B / O_Y(-p,0)
    eta2    : Sym^2 E0 -> O_Y(0,2p),       e_i e_j -> y_i^p y_j^p
    Fsym    = ker eta2  (= F*B . E0 inside Sym^2 E0)
    E       = O_Y(-p,0) . F*B inside Sym^2 F*B

and the short exact sequences

    0 -> Sym2F*B(a,b) -> Fsym(a,b) -> F*B(a,b+p) -> 0
    0 -> O(a-2p,b)    -> E(a,b)    -> F*G(a-p,b)  -> 0
    0 -> E(a,b)       -> Sym2F*B(a,b) -> Sym2F*G(a,b) -> 0
    0 -> O(a-p,b)     -> F*B(a,b)  -> F*G(a,b)    -> 0

Kernel objects (F*B, Fsym) have exact cohomology: both maps of their
defining sequence have computable ranks on every H^i.  Everything else is
solved for as intervals with ``les.solve_sequence``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import NamedTuple

import numpy as np

from .cohomology import h_Y, induced_map_Y, model_Y, w_mult_triplets, w_space
from .errors import (
    ContainmentFailed,
    HypothesisFailed,
    SideConditionFailed,
    UnknownLeaf,
    UnsupportedDimension,
)
from .ffield import FpMatrix, Subspace, contains, image, kernel, matmul_mod, quotient_dim, rank, sparse_rank
from .les import DimInterval, solve_sequence
from .ring import BiPoly, basis_R, mult_triplets

__all__ = [
    "PolyMatrix",
    "Sheaf",
    "SesNode",
    "EtaMap",
    "Step",
    "BundleCalculus",
    "calculus",
    "eta1_map",
    "eta2_map",
    "eta1_matrix",
    "euler_column",
    "polarization",
    "h1_FstarB",
    "h0_FstarB",
    "h1_sym2FstarB_lower",
    "h1_FstarG",
    "h1_sym2FstarG_lower",
    "les_solve",
]


# --------------------------------------------------------------------------
# maps of direct sums of line bundles


@dataclass(frozen=True, eq=False)
class PolyMatrix:
    """A map  (+)_c O_Y(source[c]) -> (+)_r O_Y(target[r])  with polynomial entries."""

    p: int
    n: int
    source: tuple[tuple[int, int], ...]
    target: tuple[tuple[int, int], ...]
    entries: dict = field(hash=False)  # (row, col) -> BiPoly

    def __post_init__(self):
        for (r, c), g in self.entries.items():
            want = (self.target[r][0] - self.source[c][0], self.target[r][1] - self.source[c][1])
            if g.bidegree != want:
                raise ValueError(f"entry ({r},{c}) has bidegree {g.bidegree}, expected {want}")

    def _offsets(self, twists, i):
        dims = [model_Y(self.n, t, i, self.p).dim for t in twists]
        return dims, np.concatenate([[0], np.cumsum(dims)]).astype(int)

    def induced(self, i: int) -> FpMatrix:
        """Matrix of the induced map on H^i, in the concatenated model bases."""
        sdims, soff = self._offsets(self.source, i)
        tdims, toff = self._offsets(self.target, i)
        M = np.zeros((int(toff[-1]), int(soff[-1])), dtype=np.int64)
        for (r, c), g in self.entries.items():
            if sdims[c] and tdims[r]:
                block = induced_map_Y(g, i, self.source[c], self.target[r])
                M[toff[r]:toff[r + 1], soff[c]:soff[c + 1]] += block.data
        return FpMatrix(self.p, M)

    def induced_rank(self, i: int) -> int:
        """Rank of the induced map on H^i without building cohomology bases.

        On a cokernel piece coker(q_s) -> coker(q_t) the rank is
        rank[G | Q_t] - rank Q_t; on a kernel piece ker(q_s) -> ker(q_t) it is
        rank[Q_s ; G] - rank Q_s, with G the map on the ambient W-cohomology.
        """
        p, n = self.p, self.n
        if i == 0:
            return self._rank_h0()
        total = 0
        if i == n:
            total += self._rank_piece(i, kernel_piece=False)
        if i + 1 in (n, 2 * n):
            total += self._rank_piece(i + 1, kernel_piece=True)
        return total

    def _rank_h0(self) -> int:
        sdims = [len(basis_R(self.n, *t)) for t in self.source]
        tdims = [len(basis_R(self.n, *t)) for t in self.target]
        soff, toff = np.cumsum([0] + sdims), np.cumsum([0] + tdims)
        R, C, V = [], [], []
        for (r, c), g in self.entries.items():
            if sdims[c] and tdims[r]:
                _, rows, cols, vals = mult_triplets(g, self.source[c])
                R.extend(x + int(toff[r]) for x in rows)
                C.extend(x + int(soff[c]) for x in cols)
                V.extend(vals)
        return sparse_rank(self.p, (int(toff[-1]), int(soff[-1])), R, C, V)

    def _rank_piece(self, k: int, kernel_piece: bool) -> int:
        p, n = self.p, self.n
        q = BiPoly.q(p, n)
        shift = (1, 1) if kernel_piece else (0, 0)
        src = [w_space(n, s[0] - shift[0], s[1] - shift[1], k) for s in self.source]
        tgt = [w_space(n, t[0] - shift[0], t[1] - shift[1], k) for t in self.target]
        soff = np.cumsum([0] + [w.dim for w in src])
        toff = np.cumsum([0] + [w.dim for w in tgt])
        R, C, V = [], [], []
        for (r, c), g in self.entries.items():
            rows, cols, vals = w_mult_triplets(g, src[c], tgt[r])
            R.extend(x + int(toff[r]) for x in rows)
            C.extend(x + int(soff[c]) for x in cols)
            V.extend(vals)
        if kernel_piece:
            # stack Q_s (rows below) on top of G: [Q_s ; G]
            up = [w_space(n, s[0], s[1], k) for s in self.source]
            uoff = np.cumsum([0] + [w.dim for w in up])
            QR, QC, QV = [], [], []
            for c, (w_lo, w_hi) in enumerate(zip(src, up)):
                rows, cols, vals = w_mult_triplets(q, w_lo, w_hi)
                QR.extend(x + int(uoff[c]) for x in rows)
                QC.extend(x + int(soff[c]) for x in cols)
                QV.extend(vals)
            base = sparse_rank(p, (int(uoff[-1]), int(soff[-1])), QR, QC, QV)
            R2 = QR + [x + int(uoff[-1]) for x in R]
            shape = (int(uoff[-1] + toff[-1]), int(soff[-1]))
            return sparse_rank(p, shape, R2, QC + C, QV + V) - base
        low = [w_space(n, t[0] - 1, t[1] - 1, k) for t in self.target]
        loff = np.cumsum([0] + [w.dim for w in low])
        QR, QC, QV = [], [], []
        for r, (w_lo, w_hi) in enumerate(zip(low, tgt)):
            rows, cols, vals = w_mult_triplets(q, w_lo, w_hi)
            QR.extend(x + int(toff[r]) for x in rows)
            QC.extend(x + int(loff[r]) for x in cols)
            QV.extend(vals)
        base = sparse_rank(p, (int(toff[-1]), int(loff[-1])), QR, QC, QV)
        C2 = C + [x + int(soff[-1]) for x in QC]
        shape = (int(toff[-1]), int(soff[-1] + loff[-1]))
        return sparse_rank(p, shape, R + QR, C2, V + QV) - base

    def compose(self, other: "PolyMatrix") -> "PolyMatrix":
        """self o other."""
        if tuple(other.target) != tuple(self.source):
            raise ValueError("cannot compose: twists do not match")
        out: dict = {}
        for (r, k), g in self.entries.items():
            for (k2, c), h in other.entries.items():
                if k == k2:
                    prod = g * h
                    out[(r, c)] = out[(r, c)] + prod if (r, c) in out else prod
        out = {rc: g for rc, g in out.items() if not g.is_zero()}
        return PolyMatrix(self.p, self.n, other.source, self.target, out)


def _sym_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n + 1) for j in range(i, n + 1)]


def eta1_map(p: int, n: int, twist) -> PolyMatrix:
    """[y_0^p ... y_n^p] : O(a,b)^(n+1) -> O(a,b+p)."""
    a, b = twist
    ent = {(0, i): BiPoly.y(p, n, i, p) for i in range(n + 1)}
    return PolyMatrix(p, n, ((a, b),) * (n + 1), ((a, b + p),), ent)


def eta1_matrix(p: int, n: int, twist, drop_block: int | None = None) -> FpMatrix:
    """eta1 on H^0; ``drop_block`` deletes the columns of one summand (a deliberate mutation)."""
    M = eta1_map(p, n, tuple(twist)).induced(0)
    if drop_block is None:
        return M
    k = len(basis_R(n, *twist))
    keep = [j for j in range(M.cols) if not (drop_block * k <= j < (drop_block + 1) * k)]
    return FpMatrix(p, M.data[:, keep])


def eta2_map(p: int, n: int, twist) -> PolyMatrix:
    """[y_i^p y_j^p]_{i<=j} : Sym^2 O(a,b)^(n+1) -> O(a,b+2p)."""
    a, b = twist
    pairs = _sym_pairs(n)
    ent = {(0, c): BiPoly.y(p, n, i, p) * BiPoly.y(p, n, j, p) for c, (i, j) in enumerate(pairs)}
    return PolyMatrix(p, n, ((a, b),) * len(pairs), ((a, b + 2 * p),), ent)


def euler_column(p: int, n: int, twist) -> PolyMatrix:
    """(x_0^p, ..., x_n^p)^T : O(a-p,b) -> O(a,b)^(n+1)."""
    a, b = twist
    ent = {(i, 0): BiPoly.x(p, n, i, p) for i in range(n + 1)}
    return PolyMatrix(p, n, ((a - p, b),), ((a, b),) * (n + 1), ent)


def polarization(p: int, n: int, twist) -> PolyMatrix:
    """Sym^2 O(a,b)^(n+1) -> O(a,b+p)^(n+1),  e_i e_j -> e_i y_j^p + e_j y_i^p.

    Restricted to Fsym this is Fsym -> F*B(a,b+p) followed by the inclusion
    into O(a,b+p)^(n+1).  Note e_i^2 -> 2 e_i y_i^p vanishes when p = 2.
    """
    a, b = twist
    ent: dict = {}
    for c, (i, j) in enumerate(_sym_pairs(n)):
        if i == j:
            g = BiPoly.y(p, n, i, p).scale(2)
            if not g.is_zero():
                ent[(i, c)] = g
        else:
            ent[(i, c)] = BiPoly.y(p, n, j, p)
            ent[(j, c)] = BiPoly.y(p, n, i, p)
    src = ((a, b),) * len(_sym_pairs(n))
    return PolyMatrix(p, n, src, ((a, b + p),) * (n + 1), ent)


@dataclass(frozen=True, eq=False)
class EtaMap:
    """One of the three Frobenius-twisted maps, realized on H^0."""

    kind: str  # "eta1" | "eta2" | "euler-column"
    p: int
    n: int
    twist: tuple[int, int]
    poly: PolyMatrix
    matrix: FpMatrix

    @classmethod
    def build(cls, kind: str, p: int, n: int, twist) -> "EtaMap":
        maker = {"eta1": eta1_map, "eta2": eta2_map, "euler-column": euler_column}[kind]
        pm = maker(p, n, tuple(twist))
        return cls(kind, p, n, tuple(twist), pm, pm.induced(0))


# --------------------------------------------------------------------------
# sheaves and short exact sequences

_KINDS = {
    "O": "O",
    "FstarB": "F*B",
    "Fsym": "Fsym",
    "Sym2FstarB": "Sym2F*B",
    "FstarG": "F*G",
    "E": "E",
    "Sym2FstarG": "Sym2F*G",
}


class Sheaf(NamedTuple):
    kind: str
    twist: tuple[int, int]
    mult: int = 1  # number of copies, used for free sums O(a,b)^m

    def __str__(self) -> str:
        base = f"{_KINDS.get(self.kind, self.kind)}({self.twist[0]},{self.twist[1]})"
        return base if self.mult == 1 else f"{base}^{self.mult}"


@dataclass(frozen=True)
class SesNode:
    """0 -> sub -> mid -> quot -> 0 together with known rank bounds of its maps."""

    sub: Sheaf
    mid: Sheaf
    quot: Sheaf
    provenance: str
    f_ranks: tuple = ()  # per degree: DimInterval or None, for sub -> mid
    g_ranks: tuple = ()  # per degree, for mid -> quot

    def members(self) -> tuple[Sheaf, Sheaf, Sheaf]:
        return self.sub, self.mid, self.quot


class Step(NamedTuple):
    """One link of a verification chain; becomes a certificate node.

    COMPUTED steps name a recipe (op, args) that reproduces their payload.
    """

    label: str
    status: str  # COMPUTED | RULE | ASSUMED
    statement: str
    payload: dict
    inputs: tuple = ()
    recipe: tuple | None = None


class BundleCalculus:
    """Memoized cohomology of the sheaves above for fixed (p, n)."""

    def __init__(self, p: int, n: int):
        if n < 2:
            raise UnsupportedDimension(f"n = {n}")
        self.p = p
        self.n = n
        self.top = 2 * n - 1  # dim Y
        self._coh: dict = {}
        self._pm_rank: dict = {}
        self._pm_kernel: dict = {}

    # line bundles and kernel objects -----------------------------------

    def line(self, twist) -> list[int]:
        return [h_Y(self.n, tuple(twist), i, self.p) for i in range(self.top + 1)]

    def _ambient(self, sheaf: Sheaf) -> PolyMatrix:
        """phi with sheaf = ker(phi); a line bundle is ker(O(c) -> 0)."""
        p, n = self.p, self.n
        if sheaf.kind == "FstarB":
            return eta1_map(p, n, sheaf.twist)
        if sheaf.kind == "Fsym":
            return eta2_map(p, n, sheaf.twist)
        if sheaf.kind == "O" and sheaf.mult == 1:
            return PolyMatrix(p, n, (tuple(sheaf.twist),), (), {})
        raise UnknownLeaf(f"{sheaf} is not a kernel of a map of line-bundle sums")

    def pm_rank(self, pm: PolyMatrix, i: int) -> int:
        key = (pm.source, pm.target, _pm_key(pm), i)
        if key not in self._pm_rank:
            self._pm_rank[key] = pm.induced_rank(i)
        return self._pm_rank[key]

    def pm_kernel(self, pm: PolyMatrix, i: int) -> Subspace:
        key = (pm.source, pm.target, _pm_key(pm), i)
        if key not in self._pm_kernel:
            self._pm_kernel[key] = kernel(pm.induced(i))
        return self._pm_kernel[key]

    def sum_h(self, twists, i: int) -> int:
        return sum(h_Y(self.n, t, i, self.p) for t in twists)

    def _kernel_cohomology(self, sheaf: Sheaf) -> list[DimInterval]:
        phi = self._ambient(sheaf)
        out = []
        for i in range(self.top + 1):
            # H^{i-1}(C) -> H^i(K) -> H^i(A) -> H^i(C): h^i(K) = coker phi_{i-1} + ker phi_i
            ker_i = self.sum_h(phi.source, i) - self.pm_rank(phi, i)
            coker_prev = 0
            if i > 0:
                coker_prev = self.sum_h(phi.target, i - 1) - self.pm_rank(phi, i - 1)
            out.append(DimInterval.exact(ker_i + coker_prev))
        return out

    def induced_rank(self, s: PolyMatrix, dom: Sheaf, cod: Sheaf, i: int) -> DimInterval:
        """Rank bounds on H^i(dom) -> H^i(cod) for the map induced by the ambient map s.

        dom = ker(phi1), cod = ker(phi2) and s maps ambient(dom) into
        ambient(cod) carrying dom into cod.  On H^i the image of H^i(dom) in
        the ambient is ker(phi1_i), and H^i(cod) -> H^i(ambient) has kernel of
        dimension coker(phi2_{i-1}); both are exact on H^0.
        """
        phi1 = self._ambient(dom)
        phi2 = self._ambient(cod)
        K = self.pm_kernel(phi1, i)
        if K.dim == 0:
            low = 0
        else:
            S = s.induced(i)
            low = rank(FpMatrix(self.p, matmul_mod(S.data, K.basis.T, self.p)))
        slack = 0
        if i > 0:
            slack = self.sum_h(phi2.target, i - 1) - self.pm_rank(phi2, i - 1)
        return DimInterval(low, low + slack)

    # sequences -----------------------------------------------------------

    def ses_for(self, sheaf: Sheaf) -> SesNode:
        p, n = self.p, self.n
        a, b = sheaf.twist
        k = sheaf.kind
        deg = range(self.top + 1)
        if k == "FstarG":
            sub, mid = Sheaf("O", (a - p, b)), Sheaf("FstarB", (a, b))
            eul = euler_column(p, n, (a, b))
            f = tuple(self.induced_rank(eul, sub, mid, i) for i in deg)
            return SesNode(sub, mid, sheaf, "column: 0 -> O(-p,0) -> F*B -> F*G -> 0", f, ())
        if k == "E":
            return SesNode(Sheaf("O", (a - 2 * p, b)), sheaf, Sheaf("FstarG", (a - p, b)),
                           "first filtration step of Sym2F*B", (), ())
        if k == "Sym2FstarB":
            mid, quot = Sheaf("Fsym", (a, b)), Sheaf("FstarB", (a, b + p))
            pol = polarization(p, n, (a, b))
            g = tuple(self.induced_rank(pol, mid, quot, i) for i in deg)
            return SesNode(sheaf, mid, quot, "0 -> Sym2F*B -> Fsym -> F*B(0,p) -> 0", (), g)
        if k == "Sym2FstarG":
            return SesNode(Sheaf("E", (a, b)), Sheaf("Sym2FstarB", (a, b)), sheaf,
                           "0 -> E -> Sym2F*B -> Sym2F*G -> 0", (), ())
        if k in ("FstarB", "Fsym"):
            phi = self._ambient(sheaf)
            free = Sheaf("O", (a, b), len(phi.source))
            quot = Sheaf("O", phi.target[0])
            g = tuple(DimInterval.exact(self.pm_rank(phi, i)) for i in deg)
            return SesNode(sheaf, free, quot, f"defining sequence of {sheaf}", (), g)
        raise UnknownLeaf(f"no sequence defines {sheaf}")

    def ses_chain(self, sheaf: Sheaf) -> list[SesNode]:
        """Every sequence the solver consults for ``sheaf``, leaves last."""
        if sheaf.kind == "O":
            return []
        node = self.ses_for(sheaf)
        out = [node]
        for m in node.members():
            if m != sheaf:
                for sub in self.ses_chain(m):
                    if sub not in out:
                        out.append(sub)
        if sheaf.kind == "E":
            out.extend(x for x in self.ses_chain(Sheaf("FstarB", (sheaf.twist[0] - self.p, sheaf.twist[1])))
                       if x not in out)
        return out

    def _solve(self, node: SesNode, target: Sheaf) -> list[DimInterval]:
        known = {}
        for m in node.members():
            if m != target:
                known[m] = self.cohomology(m)
        dims, ranks = [], []
        U = DimInterval.unknown()
        for i in range(self.top + 1):
            for pos, m in enumerate(node.members()):
                dims.append(known.get(m, [U] * (self.top + 1))[i])
                if pos == 0:
                    ranks.append(node.f_ranks[i] if node.f_ranks else None)
                elif pos == 1:
                    ranks.append(node.g_ranks[i] if node.g_ranks else None)
                else:
                    ranks.append(None)
        solved, _ = solve_sequence(dims, ranks)
        pos = node.members().index(target)
        return [solved[3 * i + pos] for i in range(self.top + 1)]

    def cohomology(self, sheaf: Sheaf) -> list[DimInterval]:
        """Interval for h^i(Y, sheaf), i = 0 .. 2n-1."""
        sheaf = Sheaf(sheaf.kind, tuple(sheaf.twist), sheaf.mult)
        if sheaf in self._coh:
            return self._coh[sheaf]
        if sheaf.kind == "O":
            res = [DimInterval.exact(v * sheaf.mult) for v in self.line(sheaf.twist)]
        elif sheaf.mult != 1:
            raise UnknownLeaf(f"no model for a direct sum {sheaf}")
        elif sheaf.kind in ("FstarB", "Fsym"):
            res = self._kernel_cohomology(sheaf)
        elif sheaf.kind in _KINDS:
            res = self._solve(self.ses_for(sheaf), sheaf)
            if sheaf.kind == "E":
                # E = O(-p,0) . F*B is isomorphic to O(-p,0) (x) F*B
                a, b = sheaf.twist
                iso = self.cohomology(Sheaf("FstarB", (a - self.p, b)))
                res = [r.intersect(s) for r, s in zip(res, iso)]
        else:
            raise UnknownLeaf(f"no model for {sheaf}")
        self._coh[sheaf] = res
        return res


def _pm_key(pm: PolyMatrix):
    return tuple(sorted((rc, hash(g)) for rc, g in pm.entries.items()))


@lru_cache(maxsize=None)
def calculus(p: int, n: int) -> BundleCalculus:
    return BundleCalculus(p, n)


# --------------------------------------------------------------------------
# named computations


def les_solve(sheaf: Sheaf, degree: int, p: int = 2, n: int = 3) -> DimInterval:
    """Tightest interval for h^degree(Y, sheaf) implied by the sequence chain."""
    return calculus(p, n).cohomology(sheaf)[degree]


@dataclass(frozen=True, eq=False)
class FstarBH1:
    twist: tuple[int, int]
    p: int
    n: int
    value: int
    target_dim: int
    image_dim: int
    shortcut: bool

    def image(self) -> Subspace:
        """Witness: im eta1 inside H^0(O(a,b+p)), in echelon form."""
        return image(eta1_map(self.p, self.n, self.twist).induced(0))


def _need_n3(n: int):
    if n < 3:
        raise HypothesisFailed(f"n = {n}: the cokernel description needs n >= 3")


def h1_FstarB(a: int, b: int, p: int = 2, n: int = 3) -> FstarBH1:
    """h^1(Y, O(a,b) (x) F*B) as the cokernel of eta1 on global sections."""
    _need_n3(n)
    if h_Y(n, (a, b), 1, p) != 0:
        raise SideConditionFailed(f"h^1(Y, O({a},{b})) != 0")
    pm = eta1_map(p, n, (a, b))
    target = len(basis_R(n, a, b + p))
    im_dim = pm.induced_rank(0)
    value = target - im_dim
    shortcut = a < 0 or b < -p
    if shortcut and value != 0:
        raise SideConditionFailed(f"vanishing shortcut disagrees with cokernel ({value}) at ({a},{b})")
    return FstarBH1((a, b), p, n, value, target, im_dim, shortcut)


def h0_FstarB(a: int, b: int, p: int = 2, n: int = 3) -> int:
    """dim ker eta1 on H^0(O(a,b))^(n+1)."""
    return (n + 1) * len(basis_R(n, a, b)) - eta1_map(p, n, (a, b)).induced_rank(0)


@dataclass(frozen=True, eq=False)
class Sym2BBound:
    twist: tuple[int, int]
    p: int
    n: int
    target_dim: int
    im_eta1: Subspace
    im_eta2: Subspace
    gap: int  # dim im eta1 - dim im eta2
    interval: DimInterval  # solver interval for h^1(Sym2F*B(a,b))

    @property
    def lower(self) -> int:
        """Certified lower bound for h^1(Y, O(a,b) (x) Sym2F*B)."""
        return max(self.gap, self.interval.lower)

    @property
    def strict(self) -> bool:
        return self.gap > 0

    @property
    def exceeds_gap(self) -> bool:
        return self.interval.lower > self.gap


def h1_sym2FstarB_lower(a: int, b: int, p: int = 2, n: int = 3, *, eta1_override=None) -> Sym2BBound:
    """Lower bound for h^1(Y, O(a,b) (x) Sym2F*B) from the images of eta1 and eta2.

    Both images live in H^0(O(a,b+2p)); im eta2 must lie inside im eta1.
    ``eta1_override`` replaces the eta1 matrix (used to test sensitivity).
    """
    if not (a >= 0 and b > -n and n >= 3):
        raise HypothesisFailed(f"need a >= 0, b > -n, n >= 3; got a={a}, b={b}, n={n}")
    for i in (1, 2):
        if h_Y(n, (a, b), i, p):
            raise SideConditionFailed(f"h^{i}(Y, O({a},{b})) != 0")
    E1 = eta1_override if eta1_override is not None else eta1_map(p, n, (a, b + p)).induced(0)
    E2 = eta2_map(p, n, (a, b)).induced(0)
    I1, I2 = image(E1), image(E2)
    if not contains(I1, I2):
        raise ContainmentFailed(
            f"im eta2 (dim {I2.dim}) is not contained in im eta1 (dim {I1.dim}) "
            f"inside H^0(O({a},{b + 2 * p})), p={p}")
    gap = quotient_dim(I1, I2)
    interval = calculus(p, n).cohomology(Sheaf("Sym2FstarB", (a, b)))[1]
    return Sym2BBound((a, b), p, n, E2.rows, I1, I2, gap, interval)


@dataclass(frozen=True)
class FstarGH1:
    twist: tuple[int, int]
    interval: DimInterval
    side_conditions_hold: bool

    @property
    def exact(self) -> bool:
        return self.interval.is_exact


def h1_FstarG(a: int, b: int, p: int = 2, n: int = 3) -> FstarGH1:
    """h^1(Y, O(a,b) (x) F*G): equal to h^1(F*B) when h^1, h^2 of O(a-p,b) vanish."""
    ok = h_Y(n, (a - p, b), 1, p) == 0 and h_Y(n, (a - p, b), 2, p) == 0
    if ok:
        v = h1_FstarB(a, b, p, n).value
        return FstarGH1((a, b), DimInterval.exact(v), True)
    return FstarGH1((a, b), les_solve(Sheaf("FstarG", (a, b)), 1, p, n), False)


@dataclass(frozen=True, eq=False)
class Sym2GBound:
    twist: tuple[int, int]
    p: int
    n: int
    base: Sym2BBound
    e_route: str  # how H^1(E(a,b)) = 0 was established
    steps: tuple
    interval: DimInterval  # solver interval for h^1(Sym2F*G(a,b))

    @property
    def lower(self) -> int:
        return self.base.lower


def h1_sym2FstarG_lower(a: int, b: int, p: int = 2, n: int = 3) -> Sym2GBound:
    """Lower bound for h^1(Y, O(a,b) (x) Sym2F*G) via injectivity of H^1(Sym2F*B) -> H^1(Sym2F*G)."""
    if not (a < p or b < -p):
        raise HypothesisFailed(f"need a < p or b < -p; got a={a}, b={b}, p={p}")
    steps = []
    h1_low = h_Y(n, (a - 2 * p, b), 1, p)
    steps.append(Step("h1-O(a-2p,b)", "COMPUTED", f"h^1(Y, O({a - 2 * p},{b})) = {h1_low}",
                      {"dims": {"h": h1_low}}, (),
                      ("h_Y", {"n": n, "a": a - 2 * p, "b": b, "i": 1, "p": p})))
    if h1_low:
        raise HypothesisFailed(f"h^1(Y, O({a - 2 * p},{b})) = {h1_low} != 0")

    g = h1_FstarG(a - p, b, p, n)
    steps.append(Step("h1-FstarG(a-p,b)", "COMPUTED",
                      f"h^1(Y, F*G({a - p},{b})) in {g.interval}"
                      + ("" if g.side_conditions_hold else " (side conditions fail; solver interval)"),
                      {"bounds": {"h1": g.interval.to_json()},
                       "dims": {"side_conditions_hold": int(g.side_conditions_hold)}}, (),
                      ("h1_FstarG", {"a": a - p, "b": b, "p": p, "n": n})))
    if g.interval.upper == 0:
        e_route = "embedding into H^1(F*G(a-p,b))"
        steps.append(Step("h1-E-vanishes", "RULE",
                          f"H^1(E({a},{b})) embeds in H^1(F*G({a - p},{b})) = 0", {"dims": {"h1": 0}},
                          ("h1-O(a-2p,b)", "h1-FstarG(a-p,b)")))
    else:
        fb = h1_FstarB(a - p, b, p, n)
        steps.append(Step("h1-FstarB(a-p,b)", "COMPUTED",
                          f"h^1(Y, F*B({a - p},{b})) = {fb.value}",
                          {"dims": {"h1": fb.value, "target": fb.target_dim, "image": fb.image_dim}}, (),
                          ("h1_FstarB", {"a": a - p, "b": b, "p": p, "n": n})))
        if fb.value != 0:
            raise HypothesisFailed(f"cannot show H^1(E({a},{b})) = 0: h^1(F*B({a - p},{b})) = {fb.value}")
        e_route = "E = O(-p,0).F*B isomorphic to F*B(a-p,b)"
        steps.append(Step("h1-E-vanishes", "RULE",
                          f"E({a},{b}) = O(-{p},0).F*B({a},{b}) is isomorphic to F*B({a - p},{b}), "
                          f"so H^1(E({a},{b})) = 0",
                          {"dims": {"h1": 0}}, ("h1-FstarB(a-p,b)",)))

    base = h1_sym2FstarB_lower(a, b, p, n)
    steps.append(Step("gap-eta1-eta2", "COMPUTED",
                      f"dim im eta1 - dim im eta2 = {base.im_eta1.dim} - {base.im_eta2.dim} = {base.gap} "
                      f"in H^0(O({a},{b + 2 * p})) of dim {base.target_dim}",
                      {"dims": {"im_eta1": base.im_eta1.dim, "im_eta2": base.im_eta2.dim, "gap": base.gap,
                                "target": base.target_dim}}, (),
                      ("eta_gap", {"a": a, "b": b, "p": p, "n": n})))
    steps.append(Step("h1-Sym2FstarB", "COMPUTED",
                      f"h^1(Y, Sym2F*B({a},{b})) in {base.interval}",
                      {"bounds": {"h": base.interval.to_json()}},
                      ("gap-eta1-eta2",),
                      ("les", {"kind": "Sym2FstarB", "a": a, "b": b, "degree": 1, "p": p, "n": n})))
    steps.append(Step("injection-Sym2B-Sym2G", "RULE",
                      f"H^1(Sym2F*B({a},{b})) -> H^1(Sym2F*G({a},{b})) is injective, "
                      f"so h^1(Sym2F*G({a},{b})) >= {base.lower}",
                      {"dims": {"lower": base.lower}}, ("h1-E-vanishes", "h1-Sym2FstarB")))
    interval = les_solve(Sheaf("Sym2FstarG", (a, b)), 1, p, n)
    return Sym2GBound((a, b), p, n, base, e_route, tuple(steps), interval)


def sym_rank(n: int) -> int:
    return comb(n + 2, 2)
