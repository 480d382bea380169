"""Exact linear algebra over small prime fields F_p.

Matrices act on column vectors: an ``FpMatrix`` of shape (rows, cols) maps
F_p^cols to F_p^rows, so column j holds the image of the j-th source basis
vector.  ``image`` is the column space (ambient = rows) and ``kernel`` the
right null space (ambient = cols).

Subspaces are stored in reduced row-echelon form with pivots chosen as the
first nonzero column, which makes the stored form canonical: two subspaces
are equal iff their ``canonical_bytes`` agree.

p = 2 is eliminated on packed Python-int bit rows; other primes use int64
numpy rows.  Matrices whose nonzero pattern splits into independent blocks
(every map in this package is torus-graded, so this is the common case) are
reduced one block at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import NotNested

__all__ = [
    "FpMatrix",
    "Subspace",
    "matmul_mod",
    "sparse_rank",
    "rank",
    "image",
    "kernel",
    "contains",
    "quotient_dim",
    "echelon",
    "is_prime",
]

# below this many entries block detection costs more than it saves
_BLOCK_THRESHOLD = 4096


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True, eq=False)
class FpMatrix:
    """Dense matrix over F_p with entries in [0, p)."""

    p: int
    data: np.ndarray

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ValueError("FpMatrix data must be two-dimensional")
        arr = np.mod(arr.astype(np.int64), self.p).astype(np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def from_rows(cls, p: int, rows, cols: int | None = None) -> "FpMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(p, 0, cols or 0)
        return cls(p, np.array(rows, dtype=np.int64))

    @classmethod
    def from_entries(cls, p: int, shape, entries) -> "FpMatrix":
        """Build from an iterable of (row, col, value); repeated positions add."""
        arr = np.zeros(shape, dtype=np.int64)
        for r, c, v in entries:
            arr[r, c] += v
        return cls(p, arr)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def entries(self) -> list[int]:
        """Entries in row-major order."""
        return [int(v) for v in self.data.ravel()]

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self.data.T.copy())

    @property
    def T(self) -> "FpMatrix":
        return self.transpose()

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p:
            raise ValueError("moduli differ")
        return FpMatrix(self.p, matmul_mod(self.data, other.data, self.p))

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p:
            raise ValueError("moduli differ")
        return FpMatrix(self.p, self.data + other.data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.p, self.shape, self.data.tobytes()))

    def is_zero(self) -> bool:
        return not self.data.any()

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, shape={self.shape})"


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """(A @ B) mod p for residue matrices, through float64 BLAS when that is exact."""
    A = np.asarray(A)
    B = np.asarray(B)
    inner = A.shape[1] if A.ndim == 2 else 1
    if inner * (p - 1) ** 2 < 2**52:
        out = A.astype(np.float64) @ B.astype(np.float64)
        return np.rint(out).astype(np.int64) % p
    if inner * (p - 1) ** 2 < 2**63:
        return (A.astype(np.int64) @ B.astype(np.int64)) % p
    # Python ints do not overflow
    return ((A.astype(object) @ B.astype(object)) % p).astype(np.int64)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of F_p^ambient_dim held as its reduced row-echelon basis."""

    p: int
    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...] = field(default=())

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.int64)
        b = b.reshape(0, 0) if self.ambient_dim == 0 else b.reshape(-1, self.ambient_dim)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def canonical_bytes(self) -> bytes:
        head = f"{self.p}:{self.ambient_dim}:{self.dim}:".encode()
        return head + self.basis.astype(np.uint8 if self.p < 256 else np.int64).tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.canonical_bytes() == other.canonical_bytes()

    def __hash__(self):
        return hash(self.canonical_bytes())

    def non_pivots(self) -> list[int]:
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]

    def reduce(self, vectors: np.ndarray) -> np.ndarray:
        """Reduce the columns of ``vectors`` (ambient_dim x k) modulo this subspace."""
        v = np.asarray(vectors, dtype=np.int64) % self.p
        if self.dim == 0:
            return v
        coeff = v[list(self.pivots), :]
        return (v - matmul_mod(self.basis.T, coeff, self.p)) % self.p

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates of member column vectors in the echelon basis."""
        v = np.asarray(vectors, dtype=np.int64) % self.p
        return v[list(self.pivots), :]

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64), ())

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, np.eye(ambient_dim, dtype=np.int64), tuple(range(ambient_dim)))

    @classmethod
    def span(cls, p: int, vectors, ambient_dim: int) -> "Subspace":
        """Row span of the given vectors."""
        arr = np.asarray(vectors, dtype=np.int64).reshape(-1, ambient_dim)
        return _row_space(arr % p, p)

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, dim={self.dim}, ambient={self.ambient_dim})"


# --------------------------------------------------------------------------
# elimination kernels


def _rref_gf2(rows: np.ndarray) -> tuple[np.ndarray, list[int]]:
    m, n = rows.shape
    if m == 0 or n == 0:
        return np.zeros((0, n), dtype=np.int64), []
    width = -(-n // 8) * 8
    packed = np.packbits(rows.astype(np.uint8), axis=1)
    top = width - 1
    basis: dict[int, int] = {}
    for raw in packed:
        r = int.from_bytes(raw.tobytes(), "big")
        if not r:
            continue
        for piv, b in basis.items():
            if (r >> (top - piv)) & 1:
                r ^= b
        if not r:
            continue
        piv = width - r.bit_length()
        bit = top - piv
        for k, b in basis.items():
            if (b >> bit) & 1:
                basis[k] = b ^ r
        basis[piv] = r
    pivots = sorted(basis)
    nbytes = width // 8
    out = np.zeros((len(pivots), n), dtype=np.int64)
    for i, piv in enumerate(pivots):
        raw = np.frombuffer(basis[piv].to_bytes(nbytes, "big"), dtype=np.uint8)
        out[i] = np.unpackbits(raw)[:n]
    return out, pivots


def _rref_modp(rows: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(rows, dtype=np.int64) % p
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        s = r + int(nz[0])
        if s != r:
            A[[r, s]] = A[[s, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r].copy(), pivots


def _rref_dense(rows: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    if p == 2:
        return _rref_gf2(rows)
    return _rref_modp(rows, p)


def _blocks(A: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    """Split the nonzero pattern of A into independent (row_ids, col_ids) blocks."""
    m, n = A.shape
    r, c = np.nonzero(A)
    if r.size == 0:
        return []
    g = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c + m)), shape=(m + n, m + n))
    ncomp, labels = connected_components(g, directed=False)
    row_lab = labels[:m]
    col_lab = labels[m:]
    used = np.unique(labels[r])
    out = []
    # deterministic: blocks ordered by their smallest column index
    order = sorted(used, key=lambda lab: int(np.argmax(col_lab == lab)))
    for lab in order:
        out.append((np.nonzero(row_lab == lab)[0], np.nonzero(col_lab == lab)[0]))
    return out


def _row_space(rows: np.ndarray, p: int) -> Subspace:
    m, n = rows.shape
    if m * n < _BLOCK_THRESHOLD:
        R, piv = _rref_dense(rows, p)
        return Subspace(p, n, R, tuple(piv))
    pieces = []
    for ri, ci in _blocks(rows):
        R, piv = _rref_dense(rows[np.ix_(ri, ci)], p)
        for k, pc in enumerate(piv):
            pieces.append((int(ci[pc]), ci, R[k]))
    pieces.sort(key=lambda t: t[0])
    out = np.zeros((len(pieces), n), dtype=np.int64)
    for k, (_, ci, row) in enumerate(pieces):
        out[k, ci] = row
    return Subspace(p, n, out, tuple(t[0] for t in pieces))


def _rank_rows(rows: np.ndarray, p: int) -> int:
    m, n = rows.shape
    if m * n < _BLOCK_THRESHOLD:
        return len(_rref_dense(rows, p)[1])
    return sum(len(_rref_dense(rows[np.ix_(ri, ci)], p)[1]) for ri, ci in _blocks(rows))


def sparse_rank(p: int, shape: tuple[int, int], rows, cols, vals) -> int:
    """Rank over F_p of a matrix given by (row, col, value) triplets; duplicates add."""
    m, n = shape
    if m == 0 or n == 0 or len(vals) == 0:
        return 0
    A = coo_matrix((np.asarray(vals, dtype=np.int64), (np.asarray(rows), np.asarray(cols))),
                   shape=(m, n)).tocsr()
    A.data %= p
    A.eliminate_zeros()
    if A.nnz == 0:
        return 0
    A = A.tocoo()
    r, c, v = A.row, A.col, A.data
    g = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c + m)), shape=(m + n, m + n))
    _, labels = connected_components(g, directed=False)
    nlab = labels.max() + 1
    row_lab, col_lab = labels[:m], labels[m:]
    nrows = np.bincount(row_lab, minlength=nlab)
    ncols = np.bincount(col_lab, minlength=nlab)
    live = np.zeros(nlab, dtype=bool)
    live[row_lab[r]] = True
    # a connected block with a single row or column has rank exactly 1
    thin = live & ((nrows == 1) | (ncols == 1))
    total = int(thin.sum())
    big = np.nonzero(live & ~thin)[0]
    if big.size == 0:
        return total
    local_row = _local_index(row_lab)
    local_col = _local_index(col_lab)
    elab = row_lab[r]
    keep = ~thin[elab]
    r, c, v, elab = r[keep], c[keep], v[keep], elab[keep]
    order = np.argsort(elab, kind="stable")
    r, c, v, elab = r[order], c[order], v[order], elab[order]
    starts = np.searchsorted(elab, big, "left")
    stops = np.searchsorted(elab, big, "right")
    for lab, s0, s1 in zip(big, starts, stops):
        block = np.zeros((nrows[lab], ncols[lab]), dtype=np.int64)
        block[local_row[r[s0:s1]], local_col[c[s0:s1]]] = v[s0:s1]
        if block.shape[0] > block.shape[1]:
            block = block.T
        total += len(_rref_dense(np.ascontiguousarray(block), p)[1])
    return total


def _local_index(labels: np.ndarray) -> np.ndarray:
    """Position of each element among the elements sharing its label."""
    order = np.argsort(labels, kind="stable")
    sorted_lab = labels[order]
    first = np.searchsorted(sorted_lab, sorted_lab, "left")
    out = np.empty_like(order)
    out[order] = np.arange(labels.size) - first
    return out


def _null_space_dense(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[1]
    R, piv = _rref_dense(A, p)
    free = [j for j in range(n) if j not in set(piv)]
    N = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        N[k, f] = 1
        for i, pc in enumerate(piv):
            N[k, pc] = (-R[i, f]) % p
    return N


# --------------------------------------------------------------------------
# public operations


def rank(M: FpMatrix) -> int:
    """Rank of M over F_p."""
    if M.rows == 0 or M.cols == 0:
        return 0
    # eliminate along the shorter side
    A = M.data if M.rows <= M.cols else M.data.T
    return _rank_rows(np.ascontiguousarray(A), M.p)


def image(M: FpMatrix) -> Subspace:
    """Column space of M inside F_p^rows."""
    if M.cols == 0:
        return Subspace.zero(M.p, M.rows)
    return _row_space(np.ascontiguousarray(M.data.T), M.p)


def kernel(M: FpMatrix) -> Subspace:
    """Right null space {v : M v = 0} inside F_p^cols."""
    p, m, n = M.p, M.rows, M.cols
    if n == 0:
        return Subspace.zero(p, 0)
    if m == 0:
        return Subspace.full(p, n)
    A = M.data
    if m * n < _BLOCK_THRESHOLD:
        return _row_space(_null_space_dense(A, p), p)
    touched = np.zeros(n, dtype=bool)
    vecs = []
    for ri, ci in _blocks(A):
        touched[ci] = True
        N = _null_space_dense(A[np.ix_(ri, ci)], p)
        for row in N:
            v = np.zeros(n, dtype=np.int64)
            v[ci] = row
            vecs.append(v)
    for j in np.nonzero(~touched)[0]:
        v = np.zeros(n, dtype=np.int64)
        v[j] = 1
        vecs.append(v)
    if not vecs:
        return Subspace.zero(p, n)
    return _row_space(np.array(vecs), p)


def echelon(M: FpMatrix) -> FpMatrix:
    """Canonical reduced row-echelon form of M (zero rows dropped)."""
    S = _row_space(np.ascontiguousarray(M.data), M.p)
    return FpMatrix(M.p, S.basis.reshape(-1, M.cols))


def contains(A: Subspace, B: Subspace) -> bool:
    """True iff B is a subspace of A."""
    if A.ambient_dim != B.ambient_dim or A.p != B.p:
        raise ValueError("subspaces live in different ambient spaces")
    if B.dim == 0:
        return True
    if B.dim > A.dim:
        return False
    return not A.reduce(B.basis.T).any()


def quotient_dim(A: Subspace, B: Subspace) -> int:
    """dim A/B; B must be contained in A."""
    if not contains(A, B):
        raise NotNested(f"subspace of dim {B.dim} is not contained in subspace of dim {A.dim}")
    return A.dim - B.dim
