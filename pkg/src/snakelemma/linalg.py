"""Exact integer linear algebra.

Everything here works on Python ints, so there is no overflow anywhere.
Matrices are immutable; the elimination routines copy into plain lists,
work in place, and wrap the result again.

>>> m = IntMatrix([[2, 0], [0, 3]])
>>> snf(m).d
IntMatrix([[1, 0], [0, 6]])
>>> kernel_lattice(IntMatrix([[1, 1]])).basis
IntMatrix([[1], [-1]])
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import ContractError

Vector = tuple  # tuple of ints


class IntMatrix:
    """Dense integer matrix with explicit shape (zero rows/columns allowed)."""

    __slots__ = ("rows", "cols", "data", "_hash")

    def __init__(self, data: Iterable[Iterable[int]] = (), rows=None, cols=None):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows and not (rows > 0 and not data and cols == 0):
            raise ContractError(f"expected {rows} rows, got {len(data)}")
        if not data and rows:
            data = ((),) * rows
        for row in data:
            if len(row) != cols:
                raise ContractError(f"ragged matrix: row of length {len(row)}, expected {cols}")
        self.rows = rows
        self.cols = cols
        self.data = data
        self._hash = None

    @classmethod
    def _raw(cls, data, rows, cols):
        m = object.__new__(cls)
        m.rows = rows
        m.cols = cols
        m.data = data if rows else ()
        if rows and not cols:
            m.data = ((),) * rows
        m._hash = None
        return m

    @classmethod
    def zeros(cls, rows, cols):
        return cls._raw(tuple((0,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n):
        return cls._raw(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int):
        for c in columns:
            if len(c) != nrows:
                raise ContractError(f"column of length {len(c)}, expected {nrows}")
        data = tuple(tuple(int(c[i]) for c in columns) for i in range(nrows))
        return cls._raw(data, nrows, len(columns))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j) -> Vector:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list:
        return [tuple(c) for c in zip(*self.data)] if self.rows else [()] * self.cols

    def tolist(self):
        return [list(r) for r in self.data]

    @property
    def T(self):
        return IntMatrix._raw(tuple(self.columns()), self.cols, self.rows)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.data))
        return self._hash

    def __repr__(self):
        if not self.rows:
            return f"IntMatrix.zeros(0, {self.cols})"
        if not self.cols:
            return f"IntMatrix.zeros({self.rows}, 0)"
        return f"IntMatrix({self.tolist()})"

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ContractError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same_shape(other)
        return IntMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)),
            self.rows, self.cols)

    def __sub__(self, other):
        self._check_same_shape(other)
        return IntMatrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)),
            self.rows, self.cols)

    def __neg__(self):
        return IntMatrix._raw(tuple(tuple(-a for a in r) for r in self.data), self.rows, self.cols)

    def scale(self, k: int):
        return IntMatrix._raw(tuple(tuple(k * a for a in r) for r in self.data), self.rows, self.cols)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ContractError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.columns()
            data = tuple(
                tuple(sum(a * b for a, b in zip(r, c)) for c in ocols) for r in self.data)
            return IntMatrix._raw(data, self.rows, other.cols)
        return self.apply(other)

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise ContractError(f"vector of length {len(v)} for matrix with {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.data)

    def hstack(self, *others):
        mats = (self,) + others
        for m in others:
            if m.rows != self.rows:
                raise ContractError("hstack needs equal row counts")
        data = tuple(sum((m.data[i] for m in mats), ()) for i in range(self.rows))
        return IntMatrix._raw(data, self.rows, sum(m.cols for m in mats))

    def vstack(self, *others):
        for m in others:
            if m.cols != self.cols:
                raise ContractError("vstack needs equal column counts")
        mats = (self,) + others
        return IntMatrix._raw(sum((m.data for m in mats), ()),
                              sum(m.rows for m in mats), self.cols)

    def block_diag(self, other):
        top = self.hstack(IntMatrix.zeros(self.rows, other.cols))
        bottom = IntMatrix.zeros(other.rows, self.cols).hstack(other)
        return top.vstack(bottom)

    def is_zero(self):
        return all(not a for r in self.data for a in r)

    def det(self):
        """Bareiss fraction-free determinant."""
        if self.rows != self.cols:
            raise ContractError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self.data]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


def as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(m)


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SnfResult:
    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self):
        return [self.d[i, i] for i in range(min(self.d.shape))]


def snf(m: IntMatrix, transforms: bool = True) -> SnfResult:
    """Smith normal form ``u @ m @ v == d`` by elimination with smallest pivots.

    With ``transforms=False`` the returned ``u`` and ``v`` are ``None``.
    """
    m = as_matrix(m)
    r, c = m.shape
    a = [list(row) for row in m.data]
    u = [[int(i == j) for j in range(r)] for i in range(r)] if transforms else None
    # v is stored transposed so column operations become row operations
    vt = [[int(i == j) for j in range(c)] for i in range(c)] if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if transforms:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if transforms:
            vt[i], vt[j] = vt[j], vt[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        rd, rs = a[dst], a[src]
        for k in range(c):
            if rs[k]:
                rd[k] -= q * rs[k]
        if transforms:
            ud, us = u[dst], u[src]
            for k in range(r):
                if us[k]:
                    ud[k] -= q * us[k]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in a:
            if row[src]:
                row[dst] -= q * row[src]
        if transforms:
            vd, vs = vt[dst], vt[src]
            for k in range(c):
                if vs[k]:
                    vd[k] -= q * vs[k]

    for t in range(min(r, c)):
        best = None
        for i in range(t, r):
            row = a[i]
            for j in range(t, c):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = a[t][t]
            moved = False
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, a[i][t] // piv)
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, a[t][j] // piv)
            # leftover remainders are strictly smaller than the pivot
            cand = [(abs(a[i][t]), i, t) for i in range(t + 1, r) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t + 1, c) if a[t][j]]
            if cand:
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            for i in range(t + 1, r):
                if any(a[i][j] % piv for j in range(t + 1, c)):
                    add_row(t, i, -1)
                    moved = True
                    break
            if not moved:
                break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if transforms:
                u[t] = [-x for x in u[t]]

    d = IntMatrix._raw(tuple(map(tuple, a)), r, c)
    if not transforms:
        return SnfResult(None, d, None)
    uu = IntMatrix._raw(tuple(map(tuple, u)), r, r)
    vv = IntMatrix._raw(tuple(map(tuple, vt)), c, c).T
    return SnfResult(uu, d, vv)


def invariant_factors(m: IntMatrix) -> list:
    """Nonzero Smith diagonal entries of ``m`` (ones included)."""
    d = snf(m, transforms=False).d
    return [x for x in (d[i, i] for i in range(min(d.shape))) if x]


# ---------------------------------------------------------------------------
# Column echelon form and everything built on it

@dataclass(frozen=True)
class Echelon:
    """``m @ transform == echelon``; column ``j < rank`` has its pivot at ``pivots[j]``."""

    echelon: tuple        # columns of the echelon form
    transform: tuple      # columns of the unimodular transform
    pivots: tuple         # pivot row of each nonzero column
    nrows: int

    @property
    def rank(self):
        return len(self.pivots)


def _echelon_columns(cols, nrows, tcols=None):
    """In-place column echelon; returns pivot rows. ``tcols`` tracks the transform."""
    n = len(cols)
    r = 0
    pivots = []
    for i in range(nrows):
        if r == n:
            break
        while True:
            best = None
            for j in range(r, n):
                x = cols[j][i]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), j)
            if best is None:
                break
            j = best[1]
            if j != r:
                cols[r], cols[j] = cols[j], cols[r]
                if tcols is not None:
                    tcols[r], tcols[j] = tcols[j], tcols[r]
            cr = cols[r]
            piv = cr[i]
            clean = True
            for j in range(r + 1, n):
                cj = cols[j]
                if cj[i]:
                    q = cj[i] // piv
                    for k in range(i, nrows):
                        if cr[k]:
                            cj[k] -= q * cr[k]
                    if tcols is not None:
                        tj, tr = tcols[j], tcols[r]
                        for k in range(len(tr)):
                            if tr[k]:
                                tj[k] -= q * tr[k]
                    if cj[i]:
                        clean = False
            if clean:
                break
        if best is None:
            continue
        if cols[r][i] < 0:
            cols[r] = [-x for x in cols[r]]
            if tcols is not None:
                tcols[r] = [-x for x in tcols[r]]
        pivots.append(i)
        r += 1
    return pivots


@functools.lru_cache(maxsize=4096)
def echelon(m: IntMatrix) -> Echelon:
    cols = [list(c) for c in m.columns()]
    n = m.cols
    tcols = [[int(i == j) for i in range(n)] for j in range(n)]
    pivots = _echelon_columns(cols, m.rows, tcols)
    return Echelon(tuple(map(tuple, cols)), tuple(map(tuple, tcols)), tuple(pivots), m.rows)


def _hnf_columns(vectors, dim):
    """Canonical column HNF basis (list of column tuples) of the span of ``vectors``."""
    cols = [list(v) for v in vectors]
    pivots = _echelon_columns(cols, dim)
    cols = cols[:len(pivots)]
    for j, p in enumerate(pivots):
        cj = cols[j]
        piv = cj[p]
        for l in range(j):
            cl = cols[l]
            q = cl[p] // piv
            if q:
                for k in range(p, dim):
                    if cj[k]:
                        cl[k] -= q * cj[k]
    return [tuple(c) for c in cols]


def hnf(m: IntMatrix) -> IntMatrix:
    """Column Hermite normal form with zero columns dropped.

    Pivots are positive and entries to the left of a pivot lie in ``[0, pivot)``.

    >>> hnf(IntMatrix([[2, 3]]))
    IntMatrix([[1]])
    """
    m = as_matrix(m)
    return IntMatrix.from_columns(_hnf_columns(m.columns(), m.rows), m.rows)


def _back_substitute(cols, pivots, nrows, v):
    """Solve ``sum z_j cols[j] == v`` for an echelon basis; ``None`` if impossible."""
    res = list(v)
    z = [0] * len(cols)
    j = 0
    for i in range(nrows):
        if j < len(pivots) and pivots[j] == i:
            c = cols[j]
            q, rem = divmod(res[i], c[i])
            if rem:
                return None
            if q:
                z[j] = q
                for k in range(i, nrows):
                    if c[k]:
                        res[k] -= q * c[k]
            j += 1
        elif res[i]:
            return None
    return z


def solve(m: IntMatrix, v: Sequence[int], rng=None) -> Optional[Vector]:
    """Some integer ``x`` with ``m @ x == v``, or ``None`` when ``v`` is not in the column span.

    When ``rng`` (a ``random.Random``) is given, a random kernel vector is
    added so repeated calls return different witnesses.
    """
    m = as_matrix(m)
    if len(v) != m.rows:
        raise ContractError(f"right-hand side has length {len(v)}, matrix has {m.rows} rows")
    e = echelon(m)
    z = _back_substitute(e.echelon, e.pivots, m.rows, v)
    if z is None:
        return None
    if rng is not None:
        for j in range(e.rank, m.cols):
            z[j] = rng.randint(-3, 3)
    n = m.cols
    x = [0] * n
    for zj, t in zip(z, e.transform):
        if zj:
            for k in range(n):
                x[k] += zj * t[k]
    return tuple(x)


# ---------------------------------------------------------------------------
# Lattices

@dataclass(frozen=True)
class Lattice:
    """Sublattice of Z^ambient_dim stored by its canonical column HNF basis."""

    ambient_dim: int
    basis: IntMatrix

    @classmethod
    def span(cls, dim: int, vectors: Iterable[Sequence[int]]) -> "Lattice":
        vectors = list(vectors)
        for v in vectors:
            if len(v) != dim:
                raise ContractError(f"vector of length {len(v)} in Z^{dim}")
        return cls(dim, IntMatrix.from_columns(_hnf_columns(vectors, dim), dim))

    @classmethod
    def zero(cls, dim):
        return cls(dim, IntMatrix.zeros(dim, 0))

    @classmethod
    def full(cls, dim):
        return cls(dim, IntMatrix.identity(dim))

    @property
    def rank(self):
        return self.basis.cols

    def vectors(self):
        return self.basis.columns()

    def __contains__(self, v):
        return lattice_contains(self, v)

    def __le__(self, other):
        return all(lattice_contains(other, v) for v in self.vectors())


def _hnf_pivots(basis: IntMatrix):
    pivots = []
    for c in basis.columns():
        pivots.append(next(i for i, x in enumerate(c) if x))
    return pivots


@functools.lru_cache(maxsize=8192)
def _lattice_echelon(lat: Lattice):
    return lat.basis.columns(), _hnf_pivots(lat.basis)


def lattice_coordinates(a: Lattice, v: Sequence[int]):
    """Coefficients of ``v`` in the basis of ``a``, or ``None`` if ``v`` is not in ``a``."""
    if len(v) != a.ambient_dim:
        raise ContractError(f"vector of length {len(v)} in lattice of dimension {a.ambient_dim}")
    cols, pivots = _lattice_echelon(a)
    return _back_substitute(cols, pivots, a.ambient_dim, v)


def lattice_contains(a: Lattice, v: Sequence[int]) -> bool:
    return lattice_coordinates(a, v) is not None


def _check_dims(a: Lattice, b: Lattice):
    if a.ambient_dim != b.ambient_dim:
        raise ContractError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def lattice_sum(a: Lattice, b: Lattice) -> Lattice:
    _check_dims(a, b)
    return Lattice.span(a.ambient_dim, a.vectors() + b.vectors())


def kernel_lattice(m: IntMatrix) -> Lattice:
    """The lattice ``{x : m @ x == 0}``."""
    m = as_matrix(m)
    e = echelon(m)
    return Lattice.span(m.cols, e.transform[e.rank:])


def lattice_intersect(a: Lattice, b: Lattice) -> Lattice:
    _check_dims(a, b)
    k = a.rank
    block = a.basis.hstack(-b.basis)
    rel = kernel_lattice(block)
    vecs = [a.basis.apply(w[:k]) for w in rel.vectors()]
    return Lattice.span(a.ambient_dim, vecs)


def lattice_preimage(m: IntMatrix, target: Lattice) -> Lattice:
    """``{x : m @ x in target}``."""
    if m.rows != target.ambient_dim:
        raise ContractError("matrix rows differ from lattice dimension")
    block = m.hstack(-target.basis)
    n = m.cols
    rel = kernel_lattice(block)
    return Lattice.span(n, [w[:n] for w in rel.vectors()])


def lattice_image(m: IntMatrix, source: Lattice) -> Lattice:
    """``m`` applied to ``source`` (not yet summed with anything)."""
    return Lattice.span(m.rows, [m.apply(v) for v in source.vectors()])


def rank(m: IntMatrix) -> int:
    return echelon(as_matrix(m)).rank


def inverse_unimodular(u: IntMatrix) -> IntMatrix:
    n = u.rows
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        x = solve(u, e)
        if x is None:
            raise ContractError("matrix is not unimodular")
        cols.append(x)
    return IntMatrix.from_columns(cols, n)


def reduce_mod(lat: Lattice, v: Sequence[int]) -> Vector:
    """Representative of ``v + lat`` with each pivot coordinate in ``[0, pivot)``.

    >>> reduce_mod(Lattice.span(2, [[2, 0], [0, 3]]), (5, -1))
    (1, 2)
    """
    cols, pivots = _lattice_echelon(lat)
    v = list(v)
    for c, p in zip(cols, pivots):
        q = v[p] // c[p]
        if q:
            for k in range(p, lat.ambient_dim):
                if c[k]:
                    v[k] -= q * c[k]
    return tuple(v)
