"""Exact linear algebra over residue rings ``Z/m`` and over the integers.

Row spans over ``Z/m`` are kept in Howell normal form, which is canonical:
two spans are equal exactly when their Howell forms coincide.  Every other
module in the package reduces its questions (membership, kernels,
preimages, ideal products) to the routines here.

Vectors are numpy integer arrays.  For moduli below ``2**24`` the arrays use
``int64``, so products and dot products of moderate length stay below
``2**62``.  Larger moduli fall back to Python integers via ``dtype=object``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Sequence

import numpy as np

_INT64_LIMIT = 2**24


def dtype_for(modulus: int):
    return np.int64 if modulus < _INT64_LIMIT else object


def modmatmul(A, B, modulus: int) -> np.ndarray:
    """``A @ B`` reduced modulo ``modulus`` without overflow.

    Uses float64 BLAS when every dot product is provably below ``2**53``.
    """
    A, B = np.asarray(A), np.asarray(B)
    inner = A.shape[-1] if A.ndim else 1
    bound = inner * (modulus - 1) ** 2
    if bound < 2**53:
        out = np.matmul(A.astype(np.float64), B.astype(np.float64))
        return np.mod(out, modulus).astype(dtype_for(modulus))
    if bound < 2**62 and dtype_for(modulus) is np.int64:
        return np.matmul(A.astype(np.int64), B.astype(np.int64)) % modulus
    return np.matmul(A.astype(object), B.astype(object)) % modulus


def as_matrix(rows, modulus: int, ncols: int | None = None) -> np.ndarray:
    """Coerce ``rows`` into a 2-d array reduced modulo ``modulus``."""
    dt = dtype_for(modulus)
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        arr = rows.astype(dt) if rows.dtype != dt else rows
    else:
        rows = [list(r) for r in rows]
        if not rows:
            if ncols is None:
                raise ValueError("cannot infer width of an empty matrix")
            return np.zeros((0, ncols), dtype=dt)
        arr = np.array([[int(v) for v in r] for r in rows], dtype=dt)
    if ncols is not None and arr.shape[1] != ncols:
        raise ValueError(f"expected {ncols} columns, got {arr.shape[1]}")
    return arr % modulus


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b)``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


def unit_normalizer(a: int, modulus: int) -> int:
    """Smallest unit ``u`` of ``Z/modulus`` with ``u*a == gcd(a, modulus)``."""
    a %= modulus
    g = math.gcd(a, modulus)
    mp = modulus // g
    u0 = pow(a // g, -1, mp) if mp > 1 else 0
    u = u0
    while math.gcd(u, modulus) != 1:
        u += mp
    return u % modulus if modulus > 1 else 0


def _howell(mat: np.ndarray, m: int) -> np.ndarray:
    """Howell normal form of the row span of ``mat`` (entries already mod m).

    Pivot selection is by leftmost column; within a column the rows are
    merged by a vectorised Euclidean reduction, the surviving pivot is scaled
    by the smallest unit that turns it into a divisor of ``m``, and the
    annihilator multiple of each pivot row is fed back into the later columns
    (this is what makes the form canonical rather than merely echelon).
    """
    n = mat.shape[1]
    if m == 1:
        return np.zeros((0, n), dtype=mat.dtype)
    pending = mat[np.any(mat != 0, axis=1)]
    basis: list[np.ndarray] = []
    pivcols: list[int] = []
    for col in range(n):
        if pending.shape[0] == 0:
            break
        while True:
            nz = np.nonzero(pending[:, col])[0]
            if len(nz) <= 1:
                break
            vals = pending[nz, col]
            k = nz[int(np.argmin(vals))]
            q = vals // pending[k, col]
            q[nz == k] = 0
            pending[nz] = (pending[nz] - q[:, None] * pending[k]) % m
        nz = np.nonzero(pending[:, col])[0]
        if len(nz) == 0:
            continue
        k = int(nz[0])
        piv = pending[k]
        a = int(piv[col])
        piv = (piv * unit_normalizer(a, m)) % m
        g = int(piv[col])
        ann = (piv * (m // g)) % m
        rest = np.delete(pending, k, axis=0)
        if ann.any():
            rest = np.vstack([rest, ann[None, :]])
        pending = rest[np.any(rest != 0, axis=1)]
        basis.append(piv)
        pivcols.append(col)
    if not basis:
        return np.zeros((0, n), dtype=mat.dtype)
    H = np.array(basis, dtype=mat.dtype)
    for i, c in enumerate(pivcols):
        g = H[i, c]
        if i:
            q = H[:i, c] // g
            H[:i] = (H[:i] - q[:, None] * H[i]) % m
    return H


@dataclass(frozen=True)
class SpanBasis:
    """A row span over ``Z/modulus`` stored in Howell normal form."""

    modulus: int
    ncols: int
    rows: tuple[tuple[int, ...], ...]

    @cached_property
    def array(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.ncols), dtype=dtype_for(self.modulus))
        return np.array(self.rows, dtype=dtype_for(self.modulus))

    @cached_property
    def pivots(self) -> tuple[tuple[int, int], ...]:
        out = []
        for r in self.rows:
            c = next(i for i, v in enumerate(r) if v)
            out.append((c, r[c]))
        return tuple(out)

    @property
    def rank(self) -> int:
        """Number of Howell rows."""
        return len(self.rows)

    @cached_property
    def size(self) -> int:
        """Number of vectors in the span."""
        out = 1
        for _, g in self.pivots:
            out *= self.modulus // g
        return out

    def is_zero(self) -> bool:
        return not self.rows

    def is_full(self) -> bool:
        return self.size == self.modulus**self.ncols

    def reduce(self, v) -> np.ndarray:
        """Canonical representative of ``v`` modulo this span."""
        w = np.array(v, dtype=dtype_for(self.modulus)).reshape(-1) % self.modulus
        H = self.array
        for i, (c, g) in enumerate(self.pivots):
            q = w[c] // g
            if q:
                w = (w - q * H[i]) % self.modulus
        return w

    def reduce_many(self, V: np.ndarray) -> np.ndarray:
        """Reduce every row of ``V`` modulo this span."""
        W = np.array(V, dtype=dtype_for(self.modulus)) % self.modulus
        if W.ndim == 1:
            return self.reduce(W)
        H = self.array
        for i, (c, g) in enumerate(self.pivots):
            q = W[:, c] // g
            if q.any():
                W = (W - q[:, None] * H[i]) % self.modulus
        return W

    def contains(self, v) -> bool:
        """Span membership by greedy reduction (exact thanks to the Howell property)."""
        w = np.array(v, dtype=dtype_for(self.modulus)).reshape(-1) % self.modulus
        H = self.array
        for i, (c, g) in enumerate(self.pivots):
            if w[c] % g:
                return False
            q = w[c] // g
            if q:
                w = (w - q * H[i]) % self.modulus
        return not w.any()

    def contains_all(self, V) -> bool:
        W = np.array(V, dtype=dtype_for(self.modulus))
        if W.size == 0:
            return True
        W = W.reshape(-1, self.ncols) % self.modulus
        H = self.array
        for i, (c, g) in enumerate(self.pivots):
            if (W[:, c] % g).any():
                return False
            q = W[:, c] // g
            if q.any():
                W = (W - q[:, None] * H[i]) % self.modulus
        return not W.any()

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubset(self, other: "SpanBasis") -> bool:
        _check_compatible(self, other)
        return other.contains_all(self.array)

    def __le__(self, other: "SpanBasis") -> bool:
        return self.issubset(other)

    def __lt__(self, other: "SpanBasis") -> bool:
        return self.issubset(other) and self != other

    def __add__(self, other: "SpanBasis") -> "SpanBasis":
        _check_compatible(self, other)
        return howell_form(np.vstack([self.array, other.array]), self.modulus, self.ncols)

    def intersect(self, other: "SpanBasis") -> "SpanBasis":
        """Intersection of two spans, via the kernel of ``[X^T | -Y^T]``."""
        _check_compatible(self, other)
        m = self.modulus
        X, Y = self.array, other.array
        if X.shape[0] == 0 or Y.shape[0] == 0:
            return zero_span(m, self.ncols)
        A = np.hstack([X.T, (-Y.T) % m])
        K = kernel(A, m).array
        return howell_form(modmatmul(K[:, : X.shape[0]], X, m), m, self.ncols)

    def __and__(self, other: "SpanBasis") -> "SpanBasis":
        return self.intersect(other)

    @cached_property
    def annihilator(self) -> np.ndarray:
        """Rows ``Q`` with ``{v : Q v = 0} == span`` (double annihilator over ``Z/m``)."""
        if not self.rows:
            return np.eye(self.ncols, dtype=dtype_for(self.modulus)) % self.modulus
        return kernel(self.array, self.modulus).array

    def elements(self) -> Iterator[tuple[int, ...]]:
        """Enumerate every vector of the span exactly once."""
        m = self.modulus
        orders = [m // g for _, g in self.pivots]
        H = [np.array(r, dtype=object) for r in self.rows]
        zero = np.zeros(self.ncols, dtype=object)

        def rec(i, acc):
            if i == len(H):
                yield tuple(int(x) % m for x in acc)
                return
            for c in range(orders[i]):
                yield from rec(i + 1, acc + c * H[i])

        yield from rec(0, zero)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def lift(self, modulus: int) -> "SpanBasis":
        """Preimage of this span in ``(Z/modulus)^n`` for a multiple ``modulus``."""
        if modulus % self.modulus:
            raise ValueError("target modulus must be a multiple")
        extra = self.modulus * np.eye(self.ncols, dtype=dtype_for(modulus))
        return howell_form(np.vstack([self.array.astype(dtype_for(modulus)), extra]), modulus, self.ncols)


def _check_compatible(a: SpanBasis, b: SpanBasis) -> None:
    if a.modulus != b.modulus or a.ncols != b.ncols:
        raise ValueError("spans live in different ambient spaces")


def howell_form(rows, modulus: int, ncols: int | None = None) -> SpanBasis:
    """Canonical Howell normal form of the row span of ``rows`` over ``Z/modulus``."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    mat = as_matrix(rows, modulus, ncols)
    H = _howell(mat.copy(), modulus)
    return SpanBasis(modulus, mat.shape[1], tuple(tuple(int(x) for x in r) for r in H))


def zero_span(modulus: int, ncols: int) -> SpanBasis:
    return SpanBasis(modulus, ncols, ())


def full_span(modulus: int, ncols: int) -> SpanBasis:
    return howell_form(np.eye(ncols, dtype=dtype_for(modulus)), modulus, ncols)


def direct_sum(spans: Sequence[SpanBasis]) -> SpanBasis:
    """Block direct sum of spans over a common modulus."""
    m = spans[0].modulus
    n = sum(s.ncols for s in spans)
    blocks, off = [], 0
    for s in spans:
        if s.modulus != m:
            raise ValueError("moduli differ")
        if s.rows:
            b = np.zeros((s.rank, n), dtype=dtype_for(m))
            b[:, off : off + s.ncols] = s.array
            blocks.append(b)
        off += s.ncols
    if not blocks:
        return zero_span(m, n)
    return howell_form(np.vstack(blocks), m, n)


class LinearSolver:
    """Solve ``A x = b`` over ``Z/modulus`` for many right-hand sides.

    The Howell form of ``[A^T | I]`` is computed once; a right-hand side is
    solvable iff ``[b | 0]`` reduces to zero on the first block, and the
    accumulated multipliers on the second block give the solution.
    """

    def __init__(self, A, modulus: int, ncols: int | None = None):
        m = modulus
        A = as_matrix(A, m, ncols)
        self.modulus = m
        self.nrows, self.nvars = A.shape
        aug = np.hstack([A.T % m, np.eye(self.nvars, dtype=dtype_for(m))])
        H = _howell(aug.copy(), m)
        r = self.nrows
        piv = [int(np.nonzero(row)[0][0]) for row in H]
        self._solve_rows = [(c, int(H[i, c]), H[i]) for i, c in enumerate(piv) if c < r]
        ker = [H[i, r:] for i, c in enumerate(piv) if c >= r]
        self.kernel = howell_form(np.array(ker, dtype=dtype_for(m)).reshape(-1, self.nvars), m, self.nvars)
        self._A = A

    def solve(self, b) -> np.ndarray | None:
        m = self.modulus
        b = np.array(b, dtype=dtype_for(m)).reshape(-1) % m
        if b.shape[0] != self.nrows:
            raise ValueError("dimension mismatch between A and b")
        w = np.concatenate([b, np.zeros(self.nvars, dtype=dtype_for(m))])
        for c, g, row in self._solve_rows:
            if w[c] % g:
                return None
            q = w[c] // g
            if q:
                w = (w - q * row) % m
        if w[: self.nrows].any():
            return None
        x = (-w[self.nrows :]) % m
        return x

    def solve_many(self, B) -> tuple[np.ndarray, np.ndarray]:
        """Solve for every row of ``B``; returns ``(X, ok)`` with ``ok`` a boolean mask."""
        m = self.modulus
        B = np.array(B, dtype=dtype_for(m)).reshape(-1, self.nrows) % m
        W = np.hstack([B, np.zeros((B.shape[0], self.nvars), dtype=dtype_for(m))])
        for c, g, row in self._solve_rows:
            q = W[:, c] // g
            if q.any():
                W = (W - q[:, None] * row) % m
        ok = ~W[:, : self.nrows].any(axis=1)
        return (-W[:, self.nrows :]) % m, ok


def kernel(A, modulus: int, ncols: int | None = None) -> SpanBasis:
    """Span of all ``x`` with ``A x = 0`` over ``Z/modulus``."""
    A = np.asarray(A)
    if A.ndim == 2 and A.shape[0] == 0:
        n = A.shape[1] if ncols is None else ncols
        return full_span(modulus, n)
    m = modulus
    A = as_matrix(A, m, ncols)
    nvars = A.shape[1]
    aug = np.hstack([A.T, np.eye(nvars, dtype=dtype_for(m))])
    H = _howell(aug.copy(), m)
    r = A.shape[0]
    ker = [row[r:] for row in H if not row[:r].any()]
    return howell_form(np.array(ker, dtype=dtype_for(m)).reshape(-1, nvars), m, nvars)


def solve_linear(A, b, modulus: int) -> tuple[np.ndarray | None, SpanBasis]:
    """One solution of ``A x = b`` (or ``None``) together with the kernel of ``A``."""
    A = np.asarray(A)
    b = np.asarray(b).reshape(-1)
    if A.shape[0] != b.shape[0]:
        raise ValueError(f"A has {A.shape[0]} rows but b has {b.shape[0]} entries")
    if A.shape[0] == 0:
        return np.zeros(A.shape[1], dtype=dtype_for(modulus)), full_span(modulus, A.shape[1])
    solver = LinearSolver(A, modulus)
    return solver.solve(b), solver.kernel


def preimage(A, target: SpanBasis) -> SpanBasis:
    """Span of all ``x`` with ``A x`` in ``target``."""
    m = target.modulus
    A = as_matrix(A, m)
    Q = target.annihilator
    if Q.shape[0] == 0:
        return full_span(m, A.shape[1])
    return kernel(modmatmul(Q, A, m), m, A.shape[1])


def image(A, modulus: int) -> SpanBasis:
    """Span of the columns of ``A``."""
    A = as_matrix(A, modulus)
    return howell_form(A.T, modulus, A.shape[0])


def span_product(X: SpanBasis, Y: SpanBasis, mul: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> SpanBasis:
    """Additive span of all products ``x*y`` of basis rows, for a bilinear ``mul``."""
    if X.modulus != Y.modulus:
        raise ValueError("moduli differ")
    prods = [mul(x, y) for x in X.array for y in Y.array]
    if not prods:
        n = X.ncols
        return zero_span(X.modulus, n)
    return howell_form(np.array(prods), X.modulus)


# ---------------------------------------------------------------------------
# integer matrices


def smith_form(A: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form over the integers.

    Returns ``(U, D, V)`` with ``U*A*V == D``, ``D`` diagonal with
    non-negative entries ``d1 | d2 | ...`` and ``U``, ``V`` unimodular.
    """
    D = [[int(x) for x in row] for row in A]
    r = len(D)
    c = len(D[0]) if r else 0
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    V = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, r):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, c):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, r):
                    if D[i][t] and (best is None or abs(D[i][t]) < abs(D[best][t])):
                        best = i
                swap_rows(t, best)
                bj = min((j for j in range(t, c) if D[t][j]), key=lambda j: abs(D[t][j]))
                swap_cols(t, bj)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, r) for j in range(t + 1, c) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def int_solve(A: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[list[int] | None, list[list[int]]]:
    """Integer solution of ``A x = b`` (or ``None``) and a basis of the integer kernel."""
    A = [[int(x) for x in row] for row in A]
    r = len(A)
    c = len(A[0]) if r else 0
    if r == 0:
        return [0] * c, [[int(i == j) for j in range(c)] for i in range(c)]
    U, D, V = smith_form(A)
    ub = [sum(u * int(x) for u, x in zip(row, b)) for row in U]
    rank = sum(1 for i in range(min(r, c)) if D[i][i])
    y = [0] * c
    ok = True
    for i in range(r):
        if i < rank:
            if ub[i] % D[i][i]:
                ok = False
                break
            y[i] = ub[i] // D[i][i]
        elif ub[i]:
            ok = False
            break
    ker = [[V[row][k] for row in range(c)] for k in range(rank, c)]
    if not ok:
        return None, ker
    x = [sum(V[i][k] * y[k] for k in range(c)) for i in range(c)]
    return x, ker


def int_det(A: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    M = [[int(x) for x in row] for row in A]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if M[i][k]), None)
            if sw is None:
                return 0
            M[k], M[sw] = M[sw], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# lightweight value types


@dataclass(frozen=True)
class Residue:
    """An element of ``Z/modulus``."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _other(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ValueError("residues with different moduli")
            return other.value
        return int(other)

    def __add__(self, other):
        return Residue(self.value + self._other(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._other(other), self.modulus)

    def __mul__(self, other):
        return Residue(self.value * self._other(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class ResMatrix:
    """A matrix over ``Z/modulus``; entries are reduced on construction."""

    modulus: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) % self.modulus for v in r) for r in self.entries)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), (len(self.entries[0]) if self.entries else 0)

    def to_array(self) -> np.ndarray:
        return as_matrix(self.entries, self.modulus, self.shape[1])

    def __matmul__(self, other: "ResMatrix") -> "ResMatrix":
        if other.modulus != self.modulus:
            raise ValueError("moduli differ")
        return ResMatrix(self.modulus, tuple(map(tuple, (self.to_array() @ other.to_array()) % self.modulus)))
