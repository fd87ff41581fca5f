"""Finite unital rings given by structure constants over ``Z/m``.

A ring is the free module ``(Z/m)^d`` on basis ``b_0..b_{d-1}`` with
``b_i * b_j = sum_k c[i][j][k] b_k``, optionally divided by a two-sided
ideal of *relations*.  Relations make quotient rings, products of rings with
different characteristics and endomorphism rings of non-free modules
expressible in the same format.  Elements are stored by their canonical
representative modulo the relation span.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    AssociativityViolation,
    CapExceeded,
    NotHomomorphism,
    RelationViolation,
    RingMismatch,
    UnityViolation,
)
from .linalg import (
    LinearSolver,
    SpanBasis,
    dtype_for,
    howell_form,
    kernel,
    modmatmul,
    preimage,
    zero_span,
)

DEFAULT_CAP = 4096


def _vec(x, m: int, d: int) -> np.ndarray:
    if isinstance(x, RingElement):
        return np.array(x.coords, dtype=dtype_for(m))
    v = np.array(x, dtype=dtype_for(m)).reshape(-1)
    if v.shape[0] != d:
        raise ValueError(f"expected {d} coordinates, got {v.shape[0]}")
    return v % m


class FiniteRing:
    """An associative unital ring presented by structure constants."""

    def __init__(
        self,
        modulus: int,
        tensor,
        unity: Sequence[int],
        relations: SpanBasis | Iterable[Sequence[int]] | None = None,
        labels: Sequence[str] | None = None,
        validate: bool = True,
    ):
        m = int(modulus)
        if m < 1:
            raise ValueError("modulus must be positive")
        d = len(unity)
        dt = dtype_for(m)
        T = np.array(tensor, dtype=dt).reshape(d, d, d) % m if d else np.zeros((0, 0, 0), dtype=dt)
        if relations is None:
            K = zero_span(m, d)
        elif isinstance(relations, SpanBasis):
            K = relations
        else:
            K = howell_form(list(relations), m, d)
        if K.modulus != m or K.ncols != d:
            raise ValueError("relation span lives in the wrong ambient space")
        self.modulus = m
        self.dim = d
        self.tensor = T
        self.relations = K
        self.unity = K.reduce(np.array(unity, dtype=dt)) if d else np.zeros(0, dtype=dt)
        self.labels = tuple(labels) if labels is not None else tuple(f"b{i}" for i in range(d))
        if len(self.labels) != d:
            raise ValueError("one label per basis element")
        self.tensor.setflags(write=False)
        if validate:
            self.validate()

    # -- basic data ---------------------------------------------------------

    @property
    def T(self) -> np.ndarray:
        return self.tensor

    @cached_property
    def _flat(self) -> np.ndarray:
        return self.tensor.reshape(self.dim, self.dim * self.dim)

    @cached_property
    def left_basis(self) -> np.ndarray:
        """``left_basis[i]`` is the matrix of ``y -> b_i y`` on column vectors."""
        return np.ascontiguousarray(self.tensor.transpose(0, 2, 1))

    @cached_property
    def right_basis(self) -> np.ndarray:
        """``right_basis[j]`` is the matrix of ``x -> x b_j`` on column vectors."""
        return np.ascontiguousarray(self.tensor.transpose(1, 2, 0))

    @cached_property
    def key(self) -> tuple:
        return (
            self.modulus,
            self.dim,
            tuple(int(v) for v in self.tensor.reshape(-1)),
            tuple(int(v) for v in self.unity),
            self.relations.rows,
        )

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, FiniteRing) and self.key == other.key)

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        rel = f", relations={self.relations.rank}" if self.relations.rank else ""
        return f"FiniteRing(m={self.modulus}, dim={self.dim}, order={self.order}{rel})"

    @cached_property
    def order(self) -> int:
        return self.modulus**self.dim // self.relations.size

    @cached_property
    def characteristic(self) -> int:
        """Additive order of the unity."""
        for q in sorted(_divisors(self.modulus)):
            if self.is_zero(q * self.unity):
                return q
        return self.modulus

    def is_free(self) -> bool:
        return self.relations.is_zero()

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        m, d, T, K = self.modulus, self.dim, self.tensor, self.relations
        if d == 0:
            return
        if K.rank:
            rows = K.array
            right = modmatmul(rows, self._flat, m).reshape(-1, d)  # r * b_j
            left = np.einsum("ijk,rj->rik", T.astype(object), rows.astype(object)).reshape(-1, d) % m
            if not (K.contains_all(right) and K.contains_all(left.astype(dtype_for(m)))):
                raise RelationViolation("relations do not form a two-sided ideal")
        flat2 = T.reshape(d * d, d)
        # (b_i b_j) b_k  ->  [i, j, k, n]
        lhs = modmatmul(flat2, self._flat, m).reshape(d, d, d, d)
        # b_i (b_j b_k)  ->  [j, k, i, n]
        rhs = modmatmul(flat2, T.transpose(1, 0, 2).reshape(d, d * d), m).reshape(d, d, d, d)
        diff = (lhs - rhs.transpose(2, 0, 1, 3)) % m
        bad = np.nonzero(K.reduce_many(diff.reshape(-1, d)).any(axis=1))[0]
        if bad.size:
            i, j, k = np.unravel_index(int(bad[0]), (d, d, d))
            raise AssociativityViolation(int(i), int(j), int(k))
        eye = np.eye(d, dtype=dtype_for(m))
        left_unit = modmatmul(self.unity[None, :], self._flat, m).reshape(d, d)
        right_unit = np.einsum("ijk,j->ik", T.astype(object), self.unity.astype(object)) % m
        for i in range(d):
            if not (
                K.contains((left_unit[i] - eye[i]) % m)
                and K.contains((np.array(right_unit[i], dtype=dtype_for(m)) - eye[i]) % m)
            ):
                raise UnityViolation(i)

    # -- coordinates --------------------------------------------------------

    def vec(self, x) -> np.ndarray:
        """Canonical coordinate vector of ``x`` (element, sequence or array)."""
        if isinstance(x, RingElement):
            self._check(x)
            return np.array(x.coords, dtype=dtype_for(self.modulus))
        return self.relations.reduce(_vec(x, self.modulus, self.dim))

    def canon_many(self, X) -> np.ndarray:
        X = np.array(X, dtype=dtype_for(self.modulus))
        if self.dim == 0:
            return np.zeros((X.shape[0] if X.ndim == 2 else 0, 0), dtype=X.dtype)
        return self.relations.reduce_many(X.reshape(-1, self.dim))

    def _check(self, x: "RingElement") -> None:
        if x.ring is not self and x.ring != self:
            raise RingMismatch("elements belong to different rings")

    def __call__(self, x) -> "RingElement":
        return self.element(x)

    def element(self, x) -> "RingElement":
        if isinstance(x, RingElement):
            self._check(x)
            return x
        if isinstance(x, (int, np.integer)):
            return RingElement(self, tuple(int(v) for v in self.vec(int(x) * self.unity)))
        return RingElement(self, tuple(int(v) for v in self.vec(x)))

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, (0,) * self.dim)

    @property
    def one(self) -> "RingElement":
        return RingElement(self, tuple(int(v) for v in self.unity))

    def basis(self, i: int) -> "RingElement":
        e = np.zeros(self.dim, dtype=dtype_for(self.modulus))
        e[i] = 1
        return self.element(e)

    def is_zero(self, x) -> bool:
        return self.relations.contains(_vec(x, self.modulus, self.dim))

    def equal(self, x, y) -> bool:
        return self.is_zero(self.vec(x) - self.vec(y))

    # -- arithmetic on raw vectors -----------------------------------------

    def mul_vec(self, x, y) -> np.ndarray:
        m, d = self.modulus, self.dim
        x, y = _vec(x, m, d), _vec(y, m, d)
        t = modmatmul(x[None, :], self._flat, m).reshape(d, d)
        return self.relations.reduce(modmatmul(y[None, :], t, m)[0])

    def mul_many(self, X, Y) -> np.ndarray:
        """Row-wise products ``X[n] * Y[n]``."""
        m, d = self.modulus, self.dim
        X = np.array(X, dtype=dtype_for(m)).reshape(-1, d)
        Y = np.array(Y, dtype=dtype_for(m)).reshape(-1, d)
        t = modmatmul(X, self._flat, m).reshape(-1, d, d)
        out = modmatmul(Y[:, None, :], t, m)[:, 0, :]
        return self.relations.reduce_many(out)

    def add_vec(self, x, y) -> np.ndarray:
        return self.relations.reduce(_vec(x, self.modulus, self.dim) + _vec(y, self.modulus, self.dim))

    def pow_vec(self, x, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError("negative exponent")
        result = self.unity.copy()
        base = self.vec(x)
        while n:
            if n & 1:
                result = self.mul_vec(result, base)
            n >>= 1
            if n:
                base = self.mul_vec(base, base)
        return result

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of ``y -> x y`` on coordinate columns (before reduction mod relations)."""
        x = _vec(x, self.modulus, self.dim)
        return modmatmul(x[None, :], self.left_basis.reshape(self.dim, -1), self.modulus).reshape(self.dim, self.dim)

    def right_matrix(self, x) -> np.ndarray:
        """Matrix of ``y -> y x`` on coordinate columns."""
        x = _vec(x, self.modulus, self.dim)
        return modmatmul(x[None, :], self.right_basis.reshape(self.dim, -1), self.modulus).reshape(self.dim, self.dim)

    # -- spans ----------------------------------------------------------------

    def span(self, vectors) -> SpanBasis:
        """Additive span of ``vectors`` together with the relations (canonical)."""
        rows = [self.vec(v) for v in vectors]
        if not rows:
            return self.relations
        return howell_form(np.vstack([np.array(rows), self.relations.array]), self.modulus, self.dim)

    @cached_property
    def full(self) -> SpanBasis:
        return howell_form(np.eye(self.dim, dtype=dtype_for(self.modulus)), self.modulus, self.dim)

    def span_mul(self, X: SpanBasis, Y: SpanBasis) -> SpanBasis:
        """The additive span of ``X * Y``, including the relations."""
        if X.rank == 0 or Y.rank == 0:
            return self.relations
        xs = np.repeat(X.array, Y.rank, axis=0)
        ys = np.tile(Y.array, (X.rank, 1))
        return howell_form(np.vstack([self.mul_many(xs, ys), self.relations.array]), self.modulus, self.dim)

    def right_ideal(self, x) -> SpanBasis:
        """``xR`` as a span."""
        return self.span(self.left_matrix(x).T)

    def left_ideal(self, x) -> SpanBasis:
        """``Rx`` as a span."""
        return self.span(self.right_matrix(x).T)

    def two_sided_ideal(self, gens: Iterable) -> SpanBasis:
        span = self.span(list(gens))
        while True:
            grown = self.span_mul(self.full, self.span_mul(span, self.full)) + span
            if grown == span:
                return span
            span = grown

    def is_ideal(self, span: SpanBasis) -> bool:
        return self.span_mul(self.full, span) <= span and self.span_mul(span, self.full) <= span

    def _solve_mod_relations(self, A: np.ndarray, b) -> np.ndarray | None:
        """Some ``y`` with ``A y == b`` modulo the relation span."""
        m = self.modulus
        Q = self.relations.annihilator
        if Q.shape[0] == 0:
            return np.zeros(A.shape[1], dtype=dtype_for(m))
        return LinearSolver(modmatmul(Q, A, m), m).solve(modmatmul(Q, np.asarray(b)[:, None], m)[:, 0])

    def commutant(self, xs: Iterable) -> SpanBasis:
        """Span of all ``r`` with ``x r = r x`` for every ``x`` in ``xs``."""
        m, d = self.modulus, self.dim
        Q = self.relations.annihilator
        blocks = []
        for x in xs:
            D = (self.right_matrix(x) - self.left_matrix(x)) % m
            blocks.append(modmatmul(Q, D, m) if Q.shape[0] else np.zeros((0, d), dtype=dtype_for(m)))
        if not blocks:
            return self.full
        ker = kernel(np.vstack(blocks), m, d)
        return ker + self.relations

    def center(self) -> SpanBasis:
        return self.commutant(np.eye(self.dim, dtype=dtype_for(self.modulus)))

    def is_commutative(self) -> bool:
        return self.center() == self.full

    # -- enumeration ---------------------------------------------------------

    def element_array(self, cap: int | None = DEFAULT_CAP) -> np.ndarray:
        """All canonical representatives as rows of an array."""
        if cap is not None and self.order > cap:
            raise CapExceeded(self.order, cap)
        m = self.modulus
        limits = [m] * self.dim
        for c, g in self.relations.pivots:
            limits[c] = g
        grids = np.meshgrid(*[np.arange(n, dtype=dtype_for(m)) for n in limits], indexing="ij")
        if not grids:
            return np.zeros((1, 0), dtype=dtype_for(m))
        return np.stack([g.reshape(-1) for g in grids], axis=1)

    def elements(self, cap: int | None = DEFAULT_CAP) -> Iterator["RingElement"]:
        for row in self.element_array(cap):
            yield RingElement(self, tuple(int(v) for v in row))

    def idempotents(self, cap: int | None = DEFAULT_CAP) -> list["RingElement"]:
        X = self.element_array(cap)
        sq = self.mul_many(X, X)
        return [RingElement(self, tuple(int(v) for v in X[i])) for i in np.nonzero(~(sq != X).any(axis=1))[0]]

    def units(self, cap: int | None = DEFAULT_CAP) -> np.ndarray:
        """Boolean mask over ``element_array`` marking the units (by enumeration)."""
        X = self.element_array(cap)
        return _unit_mask(self, X)

    # -- inverses -------------------------------------------------------------

    def try_invert(self, x) -> "RingElement | None":
        xv = self.vec(x)
        y = self._solve_mod_relations(self.left_matrix(xv), self.unity)
        if y is None:
            return None
        y = self.vec(y)
        if not self.equal(self.mul_vec(y, xv), self.unity):
            return None
        return self.element(y)

    def is_unit(self, x) -> bool:
        return self.try_invert(x) is not None

    def is_idempotent(self, x) -> bool:
        v = self.vec(x)
        return self.equal(self.mul_vec(v, v), v)

    def nilpotency_index(self, x) -> int | None:
        """Least ``k >= 1`` with ``x^k = 0``, or ``None`` if ``x`` is not nilpotent."""
        v = self.vec(x)
        if self.order == 1:
            return 1
        p, k = v, 1
        seen = set()
        while not self.is_zero(p):
            key = tuple(int(t) for t in p)
            if key in seen:
                return None
            seen.add(key)
            p = self.mul_vec(p, v)
            k += 1
        return k


def _unit_mask(R: FiniteRing, X: np.ndarray) -> np.ndarray:
    """Mask of units among the rows ``X`` using the full multiplication table."""
    n = X.shape[0]
    one = R.unity
    mask = np.zeros(n, dtype=bool)
    for i in range(n):
        prods = R.mul_many(np.repeat(X[i][None, :], n, axis=0), X)
        mask[i] = bool((~(prods != one).any(axis=1)).any())
    return mask


def _divisors(n: int) -> list[int]:
    return [q for q in range(1, n + 1) if n % q == 0]


@dataclass(frozen=True, eq=False)
class RingElement:
    ring: FiniteRing
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.coords, dtype=dtype_for(self.ring.modulus))

    def _other(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            self.ring._check(other)
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring.element(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, tuple(self.ring.add_vec(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, tuple(self.ring.vec(-self.vec)))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, tuple(self.ring.mul_vec(self.coords, o.coords)))

    def __rmul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o * self

    def __pow__(self, n: int):
        return RingElement(self.ring, tuple(self.ring.pow_vec(self.coords, n)))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            other = self.ring.element(int(other))
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.coords == other.coords and (self.ring is other.ring or self.ring == other.ring)

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        terms = [f"{c}*{lab}" if c != 1 else lab for c, lab in zip(self.coords, self.ring.labels) if c]
        return " + ".join(terms) if terms else "0"

    def inverse(self) -> "RingElement | None":
        return self.ring.try_invert(self)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self)

    def is_idempotent(self) -> bool:
        return self.ring.is_idempotent(self)

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.coords)


@dataclass(frozen=True, eq=False)
class RingHom:
    """A unital ring homomorphism given by its matrix on coordinates."""

    source: FiniteRing
    target: FiniteRing
    matrix: np.ndarray

    def __post_init__(self):
        M = np.array(self.matrix, dtype=dtype_for(self.target.modulus)).reshape(self.target.dim, self.source.dim)
        object.__setattr__(self, "matrix", M % self.target.modulus)

    def apply_vec(self, x) -> np.ndarray:
        v = self.source.vec(x)
        return self.target.vec(modmatmul(self.matrix, v[:, None].astype(self.matrix.dtype), self.target.modulus)[:, 0])

    def __call__(self, x) -> RingElement:
        return self.target.element(self.apply_vec(x))

    def compose(self, inner: "RingHom") -> "RingHom":
        """``self o inner``."""
        if inner.target != self.source:
            raise RingMismatch("cannot compose: target and source differ")
        cols = [self.apply_vec(inner.apply_vec(np.eye(inner.source.dim, dtype=np.int64)[i])) for i in range(inner.source.dim)]
        M = np.array(cols).T if cols else np.zeros((self.target.dim, 0), dtype=np.int64)
        return RingHom(inner.source, self.target, M)

    def __mul__(self, inner: "RingHom") -> "RingHom":
        return self.compose(inner)

    def images(self) -> np.ndarray:
        """Canonical images of the source basis, one per row."""
        return self.target.canon_many(self.matrix.T)

    def equals(self, other: "RingHom") -> bool:
        return (
            self.source == other.source
            and self.target == other.target
            and not (self.images() != other.images()).any()
        )

    def is_identity(self) -> bool:
        return self.source == self.target and self.equals(identity_hom(self.source))

    def violations(self) -> list[str]:
        """Reasons this matrix fails to define a unital ring homomorphism."""
        S, R = self.source, self.target
        if R.dim == 0:
            return []
        out = []
        ms = S.modulus
        # additive well-definedness: the source relations and ms*e_i must map to zero
        probe = np.vstack([S.relations.array, ms * np.eye(S.dim, dtype=np.int64)]) if S.dim else np.zeros((0, 0))
        imgs = modmatmul(probe.astype(np.int64), self.matrix.T.astype(np.int64), R.modulus) if S.dim else probe
        if imgs.size and R.relations.reduce_many(imgs).any():
            out.append("not well defined on the source relations")
        if not R.equal(self.apply_vec(S.unity), R.unity):
            out.append("does not preserve the unity")
        if S.dim:
            F = self.images()
            prods = S.canon_many(S.tensor.reshape(-1, S.dim))
            lhs = R.canon_many(modmatmul(prods, self.matrix.T, R.modulus))
            rhs = R.mul_many(np.repeat(F, S.dim, axis=0), np.tile(F, (S.dim, 1)))
            if R.relations.reduce_many((lhs - rhs) % R.modulus).any():
                out.append("not multiplicative")
        return out

    def check(self) -> "RingHom":
        bad = self.violations()
        if bad:
            raise NotHomomorphism("; ".join(bad))
        return self

    def is_homomorphism(self) -> bool:
        return not self.violations()

    def kernel(self) -> SpanBasis:
        return hom_preimage(self, self.target.relations)

    def preimage(self, span: SpanBasis) -> SpanBasis:
        """All source elements mapped into ``span`` (a span of the target)."""
        return hom_preimage(self, span)

    def image(self) -> SpanBasis:
        return self.target.span(self.images())


def hom_preimage(f: RingHom, span: SpanBasis) -> SpanBasis:
    """``{r : f(r) in span}`` as a span of the source, moduli may differ."""
    S, R = f.source, f.target
    if S.dim == 0:
        return S.relations
    L = math.lcm(S.modulus, R.modulus)
    target = span + R.relations
    if L != R.modulus:
        target = target.lift(L)
    M = np.array(f.matrix, dtype=dtype_for(L)) % L
    pre = preimage(M, target)
    rows = pre.array % S.modulus
    return howell_form(np.vstack([rows.astype(dtype_for(S.modulus)), S.relations.array]), S.modulus, S.dim)


def identity_hom(R: FiniteRing) -> RingHom:
    return RingHom(R, R, np.eye(R.dim, dtype=np.int64))


def hom_from_images(source: FiniteRing, target: FiniteRing, images: Sequence, check: bool = True) -> RingHom:
    cols = [target.vec(x) for x in images]
    M = np.array(cols).T if cols else np.zeros((target.dim, 0), dtype=np.int64)
    f = RingHom(source, target, M)
    return f.check() if check else f


def conjugation(R: FiniteRing, u) -> RingHom:
    """The inner automorphism ``x -> u x u^-1``."""
    u = R.element(u)
    inv = u.inverse()
    if inv is None:
        raise ValueError("conjugation needs a unit")
    imgs = [R.mul_vec(R.mul_vec(u.coords, R.basis(i).coords), inv.coords) for i in range(R.dim)]
    return hom_from_images(R, R, imgs, check=False)


# ---------------------------------------------------------------------------
# extracting a ring from a span


@dataclass(eq=False)
class Embedding:
    """A ring extracted from a span of an ambient coordinate space.

    ``gens`` holds, row by row, the ambient vectors of the extracted basis.
    """

    ring: FiniteRing
    gens: np.ndarray
    ambient_zero: SpanBasis
    span: SpanBasis
    _solver: LinearSolver = field(repr=False)
    _Q: np.ndarray = field(repr=False)

    def to_ambient(self, x) -> np.ndarray:
        v = self.ring.vec(x)
        m = self.ring.modulus
        if not self.gens.shape[0]:
            return np.zeros(self.ambient_zero.ncols, dtype=dtype_for(m))
        return self.ambient_zero.reduce(modmatmul(v[None, :], self.gens, m)[0])

    def to_ambient_many(self, X) -> np.ndarray:
        X = np.array(X, dtype=dtype_for(self.ring.modulus)).reshape(-1, self.ring.dim)
        return self.ambient_zero.reduce_many(modmatmul(X, self.gens, self.ring.modulus))

    def from_ambient(self, v) -> np.ndarray:
        x = self._lookup(np.array(v).reshape(1, -1))
        if x is None:
            raise ValueError("vector is not in the span")
        return x[0]

    def from_ambient_many(self, V) -> np.ndarray:
        x = self._lookup(np.array(V).reshape(-1, self.ambient_zero.ncols))
        if x is None:
            raise ValueError("some vector is not in the span")
        return x

    def _lookup(self, V: np.ndarray) -> np.ndarray | None:
        m = self.ring.modulus
        if self._Q.shape[0] == 0:
            return np.zeros((V.shape[0], self.ring.dim), dtype=dtype_for(m))
        X, ok = self._solver.solve_many(modmatmul(V.astype(dtype_for(m)) % m, self._Q.T, m))
        if not ok.all():
            return None
        return self.ring.canon_many(X)


def extract_ring(
    span: SpanBasis,
    mul: Callable[[np.ndarray, np.ndarray], np.ndarray],
    unity,
    zero: SpanBasis | None = None,
    labels: Sequence[str] | None = None,
    mul_many: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
) -> Embedding:
    """Present a multiplicatively closed span (containing ``unity``) as a ring.

    ``mul`` multiplies ambient vectors; ``zero`` is the ambient span of vectors
    that represent zero.  A minimal generating subset of the Howell rows is
    used as basis, and the relations are everything in the coefficient space
    that maps into ``zero``.
    """
    m, n = span.modulus, span.ncols
    zero = zero_span(m, n) if zero is None else zero
    span = span + zero
    gens, cur = [], zero
    for row in span.array:
        if not cur.contains(row):
            gens.append(row)
            cur = cur + howell_form([row], m, n)
    r = len(gens)
    G = np.array(gens, dtype=dtype_for(m)).reshape(r, n)
    rel = preimage(G.T, zero) if r else zero_span(m, 0)
    Q = zero.annihilator
    solver = LinearSolver(modmatmul(Q, G.T, m), m, r) if Q.shape[0] and r else None

    def coords(V: np.ndarray) -> np.ndarray:
        if solver is None:
            return np.zeros((V.shape[0], r), dtype=dtype_for(m))
        X, ok = solver.solve_many(modmatmul(V % m, Q.T, m))
        if not ok.all():
            raise ValueError("span is not closed under multiplication")
        return X

    if r:
        xs = np.repeat(G, r, axis=0)
        ys = np.tile(G, (r, 1))
        prods = mul_many(xs, ys) if mul_many is not None else np.array([mul(a, b) for a, b in zip(xs, ys)])
        tensor = coords(np.array(prods, dtype=dtype_for(m))).reshape(r, r, r)
    else:
        tensor = np.zeros((0, 0, 0), dtype=dtype_for(m))
    u = coords(np.array(unity, dtype=dtype_for(m)).reshape(1, n))[0]
    ring = FiniteRing(m, tensor, u, relations=rel, labels=labels if labels and len(labels) == r else None, validate=False)
    return Embedding(ring, G, zero, span, solver, Q)


def quotient_ring(R: FiniteRing, ideal: SpanBasis, check: bool = True) -> FiniteRing:
    """``R / ideal`` on the same basis; the ideal becomes part of the relations."""
    K = ideal + R.relations
    if check and not R.is_ideal(K):
        raise RelationViolation("not a two-sided ideal")
    return FiniteRing(R.modulus, R.tensor, R.unity, relations=K, labels=R.labels, validate=False)


def quotient_map(R: FiniteRing, Q: FiniteRing) -> RingHom:
    return RingHom(R, Q, np.eye(R.dim, dtype=np.int64))


# ---------------------------------------------------------------------------
# constructions


def construct_ring(modulus: int, dim: int, tensor, unity, labels=None, relations=None) -> FiniteRing:
    """Validated ring from raw structure constants."""
    if len(unity) != dim:
        raise ValueError("unity has the wrong length")
    return FiniteRing(modulus, tensor, unity, relations=relations, labels=labels, validate=True)


def zmod(m: int) -> FiniteRing:
    return FiniteRing(m, [[[1]]], [1], labels=["1"])


def polynomial_quotient(m: int, coeffs: Sequence[int], var: str = "x") -> FiniteRing:
    """``(Z/m)[x] / (f)`` for monic ``f = x^n + coeffs[n-1] x^(n-1) + ... + coeffs[0]``."""
    n = len(coeffs)
    # reduction of x^k for k < 2n-1
    powers = []
    for k in range(2 * n - 1):
        v = [0] * n
        if k < n:
            v[k] = 1
        else:
            prev = powers[k - 1]
            top = prev[n - 1]
            v = [0] + prev[: n - 1]
            v = [(v[i] - top * coeffs[i]) % m for i in range(n)]
        powers.append(v)
    T = [[powers[i + j] for j in range(n)] for i in range(n)]
    labels = ["1"] + [var if k == 1 else f"{var}^{k}" for k in range(1, n)]
    return FiniteRing(m, T, [1] + [0] * (n - 1), labels=labels)


def galois_field(p: int, k: int) -> FiniteRing:
    """``F_{p^k}`` as ``F_p[x]/(f)`` for the lexicographically first irreducible monic ``f``."""
    import sympy

    x = sympy.Symbol("x")
    if k == 1:
        return zmod(p)
    for tail in itertools.product(range(p), repeat=k):
        coeffs = list(tail)
        poly = sympy.Poly([1] + coeffs[::-1], x, modulus=p)
        if poly.is_irreducible:
            return polynomial_quotient(p, coeffs)
    raise ValueError("no irreducible polynomial found")


def matrix_ring(base: FiniteRing | int, n: int) -> FiniteRing:
    """``M_n(base)`` on the basis ``E_ab (x) b_k``."""
    B = zmod(base) if isinstance(base, int) else base
    d, m = B.dim, B.modulus
    D = n * n * d
    T = np.zeros((D, D, D), dtype=dtype_for(m))
    idx = lambda a, b, k: (a * n + b) * d + k
    for a, b, c, e in itertools.product(range(n), repeat=4):
        if b != c:
            continue
        for k in range(d):
            for l in range(d):
                T[idx(a, b, k), idx(c, e, l), idx(a, e, 0) : idx(a, e, 0) + d] = B.tensor[k, l]
    unity = np.zeros(D, dtype=dtype_for(m))
    for a in range(n):
        unity[idx(a, a, 0) : idx(a, a, 0) + d] = B.unity
    rel = []
    for a, b in itertools.product(range(n), repeat=2):
        for row in B.relations.array:
            v = np.zeros(D, dtype=dtype_for(m))
            v[idx(a, b, 0) : idx(a, b, 0) + d] = row
            rel.append(v)
    labels = [f"e{a + 1}{b + 1}" + ("" if d == 1 else f"*{B.labels[k]}") for a in range(n) for b in range(n) for k in range(d)]
    return FiniteRing(m, T, unity, relations=rel or None, labels=labels, validate=False)


def upper_triangular(base: FiniteRing | int, n: int) -> FiniteRing:
    """Upper-triangular ``n x n`` matrices over ``base``."""
    B = zmod(base) if isinstance(base, int) else base
    d, m = B.dim, B.modulus
    pos = [(a, b) for a in range(n) for b in range(a, n)]
    where = {p: i for i, p in enumerate(pos)}
    D = len(pos) * d
    T = np.zeros((D, D, D), dtype=dtype_for(m))
    for (a, b), (c, e) in itertools.product(pos, repeat=2):
        if b != c:
            continue
        s, t, u = where[(a, b)] * d, where[(c, e)] * d, where[(a, e)] * d
        T[s : s + d, t : t + d, u : u + d] = B.tensor
    unity = np.zeros(D, dtype=dtype_for(m))
    for a in range(n):
        s = where[(a, a)] * d
        unity[s : s + d] = B.unity
    rel = []
    for p in pos:
        for row in B.relations.array:
            v = np.zeros(D, dtype=dtype_for(m))
            v[where[p] * d : where[p] * d + d] = row
            rel.append(v)
    labels = [f"e{a + 1}{b + 1}" + ("" if d == 1 else f"*{B.labels[k]}") for (a, b) in pos for k in range(d)]
    return FiniteRing(m, T, unity, relations=rel or None, labels=labels, validate=False)


def product_ring(*rings: FiniteRing) -> FiniteRing:
    """Direct product; factors of different characteristic are joined over the lcm."""
    M = math.lcm(*(R.modulus for R in rings)) if rings else 1
    D = sum(R.dim for R in rings)
    T = np.zeros((D, D, D), dtype=dtype_for(M))
    unity = np.zeros(D, dtype=dtype_for(M))
    rel, labels, off = [], [], 0
    for t, R in enumerate(rings):
        d = R.dim
        T[off : off + d, off : off + d, off : off + d] = R.tensor
        unity[off : off + d] = R.unity
        if R.modulus != M:
            for i in range(d):
                v = np.zeros(D, dtype=dtype_for(M))
                v[off + i] = R.modulus
                rel.append(v)
        for row in R.relations.array:
            v = np.zeros(D, dtype=dtype_for(M))
            v[off : off + d] = row
            rel.append(v)
        labels += [f"({lab},{t})" for lab in R.labels]
        off += d
    return FiniteRing(M, T, unity, relations=rel or None, labels=labels, validate=False)


def product_projection(P: FiniteRing, rings: Sequence[FiniteRing], t: int) -> RingHom:
    off = sum(R.dim for R in rings[:t])
    R = rings[t]
    M = np.zeros((R.dim, P.dim), dtype=np.int64)
    M[:, off : off + R.dim] = np.eye(R.dim, dtype=np.int64)
    return RingHom(P, R, M)


def tensor_product(R: FiniteRing, S: FiniteRing) -> FiniteRing:
    """``R (x)_{Z/m} S`` on the basis ``r_i (x) s_j``."""
    if R.modulus != S.modulus:
        raise RingMismatch("tensor product needs equal moduli")
    m = R.modulus
    T = np.einsum("ikm,jln->ijklmn", R.tensor.astype(object), S.tensor.astype(object)) % m
    D = R.dim * S.dim
    T = np.array(T.reshape(D, D, D), dtype=dtype_for(m))
    unity = np.outer(R.unity, S.unity).reshape(-1) % m
    rel = []
    for row in R.relations.array:
        for j in range(S.dim):
            rel.append(np.outer(row, np.eye(S.dim, dtype=np.int64)[j]).reshape(-1))
    for row in S.relations.array:
        for i in range(R.dim):
            rel.append(np.outer(np.eye(R.dim, dtype=np.int64)[i], row).reshape(-1))
    labels = [f"{a}(x){b}" for a in R.labels for b in S.labels]
    return FiniteRing(m, T, unity, relations=rel or None, labels=labels, validate=False)


def opposite(R: FiniteRing) -> FiniteRing:
    return FiniteRing(
        R.modulus, R.tensor.transpose(1, 0, 2), R.unity, relations=R.relations, labels=[f"{l}^op" for l in R.labels], validate=False
    )


def quaternions(m: int) -> FiniteRing:
    """Hamilton quaternions over ``Z/m`` on ``1, i, j, ij`` with ``i^2 = j^2 = -1``, ``ij = -ji``."""
    table = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }  # fmt: skip
    T = np.zeros((4, 4, 4), dtype=dtype_for(m))
    for (a, b), (c, s) in table.items():
        T[a, b, c] = s % m
    return FiniteRing(m, T, [1, 0, 0, 0], labels=["1", "i", "j", "ij"], validate=False)


def group_ring(m: int, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> FiniteRing:
    """``(Z/m)[G]`` for a group given by its multiplication table (element 0 is the identity)."""
    n = len(table)
    T = np.zeros((n, n, n), dtype=dtype_for(m))
    for g in range(n):
        for h in range(n):
            T[g, h, table[g][h]] = 1
    return FiniteRing(m, T, [1] + [0] * (n - 1), labels=labels or [f"g{g}" for g in range(n)])


def cyclic_group_ring(m: int, n: int) -> FiniteRing:
    return group_ring(m, [[(g + h) % n for h in range(n)] for g in range(n)], labels=["1"] + [f"g^{k}" for k in range(1, n)])
