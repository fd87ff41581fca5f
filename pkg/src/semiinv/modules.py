"""Finite right modules over finite rings.

A module is ``(Z/m)^t`` modulo a relation span, with one ``t x t`` matrix per
ring basis element: the coordinates of ``x * b_i`` are ``A_i @ x``.  Module
maps are matrices ``F`` (target rank by source rank) acting on columns;
they are flattened row by row when spans of maps are needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import CapExceeded, ModuleError, RingMismatch
from .fitting import associated_idempotent
from .linalg import (
    SpanBasis,
    dtype_for,
    howell_form,
    kernel,
    modmatmul,
    preimage,
    smith_form,
    zero_span,
)
from .radical import SemiperfectCertificate, semiperfect_certificate
from .rings import DEFAULT_CAP, Embedding, FiniteRing, RingHom, extract_ring, quotient_ring, zmod
from .subrings import MainTheoremReport, Subring, verify_main_theorem


class FiniteModule:
    """A finite right module given by action matrices on ``(Z/m)^t / relations``."""

    def __init__(self, ring: FiniteRing, rank: int, relations=None, action=None, validate: bool = True):
        m = ring.modulus
        self.ring = ring
        self.rank = int(rank)
        t = self.rank
        if relations is None:
            rel = zero_span(m, t)
        elif isinstance(relations, SpanBasis):
            rel = relations
        else:
            rel = howell_form(list(relations), m, t)
        self.relations = rel
        if action is None:
            raise ModuleError("action matrices are required")
        A = np.array(action, dtype=dtype_for(m)).reshape(ring.dim, t, t) % m
        A.setflags(write=False)
        self.action = A
        if validate:
            self.validate()

    def __repr__(self) -> str:
        return f"FiniteModule(rank={self.rank}, order={self.order}, ring={self.ring!r})"

    @property
    def modulus(self) -> int:
        return self.ring.modulus

    @cached_property
    def order(self) -> int:
        return self.modulus**self.rank // self.relations.size

    def is_zero_module(self) -> bool:
        return self.order == 1

    def vec(self, x) -> np.ndarray:
        v = np.array(x, dtype=dtype_for(self.modulus)).reshape(-1)
        if v.shape[0] != self.rank:
            raise ValueError("wrong number of module coordinates")
        return self.relations.reduce(v % self.modulus)

    def action_of(self, r) -> np.ndarray:
        """The matrix of ``x -> x r``."""
        rv = self.ring.vec(r)
        t = self.rank
        return modmatmul(rv[None, :], self.action.reshape(self.ring.dim, t * t), self.modulus).reshape(t, t)

    def act(self, x, r) -> np.ndarray:
        return self.vec(modmatmul(self.action_of(r), self.vec(x)[:, None], self.modulus)[:, 0])

    def validate(self) -> None:
        R, m, t = self.ring, self.modulus, self.rank
        rel = self.relations
        cols = np.eye(t, dtype=dtype_for(m))
        for A in self.action:
            if rel.rank and not rel.contains_all(modmatmul(rel.array, A.T, m)):
                raise ModuleError("action does not preserve the relations")
        d = R.dim
        for i in range(d):
            for j in range(d):
                lhs = modmatmul(self.action[j], self.action[i], m)
                rhs = self.action_of(R.tensor[i, j])
                if not rel.contains_all(((lhs - rhs) % m).T):
                    raise ModuleError(f"action is not associative on b{i}, b{j}")
        one = self.action_of(R.unity)
        if not rel.contains_all(((one - cols) % m).T):
            raise ModuleError("unity does not act as the identity")
        for r in R.relations.array:
            if not rel.contains_all(self.action_of(r).T):
                raise ModuleError("ring relations do not act as zero")

    def element_array(self, cap: int | None = DEFAULT_CAP) -> np.ndarray:
        if cap is not None and self.order > cap:
            raise CapExceeded(self.order, cap)
        m = self.modulus
        limits = [m] * self.rank
        for c, g in self.relations.pivots:
            limits[c] = g
        if not limits:
            return np.zeros((1, 0), dtype=dtype_for(m))
        grids = np.meshgrid(*[np.arange(n, dtype=dtype_for(m)) for n in limits], indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=1)

    def span(self, vectors) -> SpanBasis:
        rows = [np.array(v, dtype=dtype_for(self.modulus)).reshape(-1) for v in vectors]
        stack = np.vstack(rows + [self.relations.array]) if rows else self.relations.array
        return howell_form(stack, self.modulus, self.rank)

    def submodule_span(self, gens) -> SpanBasis:
        """The submodule generated by ``gens`` (relations included)."""
        span = self.span(list(gens))
        while True:
            imgs = [modmatmul(span.array, A.T, self.modulus) for A in self.action]
            grown = span + self.span(np.vstack(imgs)) if span.rank else span
            if grown == span:
                return span
            span = grown

    def is_submodule(self, span: SpanBasis) -> bool:
        return all(span.contains_all(modmatmul(span.array, A.T, self.modulus)) for A in self.action)

    def additive_invariants(self) -> list[int]:
        """Orders of the cyclic factors of the underlying abelian group (nontrivial, ascending)."""
        t, m = self.rank, self.modulus
        rows = [list(map(int, r)) for r in self.relations.array] + [[m if i == j else 0 for j in range(t)] for i in range(t)]
        if not rows:
            return []
        _, D, _ = smith_form(rows)
        diag = [abs(D[i][i]) for i in range(min(len(D), t))]
        return sorted(d for d in diag if d != 1)

    def annihilated_count(self, ideal_gens: Sequence) -> int:
        """``|{x : x r = 0 for r in ideal_gens}|`` (the order of Hom(R/I, M) for I generated by them)."""
        mats = [self.action_of(r) for r in ideal_gens]
        if not mats:
            return self.order
        ker = preimage(np.vstack(mats), _stack_span([self.relations] * len(mats)))
        return ker.size // self.relations.size


def _stack_span(spans: Sequence[SpanBasis]) -> SpanBasis:
    from .linalg import direct_sum

    return direct_sum(list(spans))


# ---------------------------------------------------------------------------
# constructions


def regular_module(R: FiniteRing) -> FiniteModule:
    """``R`` as a right module over itself."""
    return FiniteModule(R, R.dim, R.relations, R.right_basis, validate=False)


def free_module(R: FiniteRing, n: int) -> FiniteModule:
    return direct_sum_modules([regular_module(R)] * n) if n else zero_module(R)


def zero_module(R: FiniteRing) -> FiniteModule:
    return FiniteModule(R, 0, None, np.zeros((R.dim, 0, 0), dtype=np.int64), validate=False)


def cyclic_group(order: int, modulus: int) -> FiniteModule:
    """``Z/order`` as a module over ``Z/modulus`` (``order`` must divide ``modulus``)."""
    if modulus % order:
        raise ModuleError("order must divide the modulus")
    return FiniteModule(zmod(modulus), 1, [[order]], [[[1]]], validate=False)


def abelian_group(orders: Sequence[int], modulus: int | None = None) -> FiniteModule:
    """``Z/o_1 + ... + Z/o_k`` over ``Z/modulus`` (default: the exponent)."""
    import math

    N = modulus or (math.lcm(*orders) if orders else 1)
    if not orders:
        return zero_module(zmod(N))
    return direct_sum_modules([cyclic_group(o, N) for o in orders])


def direct_sum_modules(mods: Sequence[FiniteModule]) -> FiniteModule:
    R = mods[0].ring
    if any(M.ring != R for M in mods):
        raise RingMismatch("direct sum of modules over different rings")
    t = sum(M.rank for M in mods)
    m = R.modulus
    A = np.zeros((R.dim, t, t), dtype=dtype_for(m))
    rel, off = [], 0
    for M in mods:
        A[:, off : off + M.rank, off : off + M.rank] = M.action
        for r in M.relations.array:
            v = np.zeros(t, dtype=dtype_for(m))
            v[off : off + M.rank] = r
            rel.append(v)
        off += M.rank
    return FiniteModule(R, t, rel or None, A, validate=False)


@dataclass
class SubmoduleEmbedding:
    module: FiniteModule  # the submodule in its own coordinates
    gens: np.ndarray  # ambient vectors of its coordinate basis, one per row
    ambient: FiniteModule

    def inclusion(self) -> np.ndarray:
        """Matrix of the inclusion (ambient rank by submodule rank)."""
        return self.gens.T.copy()

    def coords(self, V) -> np.ndarray:
        """Submodule coordinates of ambient vectors lying in the submodule."""
        M, m = self.ambient, self.ambient.modulus
        Q = M.relations.annihilator
        V = np.array(V, dtype=dtype_for(m)).reshape(-1, M.rank)
        if Q.shape[0] == 0 or self.gens.shape[0] == 0:
            return np.zeros((V.shape[0], self.module.rank), dtype=dtype_for(m))
        from .linalg import LinearSolver

        solver = LinearSolver(modmatmul(Q, self.gens.T, m), m, self.gens.shape[0])
        X, ok = solver.solve_many(modmatmul(V, Q.T, m))
        if not ok.all():
            raise ModuleError("vector outside the submodule")
        return self.module.relations.reduce_many(X)


def submodule(M: FiniteModule, span: SpanBasis) -> SubmoduleEmbedding:
    """Present a submodule (given as a span) as a module in its own right."""
    m = M.modulus
    span = span + M.relations
    gens, cur = [], M.relations
    for row in span.array:
        if not cur.contains(row):
            gens.append(row)
            cur = cur + howell_form([row], m, M.rank)
    k = len(gens)
    G = np.array(gens, dtype=dtype_for(m)).reshape(k, M.rank)
    rel = preimage(G.T, M.relations) if k else zero_span(m, 0)
    sub = FiniteModule(M.ring, k, rel, np.zeros((M.ring.dim, k, k), dtype=np.int64), validate=False)
    emb = SubmoduleEmbedding(sub, G, M)
    acts = []
    for A in M.action:
        imgs = modmatmul(G, A.T, m)  # rows: A g_j
        acts.append(emb.coords(imgs).T if k else np.zeros((0, 0), dtype=np.int64))
    sub.action = np.array(acts, dtype=dtype_for(m)).reshape(M.ring.dim, k, k)
    return emb


def quotient_module(M: FiniteModule, span: SpanBasis) -> FiniteModule:
    if not M.is_submodule(span):
        raise ModuleError("not a submodule")
    return FiniteModule(M.ring, M.rank, span + M.relations, M.action, validate=False)


def change_basis(M: FiniteModule, P: np.ndarray) -> FiniteModule:
    """The same module in new coordinates ``y = P x`` (``P`` invertible mod ``m``)."""
    from .linalg import LinearSolver

    m = M.modulus
    P = np.array(P, dtype=dtype_for(m)) % m
    solver = LinearSolver(P, m)
    Pinv, ok = solver.solve_many(np.eye(M.rank, dtype=dtype_for(m)))
    if not ok.all():
        raise ModuleError("basis change is not invertible")
    Pinv = Pinv.T
    rel = howell_form(modmatmul(M.relations.array, P.T, m), m, M.rank) if M.relations.rank else None
    A = np.array([modmatmul(modmatmul(P, Ai, m), Pinv, m) for Ai in M.action]).reshape(M.ring.dim, M.rank, M.rank)
    return FiniteModule(M.ring, M.rank, rel, A, validate=False)


def restrict_scalars(M: FiniteModule, emb: Embedding) -> FiniteModule:
    """``M`` as a module over the extracted subring ``emb.ring``."""
    m = M.modulus
    R0 = emb.ring
    t = M.rank
    A = modmatmul(emb.gens, M.action.reshape(M.ring.dim, t * t), m).reshape(R0.dim, t, t)
    return FiniteModule(R0, t, M.relations, A, validate=False)


# ---------------------------------------------------------------------------
# Hom and End


@dataclass
class HomSpace:
    source: FiniteModule
    target: FiniteModule
    span: SpanBasis  # flattened intertwiners, zero maps included
    zero: SpanBasis  # flattened maps with image inside the target relations

    @property
    def order(self) -> int:
        return self.span.size // self.zero.size

    def matrices(self) -> list[np.ndarray]:
        """Additive generators of the Hom group as matrices."""
        tN, tM = self.target.rank, self.source.rank
        return [r.reshape(tN, tM) for r in self.span.array if not self.zero.contains(r)]

    def contains(self, F) -> bool:
        return self.span.contains(np.array(F).reshape(-1) % self.span.modulus)

    def elements(self, cap: int = DEFAULT_CAP):
        """Every map exactly once, as matrices in canonical form."""
        if self.order > cap:
            raise CapExceeded(self.order, cap)
        tN, tM = self.target.rank, self.source.rank
        seen = set()
        for v in self.span.elements():
            w = self.zero.reduce(np.array(v))
            key = tuple(int(x) for x in w)
            if key not in seen:
                seen.add(key)
                yield w.reshape(tN, tM)


def _column_selector(tN: int, tM: int, v: np.ndarray) -> np.ndarray:
    """Matrix sending flattened ``F`` (row-major) to ``F @ v``."""
    return np.kron(np.eye(tN, dtype=np.int64), np.asarray(v, dtype=np.int64).reshape(1, tM))


def _zero_maps(M: FiniteModule, N: FiniteModule) -> SpanBasis:
    m, tM, tN = M.modulus, M.rank, N.rank
    if tM * tN == 0:
        return zero_span(m, tM * tN)
    Q = N.relations.annihilator
    if Q.shape[0] == 0:
        return howell_form(np.eye(tM * tN, dtype=np.int64), m, tM * tN)
    blocks = [modmatmul(Q, _column_selector(tN, tM, e), m) for e in np.eye(tM, dtype=np.int64)]
    return kernel(np.vstack(blocks), m, tM * tN)


def hom_space(M: FiniteModule, N: FiniteModule) -> HomSpace:
    """All module maps ``M -> N`` as a span of flattened matrices."""
    if M.ring != N.ring:
        raise RingMismatch("modules over different rings")
    m, tM, tN = M.modulus, M.rank, N.rank
    n = tM * tN
    zero = _zero_maps(M, N)
    if n == 0:
        return HomSpace(M, N, zero, zero)
    Q = N.relations.annihilator
    if Q.shape[0] == 0:
        full = howell_form(np.eye(n, dtype=np.int64), m, n)
        return HomSpace(M, N, full, full)
    blocks = []
    for r in M.relations.array:
        blocks.append(modmatmul(Q, _column_selector(tN, tM, r), m))
    eyeM = np.eye(tM, dtype=np.int64)
    for AM, AN in zip(M.action, N.action):
        for l in range(tM):
            lhs = _column_selector(tN, tM, AM[:, l])
            rhs = modmatmul(AN, _column_selector(tN, tM, eyeM[l]), m)
            blocks.append(modmatmul(Q, (lhs - rhs) % m, m))
    span = kernel(np.vstack(blocks), m, n) if blocks else howell_form(np.eye(n, dtype=np.int64), m, n)
    return HomSpace(M, N, span, zero)


def is_module_map(M: FiniteModule, N: FiniteModule, F) -> bool:
    return hom_space(M, N).contains(F)


def is_isomorphism(M: FiniteModule, N: FiniteModule, F) -> bool:
    F = np.array(F, dtype=dtype_for(M.modulus)).reshape(N.rank, M.rank)
    if M.order != N.order or not is_module_map(M, N, F):
        return False
    ker = preimage(F, N.relations) if M.rank else M.relations
    return ker == M.relations


@dataclass
class EndRing:
    module: FiniteModule
    hom: HomSpace
    embedding: Embedding

    @property
    def ring(self) -> FiniteRing:
        return self.embedding.ring

    def matrix(self, x) -> np.ndarray:
        t = self.module.rank
        return self.embedding.to_ambient(x).reshape(t, t)

    def element_of(self, F):
        """Ring element of the endomorphism matrix ``F``."""
        return self.ring.element(self.embedding.from_ambient(np.array(F).reshape(-1)))

    def is_faithful(self) -> bool:
        """Distinct ring elements give distinct maps: the relations are exactly the zero maps."""
        R = self.ring
        if R.dim == 0:
            return True
        imgs = self.embedding.to_ambient_many(np.eye(R.dim, dtype=np.int64))
        return hom_kernel(imgs, self.hom.zero, R) == R.relations


def hom_kernel(images: np.ndarray, zero: SpanBasis, R: FiniteRing) -> SpanBasis:
    """Coefficient vectors whose combination of ``images`` lies in ``zero``."""
    return preimage(np.asarray(images).T, zero) + R.relations


def _compose_flat(t: int, m: int):
    def mul(x, y):
        return modmatmul(x.reshape(t, t), y.reshape(t, t), m).reshape(-1)

    def mul_many(X, Y):
        return modmatmul(X.reshape(-1, t, t), Y.reshape(-1, t, t), m).reshape(-1, t * t)

    return mul, mul_many


def end_ring(M: FiniteModule) -> EndRing:
    """``End(M)`` with composition ``(f g)(x) = f(g(x))``."""
    H = hom_space(M, M)
    t, m = M.rank, M.modulus
    mul, mul_many = _compose_flat(t, m)
    ident = np.eye(t, dtype=np.int64).reshape(-1)
    emb = extract_ring(H.span, mul, ident, zero=H.zero, mul_many=mul_many)
    return EndRing(M, H, emb)


# ---------------------------------------------------------------------------
# presentations and the exact-sequence ring


@dataclass
class Presentation:
    """``R^n -> R^m -> C -> 0``; row ``i`` of ``matrix`` is the image of the ``i``-th generator."""

    ring: FiniteRing
    matrix: list[list[np.ndarray]]  # n rows of m ring elements (coordinate vectors)
    n: int
    m: int

    @classmethod
    def from_entries(cls, ring: FiniteRing, entries, m: int | None = None) -> "Presentation":
        rows = [[ring.vec(x) for x in row] for row in entries]
        width = len(rows[0]) if rows else (m or 0)
        return cls(ring, rows, len(rows), width)

    def map_matrix(self) -> np.ndarray:
        """Coordinates of ``R^n -> R^m``: block ``(j, i)`` is left multiplication by ``P_ij``."""
        R = self.ring
        d = R.dim
        F = np.zeros((self.m * d, self.n * d), dtype=dtype_for(R.modulus))
        for i, row in enumerate(self.matrix):
            for j, x in enumerate(row):
                F[j * d : (j + 1) * d, i * d : (i + 1) * d] = R.left_matrix(x)
        return F

    def domain(self) -> FiniteModule:
        return free_module(self.ring, self.n)

    def codomain(self) -> FiniteModule:
        return free_module(self.ring, self.m)

    def image_span(self) -> SpanBasis:
        B = self.codomain()
        F = self.map_matrix()
        return B.span(F.T) if F.shape[1] else B.relations

    def cokernel(self) -> FiniteModule:
        return quotient_module(self.codomain(), self.image_span())


@dataclass
class ExactSequenceReport:
    presentation: Presentation
    end_sum: EndRing  # End(A (+) B)
    D: Subring  # block-diagonal maps, i.e. End(A) x End(B)
    W0: Subring
    induced: RingHom  # W0 -> End(C)
    kernel: SpanBasis  # in W0 ring coordinates
    end_c: EndRing
    surjective: bool
    centralizer_matches: bool
    quotient_iso: bool

    @property
    def ok(self) -> bool:
        return self.surjective and self.centralizer_matches and self.quotient_iso


def exact_sequence_ring(P: Presentation) -> ExactSequenceReport:
    """``W0 = {(a, b) : b f = f a}`` inside ``End(A) x End(B)`` and its map onto ``End(C)``."""
    R = P.ring
    m = R.modulus
    A, B = P.domain(), P.codomain()
    F = P.map_matrix()  # tB x tA
    tA = A.rank
    S = direct_sum_modules([A, B]) if tA else B
    t = S.rank
    endS = end_ring(S)
    ES = endS.ring
    # diagonal block maps and the block map N: (a, b) -> (0, f(a))
    N = np.zeros((t, t), dtype=dtype_for(m))
    N[tA:, :tA] = F
    Ne = endS.element_of(N)
    proj_A = np.zeros((t, t), dtype=np.int64)
    proj_A[:tA, :tA] = np.eye(tA, dtype=np.int64)
    eA = endS.element_of(proj_A)
    D = Subring(ES, ES.commutant([eA]), check=False)
    # W0 directly: block diagonal maps with b f = f a
    def w0_condition(x):
        X = endS.matrix(x)
        a, b = X[:tA, :tA], X[tA:, tA:]
        return (modmatmul(b, F, m) - modmatmul(F, a, m)) % m

    Qrel = B.relations.annihilator
    rows = []
    for k in range(ES.dim):
        diff = w0_condition(np.eye(ES.dim, dtype=np.int64)[k])
        rows.append(modmatmul(Qrel, diff, m).reshape(-1) if Qrel.shape[0] else np.zeros(0, dtype=np.int64))
    cond = np.array(rows, dtype=np.int64).T  # columns: basis elements of End(S)
    W0span = (kernel(cond, m, ES.dim) + ES.relations) & D.span if cond.size else D.span
    W0 = Subring(ES, W0span, check=False)
    cent = ES.commutant([Ne]) & D.span
    centralizer_matches = cent == W0.span
    # induced map onto End(C)
    C = P.cokernel()
    endC = end_ring(C)
    W0r = W0.as_ring
    cols = []
    for k in range(W0r.dim):
        X = endS.matrix(W0.embedding.to_ambient(np.eye(W0r.dim, dtype=np.int64)[k]))
        cols.append(endC.embedding.from_ambient(X[tA:, tA:].reshape(-1)))
    M = np.array(cols).T if cols else np.zeros((endC.ring.dim, 0), dtype=np.int64)
    induced = RingHom(W0r, endC.ring, M)
    hom_ok = induced.is_homomorphism()
    surjective = induced.image() == endC.ring.full + endC.ring.relations
    ker = induced.kernel()
    Qr = quotient_ring(W0r, ker, check=False)
    bar = RingHom(Qr, endC.ring, M)
    quotient_iso = hom_ok and surjective and bar.is_homomorphism() and Qr.order == endC.ring.order
    return ExactSequenceReport(P, endS, D, W0, induced, ker, endC, surjective, centralizer_matches, quotient_iso)


# ---------------------------------------------------------------------------
# Krull-Schmidt


@dataclass
class Summand:
    embedding: SubmoduleEmbedding
    idempotent: np.ndarray  # matrix on the ambient module
    local_radical: SpanBasis  # radical of the local ring eEnd(M)e, in End(M) coordinates

    @property
    def module(self) -> FiniteModule:
        return self.embedding.module


@dataclass
class KrullSchmidtDecomposition:
    module: FiniteModule
    end: EndRing
    certificate: SemiperfectCertificate
    summands: list[Summand]

    def verify(self) -> bool:
        M = self.module
        if M.order == 1:
            return not self.summands
        total = 1
        for s in self.summands:
            total *= s.module.order
        span = M.span([])
        for s in self.summands:
            span = span + M.span(s.embedding.gens)
        return total == M.order and span.size // M.relations.size == M.order and self.certificate.verify()

    def describe(self) -> list[str]:
        return [describe_module(s.module) for s in self.summands]


def describe_module(M: FiniteModule) -> str:
    inv = M.additive_invariants()
    return " + ".join(f"Z/{q}" for q in inv) if inv else "0"


def _summand_key(s: "Summand"):
    """Larger summands first, then by rank and the canonical action data."""
    M = s.module
    return (-M.order, M.rank, tuple(M.additive_invariants()), tuple(int(v) for v in M.action.reshape(-1)))


def krull_schmidt(M: FiniteModule, seed: int = 0) -> KrullSchmidtDecomposition:
    """Split ``M`` along a complete set of primitive idempotents of ``End(M)``."""
    E = end_ring(M)
    cert = semiperfect_certificate(E.ring, seed)
    summands = []
    for e, rad in zip(cert.idempotents, cert.corner_radicals):
        X = E.matrix(e)
        span = M.span(X.T)
        summands.append(Summand(submodule(M, span), X, rad))
    summands.sort(key=_summand_key)
    return KrullSchmidtDecomposition(M, E, cert, summands)


def _is_unit_via_fitting(E: FiniteRing, x) -> bool:
    if E.order == 1:
        return True
    return associated_idempotent(E.element(x)).e == E.one


def _iso_between_indecomposables(X: FiniteModule, Y: FiniteModule) -> np.ndarray | None:
    """An isomorphism ``X -> Y`` for indecomposable modules, decided exactly.

    ``End(X)`` is local, so the products ``psi phi`` over generator pairs
    either include a unit or all lie in the radical.
    """
    if X.order != Y.order:
        return None
    H1, H2 = hom_space(X, Y), hom_space(Y, X)
    EX = end_ring(X)
    for phi in H1.matrices():
        for psi in H2.matrices():
            comp = modmatmul(psi, phi, X.modulus)
            if _is_unit_via_fitting(EX.ring, EX.embedding.from_ambient(comp.reshape(-1))):
                return phi
    return None


def module_iso_test(M: FiniteModule, N: FiniteModule, cap: int = DEFAULT_CAP, seed: int = 0) -> np.ndarray | None:
    """An isomorphism ``M -> N`` (matrix), or ``None`` when the modules are not isomorphic."""
    if M.ring != N.ring:
        raise RingMismatch("modules over different rings")
    if M.order != N.order or M.additive_invariants() != N.additive_invariants():
        return None
    if M.order == 1:
        return np.zeros((N.rank, M.rank), dtype=np.int64)
    m = M.modulus
    H1, H2 = hom_space(M, N), hom_space(N, M)
    EM = end_ring(M)
    gens1, gens2 = H1.matrices(), H2.matrices()
    for phi in gens1:
        for psi in gens2:
            comp = modmatmul(psi, phi, m)
            if _is_unit_via_fitting(EM.ring, EM.embedding.from_ambient(comp.reshape(-1))):
                return phi
    try:
        return _iso_by_summands(M, N, seed)
    except ModuleError:
        pass
    for F in H1.elements(cap):
        if is_isomorphism(M, N, F):
            return F
    return None


def _iso_by_summands(M: FiniteModule, N: FiniteModule, seed: int) -> np.ndarray | None:
    KM, KN = krull_schmidt(M, seed), krull_schmidt(N, seed)
    if len(KM.summands) != len(KN.summands):
        return None
    m = M.modulus
    unused = list(range(len(KN.summands)))
    F = np.zeros((N.rank, M.rank), dtype=dtype_for(m))
    # coordinates of every basis vector of M along the summands
    for s in KM.summands:
        X = s.module
        match = None
        for j in unused:
            phi = _iso_between_indecomposables(X, KN.summands[j].module)
            if phi is not None:
                match = (j, phi)
                break
        if match is None:
            return None
        j, phi = match
        unused.remove(j)
        proj = s.idempotent  # M -> e M, as a map into M
        coords = s.embedding.coords(proj.T).T  # X-coordinates of e(x) for basis vectors x
        incl = KN.summands[j].embedding.inclusion()
        F = (F + modmatmul(modmatmul(incl, phi, m), coords, m)) % m
    if not is_isomorphism(M, N, F):
        raise ModuleError("assembled map is not an isomorphism")
    return F


# ---------------------------------------------------------------------------
# restriction along a subring


@dataclass
class RestrictionReport:
    end_S: EndRing
    end_R: EndRing
    subring: Subring  # End(M_S) inside the ring End(M_R)
    centralizer_identity: bool
    theorem: MainTheoremReport

    @property
    def n_min(self) -> int:
        return self.theorem.n_min

    def minimal(self) -> bool:
        """``Jac^n`` lands in the ambient radical and ``Jac^(n-1)`` does not."""
        pw = self.theorem.powers
        J = self.theorem.ambient_radical
        return pw[-1] <= J and (len(pw) == 1 or not pw[-2] <= J)


def restricted_endomorphism_check(S: FiniteRing, R: Subring, M: FiniteModule, seed: int = 0) -> RestrictionReport:
    """Compare ``End(M_S)`` with the centralizer of the ``S``-action inside ``End(M_R)``."""
    if R.ambient != S or M.ring != S:
        raise RingMismatch("subring and module must live over S")
    MR = restrict_scalars(M, R.embedding)
    end_S, end_R = end_ring(M), end_ring(MR)
    ER = end_R.ring
    # centralizer of the S-action, computed as linear conditions on End(M_R)
    t, m = M.rank, M.modulus
    mul, _ = _compose_flat(t, m)
    zero = end_R.hom.zero
    Qz = zero.annihilator
    rows = []
    basis = end_R.embedding.to_ambient_many(np.eye(ER.dim, dtype=np.int64)) if ER.dim else np.zeros((0, t * t))
    for A in M.action:
        Af = A.reshape(-1)
        comm = np.array([(mul(f, Af) - mul(Af, f)) % m for f in basis]).reshape(ER.dim, t * t)
        rows.append(modmatmul(Qz, comm.T, m) if Qz.shape[0] else np.zeros((0, ER.dim), dtype=np.int64))
    cond = np.vstack(rows) if rows else np.zeros((0, ER.dim), dtype=np.int64)
    cent = (kernel(cond, m, ER.dim) if cond.shape[0] else ER.full) + ER.relations
    es_span = ER.span(end_R.embedding.from_ambient_many(end_S.embedding.to_ambient_many(np.eye(end_S.ring.dim, dtype=np.int64))))
    sub = Subring(ER, es_span, check=False)
    report = verify_main_theorem(ER, sub, seed)
    return RestrictionReport(end_S, end_R, sub, cent == es_span, report)
