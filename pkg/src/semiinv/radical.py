"""Jacobson radical, idempotent lifting, Peirce corners and semiperfect certificates.

The radical is computed prime by prime.  For ``p^e`` exactly dividing the
modulus, the ``p``-component of ``R`` has ``R/pR`` as a finite-dimensional
``F_p``-algebra, and ``p`` times that component sits inside the radical.  The
radical of the ``F_p``-algebra comes from the iterated trace functionals of
Cohen, Ivanyos and Wales: with ``L(z)`` the left regular matrix lifted to
integers in ``[0, p)``,

    g_i(z) = (trace(L(z)^(p^i)) mod p^(i+1)) / p^i,

the chain ``I_{-1} = A``, ``I_i = {x in I_{i-1} : g_i(x a) = 0 for all a}``
ends at the radical once ``p^i > dim A``.  For ``p > dim A`` only ``g_0``
(the trace form) is needed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np
import sympy

from .errors import DefectNotInIdeal, NotIdempotent, NotNilIdeal
from .linalg import SpanBasis, dtype_for, howell_form, kernel, modmatmul, solve_linear, zero_span
from .rings import Embedding, FiniteRing, RingElement, extract_ring


def prime_power_parts(m: int) -> list[tuple[int, int, int]]:
    """``(p, p^e, c_p)`` for each prime ``p`` dividing ``m``; ``c_p`` is the CRT idempotent."""
    out = []
    for p, e in sorted(sympy.factorint(m).items()):
        pe = p**e
        cof = m // pe
        c = cof * pow(cof, -1, pe) % m if pe != m else 1
        out.append((p, pe, c))
    return out


def _batched_power(P: np.ndarray, e: int, q: int) -> np.ndarray:
    result = None
    base = P % q
    while e:
        if e & 1:
            result = base if result is None else modmatmul(result, base, q)
        e >>= 1
        if e:
            base = modmatmul(base, base, q)
    return result


def fp_algebra_radical(T: np.ndarray, p: int) -> SpanBasis:
    """Radical of the unital ``F_p``-algebra with structure tensor ``T`` (dimension ``n``)."""
    n = T.shape[0]
    if n == 0:
        return zero_span(p, 0)
    Lb = np.ascontiguousarray(np.asarray(T, dtype=np.int64).transpose(0, 2, 1)) % p
    flatL = Lb.reshape(n, n * n)
    I = howell_form(np.eye(n, dtype=np.int64), p, n)
    i = 0
    while True:
        if I.rank == 0:
            return I
        q, pi = p ** (i + 1), p**i
        U = I.array
        LU = modmatmul(U, flatL, p).reshape(-1, n, n)
        G = np.zeros((U.shape[0], n), dtype=np.int64)
        for s in range(U.shape[0]):
            P = modmatmul(LU[s][None, :, :], Lb, p)  # L(u_s b_t) for every t
            tr = np.trace(_batched_power(P, pi, q), axis1=1, axis2=2) % q
            if (tr % pi).any():
                raise ArithmeticError("trace functional is not divisible as expected")
            G[s] = (tr // pi) % p
        C = kernel(G.T, p, U.shape[0])
        I = howell_form(modmatmul(C.array, U, p), p, n) if C.rank else zero_span(p, n)
        if pi * p > n:
            return I
        i += 1


@dataclass
class ResidueAlgebra:
    """The ``F_p``-algebra ``S / (J + pS)`` on the complement of the pivot columns."""

    ring: FiniteRing  # over F_p, free
    p: int
    cols: list[int]
    sub: SpanBasis  # J mod p, in the ambient coordinates of S over F_p

    def project(self, v) -> np.ndarray:
        w = self.sub.reduce(np.array(v, dtype=np.int64) % self.p)
        return w[self.cols]

    def lift(self, x, S: FiniteRing) -> np.ndarray:
        v = np.zeros(S.dim, dtype=dtype_for(S.modulus))
        v[self.cols] = np.array(x, dtype=np.int64) % self.p
        return S.vec(v)


def residue_algebra(S: FiniteRing, J: SpanBasis, p: int) -> ResidueAlgebra:
    d = S.dim
    sub = howell_form(np.vstack([J.array % p, S.relations.array % p]), p, d) if d else zero_span(p, 0)
    piv = {c for c, _ in sub.pivots}
    cols = [j for j in range(d) if j not in piv]
    nc = len(cols)
    if nc:
        prods = np.asarray(S.tensor, dtype=np.int64)[np.ix_(cols, cols)].reshape(-1, d) % p
        TB = sub.reduce_many(prods)[:, cols].reshape(nc, nc, nc)
        unity = sub.reduce(S.unity % p)[cols]
    else:
        TB = np.zeros((0, 0, 0), dtype=np.int64)
        unity = np.zeros(0, dtype=np.int64)
    B = FiniteRing(p, TB, unity, validate=False)
    return ResidueAlgebra(B, p, cols, sub)


def jacobson_radical(R: FiniteRing) -> SpanBasis:
    """Canonical span of ``Jac(R)`` in the coordinates of ``R``."""
    m, d, K = R.modulus, R.dim, R.relations
    gens = [K.array]
    for p, _, c in prime_power_parts(m):
        A = residue_algebra(R, zero_span(m, d), p)
        if not A.cols:
            continue
        rad = fp_algebra_radical(A.ring.tensor, p)
        if rad.rank:
            V = np.zeros((rad.rank, d), dtype=dtype_for(m))
            V[:, A.cols] = rad.array
            gens.append(V * c % m)
        gens.append((c * p % m) * np.eye(d, dtype=dtype_for(m)))
    if d == 0:
        return K
    return howell_form(np.vstack(gens), m, d)


def span_power_chain(R: FiniteRing, J: SpanBasis) -> list[SpanBasis]:
    """``[J, J^2, ...]`` ending at the zero span, or at the first repeated power."""
    if J == R.relations:
        return []
    chain = [J]
    while chain[-1] != R.relations:
        nxt = R.span_mul(chain[-1], J)
        if nxt == chain[-1]:
            break
        chain.append(nxt)
    return chain


def radical_power_chain(R: FiniteRing, J: SpanBasis | None = None) -> tuple[list[SpanBasis], int]:
    """``Jac(R), Jac(R)^2, ...`` down to zero, with the nilpotency index."""
    J = jacobson_radical(R) if J is None else J
    chain = span_power_chain(R, J)
    return chain, len(chain)


def nilpotency_index_of_ideal(R: FiniteRing, J: SpanBasis) -> int:
    chain = span_power_chain(R, J)
    if chain and chain[-1] != R.relations:
        raise NotNilIdeal("ideal powers stabilise at a nonzero span")
    return len(chain)


def lift_idempotent(R: FiniteRing, J: SpanBasis, x, with_steps: bool = False):
    """Lift ``x`` (idempotent modulo the nil ideal ``J``) to an idempotent of ``R``.

    Iterates ``x -> 3x^2 - 2x^3``; each step squares the defect ``x^2 - x``.
    """
    nilpotency_index_of_ideal(R, J)
    v = R.vec(x)
    if not J.contains(R.mul_vec(v, v) - v):
        raise DefectNotInIdeal("x^2 - x is not in the ideal")
    steps = 0
    while True:
        sq = R.mul_vec(v, v)
        if R.equal(sq, v):
            break
        cube = R.mul_vec(sq, v)
        v = R.vec(3 * sq - 2 * cube)
        steps += 1
    e = R.element(v)
    return (e, steps) if with_steps else e


def peirce_corner(R: FiniteRing, e) -> Embedding:
    """``eRe`` with unity ``e`` as a standalone ring, plus coordinate maps."""
    ev = R.vec(e)
    if not R.is_idempotent(ev):
        raise NotIdempotent("corner needs an idempotent")
    d = R.dim
    E = np.repeat(ev[None, :], d, axis=0)
    rows = R.mul_many(R.mul_many(E, np.eye(d, dtype=np.int64)), E)
    span = R.span(rows) if d else R.relations
    return extract_ring(span, R.mul_vec, ev, zero=R.relations, mul_many=R.mul_many)


# ---------------------------------------------------------------------------
# primitive idempotents


def _minimal_polynomial(B: FiniteRing, z: np.ndarray) -> list[int]:
    """Coefficients ``[a_0, ..., a_k = 1]`` of the minimal polynomial of ``z`` over ``F_p``."""
    p = B.modulus
    powers = [B.unity.copy()]
    while True:
        nxt = B.mul_vec(powers[-1], z)
        A = np.array(powers).T
        sol, _ = solve_linear(A, nxt, p)
        if sol is not None:
            return [int(-c) % p for c in sol] + [1]
        powers.append(nxt)


def _evaluate(B: FiniteRing, coeffs: list[int], z: np.ndarray) -> np.ndarray:
    acc = np.zeros(B.dim, dtype=np.int64)
    for c in reversed(coeffs):
        acc = B.vec(B.mul_vec(acc, z) + c * B.unity)
    return acc


def _zero_divisor(B: FiniteRing, z: np.ndarray) -> np.ndarray | None:
    """A nonzero non-unit ``f(z)`` from a proper factor ``f`` of the minimal polynomial."""
    p = B.modulus
    coeffs = _minimal_polynomial(B, z)
    if len(coeffs) <= 2:
        return None
    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed(coeffs)), t, modulus=p)
    _, factors = poly.factor_list()
    if len(factors) == 1 and factors[0][1] == 1:
        return None
    f = factors[0][0]
    fc = [int(c) % p for c in reversed(f.all_coeffs())]
    return _evaluate(B, fc, z)


def _idempotent_from_zero_divisor(B: FiniteRing, w: np.ndarray) -> np.ndarray:
    """An idempotent generating the right ideal ``wB`` of the semisimple algebra ``B``."""
    if B.is_idempotent(w):
        return w
    p, n = B.modulus, B.dim
    Lw = B.left_matrix(w)
    blocks, rhs = [], []
    for j in range(n):
        wb = B.mul_vec(w, np.eye(n, dtype=np.int64)[j])
        blocks.append(modmatmul(Lw, B.right_matrix(wb), p))
        rhs.append(wb)
    y, _ = solve_linear(np.vstack(blocks), np.concatenate(rhs), p)
    if y is None:
        raise ArithmeticError("residue algebra is not semisimple")
    return B.mul_vec(w, y)


def _split_residue(B: FiniteRing, rng: random.Random) -> np.ndarray | None:
    """A nontrivial idempotent of the semisimple ``F_p``-algebra ``B``, or ``None`` if ``B`` is a field."""
    p, n = B.modulus, B.dim
    if n == 0:
        return None
    Z = B.center()
    Zr = Z.array
    frob = np.array([(B.pow_vec(z, p) - z) % p for z in Zr]).reshape(-1, n)
    coeff = kernel(frob.T, p, Zr.shape[0])
    fixed = howell_form(modmatmul(coeff.array, Zr, p), p, n) if coeff.rank else zero_span(p, n)
    if fixed.rank == 1 and Z.rank == n:
        return None
    candidates = list(fixed.array) + list(np.eye(n, dtype=np.int64))
    tries = 0
    while True:
        if candidates:
            z = candidates.pop(0)
        else:
            tries += 1
            if tries > 10000:
                raise RuntimeError("no zero divisor found in the residue algebra")
            z = np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
        w = _zero_divisor(B, z)
        if w is not None:
            return _idempotent_from_zero_divisor(B, w)


def split_idempotent(S: FiniteRing, J: SpanBasis, rng: random.Random) -> np.ndarray | None:
    """A nontrivial idempotent of ``S``, or ``None`` when ``S`` is local."""
    comps = [c for _, _, c in prime_power_parts(S.modulus) if not S.is_zero(c * S.unity)]
    if len(comps) > 1:
        return S.vec(comps[0] * S.unity)
    if not comps:
        return None
    p = next(q for q, _, c in prime_power_parts(S.modulus) if not S.is_zero(c * S.unity))
    A = residue_algebra(S, J, p)
    eb = _split_residue(A.ring, rng)
    if eb is None:
        return None
    return lift_idempotent(S, J, A.lift(eb, S)).vec


def is_local(S: FiniteRing, J: SpanBasis | None = None) -> bool:
    if S.order == 1:
        return False
    J = jacobson_radical(S) if J is None else J
    return split_idempotent(S, J, random.Random(0)) is None


@dataclass
class SemiperfectCertificate:
    ring: FiniteRing
    radical: SpanBasis
    nilpotency_index: int
    radical_chain: list[SpanBasis]
    idempotents: list[RingElement]
    corner_radicals: list[SpanBasis] = field(default_factory=list)

    @property
    def composition_length(self) -> int:
        """Composition length of ``R/Jac(R)`` (one simple summand per primitive idempotent)."""
        return len(self.idempotents)

    def verify(self) -> bool:
        R = self.ring
        total = R.zero
        for i, e in enumerate(self.idempotents):
            total = total + e
            for j, f in enumerate(self.idempotents):
                prod = e * f
                if prod != (e if i == j else R.zero):
                    return False
        if total != R.one:
            return False
        for e in self.idempotents:
            if not is_local(peirce_corner(R, e).ring):
                return False
        return True


def _sort_key(e: RingElement):
    first = next((i for i, c in enumerate(e.coords) if c), len(e.coords))
    return (first, e.coords)


def semiperfect_certificate(R: FiniteRing, seed: int = 0) -> SemiperfectCertificate:
    """Complete set of orthogonal primitive idempotents with local corners."""
    rng = random.Random(seed)
    J = jacobson_radical(R)
    chain, n = radical_power_chain(R, J)
    if R.order == 1:
        return SemiperfectCertificate(R, J, n, chain, [], [])
    todo = [R.unity.copy()]
    done: list[tuple[RingElement, SpanBasis]] = []
    while todo:
        e = todo.pop()
        corner = peirce_corner(R, e)
        S = corner.ring
        JS = jacobson_radical(S)
        f = split_idempotent(S, JS, rng)
        if f is None:
            rad = R.span(corner.to_ambient_many(JS.array)) if JS.rank else R.relations
            done.append((R.element(e), rad))
            continue
        e1 = corner.to_ambient(f)
        todo += [R.vec(e - e1), e1]
    done.sort(key=lambda t: _sort_key(t[0]))
    return SemiperfectCertificate(R, J, n, chain, [e for e, _ in done], [r for _, r in done])
