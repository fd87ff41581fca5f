"""Fitting decomposition and the associated idempotent of a ring element.

For ``a`` in a finite ring the chains ``a^k R`` and ``R a^k`` stabilise at some
``n``.  Left multiplication by ``a^n`` then splits ``R_R = a^n R + ann_r(a^n)``
as a direct sum, and the component ``e`` of ``1`` in ``a^n R`` is the unique
idempotent with

    (A) a = eae + faf,  (B) eae invertible in eRe,  (C) faf nilpotent,

where ``f = 1 - e``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded
from .linalg import modmatmul, preimage
from .rings import DEFAULT_CAP, FiniteRing, RingElement


@dataclass(frozen=True)
class FittingCertificate:
    element: RingElement
    index: int
    idempotent: RingElement
    complement: RingElement
    corner_inverse: RingElement
    nilpotency: int

    @property
    def e(self) -> RingElement:
        return self.idempotent

    @property
    def f(self) -> RingElement:
        return self.complement

    def verify(self) -> bool:
        """Re-check (A)-(C), the decomposition ``e + f = 1`` and the minimality of ``k``."""
        a, e, f, b = self.element, self.idempotent, self.complement, self.corner_inverse
        R = a.ring
        if e * e != e or e + f != R.one or e * f != R.zero or f * e != R.zero:
            return False
        eae, faf = e * a * e, f * a * f
        if a != eae + faf:
            return False
        if b * eae != e or eae * b != e or e * b * e != b:
            return False
        k = self.nilpotency
        if k < 1 or not (faf**k).is_zero():
            return False
        return k == 1 or not (faf ** (k - 1)).is_zero()


def fitting_index(a: RingElement) -> int:
    """Least ``n >= 1`` with ``a^n R = a^(n+1) R`` and ``R a^n = R a^(n+1)``."""
    R = a.ring
    p = a.vec
    right, left = R.right_ideal(p), R.left_ideal(p)
    n = 1
    while True:
        q = R.mul_vec(p, a.vec)
        r2, l2 = R.right_ideal(q), R.left_ideal(q)
        if r2 == right and l2 == left:
            return n
        p, right, left, n = q, r2, l2, n + 1


def _nilpotency(R: FiniteRing, x) -> int:
    k = R.nilpotency_index(x)
    if k is None:
        raise ArithmeticError("element expected to be nilpotent is not")
    return k


def corner_inverse(R: FiniteRing, e, x) -> np.ndarray | None:
    """``b = ebe`` with ``b x = x b = e`` for ``x`` in ``eRe``, or ``None``."""
    ev, xv = R.vec(e), R.vec(x)
    if R.is_zero(ev):
        return np.zeros(R.dim, dtype=ev.dtype)
    A = modmatmul(R.left_matrix(ev), R.right_matrix(xv), R.modulus)
    y = R._solve_mod_relations(A, ev)
    if y is None:
        return None
    b = R.mul_vec(R.mul_vec(ev, y), ev)
    if not (R.equal(R.mul_vec(b, xv), ev) and R.equal(R.mul_vec(xv, b), ev)):
        return None
    return b


def associated_idempotent(a) -> FittingCertificate:
    """The Fitting certificate of ``a`` (verified before it is returned)."""
    R = a.ring
    n = fitting_index(a)
    an = R.pow_vec(a.vec, n)
    ann = preimage(R.left_matrix(an), R.relations)
    A = np.hstack([R.left_matrix(an), ann.array.T]) if ann.rank else R.left_matrix(an)
    sol = R._solve_mod_relations(A, R.unity)
    if sol is None:
        raise ArithmeticError("R is not the sum of a^n R and ann_r(a^n)")
    e = R.element(R.mul_vec(an, sol[: R.dim]))
    f = R.one - e
    eae = e * a * e
    faf = f * a * f
    b = corner_inverse(R, e, eae)
    if b is None:
        raise ArithmeticError("eae is not invertible in eRe")
    cert = FittingCertificate(a, n, e, f, R.element(b), _nilpotency(R, faf))
    if not cert.verify():
        raise ArithmeticError("Fitting certificate failed verification")
    return cert


def _is_nilpotent(R: FiniteRing, x, bound: int) -> bool:
    v = R.vec(x)
    steps = max(1, math.ceil(math.log2(bound + 1)))
    for _ in range(steps):
        v = R.mul_vec(v, v)
    return R.is_zero(v)


def qualifying_idempotents(a, cap: int = DEFAULT_CAP) -> list[RingElement]:
    """Every idempotent ``e`` of the ring satisfying (A)-(C) for ``a``, by enumeration."""
    R = a.ring
    if R.order > cap:
        raise CapExceeded(R.order, cap)
    bound = max(1, R.order.bit_length())
    out = []
    for e in R.idempotents(cap):
        f = R.one - e
        eae, faf = e * a * e, f * a * f
        if a != eae + faf:
            continue
        if corner_inverse(R, e, eae) is None:
            continue
        if _is_nilpotent(R, faf, bound):
            out.append(e)
    return out


def uniqueness_check(a, cap: int = DEFAULT_CAP) -> bool:
    """True when exactly one idempotent satisfies (A)-(C) for ``a``."""
    return len(qualifying_idempotents(a, cap)) == 1
