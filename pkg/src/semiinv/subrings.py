"""Subrings, centralizers, invariant subrings and equalizers.

A subring is stored as a canonical span in the coordinates of its ambient
ring (relations included) and extracted on demand as a standalone ring, so
that intrinsic invariants such as its own radical can be computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import CapExceeded, NotEndomorphism, NotInvolution, RingMismatch
from .linalg import SpanBasis, dtype_for
from .radical import SemiperfectCertificate, jacobson_radical, radical_power_chain, semiperfect_certificate
from .rings import (
    DEFAULT_CAP,
    Embedding,
    FiniteRing,
    RingElement,
    RingHom,
    conjugation,
    extract_ring,
    hom_preimage,
    identity_hom,
    product_ring,
)


class Subring:
    """A multiplicatively closed span containing the unity."""

    def __init__(self, ambient: FiniteRing, span: SpanBasis, check: bool = True):
        self.ambient = ambient
        self.span = span + ambient.relations
        if check and not self.is_subring():
            raise ValueError("span is not a unital subring")

    def __repr__(self) -> str:
        return f"Subring(order={self.order}, ambient={self.ambient!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Subring) and self.ambient == other.ambient and self.span == other.span

    def __hash__(self) -> int:
        return hash(self.span)

    def __le__(self, other: "Subring") -> bool:
        return self.span <= other.span

    def is_subring(self) -> bool:
        R = self.ambient
        return self.span.contains(R.unity) and R.span_mul(self.span, self.span) <= self.span

    @cached_property
    def embedding(self) -> Embedding:
        R = self.ambient
        return extract_ring(self.span, R.mul_vec, R.unity, zero=R.relations, mul_many=R.mul_many)

    @property
    def as_ring(self) -> FiniteRing:
        return self.embedding.ring

    @property
    def order(self) -> int:
        return self.span.size // self.ambient.relations.size

    @property
    def rank(self) -> int:
        """Size of a minimal generating set of the span over ``Z/m``."""
        return self.as_ring.dim

    def contains(self, x) -> bool:
        return self.span.contains(self.ambient.vec(x))

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def element_array(self, cap: int | None = DEFAULT_CAP) -> np.ndarray:
        """All elements, in ambient coordinates."""
        return self.embedding.to_ambient_many(self.as_ring.element_array(cap))

    def radical(self) -> SpanBasis:
        """``Jac`` of the subring itself, in ambient coordinates."""
        J = jacobson_radical(self.as_ring)
        if J.rank == 0:
            return self.ambient.relations
        return self.ambient.span(self.embedding.to_ambient_many(J.array))


def _as_elements(R: FiniteRing, xs) -> list[np.ndarray]:
    return [R.vec(x) for x in xs]


def subring_closure(ambient: FiniteRing, generators: Sequence = ()) -> Subring:
    """Smallest subring containing the unity and ``generators``."""
    R = ambient
    span = R.span([R.unity] + _as_elements(R, generators))
    while True:
        grown = span + R.span_mul(span, span)
        if grown == span:
            return Subring(R, span, check=False)
        span = grown


def centralizer(ambient: FiniteRing, X: Sequence) -> Subring:
    """``Cent_R(X) = {r : x r = r x for all x in X}``."""
    return Subring(ambient, ambient.commutant(_as_elements(ambient, X)), check=False)


def _fixed_span(R: FiniteRing, homs: Sequence[RingHom]) -> SpanBasis:
    span = R.full
    for h in homs:
        diff = RingHom(R, R, (h.matrix - np.eye(R.dim, dtype=h.matrix.dtype)) % R.modulus)
        span = span & hom_preimage(diff, R.relations)
    return span


def invariant_subring(ambient: FiniteRing, sigmas: Sequence[RingHom]) -> Subring:
    """``R^Sigma``: the joint fixed points of ring endomorphisms."""
    for s in sigmas:
        if s.source != ambient or s.target != ambient:
            raise NotEndomorphism("map is not an endomorphism of the ambient ring")
        bad = s.violations()
        if bad:
            raise NotEndomorphism("; ".join(bad))
    return Subring(ambient, _fixed_span(ambient, sigmas), check=False)


def intersect(A: Subring, B: Subring) -> Subring:
    if A.ambient != B.ambient:
        raise RingMismatch("subrings of different ambient rings")
    return Subring(A.ambient, A.span & B.span, check=False)


def rationally_closed_check(R0: Subring, cap: int = DEFAULT_CAP) -> tuple[bool, RingElement | None]:
    """Whether every ambient unit in ``R0`` has its inverse in ``R0``; returns a witness otherwise."""
    if R0.order > cap:
        raise CapExceeded(R0.order, cap)
    R = R0.ambient
    for v in R0.element_array(cap):
        inv = R.try_invert(v)
        if inv is not None and not R0.contains(inv):
            return False, R.element(v)
    return True, None


def span_rationally_closed(R: FiniteRing, span: SpanBasis, cap: int = DEFAULT_CAP) -> tuple[bool, RingElement | None]:
    """The same test for an arbitrary span (which need not be a subring)."""
    span = span + R.relations
    size = span.size // R.relations.size
    if size > cap:
        raise CapExceeded(size, cap)
    seen = set()
    for v in span.elements():
        w = R.vec(v)
        key = tuple(int(t) for t in w)
        if key in seen:
            continue
        seen.add(key)
        inv = R.try_invert(w)
        if inv is not None and not span.contains(inv.vec):
            return False, R.element(w)
    return True, None


# ---------------------------------------------------------------------------
# equalizers


@dataclass
class EqualizerSpec:
    """Triples ``(S_i, psi1_i, psi2_i)`` of homomorphisms out of a common ambient ring."""

    ambient: FiniteRing
    triples: list[tuple[FiniteRing, RingHom, RingHom]] = field(default_factory=list)

    def __post_init__(self):
        for S, f, g in self.triples:
            if f.source != self.ambient or g.source != self.ambient:
                raise RingMismatch("every hom must start at the ambient ring")
            if f.target != S or g.target != S:
                raise RingMismatch("hom targets must match the triple ring")

    def augmented(self) -> "EqualizerSpec":
        """The spec with the identity triple prepended, making the product embedding injective."""
        R = self.ambient
        ident = identity_hom(R)
        return EqualizerSpec(R, [(R, ident, ident)] + list(self.triples))


def equalizer_subring(spec: EqualizerSpec) -> Subring:
    """``{r : psi1_i(r) = psi2_i(r) for all i}``."""
    R = spec.ambient
    span = R.full
    for S, f, g in spec.triples:
        diff = RingHom(R, S, (f.matrix.astype(object) - g.matrix.astype(object)) % S.modulus)
        span = span & hom_preimage(diff, S.relations)
    sub = Subring(R, span, check=False)
    if not sub.is_subring():
        raise ArithmeticError("equalizer failed the closure check")
    return sub


def _block_matrix(blocks: Sequence[np.ndarray], modulus: int) -> np.ndarray:
    return np.vstack([np.array(b, dtype=object) for b in blocks]) % modulus


@dataclass
class ProductEqualizer:
    spec: EqualizerSpec  # augmented
    ring: FiniteRing
    embedding: RingHom
    involution: RingHom
    fixed: Subring  # S^sigma
    image: SpanBasis  # Psi(R)
    pulled_back: Subring  # Psi^-1(Psi(R)^sigma)
    equalizer: Subring

    def verify(self) -> bool:
        S = self.ring
        sigma = self.involution
        if not sigma.compose(sigma).is_identity():
            return False
        if not (self.embedding.is_homomorphism() and sigma.is_homomorphism()):
            return False
        if self.embedding.kernel() != self.spec.ambient.relations:
            return False
        eq_image = S.span([self.embedding.apply_vec(v) for v in self.equalizer.span.array])
        return (self.image & self.fixed.span) == eq_image and self.pulled_back == self.equalizer


def build_product_equalizer(spec: EqualizerSpec) -> ProductEqualizer:
    """``S = prod_i S_i x S_i`` with ``Psi(r) = (psi1_i(r), psi2_i(r))_i`` and the component swap."""
    aug = spec.augmented()
    R = aug.ambient
    factors = []
    for S, _, _ in aug.triples:
        factors += [S, S]
    P = product_ring(*factors)
    M = P.modulus
    blocks = []
    for S, f, g in aug.triples:
        blocks += [f.matrix, g.matrix]
    Psi = RingHom(R, P, _block_matrix(blocks, M))
    perm = np.zeros((P.dim, P.dim), dtype=np.int64)
    off = 0
    for S, _, _ in aug.triples:
        d = S.dim
        perm[off : off + d, off + d : off + 2 * d] = np.eye(d, dtype=np.int64)
        perm[off + d : off + 2 * d, off : off + d] = np.eye(d, dtype=np.int64)
        off += 2 * d
    sigma = RingHom(P, P, perm)
    fixed = invariant_subring(P, [sigma])
    image = Psi.image()
    pulled = Subring(R, hom_preimage(Psi, image & fixed.span), check=False)
    return ProductEqualizer(aug, P, Psi, sigma, fixed, image, pulled, equalizer_subring(spec))


@dataclass
class TwistedQuotient:
    base: FiniteRing
    sigma: RingHom
    ring: FiniteRing
    x: RingElement
    tau: RingHom
    inclusion: RingHom

    def verify(self, sub: SpanBasis | None = None) -> bool:
        """``tau^2 = id``, ``tau`` is conjugation by ``x``, and ``R^tau = R^sigma`` for ``R = sub``."""
        T = self.ring
        if not self.tau.compose(self.tau).is_identity():
            return False
        if not self.tau.equals(conjugation(T, self.x)):
            return False
        return self.fixed_in(sub) == self.sigma_fixed_in(sub)

    def sigma_fixed_in(self, sub: SpanBasis | None = None) -> SpanBasis:
        S = self.base
        sub = S.full if sub is None else sub
        return sub & _fixed_span(S, [self.sigma])

    def fixed_in(self, sub: SpanBasis | None = None) -> SpanBasis:
        """``R^tau`` pulled back to the coordinates of the base ring."""
        S = self.base
        sub = S.full if sub is None else sub
        fixed = _fixed_span(self.ring, [self.tau])
        return sub & hom_preimage(self.inclusion, fixed)


def build_twisted_involution_quotient(S: FiniteRing, sigma: RingHom) -> TwistedQuotient:
    """``S'' = S[x; sigma] / (x^2 - 1)`` with basis ``{1, x}`` over ``S``, and ``tau`` = conjugation by ``x``."""
    if sigma.source != S or sigma.target != S or not sigma.is_homomorphism():
        raise NotInvolution("sigma is not an endomorphism of S")
    if not sigma.compose(sigma).is_identity():
        raise NotInvolution("sigma does not square to the identity")
    m, d = S.modulus, S.dim
    dt = dtype_for(m)
    T = np.zeros((2 * d, 2 * d, 2 * d), dtype=dt)
    sig = sigma.images()  # row j = sigma(b_j)
    # b_i sigma(b_j) for all i, j
    bs = np.array([[S.mul_vec(np.eye(d, dtype=dt)[i], sig[j]) for j in range(d)] for i in range(d)], dtype=dt).reshape(d, d, d)
    T[:d, :d, :d] = S.tensor  # b_i b_j
    T[:d, d:, d:] = S.tensor  # b_i (b_j x) = (b_i b_j) x
    T[d:, :d, d:] = bs  # (b_i x) b_j = b_i sigma(b_j) x
    T[d:, d:, :d] = bs  # (b_i x)(b_j x) = b_i sigma(b_j)
    unity = np.concatenate([S.unity, np.zeros(d, dtype=dt)])
    rel = [np.concatenate([r, np.zeros(d, dtype=dt)]) for r in S.relations.array]
    rel += [np.concatenate([np.zeros(d, dtype=dt), r]) for r in S.relations.array]
    labels = list(S.labels) + [f"{lab}*x" for lab in S.labels]
    ring = FiniteRing(m, T, unity, relations=rel or None, labels=labels, validate=True)
    x = ring.element(np.concatenate([np.zeros(d, dtype=dt), S.unity]))
    tau_matrix = np.zeros((2 * d, 2 * d), dtype=np.int64)
    tau_matrix[:d, :d] = sigma.matrix
    tau_matrix[d:, d:] = sigma.matrix
    tau = RingHom(ring, ring, tau_matrix)
    inc = np.zeros((2 * d, d), dtype=np.int64)
    inc[:d, :] = np.eye(d, dtype=np.int64)
    return TwistedQuotient(S, sigma, ring, x, tau, RingHom(S, ring, inc))


# ---------------------------------------------------------------------------
# the radical inclusion


@dataclass
class MainTheoremReport:
    n_min: int
    subring_radical: SpanBasis  # ambient coordinates
    ambient_radical: SpanBasis
    subring_nilpotency: int
    ambient_nilpotency: int
    subring_certificate: SemiperfectCertificate
    ambient_certificate: SemiperfectCertificate
    powers: list[SpanBasis]

    @property
    def length_bound(self) -> int:
        """Composition length of ``R/Jac(R)``."""
        return self.ambient_certificate.composition_length


def verify_main_theorem(R: FiniteRing, R0: Subring, seed: int = 0) -> MainTheoremReport:
    """Least ``n`` with ``Jac(R0)^n`` inside ``Jac(R)``, plus both semiperfect certificates."""
    if R0.ambient != R:
        raise RingMismatch("subring of a different ring")
    J = jacobson_radical(R)
    J0 = R0.radical()
    powers = [J0]
    while not powers[-1] <= J:
        powers.append(R.span_mul(powers[-1], J0))
        if powers[-1] == powers[-2]:
            raise ArithmeticError("radical powers stabilised outside Jac(R)")
    _, n0 = radical_power_chain(R0.as_ring)
    _, nR = radical_power_chain(R, J)
    return MainTheoremReport(
        n_min=len(powers),
        subring_radical=J0,
        ambient_radical=J,
        subring_nilpotency=n0,
        ambient_nilpotency=nR,
        subring_certificate=semiperfect_certificate(R0.as_ring, seed),
        ambient_certificate=semiperfect_certificate(R, seed),
        powers=powers,
    )
