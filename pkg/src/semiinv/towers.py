"""Finite truncation towers ``R_N -> ... -> R_2 -> R_1``.

A tower models the inverse limit of ``R/J^i`` at finite depth.  All built-in
families share one basis across levels and the connectors are coordinate
reduction from modulus ``p^(i+1)`` to ``p^i``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CompatibilityViolation, IncompatibleSubringSpec, LevelUnsolvable, UnsupportedSpec
from .fitting import FittingCertificate, associated_idempotent
from .linalg import LinearSolver, SpanBasis, dtype_for, howell_form, modmatmul, preimage
from .modules import FiniteModule, regular_module
from .radical import jacobson_radical, span_power_chain
from .rings import FiniteRing, RingElement, RingHom, conjugation, matrix_ring, opposite, quaternions, tensor_product, zmod
from .subrings import Subring, centralizer, invariant_subring

FAMILIES = ("zpk", "matzpk", "quaternion3", "quaternion-tensor3")
MAX_DEPTH = 8


class Tower:
    """Levels ``R_1, ..., R_N`` (index 1 coarsest) with surjections ``R_{i+1} -> R_i``.

    Lists are 0-based: ``levels[0]`` is ``R_1`` and ``connectors[i]`` maps
    ``levels[i + 1]`` onto ``levels[i]``.
    """

    def __init__(self, levels: Sequence[FiniteRing], connectors: Sequence[RingHom], family: dict | None = None, validate: bool = True):
        if len(connectors) != len(levels) - 1:
            raise ValueError("need one connector between consecutive levels")
        self.levels = list(levels)
        self.connectors = list(connectors)
        self.family = dict(family or {})
        if validate:
            self.validate()

    def __repr__(self) -> str:
        return f"Tower(depth={self.depth}, family={self.family.get('family', '?')})"

    @property
    def depth(self) -> int:
        return len(self.levels)

    def validate(self) -> None:
        for i, f in enumerate(self.connectors):
            if f.source != self.levels[i + 1] or f.target != self.levels[i]:
                raise ValueError(f"connector {i + 1} has the wrong source or target")
            f.check()
            if f.image() != f.target.full:
                raise ValueError(f"connector {i + 1} is not surjective")

    def connector(self, i: int, j: int) -> RingHom:
        """``f_{ij} : R_j -> R_i`` for 1-based ``i <= j``."""
        if not 1 <= i <= j <= self.depth:
            raise IndexError("need 1 <= i <= j <= depth")
        f = RingHom(self.levels[j - 1], self.levels[j - 1], np.eye(self.levels[j - 1].dim, dtype=np.int64))
        for k in range(j - 1, i - 1, -1):
            f = self.connectors[k - 1].compose(f)
        return f

    def coherent(self) -> bool:
        """``f_{ij} f_{jk} = f_{ik}`` for every ``i <= j <= k``."""
        N = self.depth
        for i in range(1, N + 1):
            for j in range(i, N + 1):
                for k in range(j, N + 1):
                    if not self.connector(i, j).compose(self.connector(j, k)).equals(self.connector(i, k)):
                        return False
        return True

    def project(self, x, level: int | None = None) -> "TowerElement":
        """The compatible element determined by ``x`` at ``level`` (default: the deepest)."""
        level = self.depth if level is None else level
        if level != self.depth:
            raise ValueError("compatible elements are determined by their deepest component")
        top = self.levels[-1].vec(x)
        comps = [self.connector(i, self.depth).apply_vec(top) for i in range(1, self.depth + 1)]
        return TowerElement(self, comps)

    def element(self, components: Sequence) -> "TowerElement":
        el = TowerElement(self, [R.vec(c) for R, c in zip(self.levels, components)])
        if not el.compatible():
            raise CompatibilityViolation("components are not compatible")
        return el

    def one(self) -> "TowerElement":
        return TowerElement(self, [R.unity.copy() for R in self.levels])

    def random_element(self, rng: random.Random) -> "TowerElement":
        R = self.levels[-1]
        return self.project([rng.randrange(R.modulus) for _ in range(R.dim)])


@dataclass
class TowerElement:
    tower: Tower
    components: list[np.ndarray]

    def __getitem__(self, level: int) -> RingElement:
        """Component at 1-based ``level``."""
        return self.tower.levels[level - 1].element(self.components[level - 1])

    def compatible(self) -> bool:
        t = self.tower
        return all(
            t.levels[i].equal(t.connectors[i].apply_vec(self.components[i + 1]), self.components[i]) for i in range(t.depth - 1)
        )

    def to_lists(self) -> list[list[int]]:
        return [[int(v) for v in c] for c in self.components]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TowerElement)
            and self.tower is other.tower
            and all(R.equal(a, b) for R, a, b in zip(self.tower.levels, self.components, other.components))
        )


def _level_ring(family: str, modulus: int, k: int) -> FiniteRing:
    if family == "zpk":
        return zmod(modulus)
    if family == "matzpk":
        return matrix_ring(modulus, k)
    if family == "quaternion3":
        return quaternions(modulus)
    if family == "quaternion-tensor3":
        A = quaternions(modulus)
        return tensor_product(A, opposite(A))
    raise UnsupportedSpec(f"unknown tower family {family!r}")


def build_truncation_tower(family: str, depth: int, p: int = 3, k: int = 2) -> Tower:
    """A tower of one of the built-in families, levels over ``Z/p``, ..., ``Z/p^depth``.

    ``quaternion3`` and ``quaternion-tensor3`` are fixed at ``p = 3``.
    """
    if family not in FAMILIES:
        raise UnsupportedSpec(f"unknown tower family {family!r}; expected one of {', '.join(FAMILIES)}")
    if family in ("quaternion3", "quaternion-tensor3"):
        if p != 3:
            raise UnsupportedSpec(f"{family} is defined over powers of 3")
    if not 1 <= depth <= MAX_DEPTH:
        raise UnsupportedSpec(f"depth must lie in 1..{MAX_DEPTH}")
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise UnsupportedSpec("p must be prime")
    if family == "matzpk" and k < 1:
        raise UnsupportedSpec("matrix size must be positive")
    levels = [_level_ring(family, p**i, k) for i in range(1, depth + 1)]
    connectors = [RingHom(levels[i + 1], levels[i], np.eye(levels[i].dim, dtype=np.int64)) for i in range(depth - 1)]
    return Tower(levels, connectors, {"family": family, "p": p, "k": k, "depth": depth})


# ---------------------------------------------------------------------------
# associated idempotents


@dataclass
class QuasiPiCertificate:
    element: TowerElement
    idempotent: TowerElement
    certificates: list[FittingCertificate]
    vanishing_depths: list[int]  # (faf)^k_i = 0 in R_i

    def verify(self) -> bool:
        return (
            self.idempotent.compatible()
            and all(c.verify() for c in self.certificates)
            and all(c.nilpotency == k for c, k in zip(self.certificates, self.vanishing_depths))
        )


def tower_associated_idempotent(t: Tower, a: TowerElement) -> QuasiPiCertificate:
    """Level-wise associated idempotents of ``a``, checked to be compatible."""
    if not a.compatible():
        raise CompatibilityViolation("element is not compatible")
    certs = [associated_idempotent(a[i]) for i in range(1, t.depth + 1)]
    e = TowerElement(t, [c.idempotent.coords for c in certs])
    if not e.compatible():
        raise CompatibilityViolation("level idempotents do not agree under the connectors")
    return QuasiPiCertificate(a, e, certs, [c.nilpotency for c in certs])


def level_spans_compatible(t: Tower, spans: Sequence[SpanBasis]) -> bool:
    """Each connector maps the level span into the coarser one."""
    for i, f in enumerate(t.connectors):
        imgs = np.array([f.apply_vec(v) for v in spans[i + 1].array]).reshape(-1, t.levels[i].dim)
        if imgs.size and not spans[i].contains_all(imgs):
            return False
    return True


def _spans_of(t: Tower, R0) -> list[SpanBasis]:
    spans = [s.span if isinstance(s, Subring) else s for s in R0]
    if len(spans) != t.depth:
        raise IncompatibleSubringSpec("need one span per level")
    for R, s in zip(t.levels, spans):
        if s.modulus != R.modulus or s.ncols != R.dim:
            raise IncompatibleSubringSpec("span lives in the wrong ambient space")
        if not Subring(R, s, check=False).is_subring():
            raise IncompatibleSubringSpec("level span is not a unital subring")
    if not level_spans_compatible(t, spans):
        raise IncompatibleSubringSpec("connectors do not map the level spans into each other")
    return spans


def centralizer_levels(t: Tower, xs: Sequence) -> list[Subring]:
    """``Cent_{R_i}`` of the images of deepest-level elements ``xs``."""
    elems = [t.project(x) for x in xs]
    return [centralizer(R, [e.components[i] for e in elems]) for i, R in enumerate(t.levels)]


def invariant_levels(t: Tower, units: Sequence) -> list[Subring]:
    """Fixed points at each level of conjugation by the images of deepest-level units."""
    elems = [t.project(u) for u in units]
    return [invariant_subring(R, [conjugation(R, e.components[i]) for e in elems]) for i, R in enumerate(t.levels)]


def quaternion_opposite_units(t: Tower) -> list[np.ndarray]:
    """``1 (x) i`` and ``1 (x) j`` at the deepest level of the quaternion tensor tower."""
    if t.family.get("family") != "quaternion-tensor3":
        raise UnsupportedSpec("needs the quaternion tensor tower")
    R = t.levels[-1]
    out = []
    for b in (1, 2):
        v = np.zeros(R.dim, dtype=dtype_for(R.modulus))
        v[b] = 1  # index a * 4 + b for a (x) b with a = 1
        out.append(v)
    return out


def subring_quasi_pi_check(t: Tower, R0: Sequence, a: TowerElement) -> bool:
    """Whether every level idempotent of ``a`` lies in the level span of ``R0``."""
    spans = _spans_of(t, R0)
    if not all(s.contains(c) for s, c in zip(spans, a.components)):
        raise IncompatibleSubringSpec("element does not lie in the subring")
    cert = tower_associated_idempotent(t, a)
    return all(s.contains(c) for s, c in zip(spans, cert.idempotent.components))


# ---------------------------------------------------------------------------
# radical powers


def jacobson_power_openness(t: Tower) -> dict[int, int]:
    """For each level ``i < N`` the least ``n`` with ``Jac(R_N)^n`` inside ``ker(R_N -> R_i)``."""
    R = t.levels[-1]
    J = jacobson_radical(R)
    chain = span_power_chain(R, J)
    out = {}
    for i in range(1, t.depth):
        K = t.connector(i, t.depth).kernel()
        n = next((k + 1 for k, P in enumerate(chain) if P <= K), None)
        if n is None:
            raise ArithmeticError("radical powers never enter the kernel")
        out[i] = n
    return out


# ---------------------------------------------------------------------------
# closure membership


@dataclass
class Coset:
    point: np.ndarray
    directions: SpanBasis

    @property
    def modulus(self) -> int:
        return self.directions.modulus


@dataclass
class ClosureResult:
    member: bool
    coefficients: list[TowerElement]
    level_cosets: list[Coset] = field(default_factory=list)


def _level_system(M: FiniteModule, gens: Sequence[np.ndarray]) -> np.ndarray:
    """Matrix of ``(a_1, ..., a_k) -> sum n_j a_j`` from ``R^k`` to ``M``."""
    cols = []
    for n in gens:
        for A in M.action:
            cols.append(modmatmul(A, np.asarray(n).reshape(-1, 1), M.modulus)[:, 0])
    return np.array(cols, dtype=dtype_for(M.modulus)).T.reshape(M.rank, -1)


def _level_coset(M: FiniteModule, gens: Sequence[np.ndarray], m: np.ndarray, level: int) -> Coset:
    mod = M.modulus
    A = _level_system(M, gens)
    Q = M.relations.annihilator
    if Q.shape[0] == 0:
        return Coset(np.zeros(A.shape[1], dtype=dtype_for(mod)), howell_form(np.eye(A.shape[1], dtype=np.int64), mod, A.shape[1]))
    solver = LinearSolver(modmatmul(Q, A, mod), mod, A.shape[1])
    x = solver.solve(modmatmul(Q, np.asarray(m).reshape(-1, 1), mod)[:, 0])
    if x is None:
        raise LevelUnsolvable(level)
    return Coset(x, preimage(A, M.relations))


def _reduce(span: SpanBasis, modulus: int) -> SpanBasis:
    return howell_form(span.array % modulus, modulus, span.ncols)


def _intersect_cosets(a: Coset, b: Coset) -> Coset | None:
    mod = a.modulus
    n = a.directions.ncols
    stacked = np.vstack([a.directions.array, b.directions.array]).reshape(-1, n)
    if stacked.shape[0] == 0:
        return a if not ((a.point - b.point) % mod).any() else None
    solver = LinearSolver(stacked.T, mod, stacked.shape[0])
    c = solver.solve((b.point - a.point) % mod)
    if c is None:
        return None
    ra = a.directions.rank
    u = modmatmul(c[:ra].reshape(1, -1), a.directions.array, mod)[0] if ra else np.zeros(n, dtype=a.point.dtype)
    return Coset((a.point + u) % mod, a.directions & b.directions)


def closure_membership(t: Tower, modules: Sequence[FiniteModule] | None, generators: Sequence, m) -> ClosureResult:
    """Decide whether ``m`` lies in the submodule generated by ``generators`` at every level compatibly.

    ``modules`` holds ``M_i`` over ``R_i`` (default: the regular modules) with
    reduction connectors; ``generators`` and ``m`` are deepest-level vectors.
    The solution set at level ``i`` is a coset ``X_i``; the sets
    ``Y_N = X_N``, ``Y_i = X_i & f(Y_{i+1})`` are formed from the deepest level
    up and a compatible tuple is then chosen from the coarsest level down.
    """
    N = t.depth
    mods = list(modules) if modules is not None else [regular_module(R) for R in t.levels]
    if len(mods) != N:
        raise ValueError("need one module per level")
    top = mods[-1]
    gens = [top.vec(g) for g in generators]
    mv = top.vec(m)
    X = []
    for i, M in enumerate(mods):
        mod = M.modulus
        X.append(_level_coset(M, [g % mod for g in gens], mv % mod, i + 1))
    Y: list[Coset | None] = [None] * N
    Y[-1] = X[-1]
    for i in range(N - 2, -1, -1):
        mod = X[i].modulus
        pushed = Coset(Y[i + 1].point % mod, _reduce(Y[i + 1].directions, mod))
        Y[i] = _intersect_cosets(X[i], pushed)
        if Y[i] is None:
            return ClosureResult(False, [], X)
    chosen = [Y[0].point]
    for i in range(1, N):
        fine, coarse = Y[i], chosen[-1]
        mod_c = X[i - 1].modulus
        D = fine.directions.array
        target = (coarse - fine.point) % mod_c
        if D.shape[0]:
            c = LinearSolver((D % mod_c).T, mod_c, D.shape[0]).solve(target)
        else:
            c = None if target.any() else np.zeros(0, dtype=np.int64)
        if c is None:
            raise CompatibilityViolation("coset chain does not lift")
        step = modmatmul(c.reshape(1, -1), D, fine.modulus)[0] if D.shape[0] else 0
        chosen.append((fine.point + step) % fine.modulus)
    k = len(gens)
    coeffs = []
    for j in range(k):
        comps = [t.levels[i].vec(chosen[i].reshape(k, -1)[j]) for i in range(N)]
        coeffs.append(TowerElement(t, comps))
    result = ClosureResult(True, coeffs, X)
    if not all(c.compatible() for c in coeffs) or not _solves(mods, gens, mv, chosen):
        raise CompatibilityViolation("closure solution failed verification")
    return result


def _solves(mods: Sequence[FiniteModule], gens, m, chosen) -> bool:
    for M, x in zip(mods, chosen):
        mod = M.modulus
        A = _level_system(M, [g % mod for g in gens])
        lhs = modmatmul(A, x.reshape(-1, 1), mod)[:, 0]
        if not M.relations.contains((lhs - m % mod) % mod):
            return False
    return True
