"""Built-in fixture rings, subring pairs, equalizer specs and modules."""

from __future__ import annotations

import itertools
import random
from typing import Callable, Iterator

import numpy as np

from .linalg import dtype_for
from .modules import FiniteModule, Presentation, abelian_group, change_basis, direct_sum_modules, regular_module
from .rings import (
    FiniteRing,
    RingHom,
    conjugation,
    cyclic_group_ring,
    galois_field,
    hom_from_images,
    identity_hom,
    matrix_ring,
    polynomial_quotient,
    product_projection,
    product_ring,
    quaternions,
    quotient_map,
    quotient_ring,
    upper_triangular,
    zmod,
)
from .subrings import EqualizerSpec, Subring, centralizer, invariant_subring, subring_closure

RING_BUILDERS: dict[str, Callable[[], FiniteRing]] = {
    "Z/4": lambda: zmod(4),
    "Z/6": lambda: zmod(6),
    "Z/8": lambda: zmod(8),
    "Z/9": lambda: zmod(9),
    "Z/12": lambda: zmod(12),
    "F4": lambda: galois_field(2, 2),
    "M2(F2)": lambda: matrix_ring(2, 2),
    "M2(F3)": lambda: matrix_ring(3, 2),
    "M2(Z/4)": lambda: matrix_ring(4, 2),
    "T2(F2)": lambda: upper_triangular(2, 2),
    "T2(F3)": lambda: upper_triangular(3, 2),
    "T3(F2)": lambda: upper_triangular(2, 3),
    "F2xF2": lambda: product_ring(zmod(2), zmod(2)),
    "Z/4xZ/2": lambda: product_ring(zmod(4), zmod(2)),
    "F2[C2]": lambda: cyclic_group_ring(2, 2),
    "F3[C3]": lambda: cyclic_group_ring(3, 3),
    "Z/4[x]/x^2": lambda: polynomial_quotient(4, [0, 0]),
    "Q(Z/3)": lambda: quaternions(3),
}

# rings with at most 4096 elements used for the exhaustive Fitting checks
FITTING_RINGS = ("Z/4", "Z/6", "Z/8", "Z/9", "F4", "M2(F2)", "M2(Z/4)", "T2(F2)", "T2(F3)", "F2xF2", "F2[C2]")

_cache: dict[str, FiniteRing] = {}


def ring(name: str) -> FiniteRing:
    """A catalog ring by name (cached)."""
    if name.startswith("builtin:"):
        name = name[len("builtin:") :]
    if name not in RING_BUILDERS:
        raise KeyError(f"unknown catalog ring {name!r}")
    if name not in _cache:
        _cache[name] = RING_BUILDERS[name]()
    return _cache[name]


def names() -> list[str]:
    return list(RING_BUILDERS)


def describe() -> list[dict]:
    return [{"name": n, "modulus": ring(n).modulus, "dim": ring(n).dim, "order": ring(n).order} for n in names()]


def matrix_element(R: FiniteRing, rows) -> np.ndarray:
    """Coordinates of a matrix in a ``matrix_ring`` or ``upper_triangular`` ring.

    Over a base ring of dimension above one an entry is either a coordinate
    list in the base ring or an integer, read as a multiple of the first base
    basis element (the unity of the built-in fields).
    """
    v = np.zeros(R.dim, dtype=dtype_for(R.modulus))
    seen: dict[tuple[int, int], int] = {}
    for lab_idx, lab in enumerate(R.labels):
        a, b = int(lab[1]) - 1, int(lab[2]) - 1
        k = seen.get((a, b), 0)
        seen[(a, b)] = k + 1
        entry = rows[a][b]
        if isinstance(entry, (list, tuple, np.ndarray)):
            v[lab_idx] = int(entry[k]) % R.modulus
        elif k == 0:
            v[lab_idx] = int(entry) % R.modulus
    return R.vec(v)


def _random_unit(R: FiniteRing, rng: random.Random) -> np.ndarray:
    while True:
        x = np.array([rng.randrange(R.modulus) for _ in range(R.dim)])
        if R.is_unit(x):
            return R.vec(x)


def _random_element(R: FiniteRing, rng: random.Random) -> np.ndarray:
    return R.vec([rng.randrange(R.modulus) for _ in range(R.dim)])


# ---------------------------------------------------------------------------
# subring pairs


def subring_pairs(seed: int = 0) -> list[tuple[str, FiniteRing, Subring]]:
    """Centralizers and invariant subrings across the catalog."""
    rng = random.Random(seed)
    out = []
    for name in FITTING_RINGS + ("M2(F3)", "T3(F2)", "Z/4[x]/x^2", "Q(Z/3)"):
        R = ring(name)
        for i in range(R.dim):
            out.append((f"Cent_{name}(b{i})", R, centralizer(R, [R.basis(i)])))
        for k in range(2):
            x = _random_element(R, rng)
            out.append((f"Cent_{name}(random {k})", R, centralizer(R, [x])))
        u = _random_unit(R, rng)
        out.append((f"Fix_{name}(conj)", R, invariant_subring(R, [conjugation(R, u)])))
        out.append((f"Prime_{name}", R, subring_closure(R)))
    return out


# ---------------------------------------------------------------------------
# equalizer specs and involutions


def _frobenius(F: FiniteRing, p: int) -> RingHom:
    imgs = [F.pow_vec(F.basis(i).coords, p) for i in range(F.dim)]
    return hom_from_images(F, F, imgs)


def _swap(P: FiniteRing, d: int) -> RingHom:
    M = np.zeros((P.dim, P.dim), dtype=np.int64)
    M[:d, d:] = np.eye(d, dtype=np.int64)
    M[d:, :d] = np.eye(d, dtype=np.int64)
    return RingHom(P, P, M)


def involutions() -> list[tuple[str, FiniteRing, RingHom]]:
    """Involutive automorphisms ``sigma`` (``sigma^2 = id``)."""
    out = []
    for name in ("Z/4", "F2xF2", "M2(F2)", "M2(F3)", "T2(F3)", "F4", "F2[C2]", "Z/4xZ/2"):
        R = ring(name)
        out.append((f"id_{name}", R, identity_hom(R)))
    P = ring("F2xF2")
    out.append(("swap_F2xF2", P, _swap(P, 1)))
    F4 = ring("F4")
    out.append(("frobenius_F4", F4, _frobenius(F4, 2)))
    M = ring("M2(F2)")
    out.append(("conj_M2(F2)", M, conjugation(M, matrix_element(M, [[0, 1], [1, 0]]))))
    M3 = ring("M2(F3)")
    out.append(("conj_M2(F3)", M3, conjugation(M3, matrix_element(M3, [[1, 0], [0, 2]]))))
    T = ring("T2(F3)")
    out.append(("conj_T2(F3)", T, conjugation(T, matrix_element(T, [[1, 0], [0, 2]]))))
    out.append(("conj_M2(Z/4)", ring("M2(Z/4)"), conjugation(ring("M2(Z/4)"), matrix_element(ring("M2(Z/4)"), [[1, 0], [0, 3]]))))
    return out


def equalizer_specs(seed: int = 0) -> list[tuple[str, EqualizerSpec]]:
    rng = random.Random(seed)
    out = []
    for name in ("Z/4", "M2(F2)", "M2(F3)", "T2(F2)", "T2(F3)", "M2(Z/4)", "F2[C2]", "Q(Z/3)", "T3(F2)"):
        R = ring(name)
        ident = identity_hom(R)
        u = _random_unit(R, rng)
        out.append((f"{name}: id = conj(u)", EqualizerSpec(R, [(R, ident, conjugation(R, u))])))
        u2 = _random_unit(R, rng)
        out.append((f"{name}: two conjugations", EqualizerSpec(R, [(R, ident, conjugation(R, u)), (R, ident, conjugation(R, u2))])))
    P = ring("F2xF2")
    pr = [zmod(2), zmod(2)]
    out.append(("F2xF2: projections", EqualizerSpec(P, [(pr[0], product_projection(P, pr, 0), product_projection(P, pr, 1))])))
    out.append(("F2xF2: swap", EqualizerSpec(P, [(P, identity_hom(P), _swap(P, 1))])))
    F4 = ring("F4")
    out.append(("F4: frobenius", EqualizerSpec(F4, [(F4, identity_hom(F4), _frobenius(F4, 2))])))
    Z = ring("Z/4xZ/2")
    F2 = zmod(2)
    out.append(("Z/4xZ/2: reductions agree", EqualizerSpec(Z, [(F2, RingHom(Z, F2, [[1, 0]]), RingHom(Z, F2, [[0, 1]]))])))
    M = ring("M2(Z/4)")
    Q = quotient_ring(M, M.span([2 * np.eye(M.dim, dtype=np.int64)[i] for i in range(M.dim)]))
    qm = quotient_map(M, Q)
    u = matrix_element(M, [[1, 1], [0, 1]])
    out.append(("M2(Z/4): conj mod 2", EqualizerSpec(M, [(Q, qm, qm.compose(conjugation(M, u)))])))
    return out


# ---------------------------------------------------------------------------
# modules


def t2_indecomposables(p: int = 2) -> dict[str, FiniteModule]:
    """The right modules ``S1``, ``S2`` and ``P1 = e11 T`` over ``T2(F_p)`` (basis e11, e12, e22)."""
    T = upper_triangular(p, 2)
    S1 = FiniteModule(T, 1, None, [[[1]], [[0]], [[0]]])
    S2 = FiniteModule(T, 1, None, [[[0]], [[0]], [[1]]])
    P1 = FiniteModule(T, 2, None, [[[1, 0], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]]])
    return {"S1": S1, "S2": S2, "P1": P1}


def _partitions(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def abelian_modules(modulus: int, max_order: int) -> list[tuple[tuple[int, ...], FiniteModule]]:
    """Every ``Z/modulus``-module with at most ``max_order`` elements, one per isomorphism class."""
    from sympy import factorint

    primes = factorint(modulus)
    per_prime = []
    for p, e in primes.items():
        opts = []
        n = 0
        while p**n <= max_order:
            for part in _partitions(n, e):
                opts.append(tuple(p**k for k in part))
            n += 1
        per_prime.append(opts)
    out = []
    for combo in itertools.product(*per_prime):
        orders = tuple(sorted((o for part in combo for o in part), reverse=True))
        size = int(np.prod(orders)) if orders else 1
        if size <= max_order and orders:
            out.append((orders, abelian_group(list(orders), modulus)))
    out.sort(key=lambda x: (int(np.prod(x[0])), x[0]))
    return out


def t2_modules(max_dim: int) -> list[tuple[tuple[int, int, int], FiniteModule]]:
    """``S1^a + S2^b + P1^c`` over ``T2(F2)`` with ``a + b + 2c <= max_dim`` (not all zero)."""
    ind = t2_indecomposables(2)
    out = []
    for c in range(max_dim // 2 + 1):
        for a in range(max_dim - 2 * c + 1):
            for b in range(max_dim - 2 * c - a + 1):
                if a + b + c == 0:
                    continue
                mods = [ind["S1"]] * a + [ind["S2"]] * b + [ind["P1"]] * c
                out.append(((a, b, c), direct_sum_modules(mods)))
    return out


def disguise(M: FiniteModule, rng: random.Random) -> FiniteModule:
    """The same module after a random invertible change of coordinates."""
    m = M.modulus
    t = M.rank
    while True:
        P = np.array([[rng.randrange(m) for _ in range(t)] for _ in range(t)], dtype=np.int64)
        try:
            return change_basis(M, P)
        except Exception:
            continue


def presentations() -> list[tuple[str, Presentation]]:
    """Small presentations over Z/4, Z/8, Z/9 and T2(F2)."""
    out = []
    for name in ("Z/4", "Z/8", "Z/9"):
        R = ring(name)
        m = R.modulus
        entries = [
            [[2]],
            [[0]],
            [[1]],
            [[m - 1]],
            [[2], [0]],
            [[2, 0], [0, 3 % m]],
            [[2, 2]],
        ]
        if m == 9:
            entries = [[[3]], [[0]], [[1]], [[3], [0]], [[3, 0], [0, 6]], [[3, 3]], [[0, 3]]]
        for e in entries:
            out.append((f"{name}: {e}", Presentation.from_entries(R, [[[x] for x in row] for row in e])))
    T = ring("T2(F2)")
    tm = lambda rows: matrix_element(T, rows)
    out.append(("T2(F2): e12", Presentation.from_entries(T, [[tm([[0, 1], [0, 0]])]])))
    out.append(("T2(F2): e11", Presentation.from_entries(T, [[tm([[1, 0], [0, 0]])]])))
    out.append(("T2(F2): e22", Presentation.from_entries(T, [[tm([[0, 0], [0, 1]])]])))
    out.append(("T2(F2): 0", Presentation.from_entries(T, [[tm([[0, 0], [0, 0]])]])))
    out.append(("T2(F2): [e11, e12]", Presentation.from_entries(T, [[tm([[1, 0], [0, 0]]), tm([[0, 1], [0, 0]])]])))
    return out


def restriction_fixtures() -> list[tuple[str, FiniteRing, Subring, FiniteModule]]:
    """Triples ``(S, R <= S, M_S)``."""
    out = []

    def add(label, S, R, M):
        out.append((label, S, R, M))

    S = ring("Z/4[x]/x^2")
    add("Z/4 <= Z/4[x]/x^2, regular", S, subring_closure(S), regular_module(S))
    P = ring("F2xF2")
    add("F2 <= F2xF2, regular", P, subring_closure(P), regular_module(P))
    F4 = ring("F4")
    add("F2 <= F4, regular", F4, subring_closure(F4), regular_module(F4))
    M2 = ring("M2(F2)")
    upper = Subring(M2, M2.span([matrix_element(M2, r) for r in ([[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [0, 1]])]))
    add("T2(F2) <= M2(F2), regular", M2, upper, regular_module(M2))
    diag = Subring(M2, M2.span([matrix_element(M2, r) for r in ([[1, 0], [0, 0]], [[0, 0], [0, 1]])]))
    add("diag <= M2(F2), regular", M2, diag, regular_module(M2))
    T = ring("T2(F2)")
    tdiag = Subring(T, T.span([matrix_element(T, r) for r in ([[1, 0], [0, 0]], [[0, 0], [0, 1]])]))
    ind = t2_indecomposables(2)
    add("diag <= T2(F2), P1", T, tdiag, ind["P1"])
    add("diag <= T2(F2), P1 + S1", T, tdiag, direct_sum_modules([ind["P1"], ind["S1"]]))
    add("F2 <= T2(F2), regular", T, subring_closure(T), regular_module(T))
    Z = ring("Z/4xZ/2")
    add("prime <= Z/4xZ/2, regular", Z, subring_closure(Z), regular_module(Z))
    G = ring("F2[C2]")
    add("F2 <= F2[C2], regular", G, subring_closure(G), regular_module(G))
    M4 = ring("M2(Z/4)")
    add("Cent(e12) <= M2(Z/4), regular", M4, centralizer(M4, [matrix_element(M4, [[0, 1], [0, 0]])]), regular_module(M4))
    Q = ring("Q(Z/3)")
    add("F3 <= Q(Z/3), regular", Q, subring_closure(Q), regular_module(Q))
    return out
