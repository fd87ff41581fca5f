"""Resolution topologies on ``End(M)``.

For a resolution ``E_{n-1} -> ... -> E_0 -> M -> 0`` by free modules and an
ideal ``J = gA`` of the base ring ``A`` (the integers, or ``Z/m``), the set
``Ball(J, E)`` consists of the endomorphisms ``f`` of ``M`` that extend to a
chain map ``f_i : E_i -> E_i`` with every image inside ``E_i J``.

Liftability is decided by one joint linear system over all levels: the
unknowns are ``f = f_{-1}``, the reduced maps ``f_i'`` with ``f_i = g f_i'``,
and auxiliary coefficients expressing membership in the relation lattice of
``M``.  Over the integers the system is solved with the Smith form; over
``Z/m`` with Howell forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NotExact
from .linalg import SpanBasis, howell_form, int_det, int_solve, kernel, smith_form, solve_linear, zero_span

Matrix = list[list[int]]


def _mat(A, rows: int | None = None, cols: int | None = None) -> Matrix:
    out = [[int(x) for x in r] for r in A]
    if not out and rows is not None:
        out = [[0] * (cols or 0) for _ in range(rows)]
    return out


def _shape(A: Matrix, rows: int | None = None) -> tuple[int, int]:
    return (len(A), len(A[0]) if A else 0)


@dataclass
class Resolution:
    """Free resolution data over the integers (``base=None``) or over ``Z/base``.

    The module is ``M = A^t / L`` where the columns of ``relations`` (a
    ``t x s`` matrix) generate ``L``.  ``maps[0]`` is ``d_0 : E_0 -> M``
    (``t x r_0``) and ``maps[i]`` is ``d_i : E_i -> E_{i-1}``.
    """

    t: int
    relations: Matrix  # t x s, columns generate the relation lattice
    maps: list[Matrix]
    base: int | None = None

    @property
    def length(self) -> int:
        return len(self.maps)

    def ranks(self) -> list[int]:
        return [_shape(d)[1] if d else 0 for d in self.maps]

    @property
    def exponent(self) -> int:
        """Exponent of ``M`` (the modulus used for ``End(M)`` coordinates)."""
        if self.base is not None:
            return self.base
        rows = [list(r) for r in zip(*self.relations)]  # generators as rows
        _, D, _ = smith_form([list(c) for c in map(list, zip(*rows))] if rows else [[0] * self.t])
        diag = [abs(D[i][i]) for i in range(min(len(D), len(D[0]) if D else 0))]
        if len([x for x in diag if x]) < self.t:
            raise NotExact("module is infinite")
        return math.lcm(*diag) if diag else 1

    def check(self) -> None:
        """Raise ``NotExact`` unless ``d_0`` is onto ``M`` and the sequence is exact at every ``E_i`` shown."""
        if not self.maps:
            return
        solve = _solver(self.base)
        t = self.t
        P = self.relations
        d0 = self.maps[0]
        r0 = _shape(d0)[1]
        cat = [d0[i] + P[i] for i in range(t)] if t else []
        for i in range(t):
            e = [int(i == j) for j in range(t)]
            if solve(cat, e)[0] is None:
                raise NotExact("d_0 is not surjective")
        # kernel of d_0 modulo the relations
        for k in range(1, self.length + 1):
            prev = self.maps[k - 1]
            if k == 1:
                A = [d0[i] + [-x for x in P[i]] for i in range(t)]
                ker = [v[:r0] for v in solve(A, [0] * t)[1]]
                rows_prev = r0
            else:
                A = prev
                ker = solve(A, [0] * _shape(A)[0])[1]
                rows_prev = _shape(prev)[1]
            if k == self.length:
                break
            nxt = self.maps[k]
            if _shape(nxt)[0] != rows_prev:
                raise NotExact("differential shapes do not chain")
            # image of d_k equals the kernel
            for v in ker:
                if solve(nxt, v)[0] is None:
                    raise NotExact(f"not exact at E_{k - 1}")
            for col in zip(*nxt) if nxt and nxt[0] else []:
                img = list(col)
                if k == 1:
                    dv = _apply(d0, img)
                    if solve(P, dv)[0] is None:
                        raise NotExact("d_0 d_1 is nonzero")
                else:
                    if any(x % (self.base or 0) if self.base else x for x in _apply(prev, img)):
                        raise NotExact(f"d_{k - 1} d_{k} is nonzero")


def _apply(A: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def _solver(base: int | None):
    """``solve(A, b) -> (x or None, kernel rows)`` over the integers or ``Z/base``."""
    if base is None:
        return int_solve

    def solve(A, b):
        A = np.array(A, dtype=object).reshape(len(A), -1) if A else np.zeros((0, 0), dtype=object)
        if A.shape[0] == 0:
            n = A.shape[1]
            return [0] * n, [[int(i == j) for j in range(n)] for i in range(n)]
        x, ker = solve_linear(np.array(A.tolist(), dtype=np.int64) % base, np.array(b, dtype=np.int64) % base, base)
        return (None if x is None else [int(v) for v in x]), [[int(v) for v in r] for r in ker.array]

    return solve


class _LinearSystem:
    """Equations ``sum_k A_k X_k B_k = C`` in matrix unknowns, flattened row-major."""

    def __init__(self):
        self.vars: dict[str, tuple[int, int, int]] = {}
        self.size = 0
        self.rows: list[list[int]] = []
        self.rhs: list[int] = []

    def var(self, name: str, shape: tuple[int, int]) -> str:
        self.vars[name] = (self.size, shape[0], shape[1])
        self.size += shape[0] * shape[1]
        return name

    def equation(self, terms, rhs: Matrix | None, shape: tuple[int, int]) -> None:
        rows = [[0] * self.size for _ in range(shape[0] * shape[1])]
        for A, name, B in terms:
            off, p, q = self.vars[name]
            A = A if A is not None else [[int(i == j) for j in range(p)] for i in range(p)]
            B = B if B is not None else [[int(i == j) for j in range(q)] for i in range(q)]
            # (A X B)[a][b] = sum_{i,j} A[a][i] X[i][j] B[j][b]
            for a in range(shape[0]):
                for b in range(shape[1]):
                    row = rows[a * shape[1] + b]
                    for i in range(p):
                        if not A[a][i]:
                            continue
                        for j in range(q):
                            if B[j][b]:
                                row[off + i * q + j] += A[a][i] * B[j][b]
        self.rows += rows
        flat = [0] * (shape[0] * shape[1]) if rhs is None else [int(x) for r in rhs for x in r]
        self.rhs += flat

    def extend_rows(self) -> list[list[int]]:
        return [r + [0] * (self.size - len(r)) for r in self.rows]


def _scaled(A: Matrix, g: int) -> Matrix:
    return [[g * x for x in r] for r in A]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _neg(A: Matrix) -> Matrix:
    return [[-x for x in r] for r in A]


def _build(res: Resolution, g: int, fixed: Matrix | None):
    """The joint lifting system; unknown ``F`` is omitted when ``fixed`` is given."""
    t = res.t
    P = res.relations
    s = _shape(P)[1]
    ranks = res.ranks()
    sys = _LinearSystem()
    if fixed is None:
        sys.var("F", (t, t))
    for i, r in enumerate(ranks):
        sys.var(f"f{i}", (r, r))
    if s:
        sys.var("lam_end", (s, t))  # F P = P lam_end
        sys.var("lam_img", (s, t))  # F = g H + P lam_img
        if ranks:
            sys.var("lam0", (s, ranks[0]))  # d0 g f0' - F d0 = P lam0
    if fixed is None:
        sys.var("H", (t, t))
    # F endomorphism of M
    if s:
        if fixed is None:
            sys.equation([(None, "F", P), (_neg(P), "lam_end", None)], None, (t, s))
        else:
            FP = [[sum(fixed[a][k] * P[k][b] for k in range(t)) for b in range(s)] for a in range(t)]
            sys.equation([(P, "lam_end", None)], FP, (t, s))
    # image inside g M
    if fixed is None:
        terms = [(None, "F", None), (_neg(_scaled(_identity(t), g)), "H", None)]
        if s:
            terms.append((_neg(P), "lam_img", None))
        sys.equation(terms, None, (t, t))
    # chain conditions
    if ranks:
        d0 = res.maps[0]
        terms = [(_scaled(d0, g), "f0", None)]
        if s:
            terms.append((_neg(P), "lam0", None))
        if fixed is None:
            terms.append((_neg(_identity(t)), "F", d0))
            sys.equation(terms, None, (t, ranks[0]))
        else:
            Fd0 = [[sum(fixed[a][k] * d0[k][b] for k in range(t)) for b in range(ranks[0])] for a in range(t)]
            sys.equation(terms, Fd0, (t, ranks[0]))
        for i in range(1, len(ranks)):
            di = res.maps[i]
            sys.equation([(_scaled(di, g), f"f{i}", None), (_neg(_scaled(_identity(ranks[i - 1]), g)), f"f{i - 1}", di)], None, (ranks[i - 1], ranks[i]))
    return sys


def _fixed_image_ok(res: Resolution, F: Matrix, g: int) -> bool:
    """Columns of ``F`` lie in ``g A^t + L``."""
    solve = _solver(res.base)
    t = res.t
    gen = [[g * int(i == j) for j in range(t)] + list(res.relations[i]) for i in range(t)]
    return all(solve(gen, [F[i][j] for i in range(t)])[0] is not None for j in range(t))


@dataclass
class Chain:
    f: Matrix  # f_{-1}
    maps: list[Matrix]  # f_0, ..., f_{n-1}


def lift_through(res: Resolution, f, g: int) -> Chain | None:
    """A chain map extending ``f`` with every image inside ``E_i J`` (``J = gA``), or ``None``."""
    res.check()
    F = _mat(f)
    if not _fixed_image_ok(res, F, g):
        return None
    sys = _build(res, g, F)
    A = sys.extend_rows()
    if not A:
        return Chain(F, [])
    x, _ = _solver(res.base)(A, sys.rhs)
    if x is None:
        return None
    out = []
    for i, r in enumerate(res.ranks()):
        off, p, q = sys.vars[f"f{i}"]
        vals = x[off : off + p * q]
        M = [[g * vals[a * q + b] for b in range(q)] for a in range(p)]
        if res.base:
            M = [[v % res.base for v in row] for row in M]
        out.append(M)
    return Chain(F, out)


def verify_chain(res: Resolution, chain: Chain, g: int) -> bool:
    """Re-check every condition of a lifting chain directly."""
    solve = _solver(res.base)
    t, P = res.t, res.relations
    mod = res.base
    F = chain.f

    def zero(v):
        return all((x % mod == 0) if mod else x == 0 for x in v)

    if not _fixed_image_ok(res, F, g):
        return False
    for fi in chain.maps:
        gen = _scaled(_identity(len(fi)), g)
        if any(solve(gen, list(col))[0] is None for col in zip(*fi)):
            return False
    if chain.maps:
        d0 = res.maps[0]
        f0 = chain.maps[0]
        for b in range(len(f0)):
            lhs = _apply(d0, [f0[k][b] for k in range(len(f0))])
            rhs = _apply(F, [d0[k][b] for k in range(t)])
            diff = [x - y for x, y in zip(lhs, rhs)]
            if P and P[0]:
                if solve(P, diff)[0] is None:
                    return False
            elif not zero(diff):
                return False
        for i in range(1, len(chain.maps)):
            di, fi, fp = res.maps[i], chain.maps[i], chain.maps[i - 1]
            for b in range(len(fi)):
                lhs = _apply(di, [fi[k][b] for k in range(len(fi))])
                rhs = _apply(fp, [di[k][b] for k in range(len(fp))])
                if not zero([x - y for x, y in zip(lhs, rhs)]):
                    return False
    return True


# ---------------------------------------------------------------------------
# ball ideals


def _zero_maps(res: Resolution) -> SpanBasis:
    """Flattened ``t x t`` maps with image inside the relations, reduced mod the exponent."""
    N, t = res.exponent, res.t
    rows = []
    for col in zip(*res.relations) if res.relations and res.relations[0] else []:
        for l in range(t):
            F = np.zeros((t, t), dtype=np.int64)
            F[:, l] = np.array(col) % N
            rows.append(F.reshape(-1))
    for l in range(t):
        for a in range(t):
            F = np.zeros((t, t), dtype=np.int64)
            F[a, l] = N
            rows.append(F.reshape(-1) % N)
    return howell_form(np.array(rows).reshape(-1, t * t), N, t * t) if rows else zero_span(N, t * t)


@dataclass
class BallIdeal:
    resolution: Resolution
    generator: int  # J = generator * A
    span: SpanBasis  # flattened maps mod the exponent, zero maps included
    witnesses: list[Chain] = field(default_factory=list)

    def contains(self, F) -> bool:
        N = self.span.modulus
        return self.span.contains(np.array(F, dtype=np.int64).reshape(-1) % N)

    @property
    def order(self) -> int:
        """Number of endomorphisms in the ball."""
        return self.span.size // _zero_maps(self.resolution).size

    def members(self) -> list[np.ndarray]:
        t = self.resolution.t
        return [r.reshape(t, t) for r in self.span.array]


def _ball_span(res: Resolution, g: int, with_chains: bool) -> SpanBasis:
    sys = _build(res, g, None)
    A = sys.extend_rows()
    off, p, q = sys.vars["F"]
    N, t = res.exponent, res.t
    if res.base is None:
        _, ker = int_solve(A, [0] * len(A))
        vecs = [v[off : off + p * q] for v in ker]
    else:
        arr = np.array(A, dtype=np.int64) % res.base
        ker = kernel(arr, res.base, sys.size)
        vecs = [list(r[off : off + p * q]) for r in ker.array]
    rows = np.array(vecs, dtype=object).reshape(-1, t * t) % N if vecs else np.zeros((0, t * t), dtype=np.int64)
    return howell_form(np.array(rows.tolist(), dtype=np.int64).reshape(-1, t * t), N, t * t) + _zero_maps(res)


def ball_ideal(res: Resolution, g: int, witnesses: bool = True) -> BallIdeal:
    """``Ball(gA, E)`` as a span of endomorphisms with lifting witnesses for its generators."""
    res.check()
    span = _ball_span(res, g, witnesses)
    chains = []
    if witnesses:
        t = res.t
        for row in span.array:
            chain = lift_through(res, row.reshape(t, t).tolist(), g)
            if chain is None:
                raise ArithmeticError("generator of the ball does not lift")
            chains.append(chain)
        end = endomorphisms(res)
        t = res.t
        if not (compose_spans(end, span, t) <= span and compose_spans(span, end, t) <= span):
            raise ArithmeticError("ball is not an ideal of End(M)")
    return BallIdeal(res, g, span, chains)


def endomorphisms(res: Resolution) -> SpanBasis:
    """``End(M)`` in the same flattened coordinates."""
    base = Resolution(res.t, res.relations, [], res.base)
    return _ball_span(base, 1, False)


def endomorphism_count(res: Resolution) -> int:
    return endomorphisms(res).size // _zero_maps(res).size


def hom_into_multiple(res: Resolution, g: int) -> SpanBasis:
    """``Hom(M, MJ)`` for ``J = gA``."""
    base = Resolution(res.t, res.relations, [], res.base)
    return _ball_span(base, g, False)


def compose_spans(X: SpanBasis, Y: SpanBasis, t: int) -> SpanBasis:
    """Additive span of all composites ``x o y``."""
    N = X.modulus
    prods = [(x.reshape(t, t) @ y.reshape(t, t) % N).reshape(-1) for x in X.array for y in Y.array]
    return howell_form(np.array(prods).reshape(-1, t * t), N, t * t) if prods else zero_span(N, t * t)


@dataclass
class TopologyComparison:
    ideals: list[int]
    balls1: list[SpanBasis]
    balls2: list[SpanBasis]
    equal_per_ideal: list[bool]
    coincide: bool
    separating_ideal: int | None
    witness: np.ndarray | None

    def summary(self) -> str:
        if self.coincide:
            return "tau_1 = tau_2"
        f = self.witness
        return f"tau_2 != tau_1; separating ideal {self.separating_ideal}Z; witness {f.tolist()}"


def compare_topologies(res1: Resolution, res2: Resolution, ideals: Sequence[int]) -> TopologyComparison:
    """Compare the topologies generated by ``Ball(J, res1)`` and ``Ball(J, res2)`` over the ideal list.

    The topologies agree when every ball of one contains some ball of the
    other.  A separating ideal ``I`` is the first one for which no ``I'``
    gives ``Ball1(I') <= Ball2(I)`` (or symmetrically); the witness is the
    first canonical generator of ``Ball1(I)`` missing from ``Ball2(I)``.
    """
    b1 = [ball_ideal(res1, g, witnesses=False).span for g in ideals]
    b2 = [ball_ideal(res2, g, witnesses=False).span for g in ideals]
    equal = [x == y for x, y in zip(b1, b2)]
    sep, wit = None, None
    for first, second in ((b1, b2), (b2, b1)):
        for k, g in enumerate(ideals):
            if not any(first[j] <= second[k] for j in range(len(ideals))):
                sep = g
                t = res1.t
                miss = next(r for r in first[k].array if not second[k].contains(r))
                wit = miss.reshape(t, t)
                break
        if sep is not None:
            break
    return TopologyComparison(list(ideals), b1, b2, equal, sep is None, sep, wit)


def resolution_independence_check(res1: Resolution, res2: Resolution, g: int) -> bool:
    return ball_ideal(res1, g, witnesses=False).span == ball_ideal(res2, g, witnesses=False).span


# ---------------------------------------------------------------------------
# fixtures


def abelian_resolution(orders: Sequence[int], length: int = 2) -> Resolution:
    """``Z^k --diag(orders)--> Z^k --id--> Z/o_1 + ... + Z/o_k``, truncated to ``length``."""
    k = len(orders)
    rel = [[o if i == j else 0 for j in range(k)] for i, o in enumerate(orders)]
    maps = [_identity(k), rel][:length]
    return Resolution(k, rel, maps, None)


def residue_resolution(orders: Sequence[int], modulus: int, length: int = 2) -> Resolution:
    """The analogous resolution of ``Z/o_1 + ...`` over ``Z/modulus`` (each ``o_i`` dividing it).

    ``d_1`` is ``diag(o_i)`` and, when length 3 is asked for, ``d_2`` is
    ``diag(modulus / o_i)``.
    """
    k = len(orders)
    rel = [[o % modulus if i == j else 0 for j in range(k)] for i, o in enumerate(orders)]
    co = [[(modulus // o) % modulus if i == j else 0 for j in range(k)] for i, o in enumerate(orders)]
    maps = [_identity(k), rel, co][:length]
    return Resolution(k, rel, maps, modulus)


def add_free_summand(res: Resolution) -> Resolution:
    """Add a trivial ``A --id--> A`` summand at ``E_1 -> E_0`` (needs length at least 2)."""
    if res.length < 2:
        raise ValueError("needs a resolution of length at least 2")
    d0 = [row + [0] for row in res.maps[0]]
    d1 = [row + [0] for row in res.maps[1]] + [[0] * _shape(res.maps[1])[1] + [1]]
    maps = [d0, d1]
    for k in range(2, res.length):
        dk = res.maps[k]
        maps.append(dk + [[0] * _shape(dk)[1]])
    return Resolution(res.t, res.relations, maps, res.base)


def change_presentation(res: Resolution, U: Matrix) -> Resolution:
    """Replace ``d_1`` by ``d_1 U`` for a unimodular ``U`` (same image)."""
    if res.length < 2:
        raise ValueError("needs a resolution of length at least 2")
    if abs(int_det(U)) != 1:
        raise ValueError("matrix is not unimodular")
    d1 = res.maps[1]
    r1 = _shape(d1)[1]
    new = [[sum(d1[a][k] * U[k][b] for k in range(r1)) for b in range(r1)] for a in range(len(d1))]
    # U^-1 on E_1 keeps d_2 consistent: d_2' = U^-1 d_2
    maps = [res.maps[0], new]
    if res.length > 2:
        Ui = _inverse_unimodular(U)
        d2 = res.maps[2]
        maps.append([[sum(Ui[a][k] * d2[k][b] for k in range(r1)) for b in range(_shape(d2)[1])] for a in range(r1)])
        maps += res.maps[3:]
    return Resolution(res.t, res.relations, maps, res.base)


def _inverse_unimodular(U: Matrix) -> Matrix:
    n = len(U)
    cols = []
    for j in range(n):
        x, _ = int_solve(U, [int(i == j) for i in range(n)])
        if x is None:
            raise ValueError("matrix is not unimodular")
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def appendix_fixture() -> tuple[Resolution, Resolution, list[int]]:
    """``M = Z/4 + Z/2`` over the integers: lengths 1 and 2 and the ideals ``2 * 3^n``, ``n <= 3``."""
    return abelian_resolution([4, 2], 1), abelian_resolution([4, 2], 2), [2 * 3**n for n in range(4)]


def z9_fixture() -> tuple[Resolution, Resolution, list[int]]:
    """``M = Z/3 + Z/9`` over ``Z/9`` with the powers of the maximal ideal."""
    return residue_resolution([3, 9], 9, 1), residue_resolution([3, 9], 9, 2), [1, 3, 9]


FIXTURES = {"appendix": appendix_fixture, "z9": z9_fixture}
