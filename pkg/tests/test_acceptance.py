"""The twelve acceptance criteria, each checked against brute force where the sizes allow.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary prints
one pass/fail line per criterion.
"""

import itertools
import math
import random
from collections import Counter

import pytest

from oracles import (
    BruteRing,
    brute_end_is_local,
    brute_hom_order,
    brute_is_isomorphic,
    brute_n_min,
    brute_qualifying,
    exhaustive_decomposition,
    nilpotent_mask,
    power_sets,
)
from semiinv import catalog
from semiinv.fitting import associated_idempotent
from semiinv.modules import abelian_group, exact_sequence_ring, krull_schmidt, restricted_endomorphism_check
from semiinv.radical import jacobson_radical, lift_idempotent, radical_power_chain
from semiinv.restopo import appendix_fixture, ball_ideal, compare_topologies, endomorphism_count, hom_into_multiple
from semiinv.rings import quotient_ring
from semiinv.subrings import (
    build_product_equalizer,
    build_twisted_involution_quotient,
    centralizer,
    equalizer_subring,
    verify_main_theorem,
)
from semiinv.towers import (
    build_truncation_tower,
    invariant_levels,
    jacobson_power_openness,
    quaternion_opposite_units,
    tower_associated_idempotent,
)

_brute: dict[str, BruteRing] = {}


def brute(name: str) -> BruteRing:
    if name not in _brute:
        _brute[name] = BruteRing(catalog.ring(name))
    return _brute[name]


def small_brute(R, limit: int = 4096) -> BruteRing | None:
    for name in catalog.names():
        if catalog.ring(name) == R:
            return brute(name)
    return BruteRing(R) if R.order <= limit else None


def brute_for(R) -> BruteRing:
    B = small_brute(R)
    assert B is not None
    return B


@pytest.mark.criterion(1, "associated idempotents: soundness and uniqueness")
def test_fitting_soundness_and_uniqueness():
    checked = 0
    for name in catalog.FITTING_RINGS:
        B = brute(name)
        R = B.R
        nil = nilpotent_mask(B)
        for i, v in enumerate(B.elements):
            cert = associated_idempotent(R.element(v))
            assert cert.verify(), (name, v)
            found = brute_qualifying(B, i, nil)
            assert len(found) == 1, (name, v, found)
            assert B.key(cert.idempotent.coords) == found[0], (name, v)
            checked += 1
    assert checked == sum(catalog.ring(n).order for n in catalog.FITTING_RINGS)
    Z6 = catalog.ring("Z/6")
    assert associated_idempotent(Z6.element([2])).idempotent.coords == (4,)


@pytest.mark.criterion(2, "semi-invariant transfer of associated idempotents")
def test_semi_invariant_transfer():
    pairs = catalog.subring_pairs(0)
    assert len(pairs) >= 50
    violations = []
    for label, R, R0 in pairs:
        for v in R0.element_array(None):
            e = associated_idempotent(R.element(v)).idempotent
            if not R0.contains(e.coords):
                violations.append((label, v))
    assert violations == []


@pytest.mark.criterion(3, "radical-power inclusion: finite n_min, matches brute force")
def test_main_theorem():
    for label, R, R0 in catalog.subring_pairs(0):
        rep = verify_main_theorem(R, R0)
        assert rep.n_min >= 1
        assert rep.powers[-1] <= rep.ambient_radical
        B = small_brute(R)
        if B is not None:
            assert rep.n_min == brute_n_min(B, B.span_members(R0.span)), label
    M = catalog.ring("M2(Z/4)")
    e12 = catalog.matrix_element(M, [[0, 1], [0, 0]])
    assert verify_main_theorem(M, centralizer(M, [e12])).n_min == 2


@pytest.mark.criterion(4, "radical equals the quasi-regularity set")
def test_radical_oracle():
    for name in catalog.names():
        B = brute(name)
        R = B.R
        J = jacobson_radical(R)
        assert B.span_members(J) == B.radical, name
        Q = quotient_ring(R, J)
        assert jacobson_radical(Q) == Q.relations, name
        assert BruteRing(Q).radical == {BruteRing(Q).zero}, name


@pytest.mark.criterion(5, "idempotent lifting converges within the bound")
def test_idempotent_lifting():
    for name in catalog.names():
        B = brute(name)
        R = B.R
        J = jacobson_radical(R)
        Jset = B.radical
        n = len(power_sets(B, Jset))
        if Jset == {B.zero}:
            n = 1
        _, n_pkg = radical_power_chain(R, J)
        assert max(n_pkg, 1) == n, name
        bound = math.ceil(math.log2(n)) + 1
        classes = {}
        for i, v in enumerate(B.elements):
            if int(B.sub[B.table[i, i], i]) in Jset:
                classes.setdefault(tuple(int(x) for x in J.reduce(v)), i)
        residue_idempotents = BruteRing(quotient_ring(R, J)).idempotents
        assert len(classes) == len(residue_idempotents), name
        for i in classes.values():
            e, steps = lift_idempotent(R, J, B.elements[i], with_steps=True)
            k = B.key(e.coords)
            assert B.table[k, k] == k
            assert int(B.sub[k, i]) in Jset
            assert steps <= bound, (name, steps, bound)


@pytest.mark.criterion(6, "equalizers are fixed rings of involutions")
def test_construction_coherence():
    specs = catalog.equalizer_specs(0)
    assert len(specs) >= 20
    for label, spec in specs:
        eq = equalizer_subring(spec)
        pe = build_product_equalizer(spec)
        assert pe.verify(), label
        assert pe.involution.compose(pe.involution).is_identity()
        B = small_brute(spec.ambient)
        if B is not None:
            members = {
                i
                for i, v in enumerate(B.elements)
                if all(S.equal(f.apply_vec(v), g.apply_vec(v)) for S, f, g in spec.triples)
            }
            assert B.span_members(eq.span) == members, label
    for label, S, sigma in catalog.involutions():
        tq = build_twisted_involution_quotient(S, sigma)
        assert tq.verify(), label
        assert sigma.compose(sigma).is_identity()
        assert tq.tau.compose(tq.tau).is_identity()
        B = brute_for(S)
        fixed = {i for i, v in enumerate(B.elements) if S.equal(sigma.apply_vec(v), v)}
        assert B.span_members(tq.fixed_in()) == fixed, label


@pytest.mark.criterion(7, "exact-sequence construction")
def test_exact_sequence():
    pres = catalog.presentations()
    assert len(pres) >= 20
    for label, P in pres:
        rep = exact_sequence_ring(P)
        assert rep.surjective and rep.centralizer_matches and rep.quotient_iso, label
        C = P.cokernel()
        end_c = brute_hom_order(C, C)
        assert rep.end_c.ring.order == end_c, label
        W0 = rep.W0.as_ring
        kernel_size = rep.kernel.size // W0.relations.size
        assert W0.order // kernel_size == end_c, label


def _check_ks(M, truth, indecomposables, exhaustive_limit=32):
    ks = krull_schmidt(M)
    assert ks.verify()
    found = Counter()
    for s in ks.summands:
        X = s.module
        assert brute_end_is_local(X)
        matches = [k for k, Y in indecomposables.items() if brute_is_isomorphic(X, Y)]
        assert len(matches) == 1
        found[matches[0]] += 1
    assert found == truth
    if M.order <= exhaustive_limit:
        total = M.relations.size
        sizes = sorted(S.size // total for S in exhaustive_decomposition(M))
        assert sizes == sorted(s.module.order for s in ks.summands)
    return ks


@pytest.mark.criterion(8, "Krull-Schmidt multisets match the oracle")
def test_krull_schmidt():
    rng = random.Random(0)
    for modulus in (8, 12):
        cyclic = {q: abelian_group([q], modulus) for q in (2, 3, 4, 8) if modulus % q == 0}
        for orders, M in catalog.abelian_modules(modulus, 256):
            _check_ks(catalog.disguise(M, rng), Counter(int(q) for q in orders), cyclic)
    ind = catalog.t2_indecomposables(2)
    for (a, b, c), M in catalog.t2_modules(8):
        truth = +Counter({"S1": a, "S2": b, "P1": c})
        _check_ks(catalog.disguise(M, rng), truth, ind)
    ks = krull_schmidt(abelian_group([4, 2], 4))
    assert ks.describe() == ["Z/4", "Z/2"]


@pytest.mark.criterion(9, "tower associated idempotents are compatible")
def test_tower_compatibility():
    rng = random.Random(9)
    for family, depth in (("matzpk", 6), ("quaternion-tensor3", 3)):
        t = build_truncation_tower(family, depth, p=3, k=2)
        for _ in range(200):
            a = t.random_element(rng)
            cert = tower_associated_idempotent(t, a)
            assert cert.verify()
            e = cert.idempotent
            for i in range(1, depth):
                f = t.connector(i, i + 1)
                assert t.levels[i - 1].equal(f.apply_vec(e[i + 1].coords), e[i].coords)
    t = build_truncation_tower("quaternion-tensor3", 3)
    inv = invariant_levels(t, quaternion_opposite_units(t))
    assert [s.rank for s in inv] == [4, 4, 4]
    R1 = t.levels[0]
    assert R1.dim == 16
    assert jacobson_radical(R1) == R1.relations
    assert R1.center().rank == 1


@pytest.mark.criterion(10, "Jacobson-power openness equals the level index")
def test_jacobson_openness():
    for family in ("zpk", "matzpk"):
        t = build_truncation_tower(family, 4, p=3, k=2)
        assert jacobson_power_openness(t) == {1: 1, 2: 2, 3: 3}
    # independent check on Z/81: Jac = 3Z/81 and 3^n lies in 3^i Z/81 exactly when n >= i
    B = BruteRing(build_truncation_tower("zpk", 4).levels[-1])
    pw = power_sets(B, B.radical)
    for i in (1, 2, 3):
        kernel = {j for j, v in enumerate(B.elements) if v[0] % 3**i == 0}
        assert next(n for n, P in enumerate(pw, start=1) if P <= kernel) == i


@pytest.mark.criterion(11, "appendix counterexample separates the topologies")
def test_appendix_counterexample():
    res1, res2, ideals = appendix_fixture()
    cmp = compare_topologies(res1, res2, ideals)
    assert not cmp.coincide
    assert cmp.separating_ideal == 2
    assert cmp.witness.tolist() == [[0, 2], [0, 0]]
    # the length-two resolution P gives the smaller ball
    ball = ball_ideal(res2, 2)
    hom = hom_into_multiple(res2, 2)
    assert ball_ideal(res1, 2).span == hom
    assert ball.span < hom
    # brute force over 2x2 matrices mod 4 acting on Z/4 x Z/2
    def reduce(F):
        return (F[0][0] % 4, F[1][0] % 2, F[0][1] % 4, F[1][1] % 2)

    ends, into_2m = set(), set()
    for entries in itertools.product(range(4), repeat=4):
        F = [[entries[0], entries[1]], [entries[2], entries[3]]]
        if (2 * F[0][1]) % 4:
            continue
        ends.add(reduce(F))
        if all(F[0][j] % 2 == 0 and F[1][j] % 2 == 0 for j in range(2)):
            into_2m.add(reduce(F))
    assert endomorphism_count(res2) == len(ends) == 32
    assert hom.size // ball.span.size * ball.order == len(into_2m) == 4
    members = {reduce(F.tolist()) for F in ball.members()}
    assert members <= into_2m and ball.order == 2
    assert reduce(cmp.witness.tolist()) in into_2m
    assert not ball.contains(cmp.witness)


@pytest.mark.criterion(12, "restricted endomorphisms are semi-invariant")
def test_restricted_endomorphisms():
    fixtures = catalog.restriction_fixtures()
    assert len(fixtures) >= 10
    for label, S, R, M in fixtures:
        rep = restricted_endomorphism_check(S, R, M)
        assert rep.centralizer_identity, label
        assert rep.minimal(), label
        if M.order**M.rank <= 1 << 16:
            assert rep.end_S.ring.order == brute_hom_order(M, M), label
        ER = rep.end_R.ring
        if ER.order <= 4096:
            B = BruteRing(ER)
            assert rep.n_min == brute_n_min(B, B.span_members(rep.subring.span)), label
