import random

import pytest

from oracles import BruteRing, power_sets
from semiinv import catalog
from semiinv.errors import DefectNotInIdeal, NotIdempotent, NotNilIdeal
from semiinv.radical import (
    is_local,
    jacobson_radical,
    lift_idempotent,
    nilpotency_index_of_ideal,
    peirce_corner,
    prime_power_parts,
    radical_power_chain,
    semiperfect_certificate,
    split_idempotent,
)
from semiinv.rings import matrix_ring, upper_triangular, zmod


def test_prime_power_parts():
    parts = prime_power_parts(72)
    assert sorted((p, q) for p, q, _ in parts) == [(2, 8), (3, 9)]
    for p, q, c in parts:
        assert c % (72 // q) == 0 and c % q == 1


@pytest.mark.parametrize("name", ["Z/8", "Z/12", "T3(F2)", "M2(Z/4)", "Z/4[x]/x^2"])
def test_radical_power_chain_matches_brute(name):
    B = BruteRing(catalog.ring(name))
    R = B.R
    chain, n = radical_power_chain(R)
    expected = power_sets(B, B.radical)  # ends with the zero ideal
    assert [B.span_members(P) for P in chain] == expected
    assert n == len(expected)


def test_known_radicals():
    assert set(jacobson_radical(zmod(8)).elements()) == {(0,), (2,), (4,), (6,)}
    T = upper_triangular(2, 3)
    J = jacobson_radical(T)
    assert J.size == 8  # strictly upper triangular 3x3 over F2
    assert nilpotency_index_of_ideal(T, J) == 3
    assert jacobson_radical(matrix_ring(3, 2)).is_zero()


def test_nil_ideal_required():
    R = zmod(4)
    with pytest.raises(NotNilIdeal):
        nilpotency_index_of_ideal(R, R.full)
    Z6 = zmod(6)
    with pytest.raises(DefectNotInIdeal):
        lift_idempotent(Z6, jacobson_radical(Z6), [2])


def test_lift_idempotent_from_noisy_start():
    R = catalog.ring("M2(Z/4)")
    J = jacobson_radical(R)
    x = catalog.matrix_element(R, [[1, 2], [2, 2]])  # e11 + 2*(something)
    e, steps = lift_idempotent(R, J, x, with_steps=True)
    assert e.is_idempotent()
    assert J.contains(R.vec(e.coords) - x)
    assert steps <= 2


def test_peirce_corner_and_locality():
    M = catalog.ring("M2(F2)")
    e = catalog.matrix_element(M, [[1, 0], [0, 0]])
    corner = peirce_corner(M, e)
    assert corner.ring.order == 2
    assert is_local(corner.ring)
    assert not is_local(M)
    with pytest.raises(NotIdempotent):
        peirce_corner(M, catalog.matrix_element(M, [[1, 1], [0, 0]]) + catalog.matrix_element(M, [[0, 0], [1, 0]]))
    f = split_idempotent(M, jacobson_radical(M), random.Random(0))
    assert f is not None and M.is_idempotent(f) and not M.is_zero(f) and not M.equal(f, M.unity)


@pytest.mark.parametrize("name", catalog.names())
def test_semiperfect_certificates(name):
    R = catalog.ring(name)
    cert = semiperfect_certificate(R, seed=3)
    assert cert.verify()
    B = BruteRing(R)
    for e in cert.idempotents:
        k = B.key(e.coords)
        assert k in B.idempotents and k != B.zero
        # primitive: the corner eRe holds no idempotent besides 0 and e
        corner = {int(B.table[B.table[k, x], k]) for x in range(B.size)}
        assert {x for x in corner if x in B.idempotents} == {B.zero, k}


def test_composition_lengths():
    assert semiperfect_certificate(catalog.ring("M2(F3)")).composition_length == 2
    assert semiperfect_certificate(catalog.ring("Z/12")).composition_length == 2
    assert semiperfect_certificate(catalog.ring("F2xF2")).composition_length == 2
    assert semiperfect_certificate(catalog.ring("Z/9")).composition_length == 1
