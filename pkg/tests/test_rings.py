import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import BruteRing, products
from semiinv import catalog
from semiinv.errors import AssociativityViolation, CapExceeded, NotHomomorphism, RelationViolation, RingMismatch, UnityViolation
from semiinv.rings import (
    FiniteRing,
    RingHom,
    conjugation,
    extract_ring,
    galois_field,
    hom_from_images,
    identity_hom,
    matrix_ring,
    opposite,
    product_ring,
    quaternions,
    quotient_map,
    quotient_ring,
    tensor_product,
    zmod,
)

SMALL = ["Z/4", "Z/6", "F4", "M2(F2)", "T2(F3)", "F2[C2]", "Z/4[x]/x^2", "Q(Z/3)", "F3[C3]", "Z/4xZ/2"]


@pytest.fixture(scope="module")
def brutes():
    return {name: BruteRing(catalog.ring(name)) for name in SMALL}


def test_catalog_orders():
    expected = {"Z/4": 4, "F4": 4, "M2(F2)": 16, "M2(F3)": 81, "M2(Z/4)": 256, "T3(F2)": 64, "Q(Z/3)": 81, "Z/4xZ/2": 8}
    for name, order in expected.items():
        assert catalog.ring(name).order == order


@pytest.mark.parametrize("name", SMALL)
def test_units_idempotents_center(brutes, name):
    B = brutes[name]
    R = B.R
    assert {B.key(e.coords) for e in R.idempotents()} == B.idempotents
    mask = R.units()
    assert {i for i in range(B.size) if mask[i]} == B.units
    for i, v in enumerate(B.elements):
        inv = R.try_invert(v)
        assert (inv is not None) == (i in B.units)
        if inv is not None:
            j = B.key(inv.coords)
            assert B.table[i, j] == B.one and B.table[j, i] == B.one
    central = {i for i in range(B.size) if (B.table[i, :] == B.table[:, i]).all()}
    assert B.span_members(R.center()) == central
    assert R.is_commutative() == (len(central) == B.size)


@pytest.mark.parametrize("name", SMALL)
def test_nilpotency_index(brutes, name):
    B = brutes[name]
    R = B.R
    for i, v in enumerate(B.elements):
        k, p = 1, i
        while p != B.zero and k <= B.size:
            p = B.table[p, i]
            k += 1
        expected = k if p == B.zero else None
        assert R.nilpotency_index(v) == expected


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_multiplication_is_associative_and_bilinear(name, data):
    R = catalog.ring(name)
    draw = lambda: R.vec([data.draw(st.integers(0, R.modulus - 1)) for _ in range(R.dim)])  # noqa: E731
    x, y, z = draw(), draw(), draw()
    assert R.equal(R.mul_vec(R.mul_vec(x, y), z), R.mul_vec(x, R.mul_vec(y, z)))
    assert R.equal(R.mul_vec(x, R.add_vec(y, z)), R.add_vec(R.mul_vec(x, y), R.mul_vec(x, z)))
    assert R.equal(R.mul_vec(R.unity, x), x) and R.equal(R.mul_vec(x, R.unity), x)
    assert R.equal(products(R, x[None, :], y[None, :])[0], R.mul_vec(x, y))
    assert R.equal(R.left_matrix(x) @ y % R.modulus, R.mul_vec(x, y))
    assert R.equal(R.right_matrix(y) @ x % R.modulus, R.mul_vec(x, y))
    assert R.equal(R.pow_vec(x, 3), R.mul_vec(R.mul_vec(x, x), x))


def test_element_arithmetic():
    R = catalog.ring("Z/6")
    a = R.element([2])
    assert (a * a).coords == (4,)
    assert (a + 5).coords == (1,)
    assert (1 - a).coords == (5,)
    assert (a**0) == R.one
    assert R.element([5]).inverse() == R.element([5])
    assert a.inverse() is None
    with pytest.raises(RingMismatch):
        a + catalog.ring("Z/4").one


def test_validation_reports_violations():
    T = np.zeros((2, 2, 2), dtype=np.int64)
    T[0, 0, 0] = T[0, 1, 1] = T[1, 0, 1] = 1
    T[1, 1, 0] = 1
    FiniteRing(2, T, [1, 0])  # F2[x]/(x^2 - 1)
    bad = T.copy()
    bad[1, 1] = [0, 1]
    bad[0, 1] = [1, 1]
    with pytest.raises((AssociativityViolation, UnityViolation)):
        FiniteRing(2, bad, [1, 0])
    with pytest.raises(UnityViolation):
        FiniteRing(2, T, [0, 1])
    assoc = np.zeros((3, 3, 3), dtype=np.int64)
    assoc[0, :, :] = np.eye(3, dtype=np.int64)
    assoc[:, 0, :] = np.eye(3, dtype=np.int64)
    assoc[1, 1, 2] = 1  # b1 b1 = b2 but b1 b2 = 0 while b2 b1 = b1
    assoc[2, 1, 1] = 1
    with pytest.raises(AssociativityViolation) as info:
        FiniteRing(3, assoc, [1, 0, 0])
    assert len(info.value.indices) == 3


def test_relations_must_be_an_ideal():
    R = matrix_ring(2, 2)
    e11 = catalog.matrix_element(R, [[1, 0], [0, 0]])
    with pytest.raises(RelationViolation):
        FiniteRing(2, R.tensor, R.unity, relations=[e11])


def test_homomorphisms():
    Z4 = zmod(4)
    Z2 = zmod(2)
    red = RingHom(Z4, Z2, [[1]])
    assert red.is_homomorphism()
    assert set(red.kernel().elements()) == {(0,), (2,)}
    assert not RingHom(Z2, Z4, [[1]]).is_homomorphism()
    with pytest.raises(NotHomomorphism):
        hom_from_images(Z4, Z4, [[2]])
    F4 = galois_field(2, 2)
    frob = hom_from_images(F4, F4, [F4.pow_vec(F4.basis(i).coords, 2) for i in range(2)], check=False)
    assert frob.is_homomorphism()
    assert frob.compose(frob).is_identity()
    assert not frob.is_identity()
    M = matrix_ring(3, 2)
    u = catalog.matrix_element(M, [[1, 1], [0, 1]])
    c = conjugation(M, u)
    assert c.is_homomorphism()
    cinv = conjugation(M, M.element(u).inverse())
    assert c.compose(cinv).equals(identity_hom(M))
    with pytest.raises(ValueError):
        conjugation(M, catalog.matrix_element(M, [[1, 0], [0, 0]]))


def test_quotients_and_extraction():
    R = catalog.ring("Z/4[x]/x^2")
    J = R.two_sided_ideal([R.vec([2, 0]), R.vec([0, 1])])
    Q = quotient_ring(R, J)
    assert Q.order == 2
    assert quotient_map(R, Q).is_homomorphism()
    with pytest.raises(RelationViolation):
        M = matrix_ring(2, 2)
        quotient_ring(M, M.span([catalog.matrix_element(M, [[1, 0], [0, 0]])]))
    M = matrix_ring(2, 2)
    e = catalog.matrix_element(M, [[1, 0], [0, 0]])
    corner = M.span([M.mul_vec(M.mul_vec(e, M.basis(i).coords), e) for i in range(M.dim)])
    emb = extract_ring(corner, M.mul_vec, e)
    assert emb.ring.order == 2
    x = emb.ring.one
    assert M.equal(emb.to_ambient(x), e)
    assert (emb.from_ambient(e) == x.coords).all()
    with pytest.raises(ValueError):
        emb.from_ambient(M.unity)


def test_constructions():
    H = quaternions(3)
    assert H.dim == 4 and not H.is_commutative()
    T = tensor_product(H, opposite(H))
    assert T.dim == 16 and T.center().rank == 1
    P = product_ring(zmod(4), zmod(2))
    assert P.order == 8 and len(P.idempotents()) == 4
    Op = opposite(catalog.ring("T2(F2)"))
    x, y = Op.basis(0).coords, Op.basis(1).coords
    R = catalog.ring("T2(F2)")
    assert Op.equal(Op.mul_vec(x, y), R.mul_vec(y, x))


def test_element_cap():
    R = catalog.ring("M2(Z/4)")
    with pytest.raises(CapExceeded):
        R.element_array(cap=100)
    assert R.element_array(cap=None).shape == (256, 4)
