import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import BruteRing, brute_qualifying, nilpotent_mask
from semiinv import catalog
from semiinv.errors import CapExceeded
from semiinv.fitting import associated_idempotent, fitting_index, qualifying_idempotents, uniqueness_check


def test_z6_spot_values():
    R = catalog.ring("Z/6")
    cert = associated_idempotent(R.element([2]))
    assert cert.idempotent.coords == (4,)
    assert cert.complement.coords == (3,)
    assert cert.corner_inverse.coords == (2,)  # 2 * 2 = 4 = e
    assert cert.nilpotency == 1


def test_units_and_nilpotents():
    R = catalog.ring("M2(Z/4)")
    u = R.element(catalog.matrix_element(R, [[1, 1], [0, 1]]))
    assert associated_idempotent(u).idempotent == R.one
    n = R.element(catalog.matrix_element(R, [[2, 1], [0, 2]]))
    cert = associated_idempotent(n)
    assert cert.idempotent == R.zero
    assert cert.nilpotency == R.nilpotency_index(n.coords)


def test_matrix_splitting():
    R = catalog.ring("M2(F3)")
    a = R.element(catalog.matrix_element(R, [[1, 1], [0, 0]]))
    cert = associated_idempotent(a)
    e = cert.idempotent
    assert e * e == e and e != R.zero and e != R.one
    assert e * a == a * e  # the Fitting idempotent commutes with a
    assert fitting_index(a) == 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["T3(F2)", "Q(Z/3)", "M2(F3)", "Z/4xZ/2", "Z/4[x]/x^2"]), st.data())
def test_certificate_against_enumeration(name, data):
    B = _brutes(name)
    i = data.draw(st.integers(0, B.size - 1))
    a = B.R.element(B.elements[i])
    cert = associated_idempotent(a)
    assert cert.verify()
    assert [B.key(cert.idempotent.coords)] == brute_qualifying(B, i, nilpotent_mask(B))
    assert [B.key(e.coords) for e in qualifying_idempotents(a)] == [B.key(cert.idempotent.coords)]
    assert uniqueness_check(a)


_cache = {}


def _brutes(name):
    if name not in _cache:
        _cache[name] = BruteRing(catalog.ring(name))
    return _cache[name]


def test_enumeration_cap():
    R = catalog.ring("M2(Z/4)")
    with pytest.raises(CapExceeded):
        qualifying_idempotents(R.one, cap=10)
