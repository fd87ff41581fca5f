import random

import numpy as np
import pytest

from oracles import all_submodules, brute_end_is_local, brute_hom_order, brute_homs, brute_is_isomorphic, module_elements
from semiinv import catalog
from semiinv.errors import ModuleError, RingMismatch
from semiinv.modules import (
    FiniteModule,
    Presentation,
    abelian_group,
    change_basis,
    direct_sum_modules,
    end_ring,
    exact_sequence_ring,
    free_module,
    hom_space,
    is_isomorphism,
    krull_schmidt,
    module_iso_test,
    quotient_module,
    regular_module,
    restrict_scalars,
    submodule,
)
from semiinv.rings import zmod
from semiinv.subrings import subring_closure

IND = catalog.t2_indecomposables(2)


def test_abelian_group_invariants():
    M = abelian_group([4, 2, 2], 8)
    assert M.order == 16
    assert M.additive_invariants() == [2, 2, 4]
    assert abelian_group([3, 4]).modulus == 12
    with pytest.raises(ModuleError):
        abelian_group([3], 8)


def test_module_validation():
    T = catalog.ring("T2(F2)")
    with pytest.raises(ModuleError):
        FiniteModule(T, 1, None, [[[1]], [[1]], [[0]]])  # e12 cannot act as the identity here
    with pytest.raises(ModuleError):
        FiniteModule(T, 1)
    with pytest.raises(ModuleError):
        FiniteModule(zmod(4), 1, None, [[[2]]])  # unity must act as 1


@pytest.mark.parametrize(
    "pair",
    [
        (abelian_group([4, 2], 4), abelian_group([2, 2], 4)),
        (abelian_group([4], 4), abelian_group([4, 2], 4)),
        (IND["P1"], IND["S1"]),
        (IND["S1"], IND["P1"]),
        (IND["S2"], IND["P1"]),
        (IND["P1"], IND["P1"]),
        (regular_module(catalog.ring("T2(F2)")), IND["S2"]),
    ],
)
def test_hom_orders_match_enumeration(pair):
    M, N = pair
    H = hom_space(M, N)
    maps = brute_homs(M, N)
    assert H.order == len(maps)
    for F in maps:
        assert H.contains(F)


def test_end_ring_structure():
    E = end_ring(abelian_group([4, 2], 4))
    assert E.ring.order == 32 == brute_hom_order(abelian_group([4, 2], 4), abelian_group([4, 2], 4))
    assert E.is_faithful()
    one = E.matrix(E.ring.one)
    assert (one % 4 == np.eye(2, dtype=np.int64)).all()
    EP = end_ring(IND["P1"])
    assert EP.ring.order == 2


def test_submodules_and_quotients():
    M = IND["P1"]
    subs = all_submodules(M)
    assert sorted(S.size for S in subs) == [1, 2, 4]
    top = [S for S in subs if S.size == 2][0]
    Q = quotient_module(M, top)
    assert Q.order == 2 and brute_is_isomorphic(Q, IND["S1"])
    emb = submodule(M, top)
    assert brute_is_isomorphic(emb.module, IND["S2"])
    with pytest.raises(ModuleError):
        quotient_module(M, M.span([[1, 0]]))


def test_change_basis_preserves_isomorphism_type():
    rng = random.Random(4)
    M = direct_sum_modules([IND["P1"], IND["S1"]])
    N = catalog.disguise(M, rng)
    F = module_iso_test(M, N)
    assert F is not None and is_isomorphism(M, N, F)
    assert brute_is_isomorphic(M, N)
    with pytest.raises(ModuleError):
        change_basis(M, np.zeros((3, 3), dtype=np.int64))


@pytest.mark.parametrize(
    "M, N, expected",
    [
        (abelian_group([4, 2], 4), abelian_group([2, 4], 4), True),
        (abelian_group([4], 4), abelian_group([2, 2], 4), False),
        (direct_sum_modules([IND["S1"], IND["S2"]]), IND["P1"], False),
        (direct_sum_modules([IND["S1"], IND["P1"]]), direct_sum_modules([IND["P1"], IND["S1"]]), True),
        (IND["S1"], IND["S2"], False),
    ],
)
def test_iso_test_matches_enumeration(M, N, expected):
    F = module_iso_test(M, N)
    assert (F is not None) == expected == brute_is_isomorphic(M, N)
    if F is not None:
        assert is_isomorphism(M, N, F)


def test_iso_test_requires_same_ring():
    with pytest.raises(RingMismatch):
        module_iso_test(abelian_group([2], 2), IND["S1"])


def test_krull_schmidt_spot_values():
    ks = krull_schmidt(abelian_group([4, 2], 4))
    assert ks.describe() == ["Z/4", "Z/2"]
    assert ks.verify()
    reg = krull_schmidt(regular_module(catalog.ring("T2(F2)")))
    assert sorted(s.module.order for s in reg.summands) == [2, 4]
    for s in reg.summands:
        assert brute_end_is_local(s.module)
    assert krull_schmidt(free_module(catalog.ring("M2(F2)"), 1)).describe() == ["Z/2 + Z/2", "Z/2 + Z/2"]


def test_restrict_scalars():
    S = catalog.ring("F4")
    R = subring_closure(S)
    M = restrict_scalars(regular_module(S), R.embedding)
    assert M.ring.order == 2 and M.order == 4
    assert end_ring(M).ring.order == 16


def test_presentation_cokernel():
    R = catalog.ring("Z/8")
    P = Presentation.from_entries(R, [[[2], [0]], [[0], [4]]])
    C = P.cokernel()
    assert C.additive_invariants() == [2, 4]
    assert len(module_elements(C)) == 8
    rep = exact_sequence_ring(P)
    assert rep.ok
