import json

import numpy as np
import pytest

from semiinv import catalog
from semiinv.errors import AssociativityViolation
from semiinv.modules import module_iso_test
from semiinv.restopo import appendix_fixture, z9_fixture
from semiinv.serialize import (
    InputError,
    dumps,
    load_json,
    load_module,
    load_ring,
    module_from_dict,
    module_to_dict,
    resolution_from_dict,
    resolution_to_dict,
    ring_from_dict,
    ring_to_dict,
)

IND = catalog.t2_indecomposables(2)


@pytest.mark.parametrize("name", ["Z/6", "F4", "M2(Z/4)", "T3(F2)", "Z/4xZ/2", "Q(Z/3)"])
def test_ring_round_trip(name):
    R = catalog.ring(name)
    doc = json.loads(dumps(ring_to_dict(R)))
    S = ring_from_dict(doc)
    assert S.modulus == R.modulus and S.dim == R.dim
    assert (S.tensor == R.tensor).all() and S.relations == R.relations
    assert S.order == R.order


def test_module_round_trip():
    M = IND["P1"]
    N = module_from_dict(json.loads(dumps(module_to_dict(M))))
    assert N.order == M.order and N.rank == M.rank
    assert (N.action == M.action).all() and N.relations == M.relations
    same = module_from_dict(module_to_dict(M, "builtin:T2(F2)"))
    assert module_iso_test(M, same) is not None


def test_resolution_round_trip():
    for res in (*appendix_fixture()[:2], *z9_fixture()[:2]):
        back = resolution_from_dict(json.loads(dumps(resolution_to_dict(res))))
        assert back.t == res.t and back.base == res.base
        assert back.relations == res.relations and back.maps == res.maps
        back.check()


def test_fixture_files(tmp_path):
    R = load_ring("fixtures/z4.json")
    assert R.order == 4
    M = load_module("fixtures/z4z2.json")
    assert M.additive_invariants() == [2, 4]
    with pytest.raises(AssociativityViolation):
        load_ring("fixtures/bad_assoc.json")
    broken = tmp_path / "broken.json"
    broken.write_text('{"modulus": 4,')
    with pytest.raises(InputError, match="line 1"):
        load_json(broken)
    with pytest.raises(InputError, match="cannot read"):
        load_json(tmp_path / "missing.json")


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ({"dim": 1, "tensor": [[[1]]], "unity": [1]}, "modulus"),
        ({"modulus": 4, "dim": 2, "tensor": [[[1]]], "unity": [1, 0]}, "shape"),
        ({"modulus": 4, "dim": 1, "tensor": [[[1]]], "unity": [1, 0]}, "unity"),
        ({"modulus": 0, "dim": 1, "tensor": [[[1]]], "unity": [1]}, "positive"),
    ],
)
def test_ring_input_errors(doc, fragment):
    with pytest.raises(InputError, match=fragment):
        ring_from_dict(doc)


def test_resolution_input_errors():
    with pytest.raises(InputError):
        resolution_from_dict({"base": "Q", "generators": 1, "differentials": []})
    with pytest.raises(InputError):
        resolution_from_dict({"generators": 2, "relations": [[1]], "differentials": []})


def test_dumps_handles_numpy():
    text = dumps({"a": np.int64(3), "b": np.arange(2)})
    assert json.loads(text) == {"a": 3, "b": [0, 1]}
