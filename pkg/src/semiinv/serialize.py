"""JSON input files and canonical report payloads.

Ring file::

    {"modulus": m, "dim": d, "tensor": [[[int]]], "unity": [int], "labels": [str]}

with an optional ``"relations": [[int]]`` (rows spanning the zero span) for
rings that are not free over ``Z/m``.  Wherever a ring file is expected the
string ``"builtin:NAME"`` selects a catalog ring.

Module file::

    {"ring": <ring>, "add_rank": t, "relations": [[int]], "action": [t x t matrix per basis element]}

Presentation file::

    {"ring": <ring>, "matrix": [[ring-element coords]]}

Tower spec::

    {"family": "zpk" | "matzpk" | "quaternion3" | "quaternion-tensor3", "p": int, "k": int, "depth": N}

Resolution file::

    {"base": "Z" | m, "generators": t, "relations": [[int]], "differentials": [d_0, d_1, ...]}

where ``relations`` lists relation vectors of ``M`` as rows and each ``d_i``
is an integer matrix.

Spans are always written as their canonical Howell-form rows.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from . import catalog
from .errors import SemiInvError
from .linalg import SpanBasis
from .modules import FiniteModule, Presentation
from .restopo import Resolution
from .rings import FiniteRing, RingElement, RingHom
from .towers import Tower, TowerElement, build_truncation_tower


class InputError(SemiInvError):
    """Malformed or inconsistent input document."""


def load_json(source: str | Path) -> Any:
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{source}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _require(doc: dict, key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"{where}: missing field {key!r}")
    return doc[key]


# ---------------------------------------------------------------------------
# rings


def ring_to_dict(R: FiniteRing) -> dict:
    doc = {
        "modulus": R.modulus,
        "dim": R.dim,
        "tensor": R.tensor.tolist(),
        "unity": [int(v) for v in R.unity],
        "labels": list(R.labels),
    }
    if R.relations.rank:
        doc["relations"] = span_to_lists(R.relations)
    return doc


def ring_from_dict(doc: dict, where: str = "ring", validate: bool = True) -> FiniteRing:
    m = _require(doc, "modulus", where)
    d = _require(doc, "dim", where)
    tensor = _require(doc, "tensor", where)
    unity = _require(doc, "unity", where)
    if not isinstance(m, int) or m < 1:
        raise InputError(f"{where}: modulus must be a positive integer")
    T = np.array(tensor, dtype=object)
    if T.shape != (d, d, d):
        raise InputError(f"{where}: tensor has shape {T.shape}, expected {(d, d, d)}")
    if len(unity) != d:
        raise InputError(f"{where}: unity needs {d} coordinates")
    rel = doc.get("relations")
    return FiniteRing(m, T.astype(np.int64) % m, unity, relations=rel or None, labels=doc.get("labels"), validate=validate)


def load_ring(ref: str | dict, base: Path | None = None, validate: bool = True) -> FiniteRing:
    """A ring from a file path, an inline document or ``builtin:NAME``."""
    if isinstance(ref, dict):
        return ring_from_dict(ref, validate=validate)
    if isinstance(ref, str) and ref.startswith("builtin:"):
        try:
            return catalog.ring(ref)
        except KeyError as exc:
            raise InputError(str(exc)) from exc
    path = Path(ref) if base is None else base / ref
    return ring_from_dict(load_json(path), str(path), validate=validate)


def element_of(R: FiniteRing, coords, where: str = "element") -> np.ndarray:
    if isinstance(coords, int):
        coords = [coords] + [0] * (R.dim - 1) if R.dim else []
    if not isinstance(coords, list) or len(coords) != R.dim:
        raise InputError(f"{where}: expected {R.dim} coordinates")
    return R.vec(coords)


# ---------------------------------------------------------------------------
# spans, elements and homs


def span_to_lists(S: SpanBasis) -> list[list[int]]:
    return S.to_lists()


def element_to_list(x) -> list[int]:
    if isinstance(x, RingElement):
        return [int(v) for v in x.coords]
    return [int(v) for v in np.asarray(x).reshape(-1)]


def hom_from_matrix(R: FiniteRing, matrix, where: str = "hom") -> RingHom:
    M = np.array(matrix, dtype=object)
    if M.shape != (R.dim, R.dim):
        raise InputError(f"{where}: expected a {R.dim}x{R.dim} matrix")
    return RingHom(R, R, M.astype(np.int64) % R.modulus)


# ---------------------------------------------------------------------------
# modules


def module_from_dict(doc: dict, base: Path | None = None, where: str = "module") -> FiniteModule:
    R = load_ring(_require(doc, "ring", where), base)
    t = _require(doc, "add_rank", where)
    action = _require(doc, "action", where)
    A = np.array(action, dtype=object)
    if A.shape != (R.dim, t, t):
        raise InputError(f"{where}: action has shape {A.shape}, expected {(R.dim, t, t)}")
    return FiniteModule(R, t, doc.get("relations") or None, A.astype(np.int64) % R.modulus)


def module_to_dict(M: FiniteModule, ring_ref: str | dict | None = None) -> dict:
    return {
        "ring": ring_ref if ring_ref is not None else ring_to_dict(M.ring),
        "add_rank": M.rank,
        "relations": span_to_lists(M.relations),
        "action": M.action.tolist(),
    }


def load_module(path: str | Path) -> FiniteModule:
    path = Path(path)
    return module_from_dict(load_json(path), path.parent, str(path))


def presentation_from_dict(doc: dict, base: Path | None = None, where: str = "presentation") -> Presentation:
    R = load_ring(_require(doc, "ring", where), base)
    rows = _require(doc, "matrix", where)
    entries = [[element_of(R, x, where) for x in row] for row in rows]
    return Presentation.from_entries(R, entries)


# ---------------------------------------------------------------------------
# towers


def tower_from_dict(doc: dict, where: str = "tower") -> Tower:
    family = _require(doc, "family", where)
    depth = _require(doc, "depth", where)
    return build_truncation_tower(family, depth, p=doc.get("p", 3), k=doc.get("k", 2))


def tower_element_to_lists(x: TowerElement) -> list[list[int]]:
    return x.to_lists()


# ---------------------------------------------------------------------------
# resolutions


def resolution_from_dict(doc: dict, where: str = "resolution") -> Resolution:
    base = doc.get("base", "Z")
    t = _require(doc, "generators", where)
    rel_rows = doc.get("relations", [])
    maps = _require(doc, "differentials", where)
    if base == "Z":
        mod = None
    elif isinstance(base, int) and base > 1:
        mod = base
    else:
        raise InputError(f"{where}: base must be \"Z\" or a modulus")
    if any(len(r) != t for r in rel_rows):
        raise InputError(f"{where}: relation rows need {t} entries")
    relations = [[int(r[i]) for r in rel_rows] for i in range(t)] if rel_rows else [[] for _ in range(t)]
    return Resolution(t, relations, [[[int(v) for v in row] for row in d] for d in maps], mod)


def resolution_to_dict(res: Resolution) -> dict:
    rows = [list(r) for r in zip(*res.relations)] if res.relations and res.relations[0] else []
    return {
        "base": "Z" if res.base is None else res.base,
        "generators": res.t,
        "relations": rows,
        "differentials": res.maps,
    }


def dumps(doc: Any) -> str:
    """Canonical JSON (sorted keys, two-space indent)."""
    return json.dumps(doc, indent=2, sort_keys=True, default=_default)


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, SpanBasis):
        return obj.to_lists()
    if isinstance(obj, RingElement):
        return element_to_list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
