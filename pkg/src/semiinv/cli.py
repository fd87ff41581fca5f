"""Command-line front end: ``semiinv <command> ...`` writes a JSON report.

Exit status is 0 when the report is ok, 1 when it records a violation and 2
on unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import catalog, restopo
from .errors import (
    AssociativityViolation,
    CapExceeded,
    IncompatibleSubringSpec,
    LevelUnsolvable,
    SemiInvError,
    UnityViolation,
    UnsupportedSpec,
)
from .fitting import associated_idempotent
from .modules import end_ring, exact_sequence_ring, krull_schmidt, restricted_endomorphism_check
from .radical import jacobson_radical, radical_power_chain, semiperfect_certificate
from .rings import FiniteRing
from .serialize import (
    InputError,
    dumps,
    element_of,
    element_to_list,
    hom_from_matrix,
    load_json,
    load_module,
    load_ring,
    module_from_dict,
    presentation_from_dict,
    resolution_from_dict,
    resolution_to_dict,
    span_to_lists,
    tower_from_dict,
)
from .subrings import Subring, centralizer, invariant_subring, rationally_closed_check, subring_closure, verify_main_theorem
from .towers import (
    centralizer_levels,
    closure_membership,
    invariant_levels,
    jacobson_power_openness,
    quaternion_opposite_units,
    subring_quasi_pi_check,
    tower_associated_idempotent,
)


class Violation(Exception):
    """A computed result that fails the checked property; carries the witness."""

    def __init__(self, message: str, result: dict):
        super().__init__(message)
        self.result = result


class Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.seed = args.seed
        self.cap = args.cap
        self.inputs: dict[str, str] = {}

    def track(self, ref: str) -> str:
        """Record a digest of an input file (built-in references are recorded as-is)."""
        if ref.startswith("builtin:"):
            self.inputs[ref] = ref
        else:
            try:
                self.inputs[ref] = hashlib.sha256(Path(ref).read_bytes()).hexdigest()
            except OSError as exc:
                raise InputError(f"{ref}: cannot read ({exc.strerror})") from exc
        return ref

    def ring(self, ref: str) -> FiniteRing:
        return load_ring(self.track(ref))

    def json(self, ref: str) -> Any:
        return load_json(self.track(ref))


# ---------------------------------------------------------------------------
# ring


def _certificate(cert) -> dict:
    return {
        "radical": span_to_lists(cert.radical),
        "nilpotency_index": cert.nilpotency_index,
        "idempotents": [element_to_list(e) for e in cert.idempotents],
        "idempotent_labels": [repr(e) for e in cert.idempotents],
        "corner_radicals": [span_to_lists(s) for s in cert.corner_radicals],
        "verified": cert.verify(),
    }


def cmd_ring(ctx: Context) -> dict:
    R = ctx.ring(ctx.args.ring)
    action = ctx.args.action
    out: dict = {"modulus": R.modulus, "dim": R.dim, "order": R.order}
    if action == "radical":
        chain, n = radical_power_chain(R)
        out.update(radical=span_to_lists(jacobson_radical(R)), nilpotency_index=n, chain=[span_to_lists(s) for s in chain])
    elif action == "idempotents":
        out["idempotents"] = [element_to_list(e) for e in R.idempotents(ctx.cap)]
    elif action == "center":
        out["center"] = span_to_lists(R.center())
    else:
        cert = semiperfect_certificate(R, ctx.seed)
        out.update(_certificate(cert))
        if not out["verified"]:
            raise Violation("semiperfect certificate failed verification", out)
    return out


# ---------------------------------------------------------------------------
# subring


def _subring_from_spec(R: FiniteRing, spec: dict) -> Subring:
    if "generators" in spec:
        return subring_closure(R, [element_of(R, x, "generators") for x in spec["generators"]])
    if "centralizer_of" in spec:
        return centralizer(R, [element_of(R, x, "centralizer_of") for x in spec["centralizer_of"]])
    if "invariant_under" in spec:
        return invariant_subring(R, [hom_from_matrix(R, h, "invariant_under") for h in spec["invariant_under"]])
    raise InputError("subring spec needs one of generators, centralizer_of, invariant_under")


def cmd_subring(ctx: Context) -> dict:
    R = ctx.ring(ctx.args.ring)
    spec = ctx.json(ctx.args.spec)
    if ctx.args.action == "invariant" and "invariant_under" not in spec:
        raise InputError("invariant needs an invariant_under spec")
    if ctx.args.action == "centralizer" and "centralizer_of" not in spec:
        raise InputError("centralizer needs a centralizer_of spec")
    R0 = _subring_from_spec(R, spec)
    out = {"span": span_to_lists(R0.span), "order": R0.order, "rank": R0.rank}
    if ctx.args.action == "verify-theorem":
        rep = verify_main_theorem(R, R0, ctx.seed)
        out.update(
            n_min=rep.n_min,
            subring_radical=span_to_lists(rep.subring_radical),
            ambient_radical=span_to_lists(rep.ambient_radical),
            subring_nilpotency=rep.subring_nilpotency,
            ambient_nilpotency=rep.ambient_nilpotency,
            length_bound=rep.length_bound,
        )
    elif ctx.args.action == "rationally-closed":
        ok, witness = rationally_closed_check(R0, ctx.cap)
        out["rationally_closed"] = ok
        if not ok:
            out["witness"] = element_to_list(witness)
            raise Violation("a unit of the ambient ring has its inverse outside the subring", out)
    return out


# ---------------------------------------------------------------------------
# fitting


def _parse_element(R: FiniteRing, text: str):
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"element: column {exc.colno}: {exc.msg}") from exc
    return element_of(R, value)


def _fitting_payload(cert) -> dict:
    return {
        "element": element_to_list(cert.element),
        "index": cert.index,
        "idempotent": element_to_list(cert.idempotent),
        "complement": element_to_list(cert.complement),
        "corner_inverse": element_to_list(cert.corner_inverse),
        "nilpotency": cert.nilpotency,
        "verified": cert.verify(),
    }


def cmd_fitting(ctx: Context) -> dict:
    R = ctx.ring(ctx.args.ring)
    a = R.element(_parse_element(R, ctx.args.element))
    return _fitting_payload(associated_idempotent(a))


# ---------------------------------------------------------------------------
# tower


def _tower_subring(t, payload: dict):
    if "centralizer_of" in payload:
        R = t.levels[-1]
        return centralizer_levels(t, [element_of(R, x, "centralizer_of") for x in payload["centralizer_of"]])
    if "invariant_under" in payload:
        units = payload["invariant_under"]
        if units == "opposite":
            units = quaternion_opposite_units(t)
        else:
            units = [element_of(t.levels[-1], u, "invariant_under") for u in units]
        return invariant_levels(t, units)
    return [Subring(R, R.full, check=False) for R in t.levels]


def cmd_tower(ctx: Context) -> dict:
    t = tower_from_dict(ctx.json(ctx.args.spec))
    payload = ctx.json(ctx.args.payload) if ctx.args.payload else {}
    top = t.levels[-1]
    out: dict = {"family": t.family, "levels": [{"modulus": R.modulus, "dim": R.dim} for R in t.levels]}
    action = ctx.args.action
    if action == "idempotent":
        a = t.project(element_of(top, payload.get("element", 1), "element"))
        cert = tower_associated_idempotent(t, a)
        out.update(
            element=a.to_lists(),
            idempotent=cert.idempotent.to_lists(),
            vanishing_depths=cert.vanishing_depths,
            certificates=[_fitting_payload(c) for c in cert.certificates],
            compatible=cert.idempotent.compatible(),
        )
    elif action == "subring-check":
        subs = _tower_subring(t, payload)
        out["level_ranks"] = [s.rank for s in subs]
        out["level_spans"] = [span_to_lists(s.span) for s in subs]
        if "element" in payload:
            elems = [t.project(element_of(top, payload["element"], "element"))]
        else:
            rng = random.Random(ctx.seed)
            emb = subs[-1].embedding
            elems = [
                t.project(emb.to_ambient([rng.randrange(top.modulus) for _ in range(emb.ring.dim)]))
                for _ in range(payload.get("samples", 10))
            ]
        verdicts = [subring_quasi_pi_check(t, subs, a) for a in elems]
        out["checked"] = [{"element": a.to_lists(), "idempotent_in_subring": v} for a, v in zip(elems, verdicts)]
        out["all_inside"] = all(verdicts)
        if not out["all_inside"]:
            raise Violation("an associated idempotent escapes the subring", out)
    elif action == "jac-openness":
        out["table"] = {str(k): v for k, v in jacobson_power_openness(t).items()}
    else:
        gens = [element_of(top, g, "generators") for g in payload.get("generators", [])]
        cand = element_of(top, payload.get("candidate", 0), "candidate")
        res = closure_membership(t, None, gens, cand)
        out.update(member=res.member, coefficients=[c.to_lists() for c in res.coefficients])
    return out


# ---------------------------------------------------------------------------
# module


def _module_summary(M) -> dict:
    return {"rank": M.rank, "order": M.order, "invariants": M.additive_invariants()}


def cmd_module(ctx: Context) -> dict:
    action = ctx.args.action
    ref = ctx.track(ctx.args.file)
    doc = load_json(ref)
    base = Path(ref).parent
    if action == "end":
        M = module_from_dict(doc, base, ref)
        E = end_ring(M)
        return {"module": _module_summary(M), "end_order": E.ring.order, "end_span": span_to_lists(E.hom.span), "zero_maps": span_to_lists(E.hom.zero)}
    if action == "ks":
        M = module_from_dict(doc, base, ref)
        K = krull_schmidt(M, ctx.seed)
        out = {
            "module": _module_summary(M),
            "summands": K.describe(),
            "summand_orders": [s.module.order for s in K.summands],
            "generators": [s.embedding.gens.tolist() for s in K.summands],
            "verified": K.verify(),
        }
        if not out["verified"]:
            raise Violation("decomposition failed verification", out)
        return out
    if action == "exact-seq":
        P = presentation_from_dict(doc, base, ref)
        rep = exact_sequence_ring(P)
        out = {
            "cokernel": _module_summary(P.cokernel()),
            "end_cokernel_order": rep.end_c.ring.order,
            "w0_order": rep.W0.order,
            "kernel": span_to_lists(rep.kernel),
            "surjective": rep.surjective,
            "centralizer_matches": rep.centralizer_matches,
            "quotient_iso": rep.quotient_iso,
        }
        if not rep.ok:
            raise Violation("exact-sequence construction failed", out)
        return out
    M = module_from_dict(doc["module"], base, ref) if isinstance(doc.get("module"), dict) else load_module(base / doc["module"])
    S = M.ring
    R = _subring_from_spec(S, doc.get("subring", {"generators": []}))
    rep = restricted_endomorphism_check(S, R, M, ctx.seed)
    out = {
        "end_S_order": rep.end_S.ring.order,
        "end_R_order": rep.end_R.ring.order,
        "centralizer_identity": rep.centralizer_identity,
        "n_min": rep.n_min,
        "minimal": rep.minimal(),
    }
    if not (rep.centralizer_identity and rep.minimal()):
        raise Violation("restricted endomorphism check failed", out)
    return out


# ---------------------------------------------------------------------------
# topology


def _load_topology(ctx: Context):
    ref = ctx.args.file
    if ref.startswith("builtin:"):
        name = ref[len("builtin:") :]
        if name not in restopo.FIXTURES:
            raise InputError(f"unknown topology fixture {name!r}")
        ctx.track(ref)
        return restopo.FIXTURES[name]()
    doc = ctx.json(ref)
    res = doc.get("resolutions")
    if not isinstance(res, list) or len(res) != 2:
        raise InputError(f"{ref}: need two resolutions")
    r1, r2 = (resolution_from_dict(r, f"{ref}: resolution {i + 1}") for i, r in enumerate(res))
    ideals = doc.get("ideals")
    if not ideals:
        raise InputError(f"{ref}: missing ideal list")
    return r1, r2, [int(g) for g in ideals]


def _format_map(F: np.ndarray) -> str:
    t = F.shape[0]
    names = "xyzwuv"[:t] if t <= 6 else [f"x{i}" for i in range(t)]

    def term(c, v):
        return v if c == 1 else f"{c}{v}"

    comps = []
    for row in F.tolist():
        parts = [term(int(c), v) for c, v in zip(row, names) if c]
        comps.append(" + ".join(parts) if parts else "0")
    return f"f({', '.join(names)}) = ({', '.join(comps)})"


def cmd_topology(ctx: Context) -> dict:
    r1, r2, ideals = _load_topology(ctx)
    for r in (r1, r2):
        r.check()
    if ctx.args.action == "ball":
        out = {"ideals": ideals, "balls": []}
        for g in ideals:
            b = restopo.ball_ideal(r2, g)
            out["balls"].append({"ideal": g, "span": span_to_lists(b.span), "order": b.order, "hom_into_multiple": span_to_lists(restopo.hom_into_multiple(r2, g))})
        return out
    c = restopo.compare_topologies(r1, r2, ideals)
    out = {
        "resolutions": [resolution_to_dict(r1), resolution_to_dict(r2)],
        "ideals": ideals,
        "equal_per_ideal": c.equal_per_ideal,
        "balls_1": [span_to_lists(s) for s in c.balls1],
        "balls_2": [span_to_lists(s) for s in c.balls2],
        "coincide": c.coincide,
        "verdict": c.summary(),
    }
    if not c.coincide:
        out.update(separating_ideal=c.separating_ideal, witness=c.witness.tolist(), witness_formula=_format_map(c.witness))
    return out


# ---------------------------------------------------------------------------
# catalog


def cmd_catalog(ctx: Context) -> dict:
    return {
        "rings": catalog.describe(),
        "tower_families": ["zpk", "matzpk", "quaternion3", "quaternion-tensor3"],
        "topology_fixtures": sorted(restopo.FIXTURES),
    }


COMMANDS: dict[str, Callable[[Context], dict]] = {
    "ring": cmd_ring,
    "subring": cmd_subring,
    "fitting": cmd_fitting,
    "tower": cmd_tower,
    "module": cmd_module,
    "topology": cmd_topology,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every randomized search (default 0)")
    common.add_argument("--cap", type=int, default=4096, help="enumeration cap (default 4096)")
    common.add_argument("--out", help="write the report here instead of stdout")
    p = argparse.ArgumentParser(prog="semiinv", description="Certificates for finite rings, subrings, towers and modules.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ring", parents=[common], help="radical, idempotents, center or semiperfect certificate")
    s.add_argument("action", choices=["radical", "idempotents", "center", "certify-semiperfect"])
    s.add_argument("ring", help="ring file or builtin:NAME")

    s = sub.add_parser("subring", parents=[common], help="centralizers, invariant subrings and the radical inclusion")
    s.add_argument("action", choices=["centralizer", "invariant", "verify-theorem", "rationally-closed"])
    s.add_argument("ring")
    s.add_argument("spec", help="subring spec file")

    s = sub.add_parser("fitting", parents=[common], help="associated idempotent of an element")
    s.add_argument("ring")
    s.add_argument("--element", required=True, help="coordinates as JSON, e.g. [2] or 2")

    s = sub.add_parser("tower", parents=[common], help="truncation tower certificates")
    s.add_argument("spec", help="tower spec file")
    s.add_argument("action", choices=["idempotent", "subring-check", "jac-openness", "closure"])
    s.add_argument("--payload", help="JSON payload file")

    s = sub.add_parser("module", parents=[common], help="endomorphism rings, decompositions, presentations")
    s.add_argument("action", choices=["end", "ks", "exact-seq", "restrict-check"])
    s.add_argument("file")

    s = sub.add_parser("topology", parents=[common], help="resolution topologies on End(M)")
    s.add_argument("action", choices=["compare", "ball"])
    s.add_argument("file", help="comparison file or builtin:appendix / builtin:z9")

    sub.add_parser("catalog", parents=[common], help="list built-in fixtures")
    return p


def _violation_payload(exc: SemiInvError) -> dict:
    out = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, AssociativityViolation):
        out["indices"] = list(exc.indices)
    if isinstance(exc, UnityViolation):
        out["index"] = exc.index
    if isinstance(exc, LevelUnsolvable):
        out["level"] = exc.level
    return out


INPUT_ERRORS = (InputError, UnsupportedSpec, CapExceeded, IncompatibleSubringSpec, KeyError, ValueError)


def execute(args: argparse.Namespace, argv: list[str]) -> tuple[int, dict]:
    ctx = Context(args)
    report: dict = {"command": ["semiinv", *argv], "seed": args.seed}
    try:
        result = COMMANDS[args.command](ctx)
        status, code = "ok", 0
    except Violation as exc:
        result = dict(exc.result, message=str(exc))
        status, code = "violation", 1
    except INPUT_ERRORS as exc:
        result = {"error": type(exc).__name__, "message": str(exc).strip("'\"")}
        status, code = "input-error", 2
    except SemiInvError as exc:
        result = _violation_payload(exc)
        status, code = "violation", 1
    report.update(inputs=ctx.inputs, status=status, result=result)
    return code, report


def run(argv: list[str]) -> tuple[int, dict]:
    """Run a command and return ``(exit status, report)``."""
    return execute(build_parser().parse_args(argv), list(argv))


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    code, report = execute(args, argv)
    text = dumps(report) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if code == 2:
        print(f"semiinv: {report['result']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
