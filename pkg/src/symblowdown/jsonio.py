"""JSON documents for specs, reports and job configs.

Rationals travel as ``"p/q"`` strings (``"p"`` when integral), lattice
vectors as two-element integer arrays.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Optional

import jsonschema

from .lattice import UnimodularMap, Vec, as_rational, format_rational
from .surgery import BallSpec, BlowdownReport, ChainSpec, FitReport, ManifoldInvariants


def dumps(doc) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _rat(v: Optional[Fraction]):
    return None if v is None else format_rational(v)


def chain_to_json(c: ChainSpec) -> dict:
    return {"n": c.n, "areas": [format_rational(a) for a in c.areas]}


def chain_from_json(doc: dict) -> ChainSpec:
    return ChainSpec(doc["n"], tuple(as_rational(a) for a in doc["areas"]))


def ball_to_json(b: BallSpec) -> dict:
    return {"alpha_plus": format_rational(b.alpha_plus), "alpha_minus": format_rational(b.alpha_minus)}


def ball_from_json(doc: dict) -> BallSpec:
    return BallSpec(as_rational(doc["alpha_plus"]), as_rational(doc["alpha_minus"]))


def invariants_to_json(m: ManifoldInvariants) -> dict:
    return {"euler": m.euler, "signature": m.signature, "b2": m.b2, "volume": format_rational(m.volume)}


def invariants_from_json(doc: dict) -> ManifoldInvariants:
    return ManifoldInvariants(int(doc["euler"]), int(doc["signature"]), int(doc["b2"]), as_rational(doc["volume"]))


def map_from_json(doc: dict) -> UnimodularMap:
    (a, b), (c, d) = doc["B"]
    return UnimodularMap(((a, b), (c, d)), Vec(as_rational(doc["r"][0]), as_rational(doc["r"][1])))


def fit_to_json(f: FitReport) -> dict:
    return {
        "feasible": f.feasible,
        "phi1": f.phi1.to_json(),
        "phi2": None if f.phi2 is None else f.phi2.to_json(),
        "margin": _rat(f.margin),
        "reason": f.reason,
    }


def fit_from_json(doc: dict) -> FitReport:
    return FitReport(
        bool(doc["feasible"]),
        map_from_json(doc["phi1"]),
        None if doc["phi2"] is None else map_from_json(doc["phi2"]),
        None if doc["margin"] is None else as_rational(doc["margin"]),
        doc.get("reason", ""),
    )


def report_to_json(r: BlowdownReport) -> dict:
    return {
        "fit": fit_to_json(r.fit),
        "volume_delta": format_rational(r.volume_delta),
        "new_invariants": invariants_to_json(r.new_invariants),
        "deltas": dict(r.deltas),
    }


def report_from_json(doc: dict) -> BlowdownReport:
    return BlowdownReport(
        fit_from_json(doc["fit"]),
        as_rational(doc["volume_delta"]),
        invariants_from_json(doc["new_invariants"]),
        dict(doc.get("deltas", {})),
    )


# --- job schema ------------------------------------------------------------------------


def load_schema() -> dict:
    text = resources.files("symblowdown").joinpath("schemas/job.schema.json").read_text()
    return json.loads(text)


def load_fixtures() -> dict:
    text = resources.files("symblowdown").joinpath("fixtures/diagrams.json").read_text()
    return {k: v for k, v in json.loads(text).items() if not k.startswith("_")}


class SchemaViolation(ValueError):
    def __init__(self, message: str, pointer: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.message = message
        self.pointer = pointer


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def _check(schema: dict, doc) -> None:
    v = jsonschema.Draft202012Validator(schema)
    errors = sorted(v.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        raise SchemaViolation(err.message, _pointer(err.absolute_path))


def validate_job(doc) -> None:
    """Check a job document against the shipped schema; raise ``SchemaViolation``."""
    schema = load_schema()
    _check({k: v for k, v in schema.items() if k != "$defs"}, doc)
    _check({"$defs": schema["$defs"], "$ref": f"#/$defs/commands/{doc['command']}"}, doc)
