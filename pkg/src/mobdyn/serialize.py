"""JSON wire format: complex numbers as [re, im] pairs, sphere points as
affine pairs or the string "inf", reports as plain dicts with sorted keys.

Parsing is strict: unknown or malformed fields raise WireError carrying the
dotted path of the offending field, which the CLI turns into exit code 2.
"""

from __future__ import annotations

import json

import numpy as np

from . import flows, moebius, sphere
from .equibaire import (
    CollapseCertificate,
    EquiBaireReport,
    GaugeEstimate,
    LinearBoundResult,
)
from .flows import CompactnessResult, FlowGenerator
from .moebius import MoebiusMap
from .sphere import ChordalBall, SpherePoint

TOLERANCES = {
    "point_eq_tol": sphere.POINT_EQ_TOL,
    "tau_parabolic": moebius.TAU_PARABOLIC,
    "identity_tol": moebius.IDENTITY_TOL,
    "basin_tol": moebius.BASIN_TOL,
    "trace_tol": flows.TRACE_TOL,
    "zero_norm_tol": flows.ZERO_NORM_TOL,
    "nilpotent_rel_band": flows.NILPOTENT_REL_BAND,
    "eigen_axis_tol": flows.EIGEN_AXIS_TOL,
    "unitarity_tol": flows.UNITARITY_TOL,
}


class WireError(ValueError):
    """Malformed wire data; .field is the dotted path of the offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"field '{field}': {message}")
        self.field = field


def complex_to_wire(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def point_to_wire(p: SpherePoint):
    if p.is_infinity:
        return "inf"
    return complex_to_wire(p.to_affine())


def parse_complex(value, field: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise WireError(field, f"expected a [re, im] pair of numbers, got {value!r}")
    return complex(float(value[0]), float(value[1]))


def parse_point(value, field: str) -> SpherePoint:
    if value == "inf":
        return sphere.INFINITY
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return sphere.sphere_point_from_affine(complex(value))
    return sphere.sphere_point_from_affine(parse_complex(value, field))


def map_to_wire(f: MoebiusMap) -> dict:
    return {
        "a": complex_to_wire(f.a),
        "b": complex_to_wire(f.b),
        "c": complex_to_wire(f.c),
        "d": complex_to_wire(f.d),
    }


def parse_map(obj, field: str = "map") -> MoebiusMap:
    if not isinstance(obj, dict):
        raise WireError(field, "expected an object with entries a, b, c, d")
    unknown = set(obj) - {"a", "b", "c", "d"}
    if unknown:
        raise WireError(f"{field}.{sorted(unknown)[0]}", "unknown field")
    missing = {"a", "b", "c", "d"} - set(obj)
    if missing:
        raise WireError(f"{field}.{sorted(missing)[0]}", "missing entry")
    entries = {k: parse_complex(obj[k], f"{field}.{k}") for k in ("a", "b", "c", "d")}
    try:
        return MoebiusMap(**entries)
    except ValueError as exc:
        raise WireError(field, str(exc)) from exc


def generator_to_wire(A: FlowGenerator) -> dict:
    m = A.matrix
    return {"A": [[complex_to_wire(m[i, j]) for j in (0, 1)] for i in (0, 1)]}


def parse_generator(obj, field: str = "generator") -> FlowGenerator:
    if not isinstance(obj, dict):
        raise WireError(field, 'expected an object of the form {"A": [[..],[..]]}')
    unknown = set(obj) - {"A"}
    if unknown:
        raise WireError(f"{field}.{sorted(unknown)[0]}", "unknown field")
    if "A" not in obj:
        raise WireError(f"{field}.A", "missing entry")
    rows = obj["A"]
    if not isinstance(rows, (list, tuple)) or len(rows) != 2:
        raise WireError(f"{field}.A", "expected 2 rows")
    entries = []
    for i, row in enumerate(rows):
        if not isinstance(row, (list, tuple)) or len(row) != 2:
            raise WireError(f"{field}.A[{i}]", "expected 2 entries")
        entries.append([parse_complex(row[j], f"{field}.A[{i}][{j}]") for j in (0, 1)])
    try:
        return FlowGenerator(entries)
    except ValueError as exc:
        raise WireError(f"{field}.A", str(exc)) from exc


def ball_to_wire(b: ChordalBall) -> dict:
    return {"center": point_to_wire(b.center), "radius": b.radius}


def gauge_to_wire(g: GaugeEstimate) -> dict:
    return {
        "kind": "gauge",
        "center": point_to_wire(g.center),
        "radii": list(g.radii),
        "s_values": list(g.s_values),
        "c_prime": g.c_prime,
        "delta_of_epsilon": [[eps, delta] for eps, delta in g.delta_of_epsilon],
        "meta": _plain(g.meta),
    }


def collapse_to_wire(c: CollapseCertificate) -> dict:
    return {
        "kind": "collapse",
        "region": ball_to_wire(c.region),
        "times": list(c.times),
        "limit": point_to_wire(c.limit),
        "diameters": list(c.diameters),
    }


def compactness_to_wire(c: CompactnessResult) -> dict:
    out: dict = {"kind": "compactness", "compact": c.compact}
    if c.conjugator is not None:
        out["conjugator"] = [
            [complex_to_wire(c.conjugator[i, j]) for j in (0, 1)] for i in (0, 1)
        ]
    if c.unitarity_defects is not None:
        out["unitarity_defects"] = {str(t): v for t, v in c.unitarity_defects.items()}
    if c.growth_time is not None:
        out["growth_witness"] = {"time": c.growth_time, "norm": c.growth_norm}
    return out


def linear_bound_to_wire(b: LinearBoundResult) -> dict:
    return {
        "certified": b.certified,
        "c_prime": b.c_prime,
        "ratios": list(b.ratios),
        "violation": b.violation,
    }


def evidence_to_wire(evidence) -> dict | None:
    if evidence is None:
        return None
    if isinstance(evidence, GaugeEstimate):
        return gauge_to_wire(evidence)
    if isinstance(evidence, CollapseCertificate):
        return collapse_to_wire(evidence)
    if isinstance(evidence, CompactnessResult):
        return compactness_to_wire(evidence)
    raise TypeError(f"no wire form for evidence of type {type(evidence).__name__}")


def report_to_wire(r: EquiBaireReport) -> dict:
    return {
        "verdict": r.verdict,
        "basis": r.basis,
        "evidence": evidence_to_wire(r.evidence),
        "parameters": _plain(r.parameters),
        "tolerances": dict(TOLERANCES),
    }


def _plain(value):
    """Recursively reduce to JSON-serializable builtins."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    if isinstance(value, complex):
        return complex_to_wire(value)
    if isinstance(value, SpherePoint):
        return point_to_wire(value)
    if isinstance(value, ChordalBall):
        return ball_to_wire(value)
    if isinstance(value, MoebiusMap):
        return map_to_wire(value)
    if isinstance(value, FlowGenerator):
        return generator_to_wire(value)
    return str(value)


def json_dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"
