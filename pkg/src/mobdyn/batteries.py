"""Built-in verification batteries for the CLI: canonical-forms, theorem1,
theorem2, metric-axioms. Each suite returns (name, ok, detail) rows; the
runner prints one PASS/FAIL line per row."""

from __future__ import annotations

import sys

import numpy as np

from .config import VerdictConfig
from .equibaire import (
    FAILS,
    HOLDS,
    OUT_OF_SCOPE,
    flow_verdict,
    iterates_verdict,
)
from .flows import FlowGenerator, classify_subgroup
from .moebius import MoebiusMap, classify
from .sphere import ZERO, SpherePoint, chordal_array, normalize_columns
from .sphere import INFINITY, sphere_point_from_affine

Row = tuple[str, bool, str]

# A fixed well-conditioned SL(2,C) conjugator used to move canonical forms
# off their coordinate axes.
_CONJ = np.array(
    [[1.0 + 0.2j, 0.3 - 0.1j], [-0.2j, 0.9 + 0.1j]], dtype=complex
)
_CONJ = _CONJ / np.sqrt(np.linalg.det(_CONJ))
_CONJ_INV = np.linalg.inv(_CONJ)

CANONICAL_GENERATORS: dict[str, tuple[np.ndarray, str]] = {
    "zero": (np.zeros((2, 2), dtype=complex), "trivial"),
    "rotation": (np.diag([1j, -1j]), "elliptic"),
    "boost": (np.diag([1.0 + 0j, -1.0 + 0j]), "hyperbolic"),
    "shear": (np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex), "parabolic"),
    "spiral": (np.diag([1.0 + 1.0j, -1.0 - 1.0j]), "loxodromic"),
}

CANONICAL_MAPS: dict[str, tuple[MoebiusMap, str]] = {
    "identity": (MoebiusMap.identity(), "identity"),
    "quarter-turn": (MoebiusMap(0, -1, 1, 0), "elliptic"),
    "unit-translation": (MoebiusMap.translation(1.0), "parabolic"),
    "double-scaling": (MoebiusMap(2.0, 0, 0, 0.5), "hyperbolic"),
    "spiral-scaling": (MoebiusMap.scaling(4j), "loxodromic"),
}


def conjugated_generator(canonical: np.ndarray) -> FlowGenerator:
    return FlowGenerator(_CONJ @ canonical @ _CONJ_INV)


def battery_canonical_forms() -> list[Row]:
    rows: list[Row] = []
    for name, (matrix, expected) in CANONICAL_GENERATORS.items():
        got = classify_subgroup(FlowGenerator(matrix)).tag
        rows.append((f"generator {name}", got == expected, f"{got} (want {expected})"))
        if name != "zero":
            got_c = classify_subgroup(conjugated_generator(matrix)).tag
            rows.append(
                (f"generator {name} conjugated", got_c == expected,
                 f"{got_c} (want {expected})")
            )
    for name, (f, expected) in CANONICAL_MAPS.items():
        got = classify(f).tag
        rows.append((f"map {name}", got == expected, f"{got} (want {expected})"))
    return rows


def battery_theorem1() -> list[Row]:
    config = VerdictConfig()
    quad = MoebiusMap.scaling(4.0)
    conj_lox = MoebiusMap.from_matrix(_CONJ @ MoebiusMap.scaling(0.3 + 0.2j).matrix @ _CONJ_INV)
    cases = [
        ("z -> 4z at 1", quad, sphere_point_from_affine(1.0), HOLDS),
        ("z -> 4z at i - 2", quad, sphere_point_from_affine(-2.0 + 1.0j), HOLDS),
        ("z -> 4z at repelling 0", quad, ZERO, OUT_OF_SCOPE),
        ("conjugated loxodromic at 1+i", conj_lox, sphere_point_from_affine(1.0 + 1.0j), HOLDS),
        ("quarter-turn (elliptic)", MoebiusMap(0, -1, 1, 0), sphere_point_from_affine(0.5), OUT_OF_SCOPE),
        ("unit translation (parabolic)", MoebiusMap.translation(1.0), ZERO, OUT_OF_SCOPE),
    ]
    rows: list[Row] = []
    for name, f, x, expected in cases:
        report = iterates_verdict(f, x, config)
        ok = report.verdict == expected
        if expected == HOLDS:
            ok = ok and report.parameters.get("certified", False)
        rows.append((name, ok, f"{report.verdict} (want {expected})"))
    return rows


def battery_theorem2() -> list[Row]:
    config = VerdictConfig()
    expectations = {
        "zero": HOLDS,
        "rotation": HOLDS,
        "boost": FAILS,
        "shear": FAILS,
        "spiral": FAILS,
    }
    rows: list[Row] = []
    for name, (matrix, _) in CANONICAL_GENERATORS.items():
        expected = expectations[name]
        for label, gen in [
            (name, FlowGenerator(matrix)),
            (f"{name} conjugated", None if name == "zero" else conjugated_generator(matrix)),
        ]:
            if gen is None:
                continue
            report = flow_verdict(gen, config=config)
            ok = report.verdict == expected
            rows.append((f"flow {label}", ok, f"{report.verdict} (want {expected})"))
    return rows


def battery_metric_axioms(n_triples: int = 10_000, seed: int = 1234) -> list[Row]:
    rng = np.random.default_rng(seed)
    slack = 1e-12

    def sample(n: int) -> np.ndarray:
        raw = rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n))
        return normalize_columns(raw)

    xs, ys, zs = sample(n_triples), sample(n_triples), sample(n_triples)
    d_xy = chordal_array(xs, ys)
    d_yx = chordal_array(ys, xs)
    d_yz = chordal_array(ys, zs)
    d_xz = chordal_array(xs, zs)
    d_xx = chordal_array(xs, xs)

    rows: list[Row] = [
        ("identity d(x,x) = 0", bool(d_xx.max() <= slack), f"max {d_xx.max():.2e}"),
        (
            "symmetry d(x,y) = d(y,x)",
            bool(np.abs(d_xy - d_yx).max() <= slack),
            f"max dev {np.abs(d_xy - d_yx).max():.2e}",
        ),
        (
            "triangle d(x,z) <= d(x,y) + d(y,z)",
            bool((d_xz <= d_xy + d_yz + slack).all()),
            f"worst margin {(d_xy + d_yz - d_xz).min():.2e}",
        ),
        (
            "range 0 <= d <= 1",
            bool((d_xy >= 0).all() and d_xy.max() <= 1.0 + slack),
            f"max {d_xy.max():.15f}",
        ),
    ]
    from .sphere import chordal_distance

    known = [
        ("d(0, inf) = 1", chordal_distance(ZERO, INFINITY), 1.0),
        ("d(1, 0) = 1/sqrt(2)", chordal_distance(sphere_point_from_affine(1.0), ZERO), 2**-0.5),
        ("d(i, -i) = 1", chordal_distance(sphere_point_from_affine(1j), sphere_point_from_affine(-1j)), 1.0),
    ]
    for name, got, want in known:
        rows.append((name, abs(got - want) <= slack, f"{got:.15f} (want {want:.15f})"))
    return rows


BATTERIES = {
    "canonical-forms": battery_canonical_forms,
    "theorem1": battery_theorem1,
    "theorem2": battery_theorem2,
    "metric-axioms": battery_metric_axioms,
}


def run_battery(name: str, stream=None) -> bool:
    # resolve sys.stdout at call time so redirection works
    out = stream if stream is not None else sys.stdout
    if name not in BATTERIES:
        raise KeyError(name)
    rows = BATTERIES[name]()
    print(f"battery: {name}", file=out)
    for label, ok, detail in rows:
        status = "PASS" if ok else "FAIL"
        print(f"{status}  {label:<44} {detail}", file=out)
    n_ok = sum(1 for _, ok, _ in rows if ok)
    print(f"{n_ok}/{len(rows)} passed", file=out)
    return n_ok == len(rows)
