"""Wire format: strict parsing with dotted field paths, JSON-safe rendering."""

import json

import numpy as np
import pytest

from mobdyn.equibaire import flow_verdict, iterates_verdict
from mobdyn.flows import FlowGenerator
from mobdyn.moebius import MoebiusMap
from mobdyn.serialize import (
    TOLERANCES,
    WireError,
    generator_to_wire,
    json_dumps,
    map_to_wire,
    parse_generator,
    parse_map,
    parse_point,
    point_to_wire,
    report_to_wire,
)
from mobdyn.sphere import INFINITY, sphere_point_from_affine


def test_map_round_trip():
    f = MoebiusMap(2.0 + 1.0j, -0.5, 1.0, 1.0 - 3.0j)
    g = parse_map(map_to_wire(f))
    assert np.abs(g.matrix - f.matrix).max() < 1e-15


def test_generator_round_trip():
    m = np.array([[0.25 + 1.0j, -2.0], [0.125j, -0.25 - 1.0j]])
    A = FlowGenerator(m)
    B = parse_generator(generator_to_wire(A))
    assert np.abs(B.matrix - A.matrix).max() < 1e-15


def test_point_round_trip():
    for p in (sphere_point_from_affine(3.0 - 2.0j), INFINITY):
        q = parse_point(point_to_wire(p), "x")
        assert q == p


def test_parse_point_forms():
    assert parse_point("inf", "x").is_infinity
    assert parse_point([1.5, -0.5], "x") == sphere_point_from_affine(1.5 - 0.5j)
    with pytest.raises(WireError):
        parse_point([1.0], "x")
    with pytest.raises(WireError):
        parse_point("north", "x")


def test_parse_map_error_paths():
    good = {"a": [2.0, 0.0], "b": [0.0, 0.0], "c": [0.0, 0.0], "d": [0.5, 0.0]}
    parse_map(good)
    bad = dict(good)
    bad["d"] = [0.5]
    with pytest.raises(WireError) as exc:
        parse_map(bad)
    assert exc.value.field == "map.d"
    missing = {k: v for k, v in good.items() if k != "c"}
    with pytest.raises(WireError) as exc:
        parse_map(missing)
    assert exc.value.field == "map.c"
    with pytest.raises(WireError) as exc:
        parse_map({**good, "extra": 1.0})
    assert "extra" in str(exc.value)
    singular = {"a": [1.0, 0.0], "b": [0.0, 0.0], "c": [0.0, 0.0], "d": [0.0, 0.0]}
    with pytest.raises(WireError) as exc:
        parse_map(singular)
    assert exc.value.field == "map"


def test_parse_map_rejects_non_dict():
    with pytest.raises(WireError):
        parse_map([1, 2, 3])


def test_parse_generator_error_paths():
    good = {"A": [[[0.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, -1.0]]]}
    parse_generator(good)
    bad = {"A": [[[0.0, 1.0], [0.0]], [[0.0, 0.0], [0.0, -1.0]]]}
    with pytest.raises(WireError) as exc:
        parse_generator(bad)
    assert exc.value.field == "generator.A[0][1]"
    traced = {"A": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]}
    with pytest.raises(WireError) as exc:
        parse_generator(traced)
    assert exc.value.field == "generator.A"
    with pytest.raises(WireError) as exc:
        parse_generator({})
    assert exc.value.field == "generator.A"


def test_report_wire_shape_flow():
    rep = flow_verdict(FlowGenerator(np.array([[1j, 0.0], [0.0, -1j]])))
    wire = report_to_wire(rep)
    assert set(wire) == {"verdict", "basis", "evidence", "parameters", "tolerances"}
    assert wire["verdict"] == "holds"
    assert wire["basis"] == "theorem2-compact"
    assert wire["tolerances"] == TOLERANCES
    json.loads(json_dumps(wire))  # round-trips through strict JSON


def test_report_wire_shape_iterates():
    rep = iterates_verdict(MoebiusMap.scaling(4.0), sphere_point_from_affine(1.0))
    wire = report_to_wire(rep)
    assert wire["verdict"] == "holds"
    assert wire["basis"] == "theorem1-gauge"
    assert isinstance(wire["evidence"], dict)
    json.loads(json_dumps(wire))


def test_json_dumps_conventions():
    s = json_dumps({"b": 1, "a": np.float64(0.5), "c": np.int64(3)})
    assert s.endswith("\n")
    obj = json.loads(s)
    assert obj == {"a": 0.5, "b": 1, "c": 3}
    assert s.index('"a"') < s.index('"b"') < s.index('"c"')  # sorted keys


def test_json_dumps_numpy_and_complex():
    s = json_dumps(
        {
            "arr": np.array([1.0, 2.0]),
            "z": 1.0 + 2.0j,
            "nested": {"m": np.array([[1, 2], [3, 4]])},
        }
    )
    obj = json.loads(s)
    assert obj["arr"] == [1.0, 2.0]
    assert obj["z"] == [1.0, 2.0]
    assert obj["nested"]["m"] == [[1, 2], [3, 4]]
