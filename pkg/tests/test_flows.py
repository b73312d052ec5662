"""One-parameter subgroups exp(tA): classification, closed form, compactness."""

import cmath
import math

import numpy as np
import pytest

from helpers import (
    random_conjugator,
    random_generator_matrix,
    random_trace_zero,
    series_exp,
)
from mobdyn.flows import (
    ELLIPTIC_FLOW,
    HYPERBOLIC_FLOW,
    LOXODROMIC_FLOW,
    PARABOLIC_FLOW,
    TRIVIAL,
    FlowGenerator,
    classify_subgroup,
    flow_action_matrix,
    flow_conjugator,
    flow_exp,
    flow_trajectory,
    is_relatively_compact,
)
from mobdyn.sphere import INFINITY, chordal_distance, sphere_point_from_affine

ROTATION = np.array([[1j, 0.0], [0.0, -1j]])
BOOST = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SHEAR = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SPIRAL = np.array([[1.0 + 1.0j, 0.0], [0.0, -1.0 - 1.0j]])


def test_generator_validation():
    with pytest.raises(ValueError):
        FlowGenerator(np.eye(3))
    with pytest.raises(ValueError):
        FlowGenerator(np.array([[np.nan, 0.0], [0.0, 0.0]]))
    with pytest.raises(ValueError) as exc:
        FlowGenerator(np.array([[1.0, 0.0], [0.0, 0.0]]))
    assert "trace" in str(exc.value)


def test_generator_immutable():
    g = FlowGenerator(BOOST)
    with pytest.raises(AttributeError):
        g.mu = 2.0
    with pytest.raises(ValueError):
        g.matrix[0, 0] = 5.0


def test_generator_mu_values():
    assert abs(FlowGenerator(BOOST).mu - 1.0) < 1e-14
    assert abs(FlowGenerator(ROTATION).mu - 1j) < 1e-14
    assert FlowGenerator(SHEAR).is_nilpotent
    assert FlowGenerator(np.zeros((2, 2))).is_zero


def test_classify_subgroup_canonical():
    assert classify_subgroup(FlowGenerator(np.zeros((2, 2)))).tag == TRIVIAL
    assert classify_subgroup(FlowGenerator(SHEAR)).tag == PARABOLIC_FLOW
    rot = classify_subgroup(FlowGenerator(ROTATION))
    assert rot.tag == ELLIPTIC_FLOW
    assert abs(rot.parameters["theta"] - 1.0) < 1e-12
    boo = classify_subgroup(FlowGenerator(BOOST))
    assert boo.tag == HYPERBOLIC_FLOW
    assert abs(boo.parameters["lambda"] - 1.0) < 1e-12
    spi = classify_subgroup(FlowGenerator(SPIRAL))
    assert spi.tag == LOXODROMIC_FLOW
    assert abs(spi.parameters["alpha"] - 1.0) < 1e-12
    assert abs(spi.parameters["beta"] - 1.0) < 1e-12


def test_classify_subgroup_conjugation_invariant():
    rng = np.random.default_rng(67)
    for kind, tag in [
        ("elliptic", ELLIPTIC_FLOW),
        ("hyperbolic", HYPERBOLIC_FLOW),
        ("parabolic", PARABOLIC_FLOW),
        ("loxodromic", LOXODROMIC_FLOW),
    ]:
        for _ in range(25):
            g = FlowGenerator(random_generator_matrix(rng, kind))
            assert classify_subgroup(g).tag == tag, kind


def test_classify_theta_matches_mu_magnitude():
    rng = np.random.default_rng(71)
    for _ in range(20):
        m = random_generator_matrix(rng, "elliptic")
        g = FlowGenerator(m)
        st = classify_subgroup(g)
        assert abs(st.parameters["theta"] - abs(g.mu)) < 1e-12


def test_flow_exp_frozen_shear():
    g = FlowGenerator(SHEAR)
    for t in (0.0, 1.0, -3.5, 17.25):
        f = flow_exp(g, t)
        assert f.a == 1.0 and f.d == 1.0 and f.c == 0.0
        assert f.b == complex(t)


def test_flow_exp_frozen_rotation():
    f = flow_exp(FlowGenerator(ROTATION), math.pi / 4)
    assert abs(f.a - complex(0.7071067811865476, 0.7071067811865476)) < 1e-15
    assert abs(f.d - complex(0.7071067811865476, -0.7071067811865476)) < 1e-15
    assert abs(f.b) == 0.0 and abs(f.c) == 0.0


def test_flow_exp_frozen_boost():
    f = flow_exp(FlowGenerator(BOOST), 1.0)
    assert abs(f.a - 2.718281828459045) < 1e-15
    assert abs(f.d - 0.36787944117144233) < 1e-15


def test_flow_exp_t_zero_is_identity():
    rng = np.random.default_rng(73)
    for _ in range(10):
        g = FlowGenerator(random_trace_zero(rng))
        f = flow_exp(g, 0.0)
        assert f.same_action(type(f).identity(), tol=1e-14)


def test_flow_exp_matches_series_oracle():
    rng = np.random.default_rng(79)
    for _ in range(150):
        m = random_trace_zero(rng)
        g = FlowGenerator(m)
        t = float(rng.uniform(-5.0, 5.0))
        got = flow_exp(g, t).matrix
        want = series_exp(t * m)
        assert np.abs(got - want).max() < 1e-9
        det = got[0, 0] * got[1, 1] - got[0, 1] * got[1, 0]
        assert abs(det - 1.0) < 1e-9


def test_flow_exp_even_in_mu():
    # the closed form must not depend on the branch of sqrt(-det)
    g1 = FlowGenerator(SPIRAL)
    g2 = FlowGenerator(SPIRAL)
    object.__setattr__(g2, "mu", -g2.mu)
    for t in (0.3, -1.7, 4.0):
        assert np.abs(flow_exp(g1, t).matrix - flow_exp(g2, t).matrix).max() < 1e-12


def test_flow_exp_group_law_raw_products():
    # raw ndarray products: MoebiusMap composition would det-renormalize and
    # inject cancellation noise above the comparison tolerance
    rng = np.random.default_rng(83)
    for _ in range(100):
        m = random_trace_zero(rng)
        g = FlowGenerator(m)
        s = float(rng.uniform(-2.5, 2.5))
        t = float(rng.uniform(-2.5, 2.5))
        lhs = flow_exp(g, s).matrix @ flow_exp(g, t).matrix
        rhs = flow_exp(g, s + t).matrix
        assert np.abs(lhs - rhs).max() < 1e-9


def test_flow_exp_overflow_guard():
    g = FlowGenerator(BOOST)
    flow_exp(g, 299.0)
    with pytest.raises(OverflowError):
        flow_exp(g, 400.0)


def test_flow_action_matrix_finite_at_huge_time():
    for m in (BOOST, SPIRAL):
        g = FlowGenerator(m)
        act = flow_action_matrix(g, 1.0e6)
        assert np.all(np.isfinite(act.view(float)))
        assert np.abs(act).max() > 0.0


def test_flow_action_matrix_agrees_projectively():
    rng = np.random.default_rng(89)
    for _ in range(50):
        g = FlowGenerator(random_trace_zero(rng))
        t = float(rng.uniform(-4.0, 4.0))
        act = flow_action_matrix(g, t)
        ref = flow_exp(g, t).matrix
        # same matrix up to a positive real scale
        act = act / np.linalg.norm(act)
        ref = ref / np.linalg.norm(ref)
        assert np.abs(act - ref).max() < 1e-12


def test_flow_conjugator_diagonalizes():
    rng = np.random.default_rng(97)
    for kind in ("elliptic", "hyperbolic", "loxodromic"):
        for _ in range(20):
            g = FlowGenerator(random_generator_matrix(rng, kind))
            p = flow_conjugator(g)
            det = p[0, 0] * p[1, 1] - p[0, 1] * p[1, 0]
            assert abs(det - 1.0) < 1e-9
            d = np.linalg.inv(p) @ g.matrix @ p
            target = np.diag([g.mu, -g.mu])
            assert np.abs(d - target).max() < 1e-8 * max(1.0, abs(g.mu))


def test_flow_conjugator_rejects_nilpotent():
    with pytest.raises(ValueError):
        flow_conjugator(FlowGenerator(SHEAR))


def test_compactness_rotation():
    res = is_relatively_compact(FlowGenerator(ROTATION))
    assert res.compact
    assert res.conjugator is not None
    assert set(res.unitarity_defects) == set((0.1, 1.0, 7.3))
    assert max(res.unitarity_defects.values()) <= 1e-8
    assert res.growth_time is None


def test_compactness_conjugated_rotation():
    rng = np.random.default_rng(101)
    for _ in range(10):
        p = random_conjugator(rng)
        g = FlowGenerator(p @ ROTATION @ np.linalg.inv(p))
        res = is_relatively_compact(g)
        assert res.compact
        assert max(res.unitarity_defects.values()) <= 1e-8


def test_compactness_noncompact_families():
    for m in (BOOST, SHEAR, SPIRAL):
        res = is_relatively_compact(FlowGenerator(m))
        assert not res.compact
        assert res.growth_time is not None
        assert res.growth_norm > 10.0


def test_compactness_zero_generator():
    res = is_relatively_compact(FlowGenerator(np.zeros((2, 2))))
    assert res.compact


def test_compactness_slow_hyperbolic_needs_long_horizon():
    # growth rate e^(1e-5 t) crosses the threshold only near t = 2.3e5,
    # far beyond the base horizon 2^10; the witness search must extend
    res = is_relatively_compact(FlowGenerator(1.0e-5 * BOOST))
    assert not res.compact
    assert res.growth_time is not None
    assert res.growth_time > 1024.0


def test_flow_trajectory_rotation():
    g = FlowGenerator(ROTATION)
    x = sphere_point_from_affine(1.0)
    traj = flow_trajectory(g, x, [0.0, math.pi / 4, math.pi / 2])
    assert traj[0] == x
    # the action is z -> e^(2it) z
    assert chordal_distance(traj[1], sphere_point_from_affine(1.0j)) < 1e-12
    assert chordal_distance(traj[2], sphere_point_from_affine(-1.0)) < 1e-12


def test_flow_trajectory_boost_limits():
    g = FlowGenerator(BOOST)
    traj = flow_trajectory(g, sphere_point_from_affine(1.0), [0.0, 10.0, 400.0])
    assert chordal_distance(traj[-1], INFINITY) < 1e-9


def test_flow_trajectory_validation():
    g = FlowGenerator(ROTATION)
    x = sphere_point_from_affine(1.0)
    with pytest.raises(ValueError):
        flow_trajectory(g, x, [])
    with pytest.raises(ValueError):
        flow_trajectory(g, x, [1.0, 0.5])
