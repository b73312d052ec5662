"""Verification engine for the equicontinuity-gauge property of Moebius
families: gauge estimation S(x,r), linear-bound certification, collapse
detection for flows, dense approximating sequences, and the two verdict
entry points (iterate families and one-parameter flows).

Wire vocabulary (stable across the JSON surface): verdicts "holds" / "fails" /
"out_of_scope"; bases "theorem1-gauge", "theorem2-algebraic",
"theorem2-collapse", "theorem2-compact".
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import DEFAULTS, VerdictConfig
from .flows import (
    ELLIPTIC_FLOW,
    TRIVIAL,
    CompactnessResult,
    FlowGenerator,
    classify_subgroup,
    flow_action_matrix,
    flow_exp,
    is_relatively_compact,
)
from .moebius import (
    HYPERBOLIC,
    INSIDE,
    LOXODROMIC,
    MoebiusMap,
    classify,
    in_attracting_basin,
    loxodromic_normal_form,
)
from .sphere import (
    ChordalBall,
    SphereGrid,
    SpherePoint,
    chordal_array,
    chordal_ball_grid,
    chordal_distance,
    fibonacci_grid,
    normalize_columns,
    pairwise_diameter,
)

HOLDS = "holds"
FAILS = "fails"
OUT_OF_SCOPE = "out_of_scope"

BASIS_ITERATES_GAUGE = "theorem1-gauge"
BASIS_FLOW_ALGEBRAIC = "theorem2-algebraic"
BASIS_FLOW_COLLAPSE = "theorem2-collapse"
BASIS_FLOW_COMPACT = "theorem2-compact"

ITERATES = "iterates"
FLOW = "flow"

# Rational rotation numbers are recognized up to this denominator.
ROTATION_MAX_DEN = 512
ROTATION_RATIONAL_TOL = 1e-10


@dataclass(frozen=True)
class FamilySpec:
    """A sampled family: iterates f^n (n = 0 .. n_max) of a map, or a flow
    exp(tA) sampled densely on [0, t_max] plus a geometric tail. Samples are
    deterministic and always include the identity member (n = 0 / t = 0)."""

    kind: str
    source: MoebiusMap | FlowGenerator
    n_max: int = DEFAULTS["n_max"]
    t_max: float = DEFAULTS["t_max"]
    sample_count: int = DEFAULTS["sample_count"]
    tail_times: tuple[float, ...] = DEFAULTS["flow_tail_times"]

    def __post_init__(self):
        if self.kind not in (ITERATES, FLOW):
            raise ValueError(f"kind must be '{ITERATES}' or '{FLOW}', got {self.kind!r}")
        if self.kind == ITERATES and not isinstance(self.source, MoebiusMap):
            raise ValueError("iterates family needs a MoebiusMap source")
        if self.kind == FLOW and not isinstance(self.source, FlowGenerator):
            raise ValueError("flow family needs a FlowGenerator source")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if not (self.t_max > 0):
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.sample_count < 2:
            raise ValueError(f"sample_count must be >= 2, got {self.sample_count}")

    def time_samples(self) -> np.ndarray:
        base = np.linspace(0.0, self.t_max, self.sample_count)
        tail = [t for t in self.tail_times if t > self.t_max]
        return np.concatenate([base, np.asarray(tail, dtype=float)])

    def describe(self) -> dict:
        if self.kind == ITERATES:
            return {"kind": self.kind, "n_max": self.n_max}
        return {
            "kind": self.kind,
            "t_max": self.t_max,
            "sample_count": self.sample_count,
            "tail_times": list(self.tail_times),
        }


@dataclass(frozen=True)
class GaugeEstimate:
    """Sampled gauge: s_values[i] estimates S(x, radii[i]) = the supremum over
    family members and over the ball B_radii[i](x) of d(f(y), f(x)).

    radii descend; s_values are monotone nondecreasing in r by construction
    (the running maximum over the nested sampled balls). delta_of_epsilon is
    the inverted table: pairs (eps, delta) ascending, meaning d(x,y) < delta
    keeps every member's displacement within eps (up to sampling slack).
    """

    center: SpherePoint
    radii: tuple[float, ...]
    s_values: tuple[float, ...]
    c_prime: float
    delta_of_epsilon: tuple[tuple[float, float], ...]
    meta: dict = field(default_factory=dict, compare=False)


def _iterate_gauge_one_radius(
    matrix: np.ndarray,
    pts: np.ndarray,
    r: float,
    n_max: int,
    lam_abs: float | None,
    truncation_rel: float,
    decay_window: int,
    decay_slack: float,
) -> tuple[float, dict]:
    """Sup over n <= n_max of the max displacement of the ball columns from the
    center column (last column of pts), with sound truncation once the decay
    is certified geometric: the tail sup is bounded by one more decay step,
    added as slack."""
    cur = normalize_columns(pts.copy())
    s_max = 0.0
    prev = None
    streak = 0
    ratios: list[float] = []
    for n in range(n_max + 1):
        if n > 0:
            cur = normalize_columns(matrix @ cur)
        s_n = float(chordal_array(cur[:, :-1], cur[:, -1:]).max())
        if s_n > s_max:
            s_max = s_n
        if lam_abs is not None and prev is not None and prev > 0.0:
            ratio = s_n / prev
            ratios.append(ratio)
            if abs(ratio - lam_abs) <= decay_slack * lam_abs:
                streak += 1
            else:
                streak = 0
            if streak >= decay_window and s_n < truncation_rel * r:
                slack = s_n * min(1.0, (1.0 + decay_slack) * lam_abs)
                return s_max + slack, {
                    "n_stop": n,
                    "truncated": True,
                    "tail_slack": slack,
                    "decay_ratios": ratios[-decay_window:],
                }
        prev = s_n
    return s_max, {
        "n_stop": n_max,
        "truncated": False,
        "tail_slack": 0.0,
        "decay_ratios": ratios[-decay_window:] if ratios else [],
    }


def _flow_gauge_one_radius(
    A: FlowGenerator, pts: np.ndarray, times: np.ndarray
) -> tuple[float, dict]:
    s_max = 0.0
    t_at_max = 0.0
    for t in times:
        imgs = normalize_columns(flow_action_matrix(A, float(t)) @ pts)
        s_t = float(chordal_array(imgs[:, :-1], imgs[:, -1:]).max())
        if s_t > s_max:
            s_max = s_t
            t_at_max = float(t)
    return s_max, {"time_at_max": t_at_max, "truncated": False, "tail_slack": 0.0}


def estimate_gauge(
    family: FamilySpec,
    x: SpherePoint,
    radii,
    samples_per_ball: int = DEFAULTS["samples_per_ball"],
    seed: int = DEFAULTS["seed"],
    workers: int = 1,
    truncation_rel: float = DEFAULTS["truncation_rel"],
    decay_window: int = DEFAULTS["decay_window"],
    decay_slack: float = DEFAULTS["decay_slack"],
) -> GaugeEstimate:
    """Sampled gauge over descending radii in (0, 1).

    Each radius gets its own deterministic ball grid; because the sampled
    balls are nested in law, the running maximum taken from the smallest
    radius upward equals the supremum over the union and makes the s table
    monotone by construction.
    """
    radii = tuple(float(r) for r in radii)
    if not radii:
        raise ValueError("radii must be a nonempty descending list")
    if any(r <= 0.0 or r >= 1.0 for r in radii):
        raise ValueError(f"radii must lie strictly inside (0, 1), got {list(radii)}")
    if any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError(f"radii must be strictly descending, got {list(radii)}")
    if samples_per_ball < 1:
        raise ValueError(f"samples_per_ball must be >= 1, got {samples_per_ball}")

    lam_abs: float | None = None
    if family.kind == ITERATES:
        tag = classify(family.source).tag
        if tag in (HYPERBOLIC, LOXODROMIC):
            lam_abs = abs(loxodromic_normal_form(family.source).lam)
        matrix = family.source.matrix
        times = None
    else:
        matrix = None
        times = family.time_samples()

    center_col = np.array([[x.z], [x.w]], dtype=complex)

    def job(r: float) -> tuple[float, dict]:
        grid = chordal_ball_grid(ChordalBall(x, r), samples_per_ball, seed)
        pts = np.concatenate([grid.as_array(), center_col], axis=1)
        if family.kind == ITERATES:
            return _iterate_gauge_one_radius(
                matrix, pts, r, family.n_max, lam_abs,
                truncation_rel, decay_window, decay_slack,
            )
        return _flow_gauge_one_radius(family.source, pts, times)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, radii))
    else:
        results = [job(r) for r in radii]

    raw = [s for s, _ in results]
    infos = [info for _, info in results]
    # Running max from the smallest radius upward: monotone in r, and equal to
    # the supremum over the nested union of sampled balls.
    s_values = list(raw)
    running = 0.0
    for i in range(len(radii) - 1, -1, -1):
        running = max(running, s_values[i])
        s_values[i] = running

    c_prime = max(s / r for s, r in zip(s_values, radii))
    delta_table = tuple(
        (s_values[i], radii[i]) for i in range(len(radii) - 1, -1, -1)
    )
    meta = {
        "family": family.describe(),
        "samples_per_ball": samples_per_ball,
        "seed": seed,
        "lam_abs": lam_abs,
        "per_radius": infos,
    }
    return GaugeEstimate(
        center=x,
        radii=radii,
        s_values=tuple(s_values),
        c_prime=float(c_prime),
        delta_of_epsilon=delta_table,
        meta=meta,
    )


@dataclass(frozen=True)
class LinearBoundResult:
    """certify_linear_bound outcome; c_prime (the largest observed S/r) is
    reported whether or not the certificate is issued."""

    certified: bool
    c_prime: float
    ratios: tuple[float, ...]
    violation: str | None = None


def certify_linear_bound(
    g: GaugeEstimate,
    epsilon_floor: float = DEFAULTS["epsilon_floor"],
    stability_factor: float = DEFAULTS["stability_factor"],
) -> LinearBoundResult:
    """Certified iff the S/r ratios over the smallest half of the radii stay
    within stability_factor of the largest-radius ratio, and the smallest S
    has actually dropped below epsilon_floor."""
    if len(g.radii) < 4:
        raise ValueError(f"need at least 4 radii to certify, got {len(g.radii)}")
    if g.radii[0] / g.radii[-1] < 10.0:
        raise ValueError(
            f"radii must span at least a 10x range, got {g.radii[0]:g}..{g.radii[-1]:g}"
        )
    ratios = tuple(s / r for s, r in zip(g.s_values, g.radii))
    n_half = len(g.radii) // 2
    small_max = max(ratios[-n_half:])
    stable = small_max <= stability_factor * ratios[0]
    vanishes = g.s_values[-1] < epsilon_floor
    c_prime = max(ratios)
    if stable and vanishes:
        return LinearBoundResult(True, c_prime, ratios)
    problems = []
    if not stable:
        problems.append(
            f"ratio blow-up: max S/r over smallest radii = {small_max:.4g} exceeds "
            f"{stability_factor:g} x {ratios[0]:.4g} at the largest radius"
        )
    if not vanishes:
        problems.append(
            f"gauge floor not reached: S({g.radii[-1]:g}) = {g.s_values[-1]:.4g} "
            f">= {epsilon_floor:g}"
        )
    return LinearBoundResult(False, c_prime, ratios, "; ".join(problems))


@dataclass(frozen=True)
class CollapseCertificate:
    """Witness that the flow crushes an open ball to a point: image diameters
    along the probed times end below collapse_tol, strictly decreasing at the
    tail, with a stable limit away from the ball's center."""

    region: ChordalBall
    times: tuple[float, ...]
    limit: SpherePoint
    diameters: tuple[float, ...]


@dataclass(frozen=True)
class EquiBaireReport:
    verdict: str
    basis: str
    evidence: object
    parameters: dict = field(default_factory=dict)


class BasisDisagreementError(RuntimeError):
    """The algebraic and dynamical routes to the flow verdict contradict each
    other. This is surfaced, never silently resolved: the two are equivalent
    mathematically, so disagreement means a defect in one of the engines."""

    def __init__(self, message: str, algebraic: CompactnessResult, dynamical):
        super().__init__(message)
        self.algebraic = algebraic
        self.dynamical = dynamical


def iterates_verdict(
    f: MoebiusMap, x: SpherePoint, config: VerdictConfig = VerdictConfig()
) -> EquiBaireReport:
    """Verdict for the iterate family {f^n : n >= 0} at x.

    Non-loxodromic-type maps and the repelling fixed point are out of scope.
    Otherwise the sampled gauge is computed and the linear bound certified,
    extending the radius ladder downward when the smallest gauge value has not
    yet reached the floor. The measured decay ratio of ball diameters is
    cross-checked against |lambda| from the normal form and recorded.
    """
    cls = classify(f)
    params: dict = {"map_class": cls.tag, "config": config.as_dict()}
    if cls.tag not in (HYPERBOLIC, LOXODROMIC):
        params["reason"] = (
            f"map classifies as {cls.tag}; iterate dynamics need |lambda| != 1"
        )
        return EquiBaireReport(OUT_OF_SCOPE, BASIS_ITERATES_GAUGE, None, params)
    if in_attracting_basin(f, x) != INSIDE:
        params["reason"] = "repelling fixed point excluded"
        return EquiBaireReport(OUT_OF_SCOPE, BASIS_ITERATES_GAUGE, None, params)

    nf = loxodromic_normal_form(f)
    lam_abs = abs(nf.lam)
    family = FamilySpec(ITERATES, f, n_max=config.n_max)
    radii = tuple(config.radii)
    extensions = 0
    while True:
        gauge = estimate_gauge(
            family, x, radii,
            samples_per_ball=config.samples_per_ball,
            seed=config.seed,
            workers=config.workers,
            truncation_rel=config.truncation_rel,
            decay_window=config.decay_window,
            decay_slack=config.decay_slack,
        )
        bound = certify_linear_bound(gauge, config.epsilon_floor, config.stability_factor)
        if bound.certified:
            break
        flooring = gauge.s_values[-1] >= config.epsilon_floor
        if flooring and extensions < config.max_radius_extensions:
            radii = radii + (radii[-1] / config.radius_extension_factor,)
            extensions += 1
            continue
        break

    measured = [
        r
        for info in gauge.meta["per_radius"]
        for r in info.get("decay_ratios", [])
    ]
    decay_measured = float(np.median(measured)) if measured else None
    decay_ok = (
        decay_measured is not None
        and abs(decay_measured - lam_abs) <= config.decay_slack * lam_abs
    )
    params.update(
        {
            "lam_abs": lam_abs,
            "decay_ratio_measured": decay_measured,
            "decay_ratio_ok": bool(decay_ok),
            "radius_extensions": extensions,
            "certified": bound.certified,
            "c_prime": bound.c_prime,
        }
    )
    if bound.certified:
        return EquiBaireReport(HOLDS, BASIS_ITERATES_GAUGE, gauge, params)
    params["reason"] = f"linear bound not certified: {bound.violation}"
    return EquiBaireReport(FAILS, BASIS_ITERATES_GAUGE, gauge, params)


def _collapse_probe_times(lo_exp: int, hi_exp: int) -> list[float]:
    return [float(2**k) for k in range(lo_exp, hi_exp + 1)]


# Candidate-ball samples depend only on the grid and the ball parameters, not
# on the generator, so batteries over many generators reuse them.
_BALL_CACHE: dict[tuple, np.ndarray] = {}


def _candidate_points(K: SphereGrid, radius: float, k_samples: int, seed: int) -> np.ndarray:
    key = (K.descriptor, K.seed, len(K), radius, k_samples, seed)
    cached = _BALL_CACHE.get(key)
    if cached is not None:
        return cached
    blocks = []
    for center in K.points:
        grid = chordal_ball_grid(ChordalBall(center, radius), k_samples, seed)
        blocks.append(
            np.concatenate(
                [grid.as_array(), np.array([[center.z], [center.w]])], axis=1
            )
        )
    all_pts = np.concatenate(blocks, axis=1)
    if len(_BALL_CACHE) > 8:
        _BALL_CACHE.clear()
    _BALL_CACHE[key] = all_pts
    return all_pts


def detect_collapse(
    A: FlowGenerator,
    K: SphereGrid,
    config: VerdictConfig = VerdictConfig(),
    times: list[float] | None = None,
) -> CollapseCertificate | None:
    """Search for an open ball whose image collapses to a point along the flow.

    Candidate balls sit at the grid points of K. Each ball's sample (plus its
    center) is pushed through exp(tA) at geometrically spaced times; a
    certificate needs the final image diameter below collapse_tol, a strictly
    decreasing tail, a stable limit (the center's image has stopped moving at
    the probe resolution), and a limit point away from the ball's center.
    """
    if len(K) == 0:
        raise ValueError("grid K must be nonempty")
    if times is None:
        times = _collapse_probe_times(0, config.collapse_max_exp)
    times = [float(t) for t in times]
    if len(times) < 3:
        raise ValueError(f"need at least 3 probe times, got {len(times)}")
    radius = config.candidate_ball_radius
    k_samples = config.collapse_ball_samples
    width = k_samples + 1
    all_pts = _candidate_points(K, radius, k_samples, config.seed)

    n_cand = len(K)
    n_times = len(times)
    diams = np.zeros((n_cand, n_times))
    center_imgs = np.zeros((2, n_cand, n_times), dtype=complex)
    for j, t in enumerate(times):
        imgs = normalize_columns(flow_action_matrix(A, t) @ all_pts)
        for c in range(n_cand):
            block = imgs[:, c * width : (c + 1) * width]
            diams[c, j] = pairwise_diameter(block)
            center_imgs[:, c, j] = block[:, -1]

    for c, center in enumerate(K.points):
        d = diams[c]
        if not (d[-1] < config.collapse_tol):
            continue
        # Strictly decreasing tail certifies approach to a point. Once the
        # whole tail sits at the double-precision floor, orders of magnitude
        # below collapse_tol, the images are indistinguishable from the limit
        # and monotonicity of the residual roundoff is meaningless.
        floor = 1e-3 * config.collapse_tol
        pinned = d[-3] <= floor and d[-2] <= floor and d[-1] <= floor
        decreasing = d[-3] >= d[-2] >= d[-1] and d[-3] > d[-1]
        if not (pinned or decreasing):
            continue
        last = SpherePoint(center_imgs[0, c, -1], center_imgs[1, c, -1])
        prev = SpherePoint(center_imgs[0, c, -2], center_imgs[1, c, -2])
        if chordal_distance(prev, last) >= 10.0 * config.collapse_tol:
            continue
        if chordal_distance(last, center) <= radius:
            continue
        return CollapseCertificate(
            region=ChordalBall(center, radius),
            times=tuple(times),
            limit=last,
            diameters=tuple(float(v) for v in d),
        )
    return None


def flow_verdict(
    A: FlowGenerator,
    K: SphereGrid | None = None,
    config: VerdictConfig = VerdictConfig(),
) -> EquiBaireReport:
    """Verdict for the flow family {exp(tA) : t >= 0} on the compact grid K.

    The algebraic route (relative compactness of the closure) is authoritative;
    the dynamical route (collapse detection) is a mandatory cross-check unless
    config.cross_check is off. Disagreement raises BasisDisagreementError.
    """
    if K is None:
        K = fibonacci_grid(config.grid_size, config.seed)
    comp = is_relatively_compact(A)
    sub = classify_subgroup(A)
    params: dict = {
        "config": config.as_dict(),
        "subgroup": {"tag": sub.tag, **sub.parameters},
        "algebraic_compact": comp.compact,
        "grid": K.descriptor,
    }
    if not config.cross_check:
        verdict = HOLDS if comp.compact else FAILS
        return EquiBaireReport(verdict, BASIS_FLOW_ALGEBRAIC, comp, params)

    cert = detect_collapse(A, K, config)
    if comp.compact and cert is not None:
        raise BasisDisagreementError(
            "algebraic route says the closure is compact, but a collapse "
            f"certificate was found at {cert.region.center!r}",
            comp,
            cert,
        )
    if not comp.compact and cert is None:
        extended = _collapse_probe_times(
            config.collapse_max_exp + 1, config.collapse_extension_max_exp
        )
        cert = detect_collapse(A, K, config, times=extended)
        if cert is None:
            raise BasisDisagreementError(
                "algebraic route says the closure is non-compact, but no "
                "collapse was found within the extended probe horizon",
                comp,
                None,
            )
        params["collapse_horizon_extended"] = True
    params["collapse_found"] = cert is not None
    params["bases_agree"] = True
    if comp.compact:
        return EquiBaireReport(HOLDS, BASIS_FLOW_COMPACT, comp, params)
    return EquiBaireReport(FAILS, BASIS_FLOW_COLLAPSE, cert, params)


def _rotation_number(theta: float) -> tuple[Fraction | None, float]:
    """Best rational p/q (q <= ROTATION_MAX_DEN) for theta/pi, or None if the
    rotation number is irrational at working precision."""
    rho = theta / math.pi
    frac = Fraction(rho).limit_denominator(ROTATION_MAX_DEN)
    if abs(rho - float(frac)) <= ROTATION_RATIONAL_TOL * max(1.0, rho):
        return frac, rho
    return None, rho


def approximating_times(
    A: FlowGenerator,
    m_max: int,
    probe_count: int = DEFAULTS["probe_count"],
) -> tuple[np.ndarray, dict]:
    """Times t_1 .. t_m_max whose flow samples are dense in the closure.

    The action of exp(tA) for an elliptic generator is a rotation of angle
    2*theta*t, hence periodic in t with period T = pi/theta. Rational
    rotation number theta/pi: m mod T is lattice-degenerate, so the times are
    laid out on an explicit uniform grid of N points on [0, T). Irrational:
    t_m = m mod T, which equidistributes.
    """
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    sub = classify_subgroup(A)
    if sub.tag == TRIVIAL:
        return np.zeros(1), {"branch": "constant", "period": None}
    if sub.tag != ELLIPTIC_FLOW:
        raise ValueError(
            f"approximating sequences need a relatively compact flow; "
            f"generator classifies as {sub.tag}"
        )
    theta = sub.parameters["theta"]
    period = math.pi / theta
    frac, rho = _rotation_number(theta)
    if frac is not None:
        n_grid = probe_count * max(1, round(m_max / probe_count))
        ks = np.arange(m_max) % n_grid
        times = period * ks / n_grid
        return times, {
            "branch": "periodic-grid",
            "period": period,
            "grid_points": n_grid,
            "rotation_number": [frac.numerator, frac.denominator],
        }
    times = np.mod(np.arange(1.0, m_max + 1.0), period)
    return times, {"branch": "ergodic", "period": period, "rotation_number": rho}


def approximating_sequence(
    A: FlowGenerator, K: SphereGrid, m_max: int
) -> list[MoebiusMap]:
    """Maps h_m = exp(t_m A), dense in the closure of the flow restricted to K.

    Requires a relatively compact generator. Density is checked separately by
    probe_density_error over the same times.
    """
    comp = is_relatively_compact(A)
    if not comp.compact:
        raise ValueError(
            "generator is not relatively compact: the flow closure is "
            "non-compact and admits no dense approximating sequence"
        )
    times, _ = approximating_times(A, m_max)
    return [flow_exp(A, float(t)) for t in times]


def probe_density_error(
    A: FlowGenerator,
    K: SphereGrid,
    m_max: int,
    probe_count: int = DEFAULTS["probe_count"],
    n_candidates: int = DEFAULTS["density_candidates"],
) -> dict:
    """Density check for the approximating times: for each probe time t, the
    smallest sup-over-K chordal distance between f_t and a sequence member.

    Only the n_candidates members nearest to t in circular time are evaluated
    (the rotation action makes the sup monotone in circular time distance), so
    the reported error is a sound upper estimate of the true minimum. For the
    periodic-grid branch the probes sit on grid times: exact coincidences give
    exact zeros.
    """
    times, info = approximating_times(A, m_max, probe_count)
    if info["branch"] == "constant":
        return {"per_probe": [0.0], "max_error": 0.0, **info}
    period = info["period"]
    pts = K.as_array()
    if info["branch"] == "periodic-grid":
        n_grid = info["grid_points"]
        stride = max(1, n_grid // probe_count)
        probe_ts = [period * (j * stride) / n_grid for j in range(probe_count)]
    else:
        probe_ts = [
            period * (2 * j + 1) / (2 * probe_count) for j in range(probe_count)
        ]
    errors = []
    for t in probe_ts:
        target = normalize_columns(flow_action_matrix(A, float(t)) @ pts)
        circ = np.abs(np.mod(times - t + period / 2.0, period) - period / 2.0)
        order = np.argsort(circ, kind="stable")[:n_candidates]
        best = math.inf
        for idx in order:
            member = normalize_columns(flow_action_matrix(A, float(times[idx])) @ pts)
            err = float(chordal_array(member, target).max())
            if err < best:
                best = err
        errors.append(best)
    return {"per_probe": errors, "max_error": max(errors), "probe_times": probe_ts, **info}
