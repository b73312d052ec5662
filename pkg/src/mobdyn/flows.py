"""One-parameter subgroups t -> exp(tA) of SL(2,C): closed-form exponentials,
subgroup-type classification, and the relative-compactness test.

Generators must be trace-zero: det(exp(tA)) = e^{t tr A}, so exp(tA) stays in
SL(2,C) for every t exactly when tr A = 0.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .moebius import MoebiusMap
from .sphere import SpherePoint, normalize_columns

TRACE_TOL = 1e-10
# Below this Frobenius norm a generator is the zero matrix.
ZERO_NORM_TOL = 1e-12
# Defective band: |mu| under this (relative to max(1, ||A||)) with A != 0 means
# nilpotent. An absolute 1e-8 band misclassifies conjugated nilpotents whose
# determinant roundoff alone produces |mu| of a few 1e-8.
NILPOTENT_REL_BAND = 1e-6
# Purely-imaginary / purely-real tests on mu, relative to max(1, |mu|).
EIGEN_AXIS_TOL = 1e-10

TRIVIAL = "trivial"
ELLIPTIC_FLOW = "elliptic"
HYPERBOLIC_FLOW = "hyperbolic"
PARABOLIC_FLOW = "parabolic"
LOXODROMIC_FLOW = "loxodromic"

UNITARITY_TIMES = (0.1, 1.0, 7.3)
UNITARITY_TOL = 1e-8
GROWTH_THRESHOLD = 10.0
# Geometric probe t = 1, 2, 4, ... for the growth witness. The base horizon is
# 2^10; the extension catches generators with very small norm whose growth is
# real but slow.
GROWTH_BASE_EXP = 10
GROWTH_MAX_EXP = 40
# Beyond this |Re(t mu)| the entries of exp(tA) themselves overflow doubles.
EXP_OVERFLOW_LIMIT = 300.0


class FlowGenerator:
    """Trace-zero 2x2 complex matrix A with cached eigen-data.

    Eigenvalues are +/-mu with mu the principal square root of -det(A); the
    sign of mu is observationally irrelevant because every formula used here
    is even in mu.
    """

    __slots__ = ("_matrix", "mu", "diagonalizable", "norm")

    def __init__(self, matrix):
        m = np.array(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"generator must be 2x2, got shape {m.shape}")
        if not np.all(np.isfinite(m.view(float))):
            raise ValueError("generator entries must be finite")
        norm = float(np.linalg.norm(m))
        tr = m[0, 0] + m[1, 1]
        if abs(tr) > TRACE_TOL * max(1.0, norm):
            raise ValueError(
                f"generator trace must vanish (det(exp(tA)) = e^(t tr A) leaves "
                f"SL(2,C) otherwise); got trace {tr:.3e}"
            )
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        mu = cmath.sqrt(-det)
        m.setflags(write=False)
        object.__setattr__(self, "_matrix", m)
        object.__setattr__(self, "norm", norm)
        object.__setattr__(self, "mu", mu)
        if norm <= ZERO_NORM_TOL:
            object.__setattr__(self, "diagonalizable", True)
        elif abs(mu) <= NILPOTENT_REL_BAND * max(1.0, norm):
            object.__setattr__(self, "diagonalizable", False)
        else:
            object.__setattr__(self, "diagonalizable", True)

    def __setattr__(self, name, value):
        raise AttributeError("FlowGenerator is immutable")

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def is_zero(self) -> bool:
        return self.norm <= ZERO_NORM_TOL

    @property
    def is_nilpotent(self) -> bool:
        return not self.is_zero and not self.diagonalizable

    def __repr__(self) -> str:
        rows = "; ".join(
            ", ".join(f"{v:.6g}" for v in row) for row in self._matrix.tolist()
        )
        return f"FlowGenerator([{rows}])"


@dataclass(frozen=True)
class SubgroupType:
    """Type tag plus the parameters that pin the conjugacy class.

    parameters carries "theta" (elliptic), "lambda" (hyperbolic), or
    "alpha"/"beta" (loxodromic); empty for trivial and parabolic.
    """

    tag: str
    parameters: dict[str, float] = field(default_factory=dict)


def classify_subgroup(A: FlowGenerator) -> SubgroupType:
    """A = 0 -> trivial; mu purely imaginary -> elliptic; mu real -> hyperbolic;
    mu = 0 with A != 0 -> parabolic; genuinely complex mu -> loxodromic."""
    if A.is_zero:
        return SubgroupType(TRIVIAL)
    if A.is_nilpotent:
        return SubgroupType(PARABOLIC_FLOW)
    mu = A.mu
    axis_tol = EIGEN_AXIS_TOL * max(1.0, abs(mu))
    if abs(mu.real) <= axis_tol:
        return SubgroupType(ELLIPTIC_FLOW, {"theta": abs(mu)})
    if abs(mu.imag) <= axis_tol:
        return SubgroupType(HYPERBOLIC_FLOW, {"lambda": abs(mu)})
    if mu.real < 0:
        mu = -mu
    return SubgroupType(LOXODROMIC_FLOW, {"alpha": mu.real, "beta": mu.imag})


def _closed_form(A: FlowGenerator, t: float) -> np.ndarray:
    """exp(tA) = cosh(t mu) I + (sinh(t mu)/mu) A, with the nilpotent limit I + tA."""
    m = A.matrix
    eye = np.eye(2, dtype=complex)
    if A.is_zero or A.is_nilpotent:
        return eye + t * m
    w = t * A.mu
    return cmath.cosh(w) * eye + (cmath.sinh(w) / A.mu) * m


def flow_action_matrix(A: FlowGenerator, t: float) -> np.ndarray:
    """A matrix representing exp(tA) up to a positive real scale, finite for
    every t. The scale cancels in the projective action on the sphere; use
    this, never flow_exp, when t may be large."""
    if A.is_zero or A.is_nilpotent:
        return np.eye(2, dtype=complex) + t * A.matrix
    w = t * A.mu
    rw = abs(w.real)
    if rw <= EXP_OVERFLOW_LIMIT:
        return _closed_form(A, t)
    # Divide through by e^rw: both exponents then have nonpositive real part.
    ep = cmath.exp(w - rw)
    em = cmath.exp(-w - rw)
    ch = 0.5 * (ep + em)
    sh = 0.5 * (ep - em)
    return ch * np.eye(2, dtype=complex) + (sh / A.mu) * A.matrix


def flow_exp(A: FlowGenerator, t: float) -> MoebiusMap:
    """exp(tA) as a Moebius map, det = 1 within 1e-9.

    The entries are used verbatim (no determinant renormalization): the closed
    form is analytically unimodular, and renormalizing by the computed
    determinant would inject cancellation noise at large |t mu|.
    """
    if not (A.is_zero or A.is_nilpotent) and abs((t * A.mu).real) > EXP_OVERFLOW_LIMIT:
        raise OverflowError(
            f"entries of exp(tA) exceed double range at t = {t:g}; "
            "use flow_trajectory / flow_action_matrix for large-time dynamics"
        )
    m = _closed_form(A, t)
    return MoebiusMap._from_unit_det(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def _eigenvector(m: np.ndarray, ev: complex) -> np.ndarray:
    """Unit kernel vector of (m - ev I), picking the better-conditioned row."""
    v1 = np.array([m[0, 1], ev - m[0, 0]], dtype=complex)
    v2 = np.array([ev - m[1, 1], m[1, 0]], dtype=complex)
    v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    return v / np.linalg.norm(v)


def flow_conjugator(A: FlowGenerator) -> np.ndarray:
    """det-1 matrix P whose columns are eigenvectors for +mu, -mu, so that
    P^(-1) A P = diag(mu, -mu). Requires a diagonalizable nonzero generator."""
    if A.is_zero:
        return np.eye(2, dtype=complex)
    if not A.diagonalizable:
        raise ValueError("generator is nilpotent: no diagonalizing conjugator")
    p = np.column_stack([_eigenvector(A.matrix, A.mu), _eigenvector(A.matrix, -A.mu)])
    det = p[0, 0] * p[1, 1] - p[0, 1] * p[1, 0]
    return p / cmath.sqrt(det)


@dataclass(frozen=True)
class CompactnessResult:
    """Outcome of the relative-compactness test with its certificate.

    Compact: conjugator P into the diagonal (rotation) form plus measured
    unitarity defects ||U*U - I||_F of P^(-1) exp(tA) P at fixed probe times.
    Non-compact: the first probed time where ||exp(tA)||_F crosses the growth
    threshold (growth_time None if the probe horizon was exhausted).
    """

    compact: bool
    conjugator: np.ndarray | None = None
    unitarity_defects: dict[float, float] | None = None
    growth_time: float | None = None
    growth_norm: float | None = None


def _frobenius(m: np.ndarray) -> float:
    with np.errstate(over="ignore", invalid="ignore"):
        n = float(np.sqrt(np.abs(m.ravel() @ m.conj().ravel()).real))
    return n


def is_relatively_compact(A: FlowGenerator) -> CompactnessResult:
    """True iff A = 0 or A is diagonalizable with purely imaginary eigenvalues
    (equivalently: the flow is conjugate into SU(2))."""
    tag = classify_subgroup(A).tag
    if tag in (TRIVIAL, ELLIPTIC_FLOW):
        p = flow_conjugator(A)
        p_inv = np.linalg.inv(p)
        defects: dict[float, float] = {}
        for t in UNITARITY_TIMES:
            u = p_inv @ _closed_form(A, t) @ p
            defects[t] = float(np.linalg.norm(u.conj().T @ u - np.eye(2)))
        return CompactnessResult(True, conjugator=p, unitarity_defects=defects)
    for k in range(GROWTH_MAX_EXP + 1):
        t = float(2**k)
        norm = _frobenius(flow_action_matrix(A, t)) * _flow_scale(A, t)
        if norm > GROWTH_THRESHOLD:
            return CompactnessResult(False, growth_time=t, growth_norm=norm)
    return CompactnessResult(False)


def _flow_scale(A: FlowGenerator, t: float) -> float:
    """The positive factor by which flow_action_matrix(A, t) understates exp(tA)."""
    if A.is_zero or A.is_nilpotent:
        return 1.0
    rw = abs((t * A.mu).real)
    if rw <= EXP_OVERFLOW_LIMIT:
        return 1.0
    with np.errstate(over="ignore"):
        return float(np.exp(rw))


def flow_trajectory(
    A: FlowGenerator, x: SpherePoint, times: list[float]
) -> list[SpherePoint]:
    """The curve t -> exp(tA) . x at the given times (nonempty, ascending)."""
    ts = list(times)
    if not ts:
        raise ValueError("times must be nonempty")
    if any(b < a for a, b in zip(ts, ts[1:])):
        raise ValueError("times must be sorted ascending")
    v = np.array([[x.z], [x.w]], dtype=complex)
    out = []
    for t in ts:
        u = normalize_columns(flow_action_matrix(A, float(t)) @ v)
        out.append(SpherePoint(u[0, 0], u[1, 0]))
    return out
