"""Shared test oracles and conditioned random factories.

Everything here is written from first principles and shares no code with the
package: the exponential oracle is a plain scaling-and-squaring Taylor series,
the chordal reference is the affine three-case formula, and the Moebius
reference applies (az + b)/(cz + d) directly to affine values.
"""

import cmath
import math

import numpy as np

# Series oracle parameters. 30 terms after scaling by 2^-10 leaves the
# truncation error far below the squaring roundoff (~1e-11 worst case for the
# matrices used in these tests); deeper scaling would let the squaring passes
# dominate and wash out the comparison.
SERIES_TERMS = 30
SQUARING_STEPS = 10


def series_exp(m) -> np.ndarray:
    """exp(m) for a 2x2 complex matrix by Taylor series with scaling and squaring."""
    b = np.asarray(m, dtype=complex) / float(2**SQUARING_STEPS)
    acc = np.eye(2, dtype=complex)
    term = np.eye(2, dtype=complex)
    for k in range(1, SERIES_TERMS + 1):
        term = term @ b / k
        acc = acc + term
    for _ in range(SQUARING_STEPS):
        acc = acc @ acc
    return acc


def chordal_affine(z1, z2) -> float:
    """Chordal distance from affine values; None stands for infinity.

    d(z, w)   = |z - w| / (sqrt(1 + |z|^2) sqrt(1 + |w|^2))
    d(z, inf) = 1 / sqrt(1 + |z|^2)
    d(inf, inf) = 0
    """
    if z1 is None and z2 is None:
        return 0.0
    if z1 is None:
        return 1.0 / math.sqrt(1.0 + abs(z2) ** 2)
    if z2 is None:
        return 1.0 / math.sqrt(1.0 + abs(z1) ** 2)
    return abs(z1 - z2) / (math.sqrt(1.0 + abs(z1) ** 2) * math.sqrt(1.0 + abs(z2) ** 2))


def moebius_affine(a, b, c, d, z):
    """(az + b)/(cz + d) on affine values with explicit case analysis; None is infinity."""
    if z is None:
        if c == 0:
            return None
        return a / c
    num = a * z + b
    den = c * z + d
    if den == 0:
        return None
    return num / den


def random_conjugator(rng, cond_max: float = 8.0) -> np.ndarray:
    """Random det-1 complex 2x2 with condition number at most cond_max.

    Rejection keeps the conjugated families well separated from their
    classification boundaries; ill-conditioned conjugators test nothing new,
    they just launder roundoff into every downstream tolerance.
    """
    while True:
        m = rng.uniform(-1.0, 1.0, (2, 2)) + 1j * rng.uniform(-1.0, 1.0, (2, 2))
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det) < 0.25:
            continue
        m = m / cmath.sqrt(det)
        if np.linalg.cond(m) <= cond_max:
            return m


def conjugate(p: np.ndarray, m) -> np.ndarray:
    return p @ np.asarray(m, dtype=complex) @ np.linalg.inv(p)


# --- map factories (matrices, det 1 up to roundoff) ------------------------

def random_loxodromic_matrix(rng, lam_min: float = 0.05, lam_max: float = 0.95):
    """Conjugated z -> lam z with |lam| in [lam_min, lam_max]; returns (matrix, lam)."""
    lam = rng.uniform(lam_min, lam_max) * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
    s = cmath.sqrt(lam)
    core = np.diag([s, 1.0 / s])
    return conjugate(random_conjugator(rng), core), lam


def random_hyperbolic_matrix(rng):
    lam = rng.uniform(0.05, 0.9)
    s = math.sqrt(lam)
    return conjugate(random_conjugator(rng), np.diag([s, 1.0 / s])), lam


def random_elliptic_matrix(rng, phi_min: float = 0.15):
    # phi stays away from 0 and pi: both ends are the parabolic trace boundary
    phi = rng.uniform(phi_min, math.pi - phi_min)
    core = np.diag([cmath.exp(1j * phi), cmath.exp(-1j * phi)])
    return conjugate(random_conjugator(rng), core), phi


def random_parabolic_matrix(rng):
    shear = np.array([[1.0, rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)], [0.0, 1.0]])
    return conjugate(random_conjugator(rng), shear)


def random_map_matrix(rng, kind: str) -> np.ndarray:
    if kind == "hyperbolic":
        return random_hyperbolic_matrix(rng)[0]
    if kind == "elliptic":
        return random_elliptic_matrix(rng)[0]
    if kind == "parabolic":
        return random_parabolic_matrix(rng)
    if kind == "loxodromic":
        m, lam = random_loxodromic_matrix(rng)
        while lam.imag == 0.0:  # force a genuinely complex multiplier
            m, lam = random_loxodromic_matrix(rng)
        return m
    raise ValueError(kind)


# --- generator factories (trace zero) ---------------------------------------

def random_trace_zero(rng, norm_max: float = 2.0) -> np.ndarray:
    """Generic trace-zero generator with Frobenius norm in (0.1, norm_max]."""
    while True:
        m = rng.uniform(-1.0, 1.0, (2, 2)) + 1j * rng.uniform(-1.0, 1.0, (2, 2))
        m[1, 1] = -m[0, 0]
        norm = np.linalg.norm(m)
        if norm < 1e-3:
            continue
        m = m * (rng.uniform(0.1, 1.0) * norm_max / norm)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        # keep clear of the defective band; |mu| ~ 0 is measure zero anyway
        if abs(cmath.sqrt(-det)) >= 1e-4:
            return m


def random_generator_matrix(rng, kind: str) -> np.ndarray:
    """Conjugated canonical generator of the requested subgroup type."""
    if kind == "elliptic":
        theta = rng.uniform(0.2, 3.0)
        core = np.diag([1j * theta, -1j * theta])
    elif kind == "hyperbolic":
        lam = rng.uniform(0.2, 2.0)
        core = np.diag([lam, -lam])
    elif kind == "parabolic":
        core = np.array([[0.0, rng.uniform(0.5, 2.0)], [0.0, 0.0]], dtype=complex)
    elif kind == "loxodromic":
        mu = complex(rng.uniform(0.2, 1.5), rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 1.5))
        core = np.diag([mu, -mu])
    else:
        raise ValueError(kind)
    out = conjugate(random_conjugator(rng), core)
    # re-center the numerical trace on zero; conjugation drift is ~1e-16
    tr = (out[0, 0] + out[1, 1]) / 2.0
    out[0, 0] -= tr
    out[1, 1] -= tr
    return out
