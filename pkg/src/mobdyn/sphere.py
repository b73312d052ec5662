"""Riemann sphere geometry: projective points, the chordal metric, embeddings, sampling grids."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

# Two points are the same projective point when |z1*w2 - z2*w1| <= POINT_EQ_TOL.
POINT_EQ_TOL = 1e-10
# Homogeneous pairs are kept at |z|^2 + |w|^2 = 1 to within NORM_TOL.
NORM_TOL = 1e-12

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
# Outermost ball-grid sample sits at chord radius*sqrt(BOUNDARY_FILL): strictly
# inside the ball but past the 0.95*radius coverage requirement.
BOUNDARY_FILL = 0.995


class SpherePoint:
    """A point of the extended complex plane as a normalized homogeneous pair [z : w]."""

    __slots__ = ("z", "w")

    def __init__(self, z: complex, w: complex):
        z = complex(z)
        w = complex(w)
        if any(math.isnan(v) for v in (z.real, z.imag, w.real, w.imag)):
            raise ValueError("homogeneous coordinates contain NaN")
        norm = math.hypot(abs(z), abs(w))
        if norm == 0.0:
            raise ValueError("homogeneous coordinates (0, 0) do not describe a point")
        object.__setattr__(self, "z", z / norm)
        object.__setattr__(self, "w", w / norm)

    def __setattr__(self, name, value):
        raise AttributeError("SpherePoint is immutable")

    @property
    def is_infinity(self) -> bool:
        return abs(self.w) <= POINT_EQ_TOL

    def to_affine(self) -> complex:
        """Affine value z/w; returns complex infinity for the point at infinity."""
        if self.w == 0:
            return complex(math.inf, 0.0)
        return self.z / self.w

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpherePoint):
            return NotImplemented
        return abs(self.z * other.w - other.z * self.w) <= POINT_EQ_TOL

    __hash__ = None  # tolerance-based equality is incompatible with hashing

    def __repr__(self) -> str:
        if self.is_infinity:
            return "SpherePoint(inf)"
        a = self.to_affine()
        return f"SpherePoint({a.real:.6g}{a.imag:+.6g}j)"


INFINITY = SpherePoint(1.0, 0.0)
ZERO = SpherePoint(0.0, 1.0)


def sphere_point_from_affine(c) -> SpherePoint:
    """Build a point from an affine complex value, or from the marker 'inf' / math.inf."""
    if isinstance(c, str):
        if c == "inf":
            return INFINITY
        raise ValueError(f"affine value {c!r} is not a complex number or 'inf'")
    if isinstance(c, SpherePoint):
        return c
    c = complex(c)
    if cmath.isnan(c):
        raise ValueError("affine value is NaN")
    if cmath.isinf(c):
        return INFINITY
    return SpherePoint(c, 1.0)


def chordal_distance(p: SpherePoint, q: SpherePoint) -> float:
    """Chordal metric |z1*w2 - z2*w1| on unit-norm homogeneous pairs; diameter 1."""
    return abs(p.z * q.w - q.z * p.w)


def stereographic_embed(p: SpherePoint) -> tuple[float, float, float]:
    """Embed onto the origin-centered sphere of diameter 1, point at infinity at (0, 0, 1/2).

    Euclidean distance between embedded images equals chordal_distance exactly,
    which is what makes the diameter-1 convention worth the bookkeeping.
    """
    zw = p.z * p.w.conjugate()
    return (zw.real, zw.imag, (abs(p.z) ** 2 - abs(p.w) ** 2) / 2.0)


def stereographic_lift(xyz: tuple[float, float, float]) -> SpherePoint:
    """Inverse of stereographic_embed for triples on the diameter-1 sphere."""
    x, y, zeta = xyz
    zz = 0.5 + zeta  # |z|^2
    ww = 0.5 - zeta  # |w|^2
    # Divide by the larger modulus to keep the reconstruction stable near the poles.
    if ww >= zz:
        w = math.sqrt(max(ww, 0.0))
        return SpherePoint(complex(x, y) / w, w)
    z = math.sqrt(max(zz, 0.0))
    return SpherePoint(z, complex(x, -y) / z)


@dataclass(frozen=True)
class ChordalBall:
    center: SpherePoint
    radius: float

    def __post_init__(self):
        if not 0.0 < self.radius <= 1.0:
            raise ValueError(f"ball radius must lie in (0, 1], got {self.radius}")


@dataclass(frozen=True)
class SphereGrid:
    points: tuple[SpherePoint, ...]
    descriptor: str
    seed: int = 0

    def __post_init__(self):
        if not self.points:
            raise ValueError("grid is empty")

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return points_to_array(self.points)


# ---------------------------------------------------------------------------
# Array helpers shared by the dynamics modules.  Point sets travel as complex
# arrays of shape (2, m): row 0 the z coordinates, row 1 the w coordinates.

def points_to_array(points) -> np.ndarray:
    pts = np.empty((2, len(points)), dtype=complex)
    for j, p in enumerate(points):
        pts[0, j] = p.z
        pts[1, j] = p.w
    return pts


def array_to_points(arr: np.ndarray) -> list[SpherePoint]:
    return [SpherePoint(arr[0, j], arr[1, j]) for j in range(arr.shape[1])]


def normalize_columns(arr: np.ndarray) -> np.ndarray:
    return arr / np.sqrt(np.abs(arr[0]) ** 2 + np.abs(arr[1]) ** 2)


def chordal_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Chordal distances between corresponding (or broadcast) columns of two unit-norm arrays."""
    return np.abs(a[0] * b[1] - b[0] * a[1])


def pairwise_diameter(arr: np.ndarray) -> float:
    """Largest chordal distance among the columns of a unit-norm point array."""
    z, w = arr
    return float(np.abs(z[:, None] * w[None, :] - z[None, :] * w[:, None]).max())


# ---------------------------------------------------------------------------
# Grids.

def _embed_array(points: np.ndarray) -> np.ndarray:
    zw = points[0] * np.conj(points[1])
    return np.stack([zw.real, zw.imag, (np.abs(points[0]) ** 2 - np.abs(points[1]) ** 2) / 2.0])


def _lift_array(xyz: np.ndarray) -> np.ndarray:
    x, y, zeta = xyz
    zz = 0.5 + zeta
    ww = 0.5 - zeta
    out = np.empty((2, xyz.shape[1]), dtype=complex)
    lower = ww >= zz
    w = np.sqrt(np.maximum(ww, 0.0))
    z = np.sqrt(np.maximum(zz, 0.0))
    out[0] = np.where(lower, (x + 1j * y) / np.where(lower, w, 1.0), z)
    out[1] = np.where(lower, w, (x - 1j * y) / np.where(lower, 1.0, z))
    return normalize_columns(out)


def _rotation_to(target: np.ndarray) -> np.ndarray:
    """Rotation matrix taking the unit vector (0, 0, 1) to the unit vector target."""
    c = target[2]
    if c <= -1.0 + 1e-14:
        return np.diag([1.0, -1.0, -1.0])
    v = np.array([-target[1], target[0], 0.0])  # (0,0,1) x target
    vx = np.array([[0.0, 0.0, v[1]], [0.0, 0.0, -v[0]], [-v[1], v[0], 0.0]])
    return np.eye(3) + vx + vx @ vx / (1.0 + c)


def chordal_ball_grid(ball: ChordalBall, n: int, seed: int = 0) -> SphereGrid:
    """Deterministic sample of n points strictly inside a chordal ball.

    The embedding is an isometry, so the ball is exactly a spherical cap and is
    sampled directly: an area-uniform golden-angle spiral over the cap with a
    seeded azimuthal offset.  The outermost sample sits at chord distance
    radius*sqrt(0.995), which covers the >0.95*radius boundary requirement while
    keeping every point strictly interior.
    """
    if n < 1:
        raise ValueError(f"ball grid size must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    offset = rng.uniform(0.0, 2.0 * math.pi)
    i = np.arange(n)
    t = BOUNDARY_FILL * (2 * i + 1) / (2 * n - 1) if n > 1 else np.array([BOUNDARY_FILL])
    # chord = r*sqrt(t) corresponds to cap colatitude with cos(psi) = 1 - 2 r^2 t
    cos_psi = 1.0 - 2.0 * ball.radius**2 * t
    sin_psi = np.sqrt(np.maximum(1.0 - cos_psi**2, 0.0))
    phi = GOLDEN_ANGLE * i + offset
    cap = np.stack([sin_psi * np.cos(phi), sin_psi * np.sin(phi), cos_psi]) * 0.5
    axis = np.array(stereographic_embed(ball.center)) * 2.0
    xyz = _rotation_to(axis) @ cap
    pts = array_to_points(_lift_array(xyz))
    desc = f"ball(center={ball.center!r}, radius={ball.radius}, n={n})"
    return SphereGrid(tuple(pts), desc, seed)


def fibonacci_grid(n: int, seed: int = 0) -> SphereGrid:
    """Golden-ratio spiral covering the whole sphere; near-uniform for any n."""
    if n < 1:
        raise ValueError(f"grid size must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    offset = rng.uniform(0.0, 2.0 * math.pi)
    i = np.arange(n)
    zeta = (1.0 - 2.0 * (i + 0.5) / n) * 0.5
    rho = np.sqrt(np.maximum(0.25 - zeta**2, 0.0))
    phi = GOLDEN_ANGLE * i + offset
    xyz = np.stack([rho * np.cos(phi), rho * np.sin(phi), zeta])
    pts = array_to_points(_lift_array(xyz))
    return SphereGrid(tuple(pts), f"fibonacci(n={n})", seed)


def affine_grid(re_min: float, re_max: float, im_min: float, im_max: float, step: float) -> SphereGrid:
    """Rectangular grid in the affine chart."""
    if step <= 0:
        raise ValueError(f"grid step must be positive, got {step}")
    res = np.arange(re_min, re_max + step / 2, step)
    ims = np.arange(im_min, im_max + step / 2, step)
    pts = [SpherePoint(complex(x, y), 1.0) for y in ims for x in res]
    desc = f"affine(re=[{re_min},{re_max}], im=[{im_min},{im_max}], step={step})"
    return SphereGrid(tuple(pts), desc, 0)
