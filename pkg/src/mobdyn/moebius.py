"""SL(2,C) matrices acting on the sphere: algebra, classification, fixed points, orbits."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .sphere import (
    INFINITY,
    SpherePoint,
    chordal_distance,
    normalize_columns,
    sphere_point_from_affine,
)

IDENTITY_TAG = "identity"
ELLIPTIC = "elliptic"
PARABOLIC = "parabolic"
HYPERBOLIC = "hyperbolic"
LOXODROMIC = "loxodromic"

# Trace-classification band: parabolic owns the boundary |Re tr| = 2.
TAU_PARABOLIC = 1e-9
# Entrywise tolerance for recognizing +/-I.
IDENTITY_TOL = 1e-10
# Below this (relative to max(1, |a|)) the lower-left entry is treated as exactly zero,
# which keeps the infinity fixed point's residual under the advertised tolerance.
C_ZERO_TOL = 1e-12
# Points within this chordal distance of the repelling fixed point are undecidable.
BASIN_TOL = 1e-9

INSIDE = "inside"
OUTSIDE = "outside"
BOUNDARY_UNDECIDED = "boundary-undecided"


class MoebiusMap:
    """f(z) = (az + b)/(cz + d) with ad - bc = 1; rescaled by 1/sqrt(det) on construction."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: complex, b: complex, c: complex, d: complex):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if scale == 0.0 or abs(det) <= 1e-14 * scale * scale:
            raise ValueError("matrix determinant is zero; not a Moebius map")
        s = cmath.sqrt(det)
        object.__setattr__(self, "a", a / s)
        object.__setattr__(self, "b", b / s)
        object.__setattr__(self, "c", c / s)
        object.__setattr__(self, "d", d / s)

    def __setattr__(self, name, value):
        raise AttributeError("MoebiusMap is immutable")

    @classmethod
    def _from_unit_det(cls, a: complex, b: complex, c: complex, d: complex) -> "MoebiusMap":
        """Trusted path for entries already known to have det = 1: skips the
        sqrt(det) rescale, whose cancellation noise is amplified when the
        entries are large (closed-form exponentials at big |t mu|)."""
        self = object.__new__(cls)
        object.__setattr__(self, "a", complex(a))
        object.__setattr__(self, "b", complex(b))
        object.__setattr__(self, "c", complex(c))
        object.__setattr__(self, "d", complex(d))
        return self

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_matrix(cls, m) -> "MoebiusMap":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def scaling(cls, k: complex) -> "MoebiusMap":
        """z -> k z."""
        return cls(k, 0.0, 0.0, 1.0)

    @classmethod
    def translation(cls, b: complex) -> "MoebiusMap":
        """z -> z + b."""
        return cls(1.0, b, 0.0, 1.0)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap.from_matrix(self.matrix @ other.matrix)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def apply(self, p: SpherePoint) -> SpherePoint:
        return SpherePoint(self.a * p.z + self.b * p.w, self.c * p.z + self.d * p.w)

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        return normalize_columns(self.matrix @ pts)

    def same_action(self, other: "MoebiusMap", tol: float = 1e-10) -> bool:
        """Entrywise equality up to the overall sign left free by sqrt(det)."""
        m, n = self.matrix, other.matrix
        return min(np.abs(m - n).max(), np.abs(m + n).max()) <= tol

    def __repr__(self) -> str:
        return f"MoebiusMap(a={self.a:.6g}, b={self.b:.6g}, c={self.c:.6g}, d={self.d:.6g})"


def compose(f: MoebiusMap, g: MoebiusMap) -> MoebiusMap:
    """(f o g)(x) = f(g(x))."""
    return f @ g


def inverse(f: MoebiusMap) -> MoebiusMap:
    return f.inverse()


def apply(f: MoebiusMap, p: SpherePoint) -> SpherePoint:
    return f.apply(p)


@dataclass(frozen=True)
class MapClass:
    tag: str
    trace: complex


def classify(f: MoebiusMap) -> MapClass:
    """Trace classification with the parabolic band owning |Re tr| = 2.

    Rule order: +/-I -> identity; |Im tr| <= tau and ||Re tr| - 2| <= tau ->
    parabolic; real trace below 2 -> elliptic, above 2 -> hyperbolic; any
    genuinely complex trace -> loxodromic.
    """
    tr = f.trace
    m = f.matrix
    eye = np.eye(2)
    if min(np.abs(m - eye).max(), np.abs(m + eye).max()) <= IDENTITY_TOL:
        return MapClass(IDENTITY_TAG, tr)
    if abs(tr.imag) <= TAU_PARABOLIC:
        if abs(abs(tr.real) - 2.0) <= TAU_PARABOLIC:
            return MapClass(PARABOLIC, tr)
        if abs(tr.real) < 2.0:
            return MapClass(ELLIPTIC, tr)
        return MapClass(HYPERBOLIC, tr)
    return MapClass(LOXODROMIC, tr)


@dataclass(frozen=True)
class FixedPointData:
    points: tuple[SpherePoint, ...]
    multipliers: tuple[float, ...]
    attracting: int | None


def _multiplier(f: MoebiusMap, p: SpherePoint) -> float:
    """Modulus of f' at a fixed point; reciprocal chart when the point is infinity."""
    if p.is_infinity:
        # F(zeta) = 1/f(1/zeta) has F'(0) = 1/a^2 when c = 0.
        return 1.0 / abs(f.a) ** 2
    zp = p.to_affine()
    return 1.0 / abs(f.c * zp + f.d) ** 2


def fixed_points(f: MoebiusMap) -> FixedPointData:
    """Solve c z^2 + (d - a) z - b = 0 for the fixed points, with multipliers.

    The quadratic silently assumes c != 0; when c vanishes infinity is always
    fixed and the finite root is b/(d - a), collapsing to a single fixed point
    at infinity for translations (d = a).
    """
    cls = classify(f)
    if cls.tag == IDENTITY_TAG:
        raise ValueError("identity map: every point fixed")
    a, b, c, d = f.a, f.b, f.c, f.d
    if abs(c) <= C_ZERO_TOL * max(1.0, abs(a)):
        if abs(d - a) <= C_ZERO_TOL * max(1.0, abs(a)):
            points = (INFINITY,)
        else:
            points = (INFINITY, sphere_point_from_affine(b / (d - a)))
    elif cls.tag == PARABOLIC:
        points = (sphere_point_from_affine((a - d) / (2.0 * c)),)
    else:
        # Stable quadratic: discriminant (d-a)^2 + 4bc equals tr^2 - 4 at det 1.
        disc = cmath.sqrt(f.trace**2 - 4.0)
        bb = d - a
        if (bb.conjugate() * disc).real >= 0.0:
            qq = -(bb + disc) / 2.0
        else:
            qq = -(bb - disc) / 2.0
        if qq == 0:
            points = (sphere_point_from_affine(0.0),)
        else:
            points = (
                sphere_point_from_affine(qq / c),
                sphere_point_from_affine(-b / qq),
            )
    mults = tuple(_multiplier(f, p) for p in points)
    attracting = None
    if cls.tag in (HYPERBOLIC, LOXODROMIC) and len(points) == 2:
        attracting = 0 if mults[0] < mults[1] else 1
    return FixedPointData(points, mults, attracting)


@dataclass(frozen=True)
class NormalForm:
    """Conjugacy f = h^(-1) o (z -> lambda z) o h with |lambda| < 1."""

    h: MoebiusMap
    lam: complex
    attracting: SpherePoint
    repelling: SpherePoint


def _conjugator(p: SpherePoint, q: SpherePoint) -> MoebiusMap:
    """The map sending p to 0 and q to infinity: (z-p)/(z-q) plus degenerate limits."""
    if p.is_infinity:
        qa = q.to_affine()
        return MoebiusMap(0.0, 1.0, 1.0, -qa)
    if q.is_infinity:
        return MoebiusMap(1.0, -p.to_affine(), 0.0, 1.0)
    return MoebiusMap(1.0, -p.to_affine(), 1.0, -q.to_affine())


def loxodromic_normal_form(f: MoebiusMap) -> NormalForm:
    cls = classify(f)
    if cls.tag not in (LOXODROMIC, HYPERBOLIC):
        raise ValueError(f"not loxodromic-type: classified {cls.tag}")
    fp = fixed_points(f)
    assert fp.attracting is not None
    p = fp.points[fp.attracting]
    q = fp.points[1 - fp.attracting]
    h = _conjugator(p, q)
    g = (h @ f) @ h.inverse()
    lam = g.a / g.d
    if abs(lam) >= 1.0:
        p, q = q, p
        h = _conjugator(p, q)
        g = (h @ f) @ h.inverse()
        lam = g.a / g.d
    return NormalForm(h, lam, p, q)


def matrix_power(f: MoebiusMap, n: int) -> MoebiusMap:
    """f^n by binary exponentiation, renormalizing det to 1 at every step.

    Raises OverflowError once the unit-det representation of the power leaves
    double range (entries grow like |multiplier|^(n/2))."""
    if n < 0:
        return matrix_power(f.inverse(), -n)
    acc = np.eye(2, dtype=complex)
    base = f.matrix
    with np.errstate(over="ignore", invalid="ignore"):
        while n:
            if n & 1:
                acc = _renorm_det(base @ acc)
            n >>= 1
            if n:
                base = _renorm_det(base @ base)
    return MoebiusMap._from_unit_det(acc[0, 0], acc[0, 1], acc[1, 0], acc[1, 1])


def _renorm_det(m: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(m.view(float))):
        raise OverflowError("matrix power overflows the unit-determinant representation")
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det == 0.0 or not cmath.isfinite(det):
        raise OverflowError("matrix power overflows the unit-determinant representation")
    return m / cmath.sqrt(det)


def iterate_orbit(f: MoebiusMap, x: SpherePoint, n_max: int) -> list[SpherePoint]:
    """Orbit x, f(x), ..., f^n_max(x) via accumulated matrix powers.

    The running power is rescaled by its largest entry each step, so the orbit
    stays computable for any n_max even when the entries of f^n blow up.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    acc = np.eye(2, dtype=complex)
    v = np.array([x.z, x.w], dtype=complex)
    orbit = [SpherePoint(v[0], v[1])]
    m = f.matrix
    for _ in range(n_max):
        acc = m @ acc
        acc = acc / np.abs(acc).max()
        u = acc @ v
        orbit.append(SpherePoint(u[0], u[1]))
    return orbit


def in_attracting_basin(f: MoebiusMap, x: SpherePoint) -> str:
    """Basin of the attracting fixed point: everything except the repelling point."""
    cls = classify(f)
    if cls.tag not in (LOXODROMIC, HYPERBOLIC):
        raise ValueError(f"not loxodromic-type: classified {cls.tag}")
    fp = fixed_points(f)
    q = fp.points[1 - fp.attracting]
    if chordal_distance(x, q) <= BASIN_TOL:
        return BOUNDARY_UNDECIDED
    return INSIDE
