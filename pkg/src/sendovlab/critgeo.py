"""Critical points, critical radii and the classical location theorems.

The critical radius of ``p`` at one of its zeros ``w0`` is the distance from
``w0`` to the nearest zero of ``p'``; the critical points attaining it are
called essential.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegreeTooLow, NotAZero, RootOutsideDisk
from .polycore import CLUSTER_TOL, Polynomial, RootList, derivative, evaluate, roots

ZERO_TOL = 1e-8
ESSENTIAL_TOL = 1e-9
HULL_TOL = 1e-9
DISK_TOL = 1e-9


def pair(z: complex) -> list:
    return [z.real, z.imag]


def _key(z):
    return (z.real, z.imag)


def check_zero(p: Polynomial, w0: complex, tol: float = ZERO_TOL) -> None:
    """Raise :class:`NotAZero` unless ``|p(w0)| <= tol * (1 + coef scale)``."""
    val = abs(evaluate(p, w0))
    if not val <= tol * (1 + p.coef_scale):
        raise NotAZero(f"|p({w0})| = {val:.3e} exceeds zero tolerance")


def critical_points(p: Polynomial) -> RootList:
    if p.degree < 2:
        raise DegreeTooLow("critical points need degree >= 2")
    return roots(derivative(p))


@dataclass(frozen=True)
class CriticalRadiusReport:
    w0: complex
    rho: float
    essential: tuple
    all_critical: RootList

    def to_dict(self) -> dict:
        return {
            "w0": pair(self.w0),
            "rho": self.rho,
            "essential": [pair(z) for z in self.essential],
            "critical": [pair(z) for z in self.all_critical],
        }


def critical_distance(w0: complex, crit) -> float:
    return min(abs(z - w0) for z in crit)


def critical_radius(p: Polynomial, w0: complex, *, zero_tol: float = ZERO_TOL) -> CriticalRadiusReport:
    w0 = complex(w0)
    if p.degree < 2:
        raise DegreeTooLow("critical radius needs degree >= 2")
    check_zero(p, w0, zero_tol)
    crit = critical_points(p)
    rho = critical_distance(w0, crit)
    band = ESSENTIAL_TOL * (1 + rho)
    essential = []
    for z in sorted((z for z in crit if abs(z - w0) - rho <= band), key=_key):
        if all(abs(z - e) >= CLUSTER_TOL for e in essential):
            essential.append(z)
    return CriticalRadiusReport(w0, rho, tuple(essential), crit)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list:
    """Andrew's monotone chain; CCW vertices without collinear points."""
    pts = sorted(set((z.real, z.imag) for z in map(complex, points)))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for pt in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    for pt in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], pt) <= 0:
            upper.pop()
        upper.append(pt)
    return lower[:-1] + upper[:-1]


def _segment_distance(pt, a, b):
    ax, ay = b[0] - a[0], b[1] - a[1]
    L2 = ax * ax + ay * ay
    s = 0.0 if L2 == 0 else max(0.0, min(1.0, ((pt[0] - a[0]) * ax + (pt[1] - a[1]) * ay) / L2))
    return math.hypot(pt[0] - a[0] - s * ax, pt[1] - a[1] - s * ay)


def hull_signed_distance(hull, z: complex) -> float:
    """Positive outside the hull, negative inside (max outward edge distance)."""
    pt = (z.real, z.imag)
    if len(hull) == 1:
        return math.hypot(pt[0] - hull[0][0], pt[1] - hull[0][1])
    if len(hull) == 2:
        return _segment_distance(pt, hull[0], hull[1])
    worst = -math.inf
    for i, a in enumerate(hull):
        b = hull[(i + 1) % len(hull)]
        edge = math.hypot(b[0] - a[0], b[1] - a[1])
        worst = max(worst, -_cross(a, b, pt) / edge)
    return worst


@dataclass(frozen=True)
class GaussLucasResult:
    passes: bool
    max_signed_distance: float
    worst_point: complex

    def __bool__(self):
        return self.passes


def gauss_lucas_check(p: Polynomial, tol: float = HULL_TOL) -> GaussLucasResult:
    """Check that every critical point lies in the convex hull of the zeros."""
    zs = roots(p).roots
    hull = convex_hull(zs)
    band = tol * (1 + max(abs(z) for z in zs))
    dists = [(hull_signed_distance(hull, z), z) for z in critical_points(p)]
    worst, at = max(dists, key=lambda t: t[0])
    return GaussLucasResult(worst <= band, worst, at)


@dataclass(frozen=True)
class SendovReport:
    per_zero: tuple  # (zero, nearest critical point, distance)
    max_distance: float
    passes: bool

    def to_dict(self) -> dict:
        return {
            "per_zero": [
                {"zero": pair(z), "nearest": pair(c), "distance": d} for z, c, d in self.per_zero
            ],
            "max_distance": self.max_distance,
            "passes": self.passes,
        }


def check_unit_disk(zs, tol: float = DISK_TOL) -> None:
    for z in zs:
        if abs(z) > 1 + tol:
            raise RootOutsideDisk(f"root {z} lies outside the closed unit disk")


def sendov_check(p: Polynomial, assume_unit_disk: bool = True, tol: float = DISK_TOL) -> SendovReport:
    """Distance from every zero to its nearest critical point."""
    zs = roots(p).roots
    if assume_unit_disk:
        check_unit_disk(zs, tol)
    crit = critical_points(p).roots
    rows = []
    for z in zs:
        c = min(crit, key=lambda w: abs(w - z))
        rows.append((z, c, abs(c - z)))
    worst = max(r[2] for r in rows)
    return SendovReport(tuple(rows), worst, worst <= 1 + tol)


@dataclass(frozen=True)
class GRRReport:
    """Location of critical points relative to the disk ``|2z - 1| <= 1``.

    ``witnesses`` holds ``(critical point, |2z - 1|)`` for every critical point
    in the closed disk.
    """

    has_closed_disk_zero: bool
    has_open_disk_zero: bool
    all_on_circle: bool
    witnesses: tuple

    @property
    def consistent(self) -> bool:
        return self.has_closed_disk_zero and (self.has_open_disk_zero or self.all_on_circle)

    def to_dict(self) -> dict:
        return {
            "has_closed_disk_zero": self.has_closed_disk_zero,
            "has_open_disk_zero": self.has_open_disk_zero,
            "all_on_circle": self.all_on_circle,
            "witnesses": [{"zeta": pair(z), "abs_2z_minus_1": d} for z, d in self.witnesses],
        }


def grr_disk_check(p: Polynomial, tol: float = DISK_TOL) -> GRRReport:
    """Requires ``p(1) = 0``; classify critical points against ``|2z-1| <= 1``."""
    if p.degree < 2:
        raise DegreeTooLow("need degree >= 2")
    check_zero(p, 1.0)
    dist = [(z, abs(2 * z - 1)) for z in critical_points(p)]
    closed = tuple((z, d) for z, d in dist if d <= 1 + tol)
    return GRRReport(
        has_closed_disk_zero=bool(closed),
        has_open_disk_zero=any(d < 1 - tol for _, d in dist),
        all_on_circle=all(abs(d - 1) <= tol for _, d in dist),
        witnesses=closed,
    )
