"""The Riemann surface of critical points of ``(z - u) q(z)``.

A surface point ``w`` solves ``q(w) + (w - u) q'(w) = 0`` and projects to

    u = phi(w) = w + q(w) / q'(w).

Branch points are the zeros of ``phi'``, i.e. of
``B(w) = 2 q'(w)**2 - q(w) q''(w)``, a polynomial of degree ``2n - 4`` when
``q`` has degree ``n - 1``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .critgeo import check_unit_disk, pair
from .errors import (
    DegenerateConfiguration,
    DegreeTooLow,
    LoopNotClosed,
    NonConvergence,
    PathNearBranchPoint,
    PreconditionError,
    ProjectionSingular,
)
from .polycore import (
    Polynomial,
    derivative,
    evaluate,
    evaluate_with_derivatives,
    evaluation_scale,
    is_simple,
    multiply,
    roots,
)
from .tracker import (
    DEFAULT_CONFIG,
    Arc,
    Line,
    Path,
    TrackerConfig,
    critical_points_of_Q,
    match_to_roots,
    track_all,
)

PHI_FLOOR = 1e-12
CLAIM_TOL = 1e-9


def _require_simple(q: Polynomial):
    if q.degree < 1:
        raise DegreeTooLow("q must have degree >= 1")
    ok = is_simple(q)
    if not ok:
        raise DegenerateConfiguration(f"q has clustered {ok.kind}: {ok.witness}")


def branch_polynomial(q: Polynomial) -> Polynomial:
    """``2 q'^2 - q q''`` by explicit coefficient arithmetic."""
    q1 = derivative(q)
    sq = multiply(q1, q1).coeffs
    out = [2 * c for c in sq]
    if q.degree >= 2:
        for k, c in enumerate(multiply(q, derivative(q1)).coeffs):
            out[k] -= c
    B = Polynomial.trimmed(out)
    m = q.degree
    if B.degree != 2 * m - 2:
        raise DegenerateConfiguration(f"branch polynomial has degree {B.degree}, expected {2 * m - 2}")
    return B


def phi(q: Polynomial, w: complex, floor: float = PHI_FLOOR) -> complex:
    """Projection ``w + q(w) / q'(w)`` of a surface point to the u-plane."""
    v, d1, _ = evaluate_with_derivatives(q, complex(w))
    if abs(d1) <= floor * (1 + q.coef_scale):
        raise ProjectionSingular(f"q'(w) vanishes at w={w}")
    return complex(w) + v / d1


@dataclass(frozen=True)
class BranchPoint:
    """``residual`` is ``|B(w)|`` relative to ``sum |b_k| |w|**k``."""

    w: complex
    u: complex
    residual: float


def branch_locus(q: Polynomial) -> list:
    _require_simple(q)
    B = branch_polynomial(q)
    if B.degree == 0:
        return []
    out = []
    for w in roots(B):
        s = evaluation_scale(B, w)
        out.append(BranchPoint(w, phi(q, w), abs(evaluate(B, w)) / s if s else 0.0))
    return out


def branch_projections(q: Polynomial) -> list:
    return [b.u for b in branch_locus(q)]


@dataclass(frozen=True)
class ClaimRow:
    w: complex
    u: complex
    abs_phi: float
    status: str  # "satisfied", "boundary" or "violation"

    @property
    def violation(self) -> bool:
        return self.status == "violation"

    def to_dict(self) -> dict:
        return {"w": pair(self.w), "u": pair(self.u), "abs_phi": self.abs_phi,
                "status": self.status, "violation": self.violation}


@dataclass(frozen=True)
class BranchDiskReport:
    """Measured ``|phi(w)|`` for every branch point against the unit circle."""

    rows: tuple

    def count(self, status: str) -> int:
        return sum(r.status == status for r in self.rows)

    @property
    def n_violations(self) -> int:
        return self.count("violation")

    @property
    def violating_conjugate_pairs(self) -> int:
        """Number of violating points ``w`` whose conjugate also violates (counted once)."""
        ws = [r.w for r in self.rows if r.violation]
        used = set()
        pairs = 0
        for i, w in enumerate(ws):
            if i in used or abs(w.imag) <= CLAIM_TOL * (1 + abs(w)):
                continue
            for j in range(i + 1, len(ws)):
                if j not in used and abs(ws[j] - w.conjugate()) <= 1e-9 * (1 + abs(w)):
                    used.update((i, j))
                    pairs += 1
                    break
        return pairs

    def to_dict(self) -> list:
        return [r.to_dict() for r in self.rows]


def branch_disk_report(q: Polynomial) -> BranchDiskReport:
    """Compare each branch projection with the open unit disk.

    A point counts as satisfied below ``1 - 1e-9``, as violation above
    ``1 + 1e-9`` and as boundary in between.
    """
    if q.degree >= 1:
        check_unit_disk(roots(q).roots)
    rows = []
    for b in branch_locus(q):
        a = abs(b.u)
        if a < 1 - CLAIM_TOL:
            status = "satisfied"
        elif a <= 1 + CLAIM_TOL:
            status = "boundary"
        else:
            status = "violation"
        rows.append(ClaimRow(b.w, b.u, a, status))
    return BranchDiskReport(tuple(rows))


# ------------------------------------------------------------------ infinity


def track_ray(q: Polynomial, starts, u_from: complex, u_to: complex,
              config: TrackerConfig = DEFAULT_CONFIG, ratio: float = 2.0):
    """Continue critical points from ``u_from`` to ``u_to`` along the ray through both.

    The ray is cut into geometrically growing pieces so that each tracked
    segment is short relative to ``|u|``. Returns the end points.
    """
    u_from, u_to = complex(u_from), complex(u_to)
    r0, r1 = abs(u_from), abs(u_to)
    direction = u_to / r1
    if r0 > 0 and abs(u_from / r0 - direction) > 1e-12:
        raise ValueError("u_from and u_to are not on a common ray")
    radii = [r0]
    while radii[-1] * ratio < r1:
        radii.append(max(radii[-1] * ratio, radii[-1] + 1.0))
    radii.append(r1)
    zs = [complex(s) for s in starts]
    first = True
    for a, b in zip(radii, radii[1:]):
        if b <= a:
            continue
        ua = u_from if first else a * direction
        trs = track_all(q, Path.line(ua, b * direction), config, starts=zs, check_simple=False)
        zs = [tr.end_zeta for tr in trs]
        first = False
    return zs


@dataclass(frozen=True)
class SheetRow:
    start: complex
    kind: str  # "Unbounded" or "ConvergesTo"
    value: complex  # zeta/u for the unbounded sheet, the end point otherwise
    target: complex  # (n-1)/n or the matched zero of q'
    error: float


@dataclass(frozen=True)
class SheetAtInfinityReport:
    u_start: complex
    u_end: complex
    per_sheet: tuple

    @property
    def n_unbounded(self) -> int:
        return sum(r.kind == "Unbounded" for r in self.per_sheet)

    @property
    def bounded_targets(self) -> list:
        return [r.target for r in self.per_sheet if r.kind == "ConvergesTo"]

    def to_dict(self) -> dict:
        return {
            "u_start": pair(self.u_start),
            "u_end": pair(self.u_end),
            "sheets": [
                {"start": pair(r.start), "kind": r.kind, "value": pair(r.value),
                 "target": pair(r.target), "error": r.error}
                for r in self.per_sheet
            ],
        }


def sheets_at_infinity(q: Polynomial, radius: float = 10.0, angle: float = 0.3217,
                       factor: float = 1e4, config: TrackerConfig = DEFAULT_CONFIG) -> SheetAtInfinityReport:
    """Follow every sheet outward along the ray of the given angle.

    On the unbounded sheet ``zeta(u) / u`` tends to ``(n - 1) / n``; the
    remaining sheets converge to the zeros of ``q'``.
    """
    if radius < 10:
        raise PreconditionError("radius must be at least 10")
    _require_simple(q)
    n = q.degree + 1
    u0 = radius * cmath.exp(1j * angle)
    u1 = u0 * factor
    starts = critical_points_of_Q(q, u0)
    ends = track_ray(q, starts, u0, u1, config)
    crit_q = roots(derivative(q)).roots if q.degree >= 2 else ()
    target_ratio = (n - 1) / n
    rows = []
    for s, e in zip(starts, ends):
        ratio = e / u1
        if abs(ratio) > 0.5 * target_ratio:
            rows.append(SheetRow(s, "Unbounded", ratio, target_ratio, abs(ratio - target_ratio)))
        else:
            xi = min(crit_q, key=lambda c: abs(c - e)) if crit_q else complex("nan")
            rows.append(SheetRow(s, "ConvergesTo", e, xi, abs(e - xi)))
    return SheetAtInfinityReport(u0, u1, tuple(rows))


# ----------------------------------------------------------------- monodromy


def _perm_compose(first, second):
    """Permutation of applying ``first`` then ``second``."""
    return [second[i] for i in first]


@dataclass(frozen=True)
class MonodromyReport:
    """Sheet permutations for closed loops based at ``basepoint``.

    ``permutations[k][i] = j`` means the sheet starting at ``sheet_labels[i]``
    ends at ``sheet_labels[j]`` after loop ``k``; indices are 0-based.
    ``product`` is the permutation of traversing all loops in order.
    """

    basepoint: complex
    sheet_labels: tuple
    loops: tuple
    permutations: tuple
    product: tuple

    def to_dict(self) -> dict:
        return {
            "basepoint": pair(self.basepoint),
            "labels": [pair(z) for z in self.sheet_labels],
            "loops": [{"perm": list(p)} for p in self.permutations],
            "product": list(self.product),
        }


def _segment_point_distance(a: complex, b: complex, p: complex) -> float:
    ab = b - a
    if ab == 0:
        return abs(p - a)
    s = max(0.0, min(1.0, ((p - a) * ab.conjugate()).real / abs(ab) ** 2))
    return abs(p - a - s * ab)


def path_clearance(path: Path, points, samples: int = 4001) -> float:
    """Smallest distance between the path and the given points (sampled)."""
    if not points:
        return math.inf
    us = np.atleast_1d(path.point(np.linspace(0, 1, samples)))
    pts = np.asarray(points, dtype=complex)
    return float(np.abs(us[:, None] - pts[None, :]).min())


def monodromy(q: Polynomial, basepoint: complex, loops, config: TrackerConfig = DEFAULT_CONFIG,
              clearance: float = 1e-6) -> MonodromyReport:
    _require_simple(q)
    basepoint = complex(basepoint)
    projections = branch_projections(q)
    for k, loop in enumerate(loops):
        if not loop.is_closed() or abs(loop.start - basepoint) > 1e-12 * (1 + abs(basepoint)):
            raise LoopNotClosed(f"loop {k} is not a closed loop at the basepoint")
        if path_clearance(loop, projections) < clearance:
            raise PathNearBranchPoint(f"loop {k} passes within {clearance} of a branch projection")
    labels = tuple(critical_points_of_Q(q, basepoint))
    scale = 1 + max(abs(z) for z in labels)
    perms = []
    for k, loop in enumerate(loops):
        trs = track_all(q, loop, config, starts=labels, check_simple=False)
        perm = match_to_roots([tr.end_zeta for tr in trs], labels, 1e-8 * scale)
        if perm is None:
            raise NonConvergence(f"loop {k} did not return to the sheet labels")
        perms.append(tuple(perm))
    product = list(range(len(labels)))
    for p in perms:
        product = _perm_compose(product, p)
    return MonodromyReport(basepoint, labels, tuple(loops), tuple(perms), tuple(product))


def circle_loop(basepoint: complex, center: complex = 0j) -> Path:
    """Counter-clockwise circle through ``basepoint`` as two arcs."""
    basepoint, center = complex(basepoint), complex(center)
    r = abs(basepoint - center)
    th = cmath.phase(basepoint - center)
    return Path([Arc(center, r, th, th + math.pi), Arc(center, r, th + math.pi, th + 2 * math.pi)])


def small_loop(basepoint: complex, center: complex, radius: float) -> Path:
    """Tether to a circle of ``radius`` around ``center``, once round, and back."""
    basepoint, center = complex(basepoint), complex(center)
    th = cmath.phase(basepoint - center)
    arcs = [Arc(center, radius, th, th + math.pi), Arc(center, radius, th + math.pi, th + 2 * math.pi)]
    return Path([Line(basepoint, arcs[0].start)] + arcs + [Line(arcs[1].end, basepoint)])


def loop_radii(projections) -> list:
    """0.4 times the distance to the nearest other branch projection."""
    out = []
    for i, b in enumerate(projections):
        d = min((abs(b - c) for j, c in enumerate(projections) if j != i), default=math.inf)
        out.append(0.4 * d if math.isfinite(d) else 0.4 * (1 + abs(b)))
    return out


def choose_basepoint(projections, n_candidates: int = 64) -> complex:
    """Point outside all projections whose straight tethers stay clear of the others.

    Candidates lie on the circle of radius ``1.5 max|u_b| + 1``; the one
    maximising the worst clearance ratio (distance / loop radius) wins.
    """
    R = 1.5 * max((abs(b) for b in projections), default=0.0) + 1.0
    radii = loop_radii(projections)
    best, best_score = None, -math.inf
    for k in range(n_candidates):
        c = R * cmath.exp(1j * (0.37 + 2 * math.pi * k / n_candidates))
        score = math.inf
        for i, b in enumerate(projections):
            for j, other in enumerate(projections):
                if j != i:
                    score = min(score, _segment_point_distance(c, b, other) / radii[j])
        if score > best_score:
            best, best_score = c, score
    return best


def default_loops(q: Polynomial):
    """Basepoint, one small loop per branch projection and the enclosing circle."""
    projections = branch_projections(q)
    base = choose_basepoint(projections)
    smalls = [small_loop(base, b, r) for b, r in zip(projections, loop_radii(projections))]
    return base, smalls, circle_loop(base)
