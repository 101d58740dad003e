"""Continuation of critical points of ``Q(z, u) = (z - u) q(z)`` along paths.

A branch ``zeta(u)`` solves ``Q'(zeta, u) = q(zeta) + (zeta - u) q'(zeta) = 0``.
Implicit differentiation gives the Davidenko equation

    zeta'(u) = q'(zeta) / Q''(zeta, u),   Q'' = 2 q'(z) + (z - u) q''(z),

which is integrated in the path parameter by an explicit predictor and
corrected by Newton's method on ``z -> Q'(z, u)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    BranchPointSingularity,
    DegenerateConfiguration,
    DegreeTooLow,
    NonConvergence,
    PathNearBranchPoint,
    SheetCollision,
    StartNotCritical,
)
from .polycore import (
    CLUSTER_TOL,
    Polynomial,
    derivative,
    evaluate_with_derivatives,
    from_roots,
    is_simple,
    multiply,
    roots,
)

_EPS = np.finfo(float).eps


# --------------------------------------------------------------------- paths


@dataclass(frozen=True)
class Line:
    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))

    @property
    def length(self) -> float:
        return abs(self.b - self.a)

    @property
    def start(self) -> complex:
        return self.a

    @property
    def end(self) -> complex:
        return self.b

    def point(self, s):
        return self.a + (self.b - self.a) * s

    def velocity(self, s):
        return (self.b - self.a) + 0 * s


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    angle_start: float
    angle_end: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise ValueError("arc radius must be positive")

    @property
    def length(self) -> float:
        return self.radius * abs(self.angle_end - self.angle_start)

    @property
    def start(self) -> complex:
        return self.point(0.0)

    @property
    def end(self) -> complex:
        return self.point(1.0)

    def point(self, s):
        th = self.angle_start + (self.angle_end - self.angle_start) * s
        return self.center + self.radius * np.exp(1j * th)

    def velocity(self, s):
        dth = self.angle_end - self.angle_start
        th = self.angle_start + dth * s
        return 1j * dth * self.radius * np.exp(1j * th)


class Path:
    """Piecewise curve in the u-plane, parametrised by ``t`` in [0, 1].

    ``t`` is proportional to arc length. A path made of a single
    zero-length line is a constant path.
    """

    def __init__(self, segments):
        segments = tuple(segments)
        if not segments:
            raise ValueError("path needs at least one segment")
        for s0, s1 in zip(segments, segments[1:]):
            if abs(s0.end - s1.start) > 1e-12 * (1 + abs(s0.end)):
                raise ValueError(f"segments not contiguous: {s0.end} != {s1.start}")
        self.segments = segments
        self._live = [s for s in segments if s.length > 0]
        self.length = float(sum(s.length for s in self._live))
        if self._live:
            cum = np.cumsum([0.0] + [s.length for s in self._live])
            self._breaks = cum / cum[-1]
            self._breaks[-1] = 1.0

    @classmethod
    def constant(cls, u0) -> "Path":
        return cls([Line(u0, u0)])

    @classmethod
    def line(cls, a, b) -> "Path":
        return cls([Line(a, b)])

    @classmethod
    def polyline(cls, points) -> "Path":
        pts = [complex(p) for p in points]
        return cls([Line(a, b) for a, b in zip(pts, pts[1:])])

    @property
    def start(self) -> complex:
        return complex(self.segments[0].start)

    @property
    def end(self) -> complex:
        return complex(self.segments[-1].end)

    def is_closed(self, tol: float = 1e-12) -> bool:
        return abs(self.end - self.start) <= tol * (1 + abs(self.start))

    def __add__(self, other: "Path") -> "Path":
        return Path(self.segments + other.segments)

    def _locate(self, t):
        t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        idx = np.clip(np.searchsorted(self._breaks, t, side="right") - 1, 0, len(self._live) - 1)
        lo = self._breaks[idx]
        width = self._breaks[idx + 1] - lo
        return idx, (t - lo) / width, width

    def point(self, t):
        """u(t); accepts scalars or arrays."""
        if not self._live:
            return self.start + 0 * np.asarray(t, dtype=float) if np.ndim(t) else self.start
        idx, s, _ = self._locate(t)
        out = np.empty(idx.shape, dtype=complex)
        for k, seg in enumerate(self._live):
            m = idx == k
            if np.any(m):
                out[m] = seg.point(s[m])
        return complex(out) if out.ndim == 0 else out

    def velocity(self, t):
        """du/dt."""
        if not self._live:
            return 0j if not np.ndim(t) else np.zeros(np.shape(t), dtype=complex)
        idx, s, width = self._locate(t)
        out = np.empty(idx.shape, dtype=complex)
        for k, seg in enumerate(self._live):
            m = idx == k
            if np.any(m):
                out[m] = seg.velocity(s[m]) / width[m]
        return complex(out) if out.ndim == 0 else out

    def __repr__(self):
        return f"Path({list(self.segments)!r})"


# ------------------------------------------------------------ the equations


def q_prime_of_Q(q: Polynomial, z, u):
    """``Q'(z, u) = q(z) + (z - u) q'(z)``."""
    v, d1, _ = evaluate_with_derivatives(q, z)
    return v + (z - u) * d1


def q_second_of_Q(q: Polynomial, z, u):
    """``Q''(z, u) = 2 q'(z) + (z - u) q''(z)``."""
    _, d1, d2 = evaluate_with_derivatives(q, z)
    return 2 * d1 + (z - u) * d2


def Q_prime_polynomial(q: Polynomial, u: complex) -> Polynomial:
    """``d/dz [(z - u) q(z)]`` as a polynomial in ``z``."""
    return derivative(multiply(from_roots([u]), q))


def critical_points_of_Q(q: Polynomial, u: complex) -> tuple:
    return roots(Q_prime_polynomial(q, u)).roots


def davidenko_rhs(q: Polynomial, u: complex, zeta: complex, floor: float = 1e-10) -> complex:
    """``d zeta / d u`` on the branch through ``(u, zeta)``."""
    _, d1, d2 = evaluate_with_derivatives(q, zeta)
    Qpp = 2 * d1 + (zeta - u) * d2
    if abs(Qpp) <= floor * (1 + q.coef_scale):
        raise BranchPointSingularity(f"Q'' vanishes at zeta={zeta}, u={u}")
    return d1 / Qpp


def _residual_scale(q: Polynomial, z, u):
    """Magnitude of the terms of Q'(z, u); rounding error is relative to it."""
    az = np.abs(z)
    a = [abs(c) for c in q.coeffs]
    v = a[-1]
    d1 = 0.0
    for c in reversed(a[:-1]):
        d1 = d1 * az + v
        v = v * az + c
    return v + np.abs(z - u) * d1


def separation_lower_bound(q: Polynomial, zeta: complex, u: complex) -> float:
    """Lower bound on the distance from ``zeta`` to the other roots of Q'(., u).

    Expands Q' around ``zeta``, divides out the root at ``zeta`` and returns
    the Cauchy lower bound on the root moduli of the quotient.
    """
    cs = list(Q_prime_polynomial(q, u).coeffs)
    d = len(cs) - 1
    if d < 2:
        return math.inf
    # Taylor shift: coefficients of Q'(zeta + w) by repeated synthetic division
    taylor = []
    work = cs[:]
    for _ in range(d + 1):
        acc = work[-1]
        quot = [acc]
        for c in reversed(work[:-1]):
            acc = acc * zeta + c
            quot.append(acc)
        taylor.append(quot[-1])
        work = list(reversed(quot[:-1]))
    b = [abs(c) for c in taylor[1:]]
    if b[0] == 0:
        return 0.0
    higher = [(j, bj) for j, bj in enumerate(b) if j > 0 and bj > 0]
    if not higher:
        return math.inf
    r = min((b[0] / bj) ** (1.0 / j) for j, bj in higher)
    for _ in range(50):
        h = sum(bj * r**j for j, bj in higher) - b[0]
        dh = sum(j * bj * r ** (j - 1) for j, bj in higher)
        step = h / dh
        r -= step
        if abs(step) <= 1e-13 * r:
            break
    return max(r * (1 - 1e-9), 0.0)


# ---------------------------------------------------------------- tracking


def newton_correct(q: Polynomial, z, u, cfg: "TrackerConfig | None" = None):
    """Newton on ``z -> Q'(z, u)`` for an array of starts.

    Returns ``(z, |Q'(z, u)|, converged mask)``.
    """
    cfg = cfg or DEFAULT_CONFIG
    z = np.array(z, dtype=complex)
    dz = np.full(z.shape, np.inf, dtype=complex)
    for _ in range(cfg.max_newton):
        v, d1, d2 = evaluate_with_derivatives(q, z)
        Qp = v + (z - u) * d1
        Qpp = 2 * d1 + (z - u) * d2
        if np.any(Qpp == 0):
            break
        dz = Qp / Qpp
        z = z - dz
        if np.all(np.abs(dz) <= 4 * _EPS * (1 + np.abs(z))):
            break
    res = np.abs(q_prime_of_Q(q, z, u))
    tol = cfg.residual_tol * np.maximum(1 + q.coef_scale, _residual_scale(q, z, u))
    ok = np.isfinite(z) & (res <= tol) & (np.abs(dz) <= 1e-10 * (1 + np.abs(z)))
    return z, res, ok




@dataclass(frozen=True)
class TrackerConfig:
    """Step control and tolerances for continuation.

    ``residual_tol`` is relative to ``max(1 + coef scale of q, |terms of Q'|)``.
    ``jump_bound`` limits ``|zeta_{k+1} - zeta_k|`` per unit of arc length.
    """

    predictor: str = "rk4"
    initial_step: float = 1e-2
    max_step: float = 5e-2
    step_floor: float = 1e-8
    growth: float = 1.5
    max_newton: int = 8
    residual_tol: float = 1e-9
    start_tol: float = 1e-6
    singular_floor: float = 1e-10
    branch_flag: float = 1e-6
    sheet_guard: float = 0.5
    jump_bound: float = 1e3
    cluster_tol: float = CLUSTER_TOL

    def __post_init__(self):
        if self.predictor not in ("rk4", "euler"):
            raise ValueError("predictor must be 'rk4' or 'euler'")
        for name in ("initial_step", "max_step", "step_floor", "residual_tol", "start_tol",
                     "singular_floor", "branch_flag", "sheet_guard", "jump_bound", "cluster_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    def with_overrides(self, **kw) -> "TrackerConfig":
        return replace(self, **kw)


DEFAULT_CONFIG = TrackerConfig()


@dataclass(frozen=True)
class Trajectory:
    """Sampled continuation record; arrays share the index of the samples."""

    t: np.ndarray
    u: np.ndarray
    zeta: np.ndarray
    residual: np.ndarray
    step: np.ndarray
    events: tuple = field(default=())

    def __post_init__(self):
        for name in ("t", "u", "zeta", "residual", "step"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def start_zeta(self) -> complex:
        return complex(self.zeta[0])

    @property
    def end_zeta(self) -> complex:
        return complex(self.zeta[-1])

    @property
    def samples(self) -> list:
        return list(zip(self.t.tolist(), self.u.tolist(), self.zeta.tolist(),
                        self.residual.tolist(), self.step.tolist()))

    def __len__(self):
        return len(self.t)


class _Stepper:
    """Shared predictor-corrector machinery over an array of sheets."""

    def __init__(self, q: Polynomial, path: Path, cfg: TrackerConfig, exact_separation: bool):
        if q.degree < 1:
            raise DegreeTooLow("q must have degree >= 1")
        self.q = q
        self.path = path
        self.cfg = cfg
        self.cs = 1 + q.coef_scale
        self.exact = exact_separation

    def _rhs(self, t, z):
        u = self.path.point(t)
        _, d1, d2 = evaluate_with_derivatives(self.q, z)
        Qpp = 2 * d1 + (z - u) * d2
        if np.any(np.abs(Qpp) <= self.cfg.singular_floor * self.cs):
            raise BranchPointSingularity("Q'' vanished inside predictor")
        return d1 / Qpp * self.path.velocity(t)

    def predict(self, t, z, h):
        f = self._rhs
        if self.cfg.predictor == "euler":
            return z + h * f(t, z)
        k1 = f(t, z)
        k2 = f(t + h / 2, z + h / 2 * k1)
        k3 = f(t + h / 2, z + h / 2 * k2)
        k4 = f(t + h, z + h * k3)
        return z + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    def correct(self, z, u):
        return newton_correct(self.q, z, u, self.cfg)

    def separation(self, z, u):
        if self.exact:
            if len(z) < 2:
                return np.full(z.shape, np.inf)
            D = np.abs(z[:, None] - z[None, :])
            np.fill_diagonal(D, np.inf)
            return D.min(axis=1)
        return np.array([separation_lower_bound(self.q, complex(zz), u) for zz in z])

    def start(self, z0):
        u0 = self.path.start
        z0 = np.array(z0, dtype=complex)
        res0 = np.abs(q_prime_of_Q(self.q, z0, u0))
        bad = res0 > self.cfg.start_tol * np.maximum(self.cs, _residual_scale(self.q, z0, u0))
        if np.any(bad):
            raise StartNotCritical(f"start point(s) {z0[bad]} are not critical points of Q(., {u0})")
        z, res, ok = self.correct(z0, u0)
        if not np.all(ok):
            raise NonConvergence("Newton polish of the start point failed")
        return z, res

    def run(self, z0):
        cfg = self.cfg
        path = self.path
        z, res = self.start(z0)
        ts, us, zs, rs, hs = [0.0], [path.start], [z.copy()], [res], [0.0]
        events = []

        def record():
            Z = np.array(zs)
            R = np.array(rs)
            return [Trajectory(np.array(ts), np.array(us), Z[:, k], R[:, k], np.array(hs), tuple(events))
                    for k in range(Z.shape[1])]

        if path.length == 0:
            ts.append(1.0)
            us.append(path.start)
            zs.append(z.copy())
            rs.append(res)
            hs.append(1.0)
            return record()

        t = 0.0
        h = min(cfg.initial_step, cfg.max_step)
        L = path.length
        while t < 1.0:
            if t + h >= 1.0 - 1e-13:
                h = 1.0 - t
            t1 = 1.0 if h == 1.0 - t else t + h
            u1 = path.point(t1)
            accepted = False
            try:
                zp = self.predict(t, z, h)
                zc, rc, ok = self.correct(zp, u1)
                if np.all(ok):
                    sep = self.separation(zc, u1)
                    guard = np.all(np.abs(zc - zp) < cfg.sheet_guard * sep)
                    jump = np.all(np.abs(zc - z) <= cfg.jump_bound * h * L + 1e-12)
                    accepted = bool(guard and jump)
                    if accepted and self.exact and np.min(sep) < cfg.cluster_tol:
                        raise SheetCollision(f"two sheets met near u={u1} (t={t1})")
            except BranchPointSingularity:
                accepted = False
            if not accepted:
                events.append((t, "CorrectorRetry"))
                h /= 2
                if h < cfg.step_floor:
                    events.append((t, "StepFloor"))
                    raise PathNearBranchPoint(
                        f"step fell below {cfg.step_floor} at t={t}, u={path.point(t)}",
                        trajectory=record(),
                    )
                continue
            _, d1, d2 = evaluate_with_derivatives(self.q, zc)
            if np.any(np.abs(2 * d1 + (zc - u1) * d2) < cfg.branch_flag * self.cs):
                events.append((t1, "BranchProximity"))
            ts.append(t1)
            us.append(u1)
            zs.append(zc)
            rs.append(rc)
            hs.append(h)
            t, z = t1, zc
            h = min(h * cfg.growth, cfg.max_step)
        return record()


def _check_simple(q: Polynomial):
    if q.degree >= 1:
        ok = is_simple(q)
        if not ok:
            raise DegenerateConfiguration(f"q has clustered {ok.kind}: {ok.witness}")


def track(q: Polynomial, path: Path, zeta_start: complex, config: TrackerConfig = DEFAULT_CONFIG,
          *, check_simple: bool = True) -> Trajectory:
    """Continue the critical point ``zeta_start`` of Q(., path(0)) along ``path``.

    Raises :class:`PathNearBranchPoint` when the step size underflows,
    which happens when the path passes too close to a branch point.
    """
    if check_simple:
        _check_simple(q)
    return _Stepper(q, path, config, exact_separation=False).run([complex(zeta_start)])[0]


def track_all(q: Polynomial, path: Path, config: TrackerConfig = DEFAULT_CONFIG, *,
              starts=None, check_simple: bool = True) -> list:
    """Continue all ``n - 1`` critical points of Q(., path(0)) together.

    Trajectories share one parameter grid and are returned in the order of
    ``starts`` (default: critical points at ``path(0)`` sorted by (re, im)).
    """
    if check_simple:
        _check_simple(q)
    if starts is None:
        starts = critical_points_of_Q(q, path.start)
    starts = [complex(s) for s in starts]
    if len(starts) > 1:
        D = np.abs(np.subtract.outer(starts, starts))
        np.fill_diagonal(D, np.inf)
        if D.min() < config.cluster_tol:
            raise DegenerateConfiguration(f"critical points of Q(., {path.start}) are not simple")
    return _Stepper(q, path, config, exact_separation=True).run(starts)


def match_to_roots(points, targets, tol: float) -> list:
    """Index of the target within ``tol`` of each point; must be a bijection.

    Returns None when some point has no target within ``tol`` or two
    points share a target.
    """
    out = []
    for p in points:
        d = [abs(p - t) for t in targets]
        k = int(np.argmin(d))
        if d[k] > tol:
            return None
        out.append(k)
    if len(set(out)) != len(out):
        return None
    return out
