"""Quantitative experiments around moving one zero of a polynomial.

Fix the zeros ``z_2 .. z_n`` of ``p``, collect them in ``q``, and move the
remaining zero ``z_1`` to ``u``. For a critical point ``zeta`` of ``p``
continued to ``zeta(u)`` the distance ratio

    f = (zeta(u) - u) / (zeta - z_1) = (q'/q)(zeta) * (q/q')(zeta(u))

is available in closed form and as the exponential of the path integral of
``zeta'(v) / (zeta(v) - v) + (q'/q)(zeta(v))``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .critgeo import critical_points, critical_radius, critical_distance, pair
from .errors import PreconditionError, QuadratureNotConverged, SingularEvaluation, DegenerateConfiguration
from .polycore import (
    Polynomial,
    derivative,
    evaluate_with_derivatives,
    from_roots,
    is_simple,
    multiply,
    roots,
)
from .surface import track_ray
from .tracker import DEFAULT_CONFIG, Path, TrackerConfig, newton_correct, track, track_all

SINGULAR_FLOOR = 1e-14
QUAD_TOL = 1e-8
_GL_X, _GL_W = np.polynomial.legendre.leggauss(5)


# --------------------------------------------------------------- the ratio f


def f_closed(q: Polynomial, zeta_start: complex, zeta_end: complex) -> complex:
    """``(q'/q)(zeta_start) * (q/q')(zeta_end)``."""
    floor = SINGULAR_FLOOR * (1 + q.coef_scale)
    v0, d0, _ = evaluate_with_derivatives(q, complex(zeta_start))
    v1, d1, _ = evaluate_with_derivatives(q, complex(zeta_end))
    if abs(v0) <= floor:
        raise SingularEvaluation(f"q vanishes at the start point {zeta_start}")
    if abs(d1) <= floor:
        raise SingularEvaluation(f"q' vanishes at the end point {zeta_end}")
    return (d0 / v0) * (v1 / d1)


def _hermite(t0, t1, z0, z1, dz0, dz1, t):
    h = t1 - t0
    s = (t - t0) / h
    s2, s3 = s * s, s * s * s
    return ((2 * s3 - 3 * s2 + 1) * z0 + (s3 - 2 * s2 + s) * h * dz0
            + (-2 * s3 + 3 * s2) * z1 + (s3 - s2) * h * dz1)


def log_f_integral(q: Polynomial, path: Path, zeta_start: complex,
                   config: TrackerConfig = DEFAULT_CONFIG, *, trajectory=None,
                   tol: float = QUAD_TOL, max_level: int = 6) -> complex:
    """Continuous logarithm of ``f`` by Gauss-Legendre quadrature along the trajectory.

    Every tracker step is split into ``2**level`` panels with 5 nodes each;
    node values of ``zeta`` come from Hermite interpolation re-corrected by
    Newton. Levels increase until the total changes by less than ``tol``
    and every panel increment stays below pi/2 in modulus.
    """
    tr = trajectory if trajectory is not None else track(q, path, zeta_start, config)
    if path.length == 0:
        return 0j
    t = tr.t
    Z = tr.zeta
    _, d1, d2 = evaluate_with_derivatives(q, Z)
    dZ = d1 / (2 * d1 + (Z - tr.u) * d2) * path.velocity(t)
    t0, t1 = t[:-1], t[1:]
    prev = None
    for level in range(max_level + 1):
        m = 2**level
        j = np.arange(m)
        a = t0[:, None] + (t1 - t0)[:, None] * j[None, :] / m
        half = ((t1 - t0) / (2 * m))[:, None, None]
        nodes = a[:, :, None] + half * (_GL_X[None, None, :] + 1)
        guess = _hermite(t0[:, None, None], t1[:, None, None], Z[:-1, None, None], Z[1:, None, None],
                         dZ[:-1, None, None], dZ[1:, None, None], nodes)
        v = path.point(nodes.ravel()).reshape(nodes.shape)
        zeta, _, ok = newton_correct(q, guess.ravel(), v.ravel(), config)
        if not np.all(ok):
            raise QuadratureNotConverged("Newton failed at a quadrature node")
        zeta = zeta.reshape(nodes.shape)
        qv, q1, q2 = evaluate_with_derivatives(q, zeta)
        zprime = q1 / (2 * q1 + (zeta - v) * q2)
        integrand = (zprime / (zeta - v) + q1 / qv) * path.velocity(nodes.ravel()).reshape(nodes.shape)
        panels = (integrand * _GL_W[None, None, :]).sum(axis=2) * half[:, :, 0]
        if not np.all(np.isfinite(panels)):
            raise QuadratureNotConverged("integrand is singular on the path")
        total = complex(panels.sum())
        if prev is not None and abs(total - prev) < tol and np.max(np.abs(panels)) < math.pi / 2:
            return total
        prev = total
    raise QuadratureNotConverged(f"log f did not settle to {tol} after {max_level} refinements")


def f_integral(q: Polynomial, path: Path, zeta_start: complex,
               config: TrackerConfig = DEFAULT_CONFIG, **kw) -> complex:
    """``exp`` of :func:`log_f_integral`; 1 on a constant path."""
    return cmath.exp(log_f_integral(q, path, zeta_start, config, **kw))


# ----------------------------------------------------------- identity check


def split_zero(p: Polynomial, z1_index: int):
    """Zeros of ``p`` sorted by (re, im), the designated zero and ``q``."""
    zs = roots(p).roots
    if not 0 <= z1_index < len(zs):
        raise PreconditionError(f"z1_index {z1_index} out of range for degree {p.degree}")
    z1 = zs[z1_index]
    others = zs[:z1_index] + zs[z1_index + 1:]
    return zs, z1, from_roots(others)


def _require_simple(p: Polynomial):
    ok = is_simple(p)
    if not ok:
        raise DegenerateConfiguration(f"p has clustered {ok.kind}: {ok.witness}")


@dataclass(frozen=True)
class IdentityCheckReport:
    """Both evaluations of ``f`` at the path end and the distance-identity residual.

    ``qf_residual`` is ``| |zeta(u) - u| - |zeta - z1| |f_closed| |``
    divided by ``1 + |zeta(u) - u|``.
    """

    z1: complex
    zeta_start: complex
    u_end: complex
    zeta_end: complex
    f_closed: complex
    f_integral: complex
    abs_discrepancy: float
    qf_residual: float

    def to_dict(self) -> dict:
        return {
            "z1": pair(self.z1),
            "zeta_start": pair(self.zeta_start),
            "u_end": pair(self.u_end),
            "zeta_end": pair(self.zeta_end),
            "f_closed": pair(self.f_closed),
            "f_integral": pair(self.f_integral),
            "abs_discrepancy": self.abs_discrepancy,
            "qf_residual": self.qf_residual,
        }


def verify_identity(p: Polynomial, z1_index: int, zeta_index: int, path: Path,
                    config: TrackerConfig = DEFAULT_CONFIG) -> IdentityCheckReport:
    """Continue critical point ``zeta_index`` of ``p`` while zero ``z1_index`` follows ``path``.

    Zeros and critical points are indexed in (re, im) order.
    """
    _require_simple(p)
    _, z1, q = split_zero(p, z1_index)
    if abs(path.start - z1) > 1e-8 * (1 + abs(z1)):
        raise PreconditionError(f"path starts at {path.start}, not at the zero {z1}")
    crit = critical_points(p).roots
    if not 0 <= zeta_index < len(crit):
        raise PreconditionError(f"zeta_index {zeta_index} out of range")
    zeta = crit[zeta_index]
    tr = track(q, path, zeta, config)
    u = path.end
    ze = tr.end_zeta
    fc = f_closed(q, zeta, ze)
    fi = f_integral(q, path, zeta, config, trajectory=tr)
    lhs = abs(ze - u)
    rhs = abs(zeta - path.start) * abs(fc)
    return IdentityCheckReport(
        z1=z1,
        zeta_start=zeta,
        u_end=u,
        zeta_end=ze,
        f_closed=fc,
        f_integral=fi,
        abs_discrepancy=abs(abs(fi) - abs(fc)) / abs(fc),
        qf_residual=abs(lhs - rhs) / (1 + lhs),
    )


# ------------------------------------------------------------------ blow-up


@dataclass(frozen=True)
class BlowupRow:
    r: float
    u: complex
    abs_f: tuple
    min_abs_f: float


@dataclass(frozen=True)
class BlowupScan:
    rows: tuple
    crossing_r: float | None

    def to_dict(self) -> dict:
        return {
            "rows": [{"r": row.r, "u": pair(row.u), "abs_f": list(row.abs_f), "min_abs_f": row.min_abs_f}
                     for row in self.rows],
            "crossing_r": self.crossing_r,
        }


def blowup_scan(p: Polynomial, z1_index: int, w0: complex, r_list,
                config: TrackerConfig = DEFAULT_CONFIG) -> BlowupScan:
    """|f| on every sheet as the moved zero travels to ``r * w0``.

    The critical points of ``p`` are continued along the segment ``z1 -> w0``
    and then outward along the ray through ``w0``; rows follow ``r_list``.
    """
    w0 = complex(w0)
    if abs(abs(w0) - 1) > 1e-12:
        raise PreconditionError("w0 must lie on the unit circle")
    r_list = [float(r) for r in r_list]
    if any(r < 1 for r in r_list) or any(b <= a for a, b in zip(r_list, r_list[1:])):
        raise PreconditionError("r_list must be strictly increasing and >= 1")
    _require_simple(p)
    _, z1, q = split_zero(p, z1_index)
    crit = list(critical_points(p).roots)
    zs = crit
    if z1 != w0:
        zs = [tr.end_zeta for tr in track_all(q, Path.line(z1, w0), config, starts=crit, check_simple=False)]
    u = w0
    rows = []
    crossing = None
    for r in r_list:
        target = r * w0
        if target != u:
            zs = track_ray(q, zs, u, target, config)
            u = target
        vals = tuple(abs(f_closed(q, c, z)) for c, z in zip(crit, zs))
        rows.append(BlowupRow(r, u, vals, min(vals)))
        if crossing is None and min(vals) > 1:
            crossing = r
    return BlowupScan(tuple(rows), crossing)


def geometric_r_list(a: float, b: float, steps: int) -> list:
    """``steps`` values from ``a`` to ``b`` in geometric progression."""
    if steps < 1 or a <= 0 or b < a:
        raise PreconditionError("need 0 < a <= b and steps >= 1")
    if steps == 1:
        return [float(a)]
    return [float(x) for x in np.geomspace(a, b, steps)]


# -------------------------------------------------------- boundary compare


@dataclass(frozen=True)
class BoundaryComparison:
    rho_interior: float
    rho_boundary: float

    def to_dict(self) -> dict:
        return {"rho_interior": self.rho_interior, "rho_boundary": self.rho_boundary}


def boundary_comparison(p: Polynomial, z1_index: int, w0: complex) -> BoundaryComparison:
    """Critical radius at ``z1`` versus after moving ``z1`` to ``w0`` on the circle."""
    _, z1, q = split_zero(p, z1_index)
    if not abs(z1) < 1:
        raise PreconditionError("the designated zero must lie in the open unit disk")
    _require_simple(p)
    w0 = complex(w0)
    moved = multiply(from_roots([w0]), q)
    return BoundaryComparison(critical_radius(p, z1).rho, critical_radius(moved, w0).rho)


def boundary_survey(n: int, count: int, seed: int = 0) -> dict:
    """Compare radii on random members of the class; ``w0`` has a random angle."""
    rng = np.random.default_rng(seed)
    polys = random_pn_sample(n, count, seed)
    pairs = []
    for p in polys:
        w0 = cmath.exp(2j * math.pi * rng.random())
        pairs.append(boundary_comparison(p, 0, w0))
    return {
        "count": len(pairs),
        "boundary_ge_interior": sum(c.rho_boundary >= c.rho_interior for c in pairs),
        "pairs": [c.to_dict() for c in pairs],
    }


# ----------------------------------------------------------- random sampling


def _disk_points(rng, n):
    return np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def sample_with_stats(n: int, count: int, seed: int = 0, tol: float = 1e-7):
    """Like :func:`random_pn_sample` but also returns the number of draws."""
    rng = np.random.default_rng(seed)
    out = []
    draws = 0
    while len(out) < count:
        draws += 1
        p = from_roots(_disk_points(rng, n))
        if is_simple(p, tol):
            out.append(p)
    return out, draws


def random_pn_sample(n: int, count: int, seed: int = 0, tol: float = 1e-7) -> list:
    """Monic degree-``n`` polynomials with zeros uniform on the closed unit disk."""
    return sample_with_stats(n, count, seed, tol)[0]


# ------------------------------------------------------------ maximal search


@dataclass(frozen=True)
class MaximalSearchResult:
    best_roots: tuple
    best_rho: float
    iterations: int
    trace: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "best_roots": [pair(z) for z in self.best_roots],
            "best_rho": self.best_rho,
            "iterations": self.iterations,
            "trace": [[i, r] for i, r in self.trace],
        }


def rho_of_roots(zs, init=None):
    """Critical radius of ``prod (z - zs[k])`` at ``zs[0]`` and its critical points."""
    crit = roots(derivative(from_roots(zs)), init=init).roots
    return critical_distance(complex(zs[0]), crit), crit


def _project(x):
    r = np.abs(x)
    return np.where(r > 1, x / np.where(r > 1, r, 1), x)


def polynomial_from_critical(z1: complex, crit) -> Polynomial:
    """The polynomial with ``p(z1) = 0`` and ``p' = n * prod (z - crit[k])``."""
    d = from_roots(crit).coeffs
    n = len(d)
    c = [0j] + [n * a / (k + 1) for k, a in enumerate(d)]
    c[0] = -sum(a * z1 ** k for k, a in enumerate(c))
    return Polynomial(tuple(c))


def _roots_from_critical(z1, crit, warm=None):
    """Zeros of :func:`polynomial_from_critical`, ``z1`` first and the rest matched to ``warm``."""
    n = len(crit) + 1
    init = None if warm is None else list(warm[1:]) + [z1]
    rs = np.array(roots(polynomial_from_critical(z1, crit), init=init).roots)
    rs = np.delete(rs, np.argmin(np.abs(rs - z1)))
    if warm is not None:
        order, free = [], list(range(n - 1))
        for ref in warm[1:]:
            j = min(free, key=lambda j: abs(rs[j] - ref))
            free.remove(j)
            order.append(j)
        rs = rs[order]
    return np.concatenate([[z1], rs])


def _to_real(z1, crit):
    v = np.concatenate([[z1], crit])
    return np.concatenate([v.real, v.imag])


class _Counter:
    def __init__(self):
        self.evals = 0

    def rho(self, x, warm_crit=None):
        self.evals += 1
        try:
            return rho_of_roots(x, warm_crit)
        except ArithmeticError:
            return -math.inf, None

    def rho_from_real(self, v, warm):
        """Objective on critical-point coordinates: rebuild zeros, project, re-measure."""
        self.evals += 1
        n = len(v) // 2
        z = v[:n] + 1j * v[n:]
        try:
            x = _project(_roots_from_critical(z[0], z[1:], warm))
            rho, crit = rho_of_roots(x, list(z[1:]))
        except ArithmeticError:
            return -math.inf, None, None
        return rho, x, crit


def _cma_restart(counter, rng, n, stop, sigma0=0.3):
    """One (1+1)-CMA-ES run in critical-point coordinates from a random start."""
    dim = 2 * n
    damp = 1 + dim / 2
    p_target, c_p, c_c, c_cov, p_thresh = 2 / 11, 1 / 12, 2 / (dim + 2), 2 / (dim * dim + 6), 0.44
    x = _project(_disk_points(rng, n))
    fx, crit = counter.rho(x)
    if crit is None:
        return fx, x, crit
    v = _to_real(x[0], np.asarray(crit))
    sigma, A, p_succ, pc = sigma0, np.eye(dim), p_target, np.zeros(dim)
    while counter.evals < stop and sigma > 1e-12:
        Az = A @ rng.standard_normal(dim)
        fy, y, cy = counter.rho_from_real(v + sigma * Az, x)
        ok = fy >= fx
        p_succ = (1 - c_p) * p_succ + c_p * ok
        sigma *= math.exp((p_succ - p_target) / (damp * (1 - p_target)))
        if not ok:
            continue
        x, fx, crit = y, fy, cy
        v = _to_real(x[0], np.asarray(crit))
        if p_succ < p_thresh:
            pc = (1 - c_c) * pc + math.sqrt(c_c * (2 - c_c)) * Az
            alpha = 1 - c_cov
        else:
            pc = (1 - c_c) * pc
            alpha = 1 - c_cov + c_cov * c_c * (2 - c_c)
        w = np.linalg.solve(A, pc)
        nw = w @ w
        if nw > 0:
            A = math.sqrt(alpha) * A + math.sqrt(alpha) / nw * (math.sqrt(1 + c_cov / alpha * nw) - 1) * np.outer(pc, w)
    return fx, x, crit


def _constrained_polish(counter, x, crit, max_evals):
    """Maximise t subject to |crit_k - z1|^2 >= t and all zeros in the disk.

    The variables are the critical points and ``z1``; near an optimum the
    zeros depend smoothly on them, so a gradient-based constrained solver
    converges where mutation-based search stalls on the min() kinks.
    """
    n = len(x)
    ref = {"x": np.asarray(x)}

    def unpack(v):
        z = v[:n] + 1j * v[n:2 * n]
        return z[0], z[1:], v[-1]

    def constraints(v):
        counter.evals += 1
        z1, c, t = unpack(v)
        try:
            zs = _roots_from_critical(z1, c, ref["x"])
        except ArithmeticError:
            zs = ref["x"] * 2
        return np.concatenate([np.abs(c - z1) ** 2 - t, [1 - abs(z1) ** 2], 1 - np.abs(zs[1:]) ** 2])

    r0 = critical_distance(complex(x[0]), crit)
    v0 = np.concatenate([_to_real(x[0], np.asarray(crit)), [r0 * r0]])
    grad = np.zeros(2 * n + 1)
    grad[-1] = -1.0
    iters = max(1, max_evals // (2 * n + 4))
    res = optimize.minimize(lambda v: -v[-1], v0, jac=lambda v: grad, method="SLSQP",
                            constraints=[{"type": "ineq", "fun": constraints}],
                            options={"maxiter": iters, "ftol": 1e-15})
    z1, c, _ = unpack(res.x)
    try:
        y = _project(_roots_from_critical(z1, c, ref["x"]))
    except ArithmeticError:
        return -math.inf, x
    return counter.rho(y)[0], y


def maximize_rho(n: int, seed: int = 0, budget: int = 100_000, polish_count: int = 3) -> MaximalSearchResult:
    """Search the closed unit disk for zeros maximising the critical radius at the first.

    Most of the budget goes to restarted (1+1)-CMA-ES runs that mutate the
    first zero and the critical points, rebuild the remaining zeros from them
    and project any zero outside the disk radially onto the circle. The last
    tenth polishes the best restart results with a constrained local solve in
    the same coordinates.
    """
    if not 2 <= n <= 12:
        raise PreconditionError("n must lie in 2..12")
    rng = np.random.default_rng(seed)
    counter = _Counter()
    trace = []
    best, fbest = None, -math.inf
    finals = []
    es_budget = max(budget - budget // 10, 1)

    def offer(x, fx):
        nonlocal best, fbest
        if fx > fbest:
            best, fbest = np.array(x), fx
            trace.append((counter.evals, float(fx)))

    while counter.evals < es_budget:
        fx, x, crit = _cma_restart(counter, rng, n, es_budget)
        offer(x, fx)
        if crit is not None:
            finals.append((fx, len(finals), x, crit))
    finals.sort(key=lambda r: (-r[0], r[1]))
    for fx, _, x, crit in finals[:polish_count]:
        left = budget - counter.evals
        if left <= 0:
            break
        fy, y = _constrained_polish(counter, x, crit, left // max(1, polish_count))
        offer(y, fy)
    best_roots = tuple(complex(z) for z in best)
    rho = critical_radius(from_roots(best_roots), best_roots[0]).rho
    return MaximalSearchResult(best_roots, rho, counter.evals, tuple(trace))
