"""Complex polynomial arithmetic, evaluation and simultaneous root finding.

Coefficients are stored in ascending degree order, leading coefficient last.
All functions are pure; :class:`Polynomial` and :class:`RootList` are
immutable and safe to share between threads.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegreeTooLow, NonConvergence

MAX_ITER = 500
ROOT_TOL = 1e-13
CLUSTER_TOL = 1e-7
MAX_DEGREE = 64


@dataclass(frozen=True)
class Polynomial:
    """Complex polynomial ``sum(coeffs[k] * z**k)``."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(complex(c) for c in self.coeffs)
        if not cs:
            raise ValueError("polynomial needs at least one coefficient")
        if not all(cmath.isfinite(c) for c in cs):
            raise ValueError("coefficients must be finite")
        if cs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def trimmed(cls, coeffs) -> "Polynomial":
        """Build from coefficients, dropping exact zeros at the top."""
        cs = [complex(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        return cls(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    @property
    def coef_scale(self) -> float:
        """Largest coefficient modulus."""
        return max(abs(c) for c in self.coeffs)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


class RootList(NamedTuple):
    """Zeros of a polynomial, sorted by (real, imag).

    ``residual_bound`` is the largest backward error
    ``|p(z)| / sum(|c_k| |z|**k)`` over the roots; ``clusters`` lists index
    groups whose members lie closer than the cluster threshold.
    """

    roots: tuple
    residual_bound: float
    clusters: tuple

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i):
        return self.roots[i]

    @property
    def clustered(self) -> bool:
        return bool(self.clusters)

    def as_array(self) -> np.ndarray:
        return np.array(self.roots, dtype=complex)


class Simplicity(NamedTuple):
    simple: bool
    witness: tuple | None = None
    kind: str | None = None

    def __bool__(self):
        return self.simple


def _horner(cs, z):
    acc = cs[-1]
    for c in reversed(cs[:-1]):
        acc = acc * z + c
    return acc


def evaluate(p: Polynomial, z):
    """Value of ``p`` at ``z`` (scalar or numpy array) by Horner's scheme."""
    return _horner(p.coeffs, z)


def evaluate_with_derivatives(p: Polynomial, z):
    """Return ``(p(z), p'(z), p''(z))`` in one Horner sweep."""
    cs = p.coeffs
    v = cs[-1]
    d1 = 0j
    d2 = 0j
    for c in reversed(cs[:-1]):
        d2 = d2 * z + d1
        d1 = d1 * z + v
        v = v * z + c
    return v, d1, 2 * d2


def evaluation_scale(p: Polynomial, z):
    """``sum(|c_k| |z|**k)``, the magnitude against which ``p(z)`` rounds."""
    return _horner([abs(c) for c in p.coeffs], np.abs(z) if isinstance(z, np.ndarray) else abs(z))


def backward_error(p: Polynomial, z) -> float:
    s = evaluation_scale(p, z)
    if s == 0:
        return 0.0
    return abs(evaluate(p, z)) / s


def derivative(p: Polynomial) -> Polynomial:
    if p.degree < 1:
        raise DegreeTooLow("cannot differentiate a constant polynomial")
    return Polynomial(tuple(k * c for k, c in enumerate(p.coeffs) if k > 0))


def from_roots(rs: Sequence[complex]) -> Polynomial:
    """Monic polynomial with exactly the given roots (with multiplicity)."""
    rs = [complex(r) for r in rs]
    if not rs:
        raise ValueError("need at least one root")
    cs = [1 + 0j]
    for r in rs:
        nxt = [0j] * (len(cs) + 1)
        for k, c in enumerate(cs):
            nxt[k + 1] += c
            nxt[k] -= r * c
        cs = nxt
    return Polynomial(tuple(cs))


def multiply(a: Polynomial, b: Polynomial) -> Polynomial:
    out = [0j] * (a.degree + b.degree + 1)
    for i, x in enumerate(a.coeffs):
        for j, y in enumerate(b.coeffs):
            out[i + j] += x * y
    return Polynomial(tuple(out))


def scale(p: Polynomial, r: float) -> Polynomial:
    """``r**n * p(z / r)``; its roots are ``r`` times the roots of ``p``."""
    r = float(r)
    if not (math.isfinite(r) and r > 0):
        raise ValueError("scale factor must be finite and positive")
    n = p.degree
    return Polynomial(tuple(c * r ** (n - k) for k, c in enumerate(p.coeffs)))


def _aberth(a, max_iter, tol, offset, init):
    """Aberth-Ehrlich iteration on the monic coefficient list ``a``."""
    d = len(a) - 1
    absa = [abs(x) for x in a]
    if init is not None and len(init) == d and _min_gap(init) > 0:
        z = [complex(x) for x in init]
    else:
        radius = 1 + max(absa[:-1])
        z = [radius * cmath.exp(1j * (offset + 2 * math.pi * k / d)) for k in range(d)]
    done = [False] * d
    for _ in range(max_iter):
        active = False
        for i in range(d):
            if done[i]:
                continue
            zi = z[i]
            azi = abs(zi)
            pv = a[d]
            dv = 0j
            sv = absa[d]
            for k in range(d - 1, -1, -1):
                dv = dv * zi + pv
                pv = pv * zi + a[k]
                sv = sv * azi + absa[k]
            if abs(pv) <= tol * sv:
                done[i] = True
                continue
            active = True
            if dv == 0:
                z[i] = zi + 1e-8 * (1 + azi) * cmath.exp(1j * (i + 1))
                continue
            ratio = pv / dv
            acc = 0j
            for j in range(d):
                if j != i:
                    diff = zi - z[j]
                    if diff != 0:
                        acc += 1 / diff
            denom = 1 - ratio * acc
            z[i] = zi - (ratio / denom if denom != 0 else ratio)
        if not active:
            return z
    raise NonConvergence(f"Aberth iteration did not converge in {max_iter} iterations (degree {d})")


def _min_gap(zs) -> float:
    best = math.inf
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            best = min(best, abs(zs[i] - zs[j]))
    return best


def _polish(a, z):
    absa = [abs(x) for x in a]

    def be(x):
        ax = abs(x)
        pv = a[-1]
        sv = absa[-1]
        for k in range(len(a) - 2, -1, -1):
            pv = pv * x + a[k]
            sv = sv * ax + absa[k]
        return abs(pv) / sv if sv else 0.0

    out = list(z)
    for i, zi in enumerate(out):
        gap = min((abs(zi - out[j]) for j in range(len(out)) if j != i), default=math.inf)
        err = be(zi)
        for _ in range(3):
            if err == 0:
                break
            pv = a[-1]
            dv = 0j
            for k in range(len(a) - 2, -1, -1):
                dv = dv * zi + pv
                pv = pv * zi + a[k]
            if dv == 0:
                break
            step = pv / dv
            if abs(step) > 0.5 * gap:
                break
            cand = zi - step
            cerr = be(cand)
            if cerr > err:
                break
            zi, err = cand, cerr
        out[i] = zi
    return out


def _clusters(rs, tol):
    n = len(rs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(rs[i] - rs[j]) < tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(g) for g in sorted(groups.values()) if len(g) > 1)


def _sort_key(z):
    return (z.real, z.imag)


def roots(
    p: Polynomial,
    *,
    max_iter: int = MAX_ITER,
    tol: float = ROOT_TOL,
    seed: int = 0,
    init: Sequence[complex] | None = None,
) -> RootList:
    """All roots of ``p`` by Aberth-Ehrlich iteration plus Newton polish.

    Exact zero roots (vanishing low-order coefficients) are split off first.
    Initial guesses sit equispaced on the circle of radius
    ``1 + max|c_k / c_n|``, rotated by an offset derived from ``seed``;
    ``init`` overrides them (warm start) when it has the right length and
    distinct entries.
    """
    if p.degree < 1:
        raise DegreeTooLow("roots of a constant polynomial are undefined")
    cs = list(p.coeffs)
    nzero = 0
    while cs[0] == 0:
        cs.pop(0)
        nzero += 1
    d = len(cs) - 1
    found = []
    if d == 1:
        found = [-cs[0] / cs[1]]
    elif d >= 2:
        lead = cs[-1]
        a = [c / lead for c in cs]
        offset = 0.4 + 2 * math.pi * random.Random(seed).random() if seed else 0.4
        warm = None
        if init is not None:
            warm = [z for z in init if z != 0][:d] if nzero else list(init)
        found = _polish(a, _aberth(a, max_iter, tol, offset, warm))
    rs = sorted([0j] * nzero + [complex(z) for z in found], key=_sort_key)
    resid = max(backward_error(p, z) for z in rs)
    return RootList(tuple(rs), resid, _clusters(rs, CLUSTER_TOL))


def is_simple(p: Polynomial, tol: float = CLUSTER_TOL) -> Simplicity:
    """Check that neither ``p`` nor ``p'`` has two roots closer than ``tol``."""
    for kind, poly in (("zeros", p), ("critical points", None)):
        if poly is None:
            if p.degree < 2:
                break
            poly = derivative(p)
        if poly.degree < 2:
            continue
        rs = roots(poly).roots
        best = None
        for i in range(len(rs)):
            for j in range(i + 1, len(rs)):
                dist = abs(rs[i] - rs[j])
                if best is None or dist < best[0]:
                    best = (dist, rs[i], rs[j])
        if best is not None and best[0] <= tol:
            return Simplicity(False, (best[1], best[2]), kind)
    return Simplicity(True)
