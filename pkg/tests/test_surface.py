import cmath
import math

import numpy as np
import pytest

from sendovlab.errors import (
    DegenerateConfiguration, LoopNotClosed, PathNearBranchPoint, ProjectionSingular, RootOutsideDisk,
)
from sendovlab.polycore import Polynomial, derivative, evaluate, from_roots, roots
from sendovlab.surface import (
    branch_disk_report, branch_locus, branch_polynomial, circle_loop, default_loops, monodromy,
    phi, sheets_at_infinity, small_loop,
)
from sendovlab.tracker import Path, critical_points_of_Q, q_second_of_Q, track_all
from conftest import disk_points, match_sets


def quad(c):
    return Polynomial((-c * c, 0, 1))


def is_transposition(perm):
    moved = [i for i, j in enumerate(perm) if i != j]
    return len(moved) == 2 and perm[moved[0]] == moved[1]


def test_branch_polynomial_leading_coefficient(rng):
    for m in range(1, 6):
        q = Polynomial(tuple(rng.normal(size=m + 1) + 1j * rng.normal(size=m + 1)))
        B = branch_polynomial(q)
        n = m + 1
        assert B.degree == 2 * n - 4
        assert abs(B.leading - n * (n - 1) * q.leading ** 2) < 1e-12 * abs(B.leading)


def test_branch_locus_linear_is_empty():
    assert branch_locus(Polynomial((-0.3, 1))) == []


def test_branch_locus_quadratic_closed_form():
    for c in (0.5, 0.9, 0.3 + 0.4j):
        pts = branch_locus(quad(c))
        expected = [1j * c / math.sqrt(3), -1j * c / math.sqrt(3)]
        assert match_sets([b.w for b in pts], expected) < 1e-12
        for b in pts:
            assert abs(b.u - (-c * c / b.w)) < 1e-10
            assert abs(abs(b.u) - math.sqrt(3) * abs(c)) < 1e-10


def test_branch_locus_random(rng):
    for _ in range(30):
        q = from_roots(disk_points(rng, rng.integers(2, 6)))
        n = q.degree + 1
        pts = branch_locus(q)
        assert len(pts) == 2 * n - 4
        for b in pts:
            assert b.residual <= 1e-10
            assert abs(b.u - phi(q, b.w)) < 1e-10 * (1 + abs(b.u))
            scale = 1 + sum(abs(c) for c in q.coeffs)
            assert abs(q_second_of_Q(q, b.w, b.u)) <= 1e-8 * scale ** 2


def test_branch_locus_requires_simple():
    with pytest.raises(DegenerateConfiguration):
        branch_locus(from_roots([0.2, 0.2, -0.5]))


def test_phi_examples():
    assert phi(Polynomial((1, 1)), 0) == 1
    c = 0.6
    w = 1j * c / math.sqrt(3)
    assert abs(phi(quad(c), w) - 1j * math.sqrt(3) * c) < 1e-12
    with pytest.raises(ProjectionSingular):
        phi(quad(c), 0)


def test_phi_inverts_tracking(rng):
    q = from_roots(disk_points(rng, 3))
    for tr in track_all(q, Path.line(1.5, -0.5 + 1.5j)):
        for u, z in zip(tr.u, tr.zeta):
            assert abs(phi(q, z) - u) < 1e-9 * (1 + abs(u))


def test_branch_disk_report_cases():
    rep = branch_disk_report(quad(0.5))
    assert rep.n_violations == 0
    assert all(r.abs_phi == pytest.approx(math.sqrt(3) / 2, abs=1e-10) for r in rep.rows)
    rep = branch_disk_report(quad(0.9))
    assert rep.violating_conjugate_pairs == 1
    assert all(r.abs_phi == pytest.approx(1.5588457268, abs=1e-9) for r in rep.rows)
    assert all(row["violation"] for row in rep.to_dict())
    assert branch_disk_report(Polynomial((-0.3, 1))).rows == ()
    with pytest.raises(RootOutsideDisk):
        branch_disk_report(quad(1.2))


def test_branch_disk_report_boundary_band():
    c = 1 / math.sqrt(3)
    rep = branch_disk_report(quad(c))
    assert {r.status for r in rep.rows} == {"boundary"}


def test_sheets_at_infinity_linear():
    rep = sheets_at_infinity(Polynomial((1, 1)))
    assert rep.n_unbounded == 1
    assert abs(rep.per_sheet[0].value - 0.5) < 1e-4


def test_sheets_at_infinity_random(rng):
    for _ in range(5):
        q = from_roots(disk_points(rng, rng.integers(2, 5)))
        n = q.degree + 1
        rep = sheets_at_infinity(q)
        assert rep.n_unbounded == 1
        for row in rep.per_sheet:
            if row.kind == "Unbounded":
                assert abs(row.value - (n - 1) / n) < 1e-4
            else:
                assert row.error < 1e-4
        limits = [r.value for r in rep.per_sheet if r.kind != "Unbounded"]
        assert match_sets(limits, roots(derivative(q)).roots) < 1e-4


def test_monodromy_linear_identity():
    q = Polynomial((1, 1))
    rep = monodromy(q, 2.0, [circle_loop(2.0)])
    assert rep.permutations == ((0,),) and rep.product == (0,)


def test_monodromy_quadratic():
    q = quad(0.9)
    base, smalls, big = default_loops(q)
    rep = monodromy(q, base, smalls + [big])
    for perm in rep.permutations[:-1]:
        assert is_transposition(perm)
    assert list(rep.permutations[-1]) == [0, 1]
    d = rep.to_dict()
    assert set(d) == {"basepoint", "labels", "loops", "product"}
    assert list(rep.sheet_labels) == sorted(rep.sheet_labels, key=lambda z: (z.real, z.imag))


def test_monodromy_product_is_composition(rng):
    q = from_roots(disk_points(rng, 3))
    base, smalls, big = default_loops(q)
    rep = monodromy(q, base, smalls)
    prod = list(range(len(rep.sheet_labels)))
    for p in rep.permutations:
        prod = [p[i] for i in prod]
    assert tuple(prod) == rep.product


def test_monodromy_random_invariants(rng):
    for _ in range(5):
        q = from_roots(disk_points(rng, rng.integers(1, 5)))
        base, smalls, big = default_loops(q)
        rep = monodromy(q, base, smalls + [big])
        assert all(is_transposition(p) for p in rep.permutations[:-1])
        assert list(rep.permutations[-1]) == list(range(q.degree))


def test_monodromy_rejects_bad_loops():
    q = quad(0.9)
    with pytest.raises(LoopNotClosed):
        monodromy(q, 3.0, [Path.line(3.0, 4.0)])
    ub = 1j * 0.9 * math.sqrt(3)
    with pytest.raises(PathNearBranchPoint):
        base = ub * cmath.exp(0.3j)   # circle of radius |u_b| about 0 runs through u_b
        monodromy(q, base, [circle_loop(base)])
