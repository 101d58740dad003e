import cmath
import math

import numpy as np
import pytest

from sendovlab.errors import (
    BranchPointSingularity, DegenerateConfiguration, PathNearBranchPoint, StartNotCritical,
)
from sendovlab.polycore import Polynomial, derivative, evaluate, from_roots, multiply, roots
from sendovlab.tracker import (
    Arc, DEFAULT_CONFIG, Line, Path, TrackerConfig, critical_points_of_Q, davidenko_rhs,
    match_to_roots, q_prime_of_Q, q_second_of_Q, track, track_all,
)
from conftest import disk_points, match_sets


def test_path_parametrisation():
    p = Path([Line(0, 1), Arc(0, 1, 0, math.pi / 2)])
    assert p.length == pytest.approx(1 + math.pi / 2)
    assert p.point(0) == 0 and abs(p.point(1) - 1j) < 1e-15
    assert abs(p.point(1 / p.length) - 1) < 1e-12
    t = 0.7
    h = 1e-6
    fd = (p.point(t + h) - p.point(t - h)) / (2 * h)
    assert abs(p.velocity(t) - fd) < 1e-6
    with pytest.raises(ValueError):
        Path([Line(0, 1), Line(2, 3)])
    c = Path.constant(0.3 + 0.1j)
    assert c.length == 0 and c.point(0.5) == 0.3 + 0.1j


def test_path_closed_circle():
    loop = Path([Arc(0, 2, 0, math.pi), Arc(0, 2, math.pi, 2 * math.pi)])
    assert loop.is_closed()
    assert not Path.line(0, 1).is_closed()


def test_Q_derivatives_examples():
    q = Polynomial((1, 1))
    assert q_prime_of_Q(q, 0, 1) == 0
    for z, u in [(0.3, 1j), (-2, 5)]:
        assert q_second_of_Q(q, z, u) == 2


def test_Q_derivatives_match_expansion(rng):
    for _ in range(20):
        q = from_roots(disk_points(rng, 4))
        u = complex(*rng.normal(size=2))
        Q = multiply(from_roots([u]), q)
        dQ, ddQ = derivative(Q), derivative(derivative(Q))
        z = complex(*rng.normal(size=2))
        assert abs(q_prime_of_Q(q, z, u) - evaluate(dQ, z)) < 1e-12 * (1 + abs(evaluate(dQ, z)))
        assert abs(q_second_of_Q(q, z, u) - evaluate(ddQ, z)) < 1e-12 * (1 + abs(evaluate(ddQ, z)))


def test_davidenko_rhs_linear_q():
    q = Polynomial((-0.3j, 1))
    for u in [0, 1 + 1j, -4]:
        zeta = (u + 0.3j) / 2
        assert davidenko_rhs(q, u, zeta) == pytest.approx(0.5)


def test_davidenko_rhs_at_branch_point():
    c = 0.7
    q = Polynomial((-c * c, 0, 1))
    w = 1j * c / math.sqrt(3)
    u = w + evaluate(q, w) / evaluate(derivative(q), w)
    with pytest.raises(BranchPointSingularity):
        davidenko_rhs(q, u, w)


def test_davidenko_rhs_finite_difference(rng):
    for _ in range(10):
        q = from_roots(disk_points(rng, 2))
        u0 = complex(*rng.normal(size=2))
        zeta = critical_points_of_Q(q, u0)[0]
        h = 1e-4
        fwd = track(q, Path.line(u0, u0 + h), zeta).end_zeta
        back = track(q, Path.line(u0, u0 - h), zeta).end_zeta
        fd = (fwd - back) / (2 * h)
        assert abs(davidenko_rhs(q, u0, zeta) - fd) < 1e-5 * (1 + abs(fd))


def test_track_linear_closed_form():
    q = Polynomial((1, 1))
    tr = track(q, Path.line(1, 1j), 0)
    assert abs(tr.end_zeta - (1j - 1) / 2) < 1e-12
    assert np.all(np.abs(tr.zeta - (tr.u - 1) / 2) < 1e-12)
    assert tr.t[0] == 0 and tr.t[-1] == 1 and np.all(np.diff(tr.t) > 0)


def test_track_constant_path():
    q = from_roots([0.2, -0.4j])
    u0 = 0.5 + 0.5j
    z0 = critical_points_of_Q(q, u0)[1]
    tr = track(q, Path.constant(u0), z0)
    assert len(tr) == 2 and tr.end_zeta == tr.start_zeta


def test_track_rejects_non_critical_start():
    with pytest.raises(StartNotCritical):
        track(Polynomial((1, 1)), Path.line(1, 2), 0.3)


def test_track_rejects_clustered_q():
    with pytest.raises(DegenerateConfiguration):
        track(from_roots([0.1, 0.1]), Path.line(1, 2), 0.1)


def test_track_endpoint_matches_direct_solve(rng):
    for _ in range(20):
        q = from_roots(disk_points(rng, 3))
        a, b = disk_points(rng, 2) * 2
        z0 = critical_points_of_Q(q, a)[0]
        try:
            tr = track(q, Path.line(a, b), z0)
        except PathNearBranchPoint:
            continue
        ends = critical_points_of_Q(q, b)
        assert min(abs(tr.end_zeta - e) for e in ends) < 1e-8
        # residual and continuity invariants
        assert np.all(np.abs(q_prime_of_Q(q, tr.zeta, tr.u)) <= 1e-9 * 50)
        L = abs(b - a)
        assert np.all(np.abs(np.diff(tr.zeta)) <= DEFAULT_CONFIG.jump_bound * tr.step[1:] * L + 1e-12)


def test_track_all_counts_and_consistency(rng):
    assert len(track_all(Polynomial((1, 1)), Path.line(1, 2))) == 1
    q = from_roots(disk_points(rng, 2))
    path = Path.line(1.5, -1.5 + 0.3j)
    trs = track_all(q, path)
    assert len(trs) == 2
    assert np.min(np.abs(trs[0].zeta - trs[1].zeta)) > 1e-7
    for k in range(0, len(trs[0]), 5):
        direct = critical_points_of_Q(q, trs[0].u[k])
        assert match_sets([tr.zeta[k] for tr in trs], direct) < 1e-8


def test_small_regular_loop_returns(rng):
    q = from_roots(disk_points(rng, 3))
    center = 2.5 + 0.5j
    loop = Path([Arc(center, 0.05, 0, math.pi), Arc(center, 0.05, math.pi, 2 * math.pi)])
    for tr in track_all(q, loop):
        assert abs(tr.end_zeta - tr.start_zeta) < 1e-8


def test_step_halving_convergence(rng):
    q = from_roots(disk_points(rng, 4))
    path = Path.line(-1.2 + 0.2j, 1.3 - 0.4j)
    z0 = critical_points_of_Q(q, path.start)[1]
    a = track(q, path, z0).end_zeta
    b = track(q, path, z0, DEFAULT_CONFIG.with_overrides(max_step=DEFAULT_CONFIG.max_step / 2)).end_zeta
    assert abs(a - b) < 1e-8


def test_euler_predictor_agrees(rng):
    q = from_roots(disk_points(rng, 3))
    path = Path.line(1.4, 1.4j)
    z0 = critical_points_of_Q(q, path.start)[0]
    cfg = TrackerConfig(predictor="euler")
    assert abs(track(q, path, z0, cfg).end_zeta - track(q, path, z0).end_zeta) < 1e-8


def test_path_through_branch_point_refused():
    c = 0.9
    q = Polynomial((-c * c, 0, 1))
    ub = 1j * c * math.sqrt(3)   # projection of the branch point w = i c / sqrt(3)
    path = Path.line(ub - 1, ub + 1)
    with pytest.raises(PathNearBranchPoint) as info:
        track_all(q, path)
    assert info.value.trajectory is not None


def test_branch_proximity_event_recorded():
    c = 0.9
    q = Polynomial((-c * c, 0, 1))
    ub = 1j * c * math.sqrt(3)
    path = Path.line(ub - 1, ub - 1e-4)   # stops just short of the projection
    cfg = DEFAULT_CONFIG.with_overrides(branch_flag=1e-1)
    trs = track_all(q, path, cfg)
    assert any(kind == "BranchProximity" for _, kind in trs[0].events)


def test_config_validation():
    with pytest.raises(ValueError):
        TrackerConfig(predictor="midpoint")
    with pytest.raises(ValueError):
        TrackerConfig(max_step=0)


def test_match_to_roots():
    assert match_to_roots([1, 2], [2, 1], 1e-9) == [1, 0]
    assert match_to_roots([1, 1], [1, 2], 1e-9) is None
    assert match_to_roots([1.1], [1], 1e-9) is None
