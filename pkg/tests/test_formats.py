import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from sendovlab.experiments import blowup_scan
from sendovlab.formats import (
    blowup_to_csv, dumps, parse_complex_arg, parse_pair, path_from_json, path_to_json,
    polynomial_from_json, polynomial_to_json, trajectory_from_csv, trajectory_to_csv,
    trajectory_to_json,
)
from sendovlab.polycore import Polynomial, from_roots
from sendovlab.tracker import Arc, Line, Path, track

finite = st.floats(-1e6, 1e6, allow_nan=False)


def test_parse_pair_and_arg():
    assert parse_pair([1, -2]) == 1 - 2j
    assert parse_complex_arg("0.5,-1") == 0.5 - 1j
    for bad in ([1], "ab", [1, float("inf")]):
        with pytest.raises(ValueError):
            parse_pair(bad)
    with pytest.raises(ValueError):
        parse_complex_arg("1")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=8))
def test_polynomial_round_trip(pairs):
    cs = [complex(a, b) for a, b in pairs]
    if cs[-1] == 0:
        cs[-1] = 1
    p = Polynomial(tuple(cs))
    text = dumps(polynomial_to_json(p))
    assert polynomial_from_json(json.loads(text)) == p


def test_polynomial_reader_rejects_bad_input():
    for bad in ({}, {"coeffs": []}, {"coeffs": [[1, "nan"]]}, {"coeffs": [[1, 0], [0, 0]]}):
        with pytest.raises(ValueError):
            polynomial_from_json(bad)


def test_path_round_trip():
    p = Path([Line(0, 1), Arc(0, 1, 0, math.pi)])
    q = path_from_json(json.loads(dumps(path_to_json(p))))
    assert q.length == pytest.approx(p.length)
    assert abs(q.point(0.7) - p.point(0.7)) < 1e-15
    with pytest.raises(ValueError):
        path_from_json({"segments": [{"kind": "spline"}]})


def test_trajectory_csv_round_trip():
    tr = track(Polynomial((1, 1)), Path.line(1, 1j), 0)
    text = trajectory_to_csv(tr)
    assert text.splitlines()[0] == "t,u_re,u_im,zeta_re,zeta_im,residual,step"
    cols = trajectory_from_csv(text)
    assert cols["t"] == tr.t.tolist()
    assert cols["zeta_im"] == tr.zeta.imag.tolist()
    js = trajectory_to_json(tr)
    assert js["end_zeta"] == [tr.end_zeta.real, tr.end_zeta.imag]


def test_blowup_csv_columns():
    scan = blowup_scan(from_roots([0.5, -1]), 1, 1, [1, 10])
    lines = blowup_to_csv(scan).splitlines()
    assert lines[0] == "r,min_abs_f,abs_f_0" and len(lines) == 3


def test_dumps_rejects_nan():
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})
