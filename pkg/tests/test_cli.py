import io
import json
import math

import pytest

from sendovlab.cli import RunConfig, main, parse_args, run
from sendovlab.errors import UsageError


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)
    return {
        "cubic": write("cubic.json", {"coeffs": [[-1, 0], [0, 0], [0, 0], [1, 0]]}),
        "q81": write("q81.json", {"coeffs": [[-0.81, 0], [0, 0], [1, 0]]}),
        "far": write("far.json", {"coeffs": [[-4, 0], [0, 0], [1, 0]]}),
        "p2": write("p2.json", {"coeffs": [[-0.5, 0], [0.5, 0], [1, 0]]}),
        "const": write("const.json", {"segments": [{"kind": "line", "a": [0.3, 0.2], "b": [0.3, 0.2]}]}),
        "seg": write("seg.json", {"segments": [{"kind": "line", "a": [0.5, 0], "b": [1, 0]}]}),
        "broken": write("broken.json", {"coeffs": []}),
        "dir": tmp_path,
    }


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    try:
        cfg = parse_args(argv)
    except UsageError:
        return 2, "", ""
    code = run(cfg, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_parse_args_examples():
    cfg = parse_args(["critical-radius", "--poly", "p.json", "--at", "1,0"])
    assert cfg.command == "critical-radius" and cfg.at == 1 and cfg.seed == 0
    cfg = parse_args(["sendov", "--poly", "p.json", "--json"])
    assert cfg.fmt == "json"
    with pytest.raises(UsageError):
        parse_args(["badcmd"])
    with pytest.raises(UsageError):
        parse_args(["roots", "--poly", "p.json", "--frobnicate"])
    with pytest.raises(UsageError):
        parse_args(["roots", "--poly", "p.json", "--tol", "residual_tol=-1"])
    with pytest.raises(UsageError):
        parse_args([])
    cfg = parse_args(["track", "--q", "q", "--path", "x", "--tol", "max_step=0.01", "--csv"])
    assert cfg.tracker_config().max_step == 0.01 and cfg.fmt == "csv"


def test_main_usage_exit_code(capsys):
    assert main(["badcmd"]) == 2
    assert "usage" in capsys.readouterr().err


def test_sendov_exit_codes(files):
    code, out, _ = invoke(["sendov", "--poly", files["cubic"]])
    assert code == 0 and json.loads(out)["max_distance"] == pytest.approx(1.0)
    code, out, _ = invoke(["sendov", "--poly", files["far"], "--no-disk"])
    assert code == 1 and not json.loads(out)["passes"]
    code, _, err = invoke(["sendov", "--poly", files["far"]])
    assert code == 3 and "RootOutsideDisk" in err


def test_grr_exit_code(files):
    code, out, _ = invoke(["grr", "--poly", files["cubic"]])
    assert code == 0 and json.loads(out)["has_closed_disk_zero"]


def test_branch_report(files):
    code, out, _ = invoke(["branch-report", "--q", files["q81"]])
    rows = json.loads(out)
    assert code == 0 and all(r["violation"] for r in rows)
    assert rows[0]["abs_phi"] == pytest.approx(1.5588457268, abs=1e-9)


def test_track_constant_csv(files):
    code, out, _ = invoke(["track", "--q", files["q81"], "--path", files["const"], "--zeta",
                           "-0.42508737518701273,0.05397036699979257", "--csv"])
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    a, b = lines[1].split(","), lines[2].split(",")
    assert a[1:5] == b[1:5] and float(a[5]) == 0.0


def test_bad_inputs_exit_2(files):
    assert invoke(["roots", "--poly", files["broken"]])[0] == 2
    assert invoke(["roots", "--poly", "/nonexistent.json"])[0] == 2
    assert invoke(["boundary-compare", "--poly", files["cubic"], "--w0", "1,0"])[0] == 2


def test_numerical_error_exit_3(files):
    code, _, err = invoke(["critical-radius", "--poly", files["cubic"], "--at", "0.5,0"])
    assert code == 3 and "NotAZero" in err


def test_out_file(files):
    target = files["dir"] / "out.json"
    code, out, _ = invoke(["roots", "--poly", files["cubic"], "--out", str(target)])
    assert code == 0 and out == ""
    assert len(json.loads(target.read_text())["roots"]) == 3


@pytest.mark.parametrize("argv", [
    ["roots", "--poly", "cubic"],
    ["critical-radius", "--poly", "cubic", "--at", "1,0"],
    ["sendov", "--poly", "cubic", "--csv"],
    ["grr", "--poly", "cubic"],
    ["track", "--q", "q81", "--path", "seg", "--csv"],
    ["branch-locus", "--q", "q81"],
    ["branch-report", "--q", "q81"],
    ["sheets", "--q", "q81"],
    ["monodromy", "--q", "q81"],
    ["verify-identity", "--poly", "p2", "--path", "seg", "--z1-index", "1"],
    ["blowup", "--poly", "p2", "--z1-index", "1", "--w0", "1,0", "--r-list", "1:1000:4", "--csv"],
    ["boundary-compare", "--poly", "p2", "--z1-index", "1", "--w0", "1,0"],
    ["search-maximal", "--n", "3", "--budget", "1500", "--seed", "4"],
    ["sample", "--n", "4", "--count", "3", "--seed", "9"],
])
def test_every_command_runs_and_is_deterministic(files, argv):
    argv = [files.get(a, a) if isinstance(a, str) else a for a in argv]
    first = invoke(argv)
    second = invoke(argv)
    assert first[0] == 0, first[2]
    assert first[1] == second[1] and first[1]
    if "--csv" not in argv:
        json.loads(first[1])
