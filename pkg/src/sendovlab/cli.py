"""Command-line front end: ``sendovlab COMMAND [options]``.

Exit codes: 0 success, 1 a check-style command found its property false,
2 usage or input errors, 3 numerical failures.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from . import critgeo, experiments, surface
from .errors import PreconditionError, SendovLabError, UsageError
from .formats import (
    blowup_to_csv,
    dumps,
    parse_complex_arg,
    path_from_json,
    polynomial_from_json,
    polynomial_to_json,
    trajectory_to_csv,
    trajectory_to_json,
)
from .critgeo import pair
from .polycore import roots
from .tracker import DEFAULT_CONFIG, TrackerConfig, track, track_all

COMMANDS = (
    "roots", "critical-radius", "sendov", "grr", "track", "branch-locus", "branch-report",
    "sheets", "monodromy", "verify-identity", "blowup", "boundary-compare", "search-maximal",
    "sample",
)

TRACKER_TOLS = ("initial_step", "max_step", "step_floor", "residual_tol", "start_tol",
                "singular_floor", "branch_flag", "sheet_guard", "jump_bound", "cluster_tol")
OTHER_TOLS = ("zero", "disk")


@dataclass
class RunConfig:
    command: str
    poly: str | None = None
    q: str | None = None
    path: str | None = None
    at: complex | None = None
    w0: complex | None = None
    zeta: complex | None = None
    r_list: list | None = None
    seed: int = 0
    count: int = 10
    budget: int = 100_000
    n: int = 3
    radius: float = 10.0
    z1_index: int = 0
    zeta_index: int = 0
    no_disk: bool = False
    fmt: str = "json"
    out: str | None = None
    tolerances: dict = field(default_factory=dict)

    def tracker_config(self) -> TrackerConfig:
        kw = {k: v for k, v in self.tolerances.items() if k in TRACKER_TOLS}
        return DEFAULT_CONFIG.with_overrides(**kw) if kw else DEFAULT_CONFIG


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        # let "-0.5,1" through as a value rather than an option
        self._negative_number_matcher = re.compile(r"^-\d*\.?\d+([eE][-+]?\d+)?(,[-+]?[\d.eE+-]+)?$")

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _complex(text):
    try:
        return parse_complex_arg(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _r_list(text):
    try:
        a, b, steps = text.split(":")
        return experiments.geometric_r_list(float(a), float(b), int(steps))
    except (ValueError, SendovLabError) as e:
        raise argparse.ArgumentTypeError(f"bad --r-list {text!r}: {e}")


def _tol(text):
    name, _, value = text.partition("=")
    if name not in TRACKER_TOLS + OTHER_TOLS:
        raise argparse.ArgumentTypeError(f"unknown tolerance {name!r}")
    try:
        v = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad value in {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"tolerance {name} must be positive")
    return name, v


# command -> extra options it accepts
_OPTIONS = {
    "roots": ["poly"],
    "critical-radius": ["poly", "at"],
    "sendov": ["poly", "no_disk"],
    "grr": ["poly"],
    "track": ["q", "path", "zeta"],
    "branch-locus": ["q"],
    "branch-report": ["q"],
    "sheets": ["q", "radius"],
    "monodromy": ["q", "at", "path"],
    "verify-identity": ["poly", "path", "z1_index", "zeta_index"],
    "blowup": ["poly", "w0", "r_list", "z1_index"],
    "boundary-compare": ["poly", "w0", "z1_index"],
    "search-maximal": ["n", "budget"],
    "sample": ["n", "count"],
}

_REQUIRED = {
    "roots": ["poly"], "critical-radius": ["poly", "at"], "sendov": ["poly"], "grr": ["poly"],
    "track": ["q", "path"], "branch-locus": ["q"], "branch-report": ["q"], "sheets": ["q"],
    "monodromy": ["q"], "verify-identity": ["poly", "path"], "blowup": ["poly", "w0", "r_list"],
    "boundary-compare": ["poly", "w0"],
}


def _add_option(sp, name, required):
    flags = {
        "poly": (("--poly",), dict(metavar="FILE", help="polynomial JSON")),
        "q": (("--q",), dict(metavar="FILE", help="polynomial q (fixed zeros) JSON")),
        "path": (("--path",), dict(metavar="FILE", help="path JSON (monodromy: list of loops)")),
        "at": (("--at",), dict(type=_complex, metavar="RE,IM")),
        "w0": (("--w0",), dict(type=_complex, metavar="RE,IM")),
        "zeta": (("--zeta",), dict(type=_complex, metavar="RE,IM", help="start critical point")),
        "r_list": (("--r-list",), dict(type=_r_list, metavar="A:B:STEPS", dest="r_list")),
        "n": (("--n",), dict(type=int, default=3)),
        "count": (("--count",), dict(type=int, default=10)),
        "budget": (("--budget",), dict(type=int, default=100_000)),
        "radius": (("--radius",), dict(type=float, default=10.0)),
        "z1_index": (("--z1-index",), dict(type=int, default=0, dest="z1_index")),
        "zeta_index": (("--zeta-index",), dict(type=int, default=0, dest="zeta_index")),
        "no_disk": (("--no-disk",), dict(action="store_true", dest="no_disk",
                                          help="skip the unit-disk precondition")),
    }
    args, kw = flags[name]
    if required:
        kw = dict(kw, required=True)
    sp.add_argument(*args, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sendovlab", description="Numerical experiments on critical points of polynomials.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd)
        for opt in _OPTIONS[cmd]:
            _add_option(sp, opt, opt in _REQUIRED.get(cmd, ()))
        mode = sp.add_mutually_exclusive_group()
        mode.add_argument("--json", dest="fmt", action="store_const", const="json")
        mode.add_argument("--csv", dest="fmt", action="store_const", const="csv")
        sp.add_argument("--out", metavar="FILE")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=_tol, action="append", default=[], metavar="NAME=VALUE")
    return parser


def parse_args(argv) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    kw = {k: v for k, v in vars(ns).items() if v is not None and k != "tol"}
    kw.setdefault("fmt", "json")
    kw["tolerances"] = dict(ns.tol)
    return RunConfig(**kw)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read {path}: {e}")


def _load_poly(path):
    try:
        return polynomial_from_json(_load_json(path))
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"bad polynomial in {path}: {e}")


def _load_path(path):
    try:
        return path_from_json(_load_json(path))
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"bad path in {path}: {e}")


def _load_loops(path):
    obj = _load_json(path)
    try:
        items = obj if isinstance(obj, list) else obj["loops"]
        return [path_from_json(x) for x in items]
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"bad loop list in {path}: {e}")


def _execute(cfg: RunConfig):
    """Return (machine output text, exit status)."""
    tc = cfg.tracker_config()
    tol = cfg.tolerances
    cmd = cfg.command
    csv = cfg.fmt == "csv"
    if cmd == "roots":
        rl = roots(_load_poly(cfg.poly))
        return dumps({"roots": [pair(z) for z in rl], "residual_bound": rl.residual_bound,
                      "clusters": [list(c) for c in rl.clusters]}), 0
    if cmd == "critical-radius":
        rep = critgeo.critical_radius(_load_poly(cfg.poly), cfg.at, zero_tol=tol.get("zero", critgeo.ZERO_TOL))
        return dumps(rep.to_dict()), 0
    if cmd == "sendov":
        rep = critgeo.sendov_check(_load_poly(cfg.poly), not cfg.no_disk, tol.get("disk", critgeo.DISK_TOL))
        if csv:
            text = "zero_re,zero_im,nearest_re,nearest_im,distance\n" + "".join(
                f"{z.real!r},{z.imag!r},{c.real!r},{c.imag!r},{d!r}\n" for z, c, d in rep.per_zero)
            return text, 0 if rep.passes else 1
        return dumps(rep.to_dict()), 0 if rep.passes else 1
    if cmd == "grr":
        rep = critgeo.grr_disk_check(_load_poly(cfg.poly), tol.get("disk", critgeo.DISK_TOL))
        out = dict(rep.to_dict(), consistent=rep.consistent)
        return dumps(out), 0 if rep.has_closed_disk_zero else 1
    if cmd == "track":
        q, path = _load_poly(cfg.q), _load_path(cfg.path)
        trs = [track(q, path, cfg.zeta, tc)] if cfg.zeta is not None else track_all(q, path, tc)
        if csv:
            if len(trs) == 1:
                return trajectory_to_csv(trs[0]), 0
            blocks = [f"# sheet {k}\n" + trajectory_to_csv(tr, header=(k == 0)) for k, tr in enumerate(trs)]
            return "".join(blocks), 0
        if len(trs) == 1:
            return dumps(trajectory_to_json(trs[0])), 0
        return dumps({"trajectories": [trajectory_to_json(tr) for tr in trs]}), 0
    if cmd == "branch-locus":
        pts = surface.branch_locus(_load_poly(cfg.q))
        return dumps([{"w": pair(b.w), "u": pair(b.u), "residual": b.residual} for b in pts]), 0
    if cmd == "branch-report":
        return dumps(surface.branch_disk_report(_load_poly(cfg.q)).to_dict()), 0
    if cmd == "sheets":
        return dumps(surface.sheets_at_infinity(_load_poly(cfg.q), cfg.radius, config=tc).to_dict()), 0
    if cmd == "monodromy":
        q = _load_poly(cfg.q)
        if cfg.path:
            loops = _load_loops(cfg.path)
            base = cfg.at if cfg.at is not None else loops[0].start
        else:
            base, smalls, big = surface.default_loops(q)
            loops = smalls + [big]
        return dumps(surface.monodromy(q, base, loops, tc).to_dict()), 0
    if cmd == "verify-identity":
        rep = experiments.verify_identity(_load_poly(cfg.poly), cfg.z1_index, cfg.zeta_index,
                                          _load_path(cfg.path), tc)
        return dumps(rep.to_dict()), 0
    if cmd == "blowup":
        scan = experiments.blowup_scan(_load_poly(cfg.poly), cfg.z1_index, cfg.w0, cfg.r_list, tc)
        return (blowup_to_csv(scan) if csv else dumps(scan.to_dict())), 0
    if cmd == "boundary-compare":
        rep = experiments.boundary_comparison(_load_poly(cfg.poly), cfg.z1_index, cfg.w0)
        return dumps(rep.to_dict()), 0
    if cmd == "search-maximal":
        res = experiments.maximize_rho(cfg.n, cfg.seed, cfg.budget)
        return dumps(res.to_dict()), 0
    if cmd == "sample":
        polys = experiments.random_pn_sample(cfg.n, cfg.count, cfg.seed)
        return dumps([polynomial_to_json(p) for p in polys]), 0
    raise UsageError(f"unknown command {cmd}")


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        text, status = _execute(cfg)
    except (UsageError, PreconditionError) as e:
        print(f"error: {e}", file=stderr)
        return 2
    except SendovLabError as e:
        print(f"numerical error: {type(e).__name__}: {e}", file=stderr)
        return 3
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
