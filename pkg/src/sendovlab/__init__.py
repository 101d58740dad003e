"""Numerical experiments on the critical points of complex polynomials."""
from .errors import *  # noqa: F401,F403
from .polycore import (
    Polynomial, RootList, derivative, evaluate, evaluate_with_derivatives, from_roots,
    is_simple, multiply, roots, scale,
)
from .critgeo import (
    critical_points, critical_radius, gauss_lucas_check, grr_disk_check, sendov_check,
)
from .tracker import Arc, Line, Path, TrackerConfig, Trajectory, davidenko_rhs, track, track_all
from .surface import (
    branch_disk_report, branch_locus, default_loops, monodromy, phi, sheets_at_infinity,
)
from .experiments import (
    blowup_scan, boundary_comparison, f_closed, f_integral, maximize_rho, random_pn_sample,
    verify_identity,
)

__version__ = "0.1.0"
