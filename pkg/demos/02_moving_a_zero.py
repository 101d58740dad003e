# Move one zero of p along a path and follow a critical point with it.
import numpy as np

from sendovlab import Path, f_closed, f_integral, from_roots, track
from sendovlab.experiments import blowup_scan, split_zero, verify_identity
from sendovlab.critgeo import critical_points

# %% p = (z - 0.5)(z + 1); keep -1 fixed (q = z + 1) and move 0.5 to u
p = from_roots([0.5, -1])
zs, z1, q = split_zero(p, 1)
zeta = critical_points(p).roots[0]
tr = track(q, Path.line(z1, 1), zeta)
print("samples:", len(tr), " end zeta:", tr.end_zeta, " expected (u-1)/2 = 0")

# %% the ratio f two ways
print("f closed  :", f_closed(q, zeta, tr.end_zeta))
print("f integral:", f_integral(q, Path.line(z1, 1), zeta))

# %% a random quintic, path leaving the disk
rng = np.random.default_rng(3)
zs = np.sqrt(rng.random(5)) * np.exp(2j * np.pi * rng.random(5))
p = from_roots(zs)
z1 = split_zero(p, 0)[1]
rep = verify_identity(p, 0, 1, Path.line(z1, 1.8 + 0.4j))
for k, v in rep.to_dict().items():
    print(f"{k:16s} {v}")

# %% push the moved zero out to r * w0: every sheet ends with |f| > 1
scan = blowup_scan(p, 0, np.exp(0.7j), [1, 10, 100, 1000])
for row in scan.rows:
    print(f"r={row.r:7.1f}  min|f| = {row.min_abs_f:10.4f}")
print("first r with min|f| > 1:", scan.crossing_r)
