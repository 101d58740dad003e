# Critical radius and the classical checks on a few small polynomials.
import numpy as np

from sendovlab import Polynomial, critical_radius, from_roots, gauss_lucas_check, grr_disk_check, sendov_check

np.set_printoptions(precision=5, suppress=True)

# %% z^n - 1: every zero sits at distance exactly 1 from the critical point 0
for n in (2, 3, 5, 8):
    p = Polynomial((-1,) + (0,) * (n - 1) + (1,))
    rep = critical_radius(p, 1)
    print(f"n={n}  rho(z^n-1, 1) = {rep.rho:.12f}  essential = {rep.essential}")

# %% two zeros: the critical point is the midpoint
rep = critical_radius(from_roots([0.5, -1]), 0.5)
print("rho((z-0.5)(z+1), 0.5) =", rep.rho, "essential", rep.essential)

# %% random members of the class: hull test and nearest critical distance
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(200):
    zs = np.sqrt(rng.random(6)) * np.exp(2j * np.pi * rng.random(6))
    p = from_roots(zs)
    assert gauss_lucas_check(p).passes
    worst = max(worst, sendov_check(p).max_distance)
print("largest zero-to-critical distance over 200 sextics:", round(worst, 6))

# %% a zero at 1 always has a critical point in the disk |2z - 1| <= 1
g = grr_disk_check(from_roots([1, -0.5, -0.5]))
print(g.to_dict())
