# Search for zeros in the unit disk maximising the critical radius at the first zero.
import cmath
import time

import numpy as np

from sendovlab import maximize_rho

np.set_printoptions(precision=6, suppress=True)

for n in (2, 3, 4, 5):
    t0 = time.perf_counter()
    res = maximize_rho(n, seed=0, budget=20_000)
    zs = np.array(res.best_roots)
    # rotate so the first zero is at 1; a maximiser looks like the n-th roots of unity
    aligned = zs * cmath.exp(-1j * cmath.phase(zs[0]))
    print(f"n={n}  best rho = {res.best_rho:.9f}  evaluations = {res.iterations}  "
          f"({time.perf_counter() - t0:.1f}s)")
    print("   zeros^n after alignment:", np.round(aligned ** n, 6))
    print("   trace tail:", res.trace[-3:])
