# Branch points, their projections and the sheet permutations around them.
import math

from sendovlab import Polynomial, branch_disk_report, branch_locus, default_loops, monodromy, sheets_at_infinity
from sendovlab import from_roots

# %% q = z^2 - c^2: branch points at +-ic/sqrt(3), projections of modulus sqrt(3)|c|
for c in (0.5, 0.9):
    q = Polynomial((-c * c, 0, 1))
    for b in branch_locus(q):
        print(f"c={c}  w={b.w:.6f}  phi(w)={b.u:.6f}  |phi|={abs(b.u):.10f}")
    rep = branch_disk_report(q)
    print("   rows with |phi| >= 1:", rep.n_violations)
print("sqrt(3) * 0.9 =", math.sqrt(3) * 0.9)

# %% monodromy for a cubic q: three sheets, four branch points
q = from_roots([0.3 + 0.4j, -0.7, 0.1 - 0.8j])
base, smalls, big = default_loops(q)
rep = monodromy(q, base, smalls + [big])
print("basepoint", rep.basepoint)
for k, perm in enumerate(rep.permutations):
    print("  loop", k, "->", perm, "(enclosing circle)" if k == len(smalls) else "")

# %% far out, one sheet runs off to infinity like (n-1)/n * u, the rest settle on zeros of q'
for row in sheets_at_infinity(q).per_sheet:
    print(f"  {row.kind:12s} value={row.value:.6f}  target={row.target:.6f}")
