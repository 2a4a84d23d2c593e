"""
Sixteen-tap filters for a genuinely three-dimensional dilation
==============================================================

The dilation here has no nonnegative integer representation and its
iterates mix all three coordinates, so nothing reduces to a product of
one-dimensional constructions.  A sixteen-tap filter supported on the
box {0..3} x {0,1} x {0,1} satisfies the orthogonality system; one
published solution is checked below, then the solver is let loose on
the same support to find its own.
"""

import numpy as np
from itertools import product

from framelets.lattice import IntMatrix
from framelets.partition import PartitionData, verify_partition
from framelets import lawton
from framelets.lawton import build_system, residual, solve
from framelets.cascade import iterate, l2_norm, translates_gram
from framelets.filters import check_qmf, support_bound

A = IntMatrix([[-2, 1, -2], [1, 0, 0], [2, 0, 2]])
ident = IntMatrix.identity(3)
pd = PartitionData(A0=A, A=A, S=ident, S_inv=ident,
                   ell=(0, 0, 1), q=(0, 0, 1))
print("dilation:", A.entries, " det =", A.det())
print("partition laws:", "ok" if verify_partition(pd, radius=3).passed else "BROKEN")

# one published coefficient set on the sixteen-point box; eight of the
# entries are zero up to the precision they were reported at
SET1 = {
    (0, 0, 0): "0.00000000000000003754",
    (1, 0, 0): "0.08378339374280850000",
    (2, 0, 0): "0.49453510790101500000",
    (3, 0, 0): "0.00000000000000024969",
    (0, 1, 0): "0.00000000000000002218",
    (1, 1, 0): "0.35330635188230000000",
    (2, 1, 0): "-0.22451807131547000000",
    (3, 1, 0): "0.00000000000000011746",
    (0, 0, 1): "0.00000000000000007270",
    (1, 0, 1): "0.16226597620431900000",
    (2, 0, 1): "-0.25534514772672400000",
    (3, 0, 1): "-0.00000000000000012892",
    (0, 1, 1): "0.00000000000000004295",
    (1, 1, 1): "0.68425970262500800000",
    (2, 1, 1): "0.11592624905984000000",
    (3, 1, 1): "-0.00000000000000006065",
}
mask = lawton.Mask(dim=3, support=tuple(SET1),
                   coeffs=tuple(float(v) for v in SET1.values()))

# the defining system: one normalization row, one unit-sum-of-squares
# row, and one row per admissible even shift of the support
system = build_system(list(mask.support), pd)
print(f"system shape: {system.n_rows} equations, {system.n_unknowns} unknowns")
res = residual(mask, system)
print("published set, max residual:", "%.3e" % float(np.max(np.abs(res))))
print("mirror identity deviation:  ",
      "%.3e" % check_qmf(mask, pd, samples=1000, seed=0))

# the system is underdetermined (12 equations, 16 unknowns), so the
# solver finds its own family representatives; every one must verify
found = solve(system)
print("solver found", len(found), "distinct masks; residuals:",
      ["%.1e" % lawton.verify(m, pd).max_residual for m in found])

# cascade a few stages and look at the geometry.  The increments hover
# near sqrt(2): consecutive iterates are nearly orthogonal to each
# other, so the limit is approached weakly rather than in norm, while
# the norm itself stays pinned at 1 by the mirror identity.
result = iterate(mask, A, k_max=3, eps=0.0)
print("L2 increments:", ["%.4f" % d for d in result.diffs])
print("iterate norm:", "%.12f" % l2_norm(result.phi))

# integer-translate Gram matrix: identity to machine precision, which
# is what makes the truncation/telescoping identities exact per stage
offsets = list(product((-1, 0, 1), repeat=3))
gram = translates_gram(result.phi, offsets)
print("translate Gram error vs identity:",
      "%.3e" % float(np.max(np.abs(gram - np.eye(27)))))

bound = support_bound(mask, A)
print("support radius bound:", "%.4f" % bound.radius,
      f"(geometric tail after {bound.tail_start} terms)")
