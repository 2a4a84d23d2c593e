"""
Frame diagnostics: where the energy goes
========================================

Two case studies.  The dyadic two-tap pair is exact at every stage, so
all the frame identities come out to machine precision and the energy
bookkeeping is textbook geometric.  The sixteen-tap filters satisfy the
same per-stage identities exactly -- but their cascade converges only
weakly, and the diagnostics make the difference visible instead of
hiding it.
"""

from _published import SET1, build_mask

from framelets.lattice import IntMatrix
from framelets.partition import PartitionData
from framelets.cascade import SampledFunction, cascade_step, init_indicator, iterate
from framelets.wavelet import build_wavelet
from framelets.frame import (
    lj_curve,
    parseval_partial_sum,
    random_test_function,
    telescope_check,
)
from framelets.lawton import Mask
import math

# ---------------------------------------------------------------
# case 1: the dyadic two-tap pair, everything exact
two = IntMatrix([[2]])
pd1 = PartitionData(A0=two, A=two, S=IntMatrix([[1]]),
                    S_inv=IntMatrix([[1]]), ell=(1,), q=(1,))
h = math.sqrt(2.0) / 2.0
haar = Mask(dim=1, support=((0,), (1,)), coeffs=(h, h))

chi = SampledFunction(two, 0, {(0,): 1.0})     # unit-interval indicator
phi = init_indicator(two)                      # the fixed point itself
psi = build_wavelet(phi, haar, pd1)

print("scaling-energy curve for the unit interval:")
curve = lj_curve(chi, phi, (-5, 3))
for j in sorted(curve):
    print(f"  scale {j:+d}: {curve[j]:.10f}   (exact: {min(1.0, 2.0 ** j):.10f})")

# all detail energy below scale 0, summed: 1 - 2^-12 of the total
part = parseval_partial_sum(chi, psi, (-12, -1))
print("detail energy over scales -12..-1:", "%.12f" % part.value,
      " target:", "%.12f" % (1.0 - 2.0 ** -12))

f = random_test_function(two, 2, (-4,), (4,), seed=5)
res = [telescope_check(f, phi, cascade_step(phi, haar), psi, j) for j in (0, 1)]
print("telescoping residuals on a random function:", ["%.2e" % r for r in res])
print()

# ---------------------------------------------------------------
# case 2: the sixteen-tap set over the mixing dilation
A = IntMatrix([[-2, 1, -2], [1, 0, 0], [2, 0, 2]])
ident = IntMatrix.identity(3)
pd = PartitionData(A0=A, A=A, S=ident, S_inv=ident, ell=(0, 0, 1), q=(0, 0, 1))
mask = build_mask(SET1)

phi3 = iterate(mask, A, k_max=3, eps=0.0).phi
phi4 = cascade_step(phi3, mask)
psi3 = build_wavelet(phi3, mask, pd)

# per-stage identities are exact here too
g = random_test_function(A, 4, (-2, -2, -2), (2, 2, 2), seed=9)
res = [telescope_check(g, phi3, phi4, psi3, j) for j in (0,)]
print("sixteen-tap telescoping residual:", ["%.2e" % r for r in res])

# but the energy capture tells the weak-convergence story: against the
# unit cube the whole curve sits below the orthonormal-translate
# reference -- it still vanishes at the coarse end, as any fixed
# function must, yet the fine-scale sums stall far short of 1 instead
# of climbing to it
cube = SampledFunction(A, 0, {(0, 0, 0): 1.0})
curve = lj_curve(cube, phi3, (-6, 5))
print("scaling-energy curve for the unit cube (stage-3 iterate):")
for j in sorted(curve):
    ref = min(1.0, 2.0 ** j)
    print(f"  scale {j:+d}: {curve[j]:.6f}   (orthonormal-translate reference"
          f" {ref:.6f})")

part = parseval_partial_sum(cube, psi3, (-6, 2))
print("detail energy by scale:")
for n in sorted(part.by_scale):
    print(f"  scale {n:+d}: {part.by_scale[n]:.6f}"
          f"   ({part.window_sizes[n]} shifts summed)")
print("total over -6..2:", "%.6f" % part.value)
