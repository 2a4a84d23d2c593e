"""
A tour of the integer factor algebra
====================================

Every matrix used by the construction is taken apart into elementary
group factors -- swaps, sign flips, unit shears -- plus a single
coordinate doubling when the determinant is +/-2.  This script walks
through the three factorization shapes on a couple of concrete
matrices and finishes with a seeded round-trip sweep.
"""

import random

from framelets.lattice import (
    Dilate,
    IntMatrix,
    Shear,
    SignFlip,
    Swap,
    det2_factorize,
    det_exact,
    lv_factorize,
    recompose,
    unimodular_factorize,
)


def show(label, factors):
    print(f"{label}:")
    for f in factors:
        print("   ", f)


# ---------------------------------------------------------------
# a unimodular matrix first: determinant -1, so no doubling needed
s = IntMatrix([[0, 1, 0], [1, 0, 0], [-1, 0, 1]])
print("matrix:", s.entries, " det =", det_exact(s))
factors = unimodular_factorize(s)
show(f"{len(factors)} group factors", factors)
print("recomposes exactly:", recompose(factors, 3) == s)
print()

# ---------------------------------------------------------------
# the cyclic doubling matrix: |det| = 2, one Dilate must appear
a0 = IntMatrix([[0, 1, 0], [0, 0, 1], [2, 0, 0]])
print("matrix:", a0.entries, " det =", det_exact(a0))

# the LV split underneath: lower-triangular times unimodular tail
lower, tail = lv_factorize(a0)
print("lower-triangular part:", lower.entries)
print("unimodular tail has", len(tail), "factors")

fact = det2_factorize(a0)
print("default shape:", fact.form, " pivot p =", fact.p, " flags r =", fact.r)
for form in ("shear-pivot", "swap-pivot", "elementary-chain"):
    shaped = fact.to_form(form)
    kinds = [type(f).__name__ for f in shaped.factors()]
    ok = shaped.recomposed() == a0
    print(f"  {form:17s} {len(kinds):2d} factors, recomposes: {ok}")
    if form == "elementary-chain":
        show("  flattened chain", shaped.factors())
print()

# ---------------------------------------------------------------
# seeded sweep: build matrices from random chains, factor, recompose
rng = random.Random(7)
trials, exact = 200, 0
for t in range(trials):
    d = rng.randrange(1, 5)
    chain = []
    for _ in range(rng.randrange(2, 9)):
        k = rng.randrange(3)
        if d == 1 or k == 1:
            chain.append(SignFlip(rng.randrange(1, d + 1)))
        elif k == 0:
            i, j = rng.sample(range(1, d + 1), 2)
            chain.append(Swap(i, j))
        else:
            i, j = rng.sample(range(1, d + 1), 2)
            chain.append(Shear(i, j, rng.choice((-1, 1))))
    if t % 2:
        chain.insert(rng.randrange(len(chain) + 1),
                     Dilate(rng.randrange(1, d + 1)))
    m = recompose(chain, d)
    if abs(det_exact(m)) == 2:
        back = det2_factorize(m).recomposed()
    else:
        back = recompose(unimodular_factorize(m), d)
    exact += back == m
print(f"round-trip sweep: {exact}/{trials} recompose exactly")
