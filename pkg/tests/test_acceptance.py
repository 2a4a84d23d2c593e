"""End-to-end acceptance battery.

Each test exercises one advertised guarantee of the package at its
stated tolerance and prints a single summary line of the form

    [acceptance] <name>: pass|FAIL (<measured quantities>)

before asserting.  Run with ``-s`` (or read captured output on failure)
to see the lines.  The thresholds here are contracts, not aspirations:
a red test means the guarantee is not met, and the test stays red
rather than being loosened.
"""

from __future__ import annotations

import math
import random
from itertools import product
from time import perf_counter

import numpy as np
import pytest

from framelets.lattice import (
    Dilate,
    IntMatrix,
    Shear,
    SignFlip,
    Swap,
    det2_factorize,
    det_exact,
    inv_pow_numerator,
    operator_norm_inv_pow,
    recompose,
    unimodular_factorize,
)
from framelets.partition import (
    CosetLabel,
    coset_of,
    reduce,
    verify_partition,
)
from framelets import lawton
from framelets.lawton import build_system, solve
from framelets.cascade import (
    SampledFunction,
    cascade_step,
    fourier_transform,
    init_indicator,
    iterate,
    translates_gram,
)
from framelets.filters import check_qmf, cube_transform, eval_g, support_bound
from framelets.wavelet import build_wavelet
from framelets.frame import (
    lj_curve,
    parseval_partial_sum,
    random_test_function,
    telescope_check,
)

from conftest import CYCLIC_A0, MIXING_A, SQRT2_HALF


def _line(name: str, ok: bool, detail: str = "") -> None:
    tail = f" ({detail})" if detail else ""
    print(f"[acceptance] {name}: {'pass' if ok else 'FAIL'}{tail}")


# ---------------------------------------------------------------------
# reduction of the order-3 cyclic doubling dilation


def test_reduction_of_cyclic_doubling(cyclic_published_pd):
    a0 = IntMatrix(CYCLIC_A0)
    t0 = perf_counter()
    pd = reduce(a0)
    report = verify_partition(pd, radius=3)
    elapsed = perf_counter() - t0

    published = verify_partition(cyclic_published_pd, radius=3)
    conjugated = cyclic_published_pd.S_inv @ cyclic_published_pd.A @ cyclic_published_pd.S

    ok = (report.passed and published.passed and conjugated == a0
          and elapsed < 1.0)
    _line("cyclic-doubling reduction", ok,
          f"reduced ok={report.passed}, published ok={published.passed}, "
          f"{elapsed:.3f}s")
    assert report.passed, report.violations
    assert published.passed, published.violations
    assert conjugated == a0
    assert elapsed < 1.0


# ---------------------------------------------------------------------
# the two-tap system over the reduced dilation has exactly one solution


def test_two_tap_solution_is_unique():
    pd = reduce(IntMatrix(CYCLIC_A0))
    system = build_system([(0, 0, 0), pd.ell], pd)
    masks = solve(system)
    worst = (max(abs(c - SQRT2_HALF) for c in masks[0].coeffs)
             if masks else math.inf)
    ok = len(masks) == 1 and worst <= 1e-12
    _line("two-tap uniqueness", ok,
          f"{len(masks)} solution(s), coeff error {worst:.2e}")
    assert len(masks) == 1
    assert worst <= 1e-12


# ---------------------------------------------------------------------
# published sixteen-tap coefficient sets satisfy their defining system


def test_published_sixteen_tap_residuals(mixing_pd, set1_mask, set2_mask):
    t0 = perf_counter()
    checks = [lawton.verify(m, mixing_pd, tol=1e-9)
              for m in (set1_mask, set2_mask)]
    elapsed = perf_counter() - t0
    worst = max(c.max_residual for c in checks)
    ok = all(c.passed for c in checks) and worst < 1e-9 and elapsed < 1.0
    _line("sixteen-tap residuals", ok,
          f"max residual {worst:.3e}, {elapsed:.3f}s")
    assert all(c.passed for c in checks)
    assert worst < 1e-9
    assert elapsed < 1.0


# ---------------------------------------------------------------------
# mirror identity for the first sixteen-tap set


def test_mirror_identity_sixteen_tap(mixing_pd, set1_mask):
    dev = check_qmf(set1_mask, mixing_pd, samples=1000, seed=0)
    ok = dev < 1e-8
    _line("mirror identity", ok, f"max deviation {dev:.3e}")
    assert dev < 1e-8


# ---------------------------------------------------------------------
# the two-tap mask over the reduced cyclic dilation reproduces the cube
# indicator exactly at every stage


def test_cube_indicator_is_exact_fixed_point(cyclic_a0, haar3_mask):
    result = iterate(haar3_mask, cyclic_a0, k_max=6, eps=0.0)
    expected = {m: 1.0 for m in product(range(4), repeat=3)}
    diffs_zero = len(result.diffs) == 6 and all(d == 0.0 for d in result.diffs)
    exact = result.phi.level == 6 and result.phi.values == expected
    ok = diffs_zero and exact
    _line("cube fixed point", ok,
          f"diffs {list(result.diffs)}, {len(result.phi.values)} cells")
    assert diffs_zero
    assert exact


# ---------------------------------------------------------------------
# translate Gram matrices of the sixteen-tap iterates are the identity


def test_translate_gram_identity(set1_mask):
    a = IntMatrix(MIXING_A)
    offsets = list(product((-1, 0, 1), repeat=3))
    t0 = perf_counter()
    errs = []
    for k in (1, 2, 3):
        phi = iterate(set1_mask, a, k_max=k, eps=0.0).phi
        gram = translates_gram(phi, offsets)
        errs.append(float(np.max(np.abs(gram - np.eye(len(offsets))))))
    elapsed = perf_counter() - t0
    ok = max(errs) < 1e-10 and elapsed < 30.0
    _line("translate Gram identity", ok,
          f"errors {['%.2e' % e for e in errs]}, {elapsed:.1f}s")
    assert max(errs) < 1e-10
    assert elapsed < 30.0


# ---------------------------------------------------------------------
# the mixed-stage telescoping identity holds on random inputs


def test_telescoping_identity(haar1_pd, haar1_mask, haar3_pd, haar3_mask,
                              mixing_pd, set1_mask):
    worst_haar = 0.0
    for pd, mask, seed in ((haar1_pd, haar1_mask, 11),
                           (haar3_pd, haar3_mask, 12)):
        phi = init_indicator(pd.A)
        phi_next = cascade_step(phi, mask)
        psi = build_wavelet(phi, mask, pd)
        box = 4 if pd.dim == 1 else 2
        lo, hi = (-box,) * pd.dim, (box,) * pd.dim
        for j in (0, 1):
            f = random_test_function(pd.A, phi.level + j + 1, lo, hi,
                                     seed=seed + j)
            worst_haar = max(worst_haar,
                             telescope_check(f, phi, phi_next, psi, j))

    phi3 = iterate(set1_mask, mixing_pd.A, k_max=3, eps=0.0).phi
    phi4 = cascade_step(phi3, set1_mask)
    psi3 = build_wavelet(phi3, set1_mask, mixing_pd)
    worst_16 = 0.0
    for j in (0, 1):
        f = random_test_function(mixing_pd.A, phi3.level + j + 1,
                                 (-2, -2, -2), (2, 2, 2), seed=17 + j)
        worst_16 = max(worst_16, telescope_check(f, phi3, phi4, psi3, j))

    ok = worst_haar <= 1e-10 and worst_16 <= 1e-8
    _line("telescoping identity", ok,
          f"two-tap {worst_haar:.2e}, sixteen-tap {worst_16:.2e}")
    assert worst_haar <= 1e-10
    assert worst_16 <= 1e-8


# ---------------------------------------------------------------------
# truncated tight-frame sum for the dyadic two-tap pair


def test_truncated_tight_frame_sum(haar1_pd, haar1_mask):
    two = haar1_pd.A
    f = SampledFunction(two, 0, {(0,): 1.0})
    psi = build_wavelet(init_indicator(two), haar1_mask, haar1_pd)
    part = parseval_partial_sum(f, psi, (-20, 5))
    target = 1.0 - 2.0 ** -20
    err = abs(part.value - target)
    ok = err <= 1e-5
    _line("truncated tight-frame sum", ok,
          f"sum {part.value:.10f}, target {target:.10f}, error {err:.2e}")
    assert err <= 1e-5


# ---------------------------------------------------------------------
# scaling-energy limits: exact for the two-tap pairs, and the published
# large-scale/small-scale targets for the sixteen-tap set


def test_scale_limit_sums(haar1_pd, haar1_mask, haar3_pd, haar3_mask,
                          mixing_pd, set1_mask):
    worst_haar = 0.0
    for pd in (haar1_pd, haar3_pd):
        f = init_indicator(pd.A)
        phi = init_indicator(pd.A)
        curve = lj_curve(f, phi, (-10, 5))
        for j, value in curve.items():
            target = 1.0 if j >= 0 else 2.0 ** j
            worst_haar = max(worst_haar, abs(value - target))

    f = SampledFunction(mixing_pd.A, 0, {(0, 0, 0): 1.0})
    phi = iterate(set1_mask, mixing_pd.A, k_max=3, eps=0.0).phi
    l5 = lj_curve(f, phi, (5, 5))[5]
    lneg8 = lj_curve(f, phi, (-8, -8))[-8]

    ok = worst_haar <= 1e-10 and l5 >= 0.9 and lneg8 <= 0.05
    _line("scale-limit sums", ok,
          f"two-tap error {worst_haar:.2e}, "
          f"sixteen-tap L5 {l5:.6f} (needs >= 0.9), "
          f"L-8 {lneg8:.6f} (needs <= 0.05)")
    assert worst_haar <= 1e-10
    assert lneg8 <= 0.05
    assert l5 >= 0.9


# ---------------------------------------------------------------------
# every occupied cell of the sixth iterate lies inside the support ball


def test_support_radius_bound(set1_mask):
    a = IntMatrix(MIXING_A)
    bound = support_bound(set1_mask, a)
    phi = iterate(set1_mask, a, k_max=6, eps=0.0).phi
    num, den = inv_pow_numerator(a, 6)
    corners = (np.array(sorted(phi.values)) @ np.array(num.entries).T) / den
    far_corner = float(np.max(np.linalg.norm(corners, axis=1)))
    cell_diam = operator_norm_inv_pow(a, 6) * math.sqrt(3.0)
    reach = far_corner + cell_diam
    ok = math.isfinite(bound.radius) and reach <= bound.radius
    _line("support radius bound", ok,
          f"radius {bound.radius:.4f}, farthest cell {reach:.4f}, "
          f"{len(phi.values)} cells")
    assert math.isfinite(bound.radius)
    assert reach <= bound.radius


# ---------------------------------------------------------------------
# the transform of a finite iterate factors into the mask product times
# the rescaled cube transform


def test_transform_factorization(set1_mask):
    a = IntMatrix(MIXING_A)
    phi = iterate(set1_mask, a, k_max=5, eps=0.0).phi
    num, den = inv_pow_numerator(a, 5)
    scale = np.array(num.entries).T / den
    rng = np.random.default_rng(0)
    worst = 0.0
    for xi in rng.uniform(-math.pi, math.pi, size=(100, 3)):
        lhs = fourier_transform(phi, xi)
        rhs = eval_g(set1_mask, a, xi, 5) * cube_transform(scale @ xi)
        worst = max(worst, abs(lhs - rhs))
    ok = worst < 1e-8
    _line("transform factorization", ok, f"max error {worst:.3e}")
    assert worst < 1e-8


# ---------------------------------------------------------------------
# randomized property sweeps: factorizations recompose exactly, and the
# coset classifier agrees with brute-force enumeration


def _random_chain(rng: random.Random, d: int, length: int) -> list:
    chain = []
    for _ in range(length):
        kind = rng.randrange(3)
        if d == 1 or kind == 1:
            chain.append(SignFlip(rng.randrange(1, d + 1)))
        elif kind == 0:
            i, j = rng.sample(range(1, d + 1), 2)
            chain.append(Swap(i, j))
        else:
            i, j = rng.sample(range(1, d + 1), 2)
            chain.append(Shear(i, j, rng.choice((-1, 1))))
    return chain


def test_factorization_round_trips():
    rng = random.Random(20260816)
    forms = ("shear-pivot", "swap-pivot", "elementary-chain")
    for trial in range(1000):
        d = rng.randrange(1, 5)
        chain = _random_chain(rng, d, rng.randrange(2, 11))
        doubled = rng.random() < 0.5
        if doubled:
            pos = rng.randrange(len(chain) + 1)
            chain.insert(pos, Dilate(rng.randrange(1, d + 1)))
        m = recompose(chain, d)
        if doubled:
            assert abs(det_exact(m)) == 2
            fact = det2_factorize(m)
            assert fact.recomposed() == m, (trial, m)
            shaped = fact.to_form(forms[trial % 3])
            assert shaped.recomposed() == m, (trial, m, shaped.form)
        else:
            assert abs(det_exact(m)) == 1
            factors = unimodular_factorize(m)
            assert recompose(factors, d) == m, (trial, m)
    _line("factorization round trips", True, "1000/1000 exact")


def test_coset_classifier_matches_enumeration():
    rng = random.Random(97)
    box = 4
    done = 0
    while done < 100:
        d = 2 if done % 2 == 0 else 3
        chain = _random_chain(rng, d, rng.randrange(1, 6))
        chain.insert(rng.randrange(len(chain) + 1),
                     Dilate(rng.randrange(1, d + 1)))
        a = recompose(chain, d)
        adj = a.adjugate()
        wbound = max(sum(abs(x) for x in row) for row in adj.entries)
        wbound = wbound * box // 2 + 1
        if wbound > 12:
            continue  # keep the enumeration window small
        grid = np.array(list(product(range(-wbound, wbound + 1), repeat=d)))
        reachable = {tuple(int(x) for x in v)
                     for v in grid @ np.array(a.entries).T}
        for v in product(range(-box, box + 1), repeat=d):
            expected = v in reachable
            got = coset_of(v, a) == CosetLabel.IN_LATTICE
            assert got == expected, (a.entries, v)
        done += 1
    _line("coset classifier vs enumeration", True, "100/100 matrices agree")
