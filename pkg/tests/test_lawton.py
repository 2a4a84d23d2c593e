import math
import unittest

import numpy as np
import pytest

from framelets.errors import PreconditionError
from framelets.lattice import IntMatrix
from framelets.lawton import (
    Mask,
    build_system,
    mark_verified,
    residual,
    solve,
    verify,
)
from framelets.partition import PartitionData

from conftest import SQRT2_HALF, table_mask
from published_filters import PUBLISHED_SET1, PUBLISHED_SET2

HAAR1 = PartitionData(
    A0=IntMatrix.from_rows([[2]]), A=IntMatrix.from_rows([[2]]),
    S=IntMatrix.identity(1), S_inv=IntMatrix.identity(1), ell=(1,), q=(1,),
)

MIXING_PD = PartitionData(
    A0=IntMatrix.from_rows([[-2, 1, -2], [1, 0, 0], [2, 0, 2]]),
    A=IntMatrix.from_rows([[-2, 1, -2], [1, 0, 0], [2, 0, 2]]),
    S=IntMatrix.identity(3), S_inv=IntMatrix.identity(3),
    ell=(0, 0, 1), q=(0, 0, 1),
)

BOX16 = tuple(
    (a, b, c) for a in range(4) for b in range(2) for c in range(2)
)


class TestSystemShape(unittest.TestCase):
    def test_sixteen_tap_system_is_12_by_16(self):
        system = build_system(BOX16, MIXING_PD)
        self.assertEqual(system.n_rows, 12)
        self.assertEqual(system.n_unknowns, 16)

    def test_two_tap_system_is_2_by_2(self):
        system = build_system(((0,), (1,)), HAAR1)
        self.assertEqual(system.n_rows, 2)
        self.assertEqual(system.n_unknowns, 2)

    def test_four_tap_system_has_one_orthogonality_row(self):
        # k=0 row + the one even-shift pair + normalization
        system = build_system(((0,), (1,), (2,), (3,)), HAAR1)
        self.assertEqual(system.n_rows, 3)
        self.assertEqual(system.n_unknowns, 4)

    def test_mask_canonical_order(self):
        m = Mask(dim=1, support=((3,), (0,)), coeffs=(4.0, 1.0))
        self.assertEqual(m.support, ((0,), (3,)))
        self.assertEqual(m.coeffs, (1.0, 4.0))

    def test_mask_guards(self):
        with self.assertRaises(PreconditionError):
            Mask(dim=1, support=((0,), (0,)), coeffs=(1.0, 2.0))
        with self.assertRaises(PreconditionError):
            Mask(dim=2, support=((0,),), coeffs=(1.0,))
        with self.assertRaises(PreconditionError):
            Mask(dim=1, support=((0,),), coeffs=(1.0, 2.0))

    def test_mask_helpers(self):
        m = Mask(dim=1, support=((-2,), (5,)), coeffs=(0.25, 0.75))
        self.assertEqual(m.degree_bound, 5)
        self.assertEqual(m.as_dict(), {(-2,): 0.25, (5,): 0.75})
        self.assertAlmostEqual(m.coeff_sum(), 1.0, places=15)


# -- residual values with hand-computed oracles -----------------------------


def test_residual_perturbed_two_tap():
    """On {0,1} the system is (sum of squares - 1, sum - sqrt2); perturbing
    the first coefficient by delta moves the rows by sqrt2*delta + delta^2
    and delta exactly."""
    delta = 0.01
    system = build_system(((0,), (1,)), HAAR1)
    m = Mask(dim=1, support=((0,), (1,)),
             coeffs=(SQRT2_HALF + delta, SQRT2_HALF))
    r = np.abs(residual(m, system))
    expected = {abs(math.sqrt(2) * delta + delta ** 2), abs(delta)}
    assert r.shape == (2,)
    for value in r:
        assert min(abs(value - e) for e in expected) < 1e-15


def test_residual_zero_mask_is_normalization_dominated():
    system = build_system(((0,), (1,)), HAAR1)
    m = Mask(dim=1, support=((0,), (1,)), coeffs=(0.0, 0.0))
    assert float(np.max(np.abs(residual(m, system)))) == pytest.approx(
        math.sqrt(2), abs=1e-15
    )


def test_residual_daubechies_four_tap():
    """The classical 4-tap orthogonal filter solves the dyadic system to
    machine precision -- sum sqrt2, unit energy, vanishing even-shift
    correlation all follow from the surd arithmetic."""
    s = math.sqrt(3.0)
    m = Mask(dim=1, support=((0,), (1,), (2,), (3,)),
             coeffs=tuple(c / (4 * math.sqrt(2)) for c in
                          (1 + s, 3 + s, 3 - s, 1 - s)))
    system = build_system(m.support, HAAR1)
    assert float(np.max(np.abs(residual(m, system)))) < 1e-15


def test_residual_published_sixteen_tap_filters():
    system = build_system(BOX16, MIXING_PD)
    for table in (PUBLISHED_SET1, PUBLISHED_SET2):
        m = table_mask(table)
        assert float(np.max(np.abs(residual(m, system)))) < 1e-12


def test_residual_requires_support_inside_system():
    system = build_system(((0,), (1,)), HAAR1)
    stray = Mask(dim=1, support=((0,), (2,)), coeffs=(1.0, 0.0))
    with pytest.raises(PreconditionError):
        residual(stray, system)


# -- the solver --------------------------------------------------------------


def test_solve_two_tap_finds_only_haar():
    system = build_system(((0,), (1,)), HAAR1)
    masks = solve(system, seed=0, restarts=16)
    assert len(masks) == 1
    for c in masks[0].coeffs:
        assert abs(c - SQRT2_HALF) < 1e-12
    assert masks[0].verified


def test_solve_reduced_cyclic_system(cyclic_a0):
    from framelets.partition import reduce

    pd = reduce(cyclic_a0)
    support = ((0, 0, 0), pd.ell)
    system = build_system(support, pd)
    masks = solve(system, seed=0, restarts=16)
    assert len(masks) == 1
    for c in masks[0].coeffs:
        assert abs(c - SQRT2_HALF) < 1e-12


def test_solve_is_deterministic():
    system = build_system(((0,), (1,)), HAAR1)
    a = solve(system, seed=3, restarts=8)
    b = solve(system, seed=3, restarts=8)
    assert [m.coeffs for m in a] == [m.coeffs for m in b]


def test_solve_four_tap_family_members_all_verify():
    # the 4-tap system is underdetermined; whatever representatives the
    # solver lands on must still satisfy every equation
    system = build_system(((0,), (1,), (2,), (3,)), HAAR1)
    masks = solve(system, seed=1, restarts=24)
    assert masks
    for m in masks:
        check = verify(m, HAAR1, tol=1e-9)
        assert check.passed, check.max_residual


def test_solve_reports_no_solution_for_impossible_support():
    # {0, 2} in dimension 1: the shift-2 row forces h0*h2 = 0, which
    # contradicts unit energy plus the sqrt2 sum
    system = build_system(((0,), (2,)), HAAR1)
    assert solve(system, seed=0, restarts=16) == []


def test_verify_and_mark_verified(set1_mask, mixing_pd):
    check = verify(set1_mask, mixing_pd, tol=1e-9)
    assert check.passed
    assert check.max_residual < 1e-12

    stamped = mark_verified(set1_mask, mixing_pd, tol=1e-9)
    assert stamped.verified
    assert stamped.verified_tol == 1e-9
    assert stamped.coeffs == set1_mask.coeffs
    assert not set1_mask.verified  # original untouched


def test_verify_fails_for_broken_mask(set1_mask, mixing_pd):
    coeffs = list(set1_mask.coeffs)
    coeffs[5] += 0.01
    broken = Mask(dim=3, support=set1_mask.support, coeffs=tuple(coeffs))
    check = verify(broken, mixing_pd, tol=1e-9)
    assert not check.passed
    assert check.max_residual > 1e-4


if __name__ == "__main__":
    unittest.main()
