"""Exact integer-matrix machinery: determinants, factors, powers."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from framelets.errors import PreconditionError
from framelets.lattice import (
    Dilate,
    IntMatrix,
    Shear,
    SignFlip,
    Swap,
    apply_factor_right,
    det2_factorize,
    det_exact,
    expansiveness,
    factor_inverse,
    factor_matrix,
    floor_div_pow2,
    int_pow,
    inv_pow_numerator,
    is_expansive,
    lv_factorize,
    operator_norm_inv_pow,
    recompose,
    spectral_norm,
    unimodular_factorize,
)


def cofactor_det(rows):
    """Textbook Laplace expansion, the independent reference for d <= 4."""
    d = len(rows)
    if d == 1:
        return rows[0][0]
    total = 0
    for j in range(d):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


small_matrices = st.integers(1, 4).flatmap(
    lambda d: st.lists(
        st.lists(st.integers(-7, 7), min_size=d, max_size=d),
        min_size=d, max_size=d,
    )
)


@given(small_matrices)
def test_det_exact_matches_cofactor_expansion(rows):
    assert det_exact(IntMatrix.from_rows(rows)) == cofactor_det(rows)


@given(small_matrices, small_matrices)
def test_det_multiplicative(r1, r2):
    if len(r1) != len(r2):
        return
    a, b = IntMatrix.from_rows(r1), IntMatrix.from_rows(r2)
    assert det_exact(a @ b) == det_exact(a) * det_exact(b)


@given(small_matrices)
def test_adjugate_identity(rows):
    a = IntMatrix.from_rows(rows)
    d = a.dim
    det = det_exact(a)
    prod = a @ a.adjugate()
    assert prod == IntMatrix.from_rows(
        [[det if i == j else 0 for j in range(d)] for i in range(d)]
    )


def test_matrix_construction_guards():
    with pytest.raises(PreconditionError):
        IntMatrix.from_rows([])
    with pytest.raises(PreconditionError):
        IntMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(PreconditionError):
        IntMatrix.from_rows([[1, 2, 3]])


def test_solve_exact_rational():
    a = IntMatrix.from_rows([[0, 1, 0], [0, 0, 1], [2, 0, 0]])
    x = a.solve_exact((1, 0, 0))
    assert x == (Fraction(0), Fraction(1), Fraction(0))
    y = a.solve_exact((0, 0, 1))
    assert y == (Fraction(1, 2), Fraction(0), Fraction(0))


# -- elementary factors ----------------------------------------------------


FACTORS = [Swap(1, 3), SignFlip(2), Shear(1, 2, 1), Shear(3, 1, -1), Dilate(2)]


@pytest.mark.parametrize("f", FACTORS)
def test_apply_factor_right_is_matrix_product(f):
    a = IntMatrix.from_rows([[2, -1, 0], [3, 5, 1], [0, 7, -2]])
    assert apply_factor_right(a, f) == a @ factor_matrix(f, 3)


@pytest.mark.parametrize("f", FACTORS[:-1])
def test_factor_inverse(f):
    m = factor_matrix(f, 3) @ factor_matrix(factor_inverse(f), 3)
    assert m == IntMatrix.identity(3)


def test_dilate_has_no_integer_inverse():
    with pytest.raises(PreconditionError):
        factor_inverse(Dilate(1))


def factor_chains(d):
    one = st.one_of(
        st.tuples(st.sampled_from(range(1, d + 1)),
                  st.sampled_from(range(1, d + 1))).filter(
            lambda ij: ij[0] != ij[1]
        ).map(lambda ij: Swap(*ij)),
        st.sampled_from(range(1, d + 1)).map(SignFlip),
        st.tuples(st.sampled_from(range(1, d + 1)),
                  st.sampled_from(range(1, d + 1)),
                  st.sampled_from((-1, 1))).filter(
            lambda t: t[0] != t[1]
        ).map(lambda t: Shear(*t)),
    )
    return st.lists(one, max_size=10)


@settings(max_examples=150)
@given(st.integers(2, 4).flatmap(lambda d: st.tuples(st.just(d), factor_chains(d))))
def test_unimodular_factorize_round_trip(d_chain):
    d, chain = d_chain
    u = recompose(chain, d)
    assert abs(det_exact(u)) == 1
    assert recompose(unimodular_factorize(u), d) == u


@settings(max_examples=150)
@given(st.integers(2, 4).flatmap(
    lambda d: st.tuples(st.just(d), factor_chains(d), factor_chains(d),
                        st.sampled_from(range(1, d + 1)))
))
def test_det2_factorize_round_trip_all_forms(args):
    d, left, right, p = args
    b = recompose(list(left) + [Dilate(p)] + list(right), d)
    assert abs(det_exact(b)) == 2
    fact = det2_factorize(b)
    assert fact.recomposed() == b
    for form in ("shear-pivot", "swap-pivot", "elementary-chain"):
        other = fact.to_form(form)
        assert other.form == form
        assert other.recomposed() == b


def test_det2_factorize_rejects_wrong_det():
    with pytest.raises(PreconditionError):
        det2_factorize(IntMatrix.identity(2))
    with pytest.raises(PreconditionError):
        det2_factorize(IntMatrix.from_rows([[2, 0], [0, 2]]))


@settings(max_examples=100)
@given(st.integers(2, 4).flatmap(lambda d: st.tuples(st.just(d), factor_chains(d))))
def test_lv_factorize_shape(d_chain):
    d, chain = d_chain
    b = recompose(list(chain) + [Dilate(1)], d)
    lower, v = lv_factorize(b)
    assert b == lower @ recompose(v, d)
    for i in range(d):
        assert lower.entries[i][i] > 0
        for j in range(i + 1, d):
            assert lower.entries[i][j] == 0


def test_lv_factorize_rejects_singular():
    with pytest.raises(PreconditionError):
        lv_factorize(IntMatrix.from_rows([[1, 1], [1, 1]]))


# -- expansiveness ---------------------------------------------------------


def test_expansiveness_classification():
    assert expansiveness(IntMatrix.from_rows([[2, 0], [0, 2]])) == "expansive"
    assert expansiveness(IntMatrix.identity(3)) == "not_expansive"
    # unit eigenvalue on an otherwise doubling matrix
    assert expansiveness(
        IntMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    ) == "not_expansive"
    assert expansiveness(IntMatrix.from_rows([[0, 1], [1, 0]])) == "not_expansive"
    assert is_expansive(IntMatrix.from_rows([[0, 1, 0], [0, 0, 1], [2, 0, 0]]))
    assert is_expansive(IntMatrix.from_rows([[-2, 1, -2], [1, 0, 0], [2, 0, 2]]))
    # |det| = 2 but one eigenvalue sits on the unit circle
    assert not is_expansive(IntMatrix.from_rows([[1, 1], [0, 2]]))


# -- exact powers ----------------------------------------------------------


def test_int_pow():
    a = IntMatrix.from_rows([[0, 1, 0], [0, 0, 1], [2, 0, 0]])
    assert int_pow(a, 0) == IntMatrix.identity(3)
    assert int_pow(a, 3) == IntMatrix.from_rows([[2, 0, 0], [0, 2, 0], [0, 0, 2]])


@pytest.mark.parametrize("rows", [
    [[0, 1, 0], [0, 0, 1], [2, 0, 0]],
    [[-2, 1, -2], [1, 0, 0], [2, 0, 2]],
    [[2]],
    [[0, 2], [1, 0]],
])
@pytest.mark.parametrize("k", [0, 1, 2, 5])
def test_inv_pow_numerator_inverts_exactly(rows, k):
    a = IntMatrix.from_rows(rows)
    num, den = inv_pow_numerator(a, k)
    assert den == 2 ** k
    d = a.dim
    expected = IntMatrix.from_rows(
        [[den if i == j else 0 for j in range(d)] for i in range(d)]
    )
    assert num @ int_pow(a, k) == expected
    assert int_pow(a, k) @ num == expected


def test_inv_pow_numerator_needs_det2():
    with pytest.raises(PreconditionError):
        inv_pow_numerator(IntMatrix.identity(2), 1)


def test_operator_norms():
    a = IntMatrix.from_rows([[2]])
    assert spectral_norm(a) == pytest.approx(2.0)
    assert operator_norm_inv_pow(a, 3) == pytest.approx(0.125)
    b = IntMatrix.from_rows([[-2, 1, -2], [1, 0, 0], [2, 0, 2]])
    # inverse powers of an expansive matrix shrink (the slow eigenvalue
    # keeps the per-step ratio close to 1, hence the long horizon)
    assert operator_norm_inv_pow(b, 30) < 0.2 * operator_norm_inv_pow(b, 1)


@given(st.integers(-10**9, 10**9), st.integers(0, 40))
def test_floor_div_pow2_matches_fraction_floor(x, k):
    assert floor_div_pow2(x, k) == math.floor(Fraction(x, 2 ** k))


def test_spectral_norm_agrees_with_numpy():
    a = IntMatrix.from_rows([[3, 1], [0, 2]])
    assert spectral_norm(a) == pytest.approx(
        np.linalg.norm(np.array([[3.0, 1.0], [0.0, 2.0]]), 2)
    )
