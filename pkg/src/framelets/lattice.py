"""Exact integer matrix algebra and elementary factorizations.

Everything in this module is exact: matrices are immutable tuples of
Python ints, determinants come from fraction-free elimination, and the
factorization routines emit sequences of elementary column operations
(swaps, sign flips, unit shears, single-column dilations) whose product
reproduces the input matrix bit for bit.  Floating point appears only in
the expansiveness test, which is explicitly approximate.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from .errors import PreconditionError, InvariantError

Vec = tuple[int, ...]


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class IntMatrix:
    """A square integer matrix stored as a tuple of row tuples."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        d = len(self.entries)
        if d == 0:
            raise PreconditionError("empty matrix")
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        for row in rows:
            if len(row) != d:
                raise PreconditionError("matrix must be square")
        object.__setattr__(self, "entries", rows)

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return IntMatrix(tuple(tuple(int(x) for x in row) for row in rows))

    @staticmethod
    def identity(d: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(d))
                               for i in range(d)))

    # -- basic queries ------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def det(self) -> int:
        return det_exact(self)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)))

    def to_numpy(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def to_float(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    # -- exact arithmetic ----------------------------------------------

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.dim != other.dim:
            raise PreconditionError("dimension mismatch")
        bt = other.transpose().entries
        return IntMatrix(tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in bt)
            for row in self.entries))

    def matvec(self, v: Vec) -> Vec:
        if len(v) != self.dim:
            raise PreconditionError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def pow(self, k: int) -> "IntMatrix":
        """Non-negative integer power, exact."""
        if k < 0:
            raise PreconditionError("negative power; use inverse_numerator")
        out = IntMatrix.identity(self.dim)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def adjugate(self) -> "IntMatrix":
        """Classical adjugate, so that ``A @ adj(A) == det(A) * I``."""
        d = self.dim
        if d == 1:
            return IntMatrix(((1,),))
        cof = []
        for i in range(d):
            row = []
            for j in range(d):
                minor = [[self.entries[r][c] for c in range(d) if c != j]
                         for r in range(d) if r != i]
                sign = -1 if (i + j) % 2 else 1
                row.append(sign * det_exact(IntMatrix.from_rows(minor)))
            cof.append(tuple(row))
        return IntMatrix(tuple(cof)).transpose()

    def inverse_numerator(self) -> tuple["IntMatrix", int]:
        """Return ``(N, q)`` with ``A^-1 == N / q`` exactly and ``q == det``.

        Raises on a singular input.
        """
        q = self.det()
        if q == 0:
            raise PreconditionError("singular matrix has no inverse")
        return self.adjugate(), q

    def solve_exact(self, v: Vec) -> tuple[Fraction, ...]:
        """Solve ``A x = v`` over the rationals."""
        n, q = self.inverse_numerator()
        return tuple(Fraction(c, q) for c in n.matvec(v))

    def __str__(self) -> str:  # pragma: no cover - debugging aid
        return "\n".join(" ".join(f"{x:4d}" for x in row) for row in self.entries)


def det_exact(m: IntMatrix) -> int:
    """Determinant by Bareiss fraction-free elimination (exact)."""
    d = m.dim
    a = [list(row) for row in m.entries]
    sign = 1
    prev = 1
    for k in range(d - 1):
        if a[k][k] == 0:
            for r in range(k + 1, d):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, d):
            for j in range(k + 1, d):
                # Bareiss update: every division here is exact.
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[d - 1][d - 1]


# ---------------------------------------------------------------------------
# elementary factors
#
# Factors act by *right* multiplication, i.e. as column operations:
#   Swap(i, j)        -- exchange columns i and j
#   SignFlip(p)       -- negate column p
#   Shear(i, j, +1)   -- add column i to column j        (I + Delta_ij)
#   Shear(i, j, -1)   -- subtract column i from column j (I - Delta_ij)
#   Dilate(p)         -- double column p                 (I + Delta_pp)
# All indices are 1-based.  Dilate is the only non-unimodular factor.


@dataclass(frozen=True)
class Swap:
    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i == self.j or self.i < 1 or self.j < 1:
            raise PreconditionError("swap needs two distinct 1-based indices")


@dataclass(frozen=True)
class SignFlip:
    p: int

    def __post_init__(self) -> None:
        if self.p < 1:
            raise PreconditionError("1-based index required")


@dataclass(frozen=True)
class Shear:
    i: int
    j: int
    sign: int

    def __post_init__(self) -> None:
        if self.i == self.j:
            raise PreconditionError("shear requires i != j")
        if self.i < 1 or self.j < 1:
            raise PreconditionError("1-based indices required")
        if self.sign not in (1, -1):
            raise PreconditionError("shear sign must be +1 or -1")


@dataclass(frozen=True)
class Dilate:
    p: int

    def __post_init__(self) -> None:
        if self.p < 1:
            raise PreconditionError("1-based index required")


ElementaryFactor = Union[Swap, SignFlip, Shear, Dilate]


def factor_matrix(f: ElementaryFactor, d: int) -> IntMatrix:
    """The d x d matrix realizing factor ``f``."""
    rows = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    if isinstance(f, Swap):
        i, j = f.i - 1, f.j - 1
        rows[i][i] = rows[j][j] = 0
        rows[i][j] = rows[j][i] = 1
    elif isinstance(f, SignFlip):
        rows[f.p - 1][f.p - 1] = -1
    elif isinstance(f, Shear):
        rows[f.i - 1][f.j - 1] = f.sign
    elif isinstance(f, Dilate):
        rows[f.p - 1][f.p - 1] = 2
    else:
        raise PreconditionError(f"unknown factor {f!r}")
    return IntMatrix.from_rows(rows)


def factor_inverse(f: ElementaryFactor) -> ElementaryFactor:
    """Inverse of a unimodular factor (Dilate has no integer inverse)."""
    if isinstance(f, (Swap, SignFlip)):
        return f
    if isinstance(f, Shear):
        return Shear(f.i, f.j, -f.sign)
    raise PreconditionError("dilation is not invertible over the integers")


def apply_factor_right(m: IntMatrix, f: ElementaryFactor) -> IntMatrix:
    """Apply one column operation: returns ``m @ factor_matrix(f)``."""
    d = m.dim
    cols = [list(col) for col in zip(*m.entries)]
    if isinstance(f, Swap):
        _chk_idx(d, f.i, f.j)
        cols[f.i - 1], cols[f.j - 1] = cols[f.j - 1], cols[f.i - 1]
    elif isinstance(f, SignFlip):
        _chk_idx(d, f.p)
        cols[f.p - 1] = [-x for x in cols[f.p - 1]]
    elif isinstance(f, Shear):
        _chk_idx(d, f.i, f.j)
        src, dst = cols[f.i - 1], cols[f.j - 1]
        cols[f.j - 1] = [x + f.sign * y for x, y in zip(dst, src)]
    elif isinstance(f, Dilate):
        _chk_idx(d, f.p)
        cols[f.p - 1] = [2 * x for x in cols[f.p - 1]]
    else:
        raise PreconditionError(f"unknown factor {f!r}")
    return IntMatrix(tuple(zip(*cols)))


def _chk_idx(d: int, *idx: int) -> None:
    for i in idx:
        if not 1 <= i <= d:
            raise PreconditionError(f"factor index {i} out of range for dim {d}")


def recompose(factors: Iterable[ElementaryFactor], d: int) -> IntMatrix:
    """Product of the factor matrices, in the given (left to right) order."""
    out = IntMatrix.identity(d)
    for f in factors:
        out = apply_factor_right(out, f)
    return out


# ---------------------------------------------------------------------------
# expansiveness


def is_expansive(m: IntMatrix, tol: float = 1e-9) -> bool:
    """True when every eigenvalue has modulus > 1.

    A modulus within ``tol`` of 1 is treated as indeterminate and the
    matrix is reported as not expansive; exact lattice reasoning never
    depends on this test.
    """
    return expansiveness(m, tol) == "expansive"


def expansiveness(m: IntMatrix, tol: float = 1e-9) -> str:
    """Classify as ``"expansive"``, ``"not_expansive"`` or ``"indeterminate"``."""
    # +/-1 eigenvalues are decidable exactly for integer matrices, and
    # they are the common way a test matrix fails to be expansive.
    ident = IntMatrix.identity(m.dim)
    for sign in (1, -1):
        shifted = IntMatrix(tuple(
            tuple(m.entries[i][j] - sign * ident.entries[i][j]
                  for j in range(m.dim))
            for i in range(m.dim)
        ))
        if det_exact(shifted) == 0:
            return "not_expansive"
    mods = np.abs(np.linalg.eigvals(m.to_float()))
    if np.any(np.abs(mods - 1.0) <= tol):
        return "indeterminate"
    return "expansive" if bool(np.all(mods > 1.0)) else "not_expansive"


# ---------------------------------------------------------------------------
# LV factorization: B = L * (product of unimodular factors)
#
# Column-Euclid on each row in turn: flip signs so the working row is
# non-negative, swap the smallest positive entry into the pivot column
# (ties resolved toward the lowest column index), subtract the pivot
# column from the others until the row is (positive, 0, ..., 0), then
# recurse on the trailing block.  Recording the operations f1..fm applied
# on the right gives  B f1...fm = L, hence  B = L fm^-1 ... f1^-1.


def lv_factorize(b: IntMatrix) -> tuple[IntMatrix, list[ElementaryFactor]]:
    """Factor ``b = L @ recompose(v)`` with L lower triangular, diag > 0.

    Returns ``(L, v)`` where ``v`` is a list of unimodular factors.
    Raises :class:`PreconditionError` when ``b`` is singular.
    """
    d = b.dim
    work = b
    applied: list[ElementaryFactor] = []

    def do(f: ElementaryFactor) -> None:
        nonlocal work
        work = apply_factor_right(work, f)
        applied.append(f)

    for row in range(d):
        for j in range(row, d):
            if work.entries[row][j] < 0:
                do(SignFlip(j + 1))
        while True:
            vals = work.entries[row]
            pos = [j for j in range(row, d) if vals[j] > 0]
            if not pos:
                raise PreconditionError("singular matrix cannot be LV-factorized")
            jmin = min(pos, key=lambda j: (vals[j], j))
            if jmin != row:
                do(Swap(row + 1, jmin + 1))
            pivot = work.entries[row][row]
            rest = [j for j in range(row + 1, d) if work.entries[row][j] > 0]
            if not rest:
                break
            for j in rest:
                q = work.entries[row][j] // pivot
                for _ in range(q):
                    do(Shear(row + 1, j + 1, -1))

    for i in range(d):
        if work.entries[i][i] <= 0:
            raise InvariantError("LV pivot not positive")
        for j in range(i + 1, d):
            if work.entries[i][j] != 0:
                raise InvariantError("LV result not lower triangular")

    v = [factor_inverse(f) for f in reversed(applied)]
    return work, v


def unimodular_factorize(u: IntMatrix) -> list[ElementaryFactor]:
    """Write a matrix of determinant +/-1 as a product of group factors.

    The result contains swaps, sign flips and unit shears only; no
    dilation ever appears.  ``recompose(result, d) == u`` exactly.
    """
    if abs(det_exact(u)) != 1:
        raise PreconditionError("matrix is not unimodular")
    lower, v = lv_factorize(u)
    # |det| = 1 with a positive diagonal forces a unit diagonal, so the
    # lower triangle clears by unit column shears.  Work rows bottom-up:
    # when row i is processed, columns > i are already standard basis
    # vectors, so column i itself is e_i and subtracting it only touches
    # row i.
    work = lower
    applied: list[ElementaryFactor] = []
    for i in range(u.dim - 1, 0, -1):
        for j in range(i):
            c = work.entries[i][j]
            step = Shear(i + 1, j + 1, -1 if c > 0 else 1)
            for _ in range(abs(c)):
                work = apply_factor_right(work, step)
                applied.append(step)
    if work != IntMatrix.identity(u.dim):
        raise InvariantError("triangular clearing failed")
    return [factor_inverse(f) for f in reversed(applied)] + v


# ---------------------------------------------------------------------------
# determinant +/-2 factorization


@dataclass(frozen=True)
class Det2Factorization:
    """One factorization shape ``matrix == recompose(left + [dilate] + right)``.

    ``p`` is the pivot position (1-based) where the doubled column lives
    before the pivot is moved, and ``r`` holds the 0/1 parity flags of the
    pivot row at positions 1..p-1.  ``form`` is one of ``"shear-pivot"``
    (dilation at p, shears below the diagonal of the left factor),
    ``"swap-pivot"`` (dilation moved to the last coordinate by a swap) or
    ``"elementary-chain"`` (fully flattened factor list).
    """

    matrix: IntMatrix
    p: int
    r: tuple[int, ...]
    left: tuple[ElementaryFactor, ...]
    dilate: Dilate
    right: tuple[ElementaryFactor, ...]
    form: str

    def factors(self) -> tuple[ElementaryFactor, ...]:
        return self.left + (self.dilate,) + self.right

    def recomposed(self) -> IntMatrix:
        return recompose(self.factors(), self.matrix.dim)

    def to_form(self, form: str) -> "Det2Factorization":
        if form == self.form:
            return self
        return _det2_forms(self.matrix, self.p, self.r, self._v_list)[form]

    @property
    def _v_list(self) -> tuple[ElementaryFactor, ...]:
        # the unimodular tail common to every shape
        if self.form == "shear-pivot":
            return self.right
        d = self.matrix.dim
        if self.p != d:
            return self.right[1:]
        return self.right


def det2_factorize(b: IntMatrix) -> Det2Factorization:
    """Factor a matrix with ``|det| == 2`` around a single dilation.

    Returns the ``"swap-pivot"`` shape by default; the other two shapes
    are reachable through :meth:`Det2Factorization.to_form`, and all
    three recompose to ``b`` exactly.
    """
    if abs(det_exact(b)) != 2:
        raise PreconditionError("matrix must have determinant +/-2")
    d = b.dim
    lower, v = lv_factorize(b)

    diag = [lower.entries[i][i] for i in range(d)]
    twos = [i for i, x in enumerate(diag) if x == 2]
    if len(twos) != 1 or any(x != 1 for i, x in enumerate(diag) if i not in twos):
        raise InvariantError("diagonal of LV factor must be ones and a single 2")
    p = twos[0] + 1  # 1-based pivot

    # Clear the sub-diagonal of every row except the pivot row, bottom-up.
    # Column i equals e_i at the moment row i is processed (rows below are
    # already standard), so the shears touch row i and, possibly, row p --
    # the pivot row absorbs whatever it absorbs and is reduced afterwards.
    work = lower
    applied: list[ElementaryFactor] = []
    for i in range(d - 1, 0, -1):
        if i == p - 1:
            continue
        for j in range(i):
            c = work.entries[i][j]
            step = Shear(i + 1, j + 1, -1 if c > 0 else 1)
            for _ in range(abs(c)):
                work = apply_factor_right(work, step)
                applied.append(step)

    # Pivot row is now (c_1 ... c_{p-1}, 2, 0 ... 0).  Column p equals
    # 2 e_p, so subtracting half-multiples of it reduces each c_j to its
    # parity bit without disturbing the other rows.
    r_flags = []
    for j in range(p - 1):
        c = work.entries[p - 1][j]
        rj = c & 1
        mj = (c - rj) >> 1
        r_flags.append(rj)
        step = Shear(p, j + 1, -1 if mj > 0 else 1)
        for _ in range(abs(mj)):
            work = apply_factor_right(work, step)
            applied.append(step)

    r = tuple(r_flags)
    expect = recompose([Shear(p, j + 1, 1) for j in range(p - 1) if r[j]], d)
    expect = apply_factor_right(expect, Dilate(p))
    if work != expect:
        raise InvariantError("pivot-row reduction failed")

    v_full = tuple(factor_inverse(f) for f in reversed(applied)) + tuple(v)
    out = _det2_forms(b, p, r, v_full)["swap-pivot"]
    return out


def _det2_forms(b: IntMatrix, p: int, r: tuple[int, ...],
                v: tuple[ElementaryFactor, ...]) -> dict[str, Det2Factorization]:
    d = b.dim
    shear_left = tuple(Shear(p, j + 1, 1) for j in range(p - 1) if r[j])
    forms: dict[str, Det2Factorization] = {}
    forms["shear-pivot"] = Det2Factorization(
        matrix=b, p=p, r=r, left=shear_left, dilate=Dilate(p), right=v,
        form="shear-pivot")

    # Conjugating by the (p,d) swap turns the left factor's shears into
    # shears targeting row d and moves the dilation to the last slot:
    # I_pd (I + sum r_j Delta_pj) I_pd = I + sum r_j Delta_dj and
    # I_pd D_p I_pd = D_d, hence B = I_pd M D_d (I_dp V).
    if p == d:
        swap_left: tuple[ElementaryFactor, ...] = tuple(
            Shear(d, j + 1, 1) for j in range(p - 1) if r[j])
        swap_right: tuple[ElementaryFactor, ...] = v
    else:
        swap_left = (Swap(p, d),) + tuple(
            Shear(d, j + 1, 1) for j in range(p - 1) if r[j])
        swap_right = (Swap(d, p),) + v
    forms["swap-pivot"] = Det2Factorization(
        matrix=b, p=p, r=r, left=swap_left, dilate=Dilate(d),
        right=swap_right, form="swap-pivot")
    forms["elementary-chain"] = Det2Factorization(
        matrix=b, p=p, r=r, left=swap_left, dilate=Dilate(d),
        right=swap_right, form="elementary-chain")

    for fz in forms.values():
        if fz.recomposed() != b:
            raise InvariantError(f"recomposition mismatch in form {fz.form!r}")
    return forms


# ---------------------------------------------------------------------------
# misc numeric helpers shared by the analytic modules


@functools.lru_cache(maxsize=None)
def _cached_pow(entries: tuple[tuple[int, ...], ...], k: int) -> IntMatrix:
    return IntMatrix(entries).pow(k)


def int_pow(m: IntMatrix, k: int) -> IntMatrix:
    """Memoized exact non-negative power."""
    return _cached_pow(m.entries, k)


def inv_pow_numerator(m: IntMatrix, k: int) -> tuple[IntMatrix, int]:
    """Exact ``m^-k`` as ``(N, 2**k)`` for ``|det m| == 2``.

    For determinant +/-2 the adjugate gives ``2 m^-1`` as an integer
    matrix, so ``m^-k == (2 m^-1)^k / 2^k`` with an integer numerator.
    """
    det = det_exact(m)
    if abs(det) != 2:
        raise PreconditionError("inverse powers need |det| == 2")
    adj = m.adjugate()
    if det < 0:
        adj = IntMatrix(tuple(tuple(-x for x in row) for row in adj.entries))
    # now adj == 2 m^-1 exactly
    return int_pow(adj, k), 1 << k


def spectral_norm(m: IntMatrix) -> float:
    return float(np.linalg.norm(m.to_float(), 2))


def operator_norm_inv_pow(m: IntMatrix, k: int) -> float:
    """Float value of ``||m^-k||_2`` computed from the exact numerator."""
    n, q = inv_pow_numerator(m, k)
    return float(np.linalg.norm(n.to_float() / q, 2))


def floor_div_pow2(x: int, k: int) -> int:
    """Floor of ``x / 2**k`` (Python's ``>>`` already floors)."""
    return x >> k if k >= 0 else x << (-k)


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vnorm(a: Vec) -> float:
    return math.sqrt(sum(x * x for x in a))
