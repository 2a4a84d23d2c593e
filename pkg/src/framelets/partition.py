"""Lattice partition data for expansive integer dilations of determinant +/-2.

Any such dilation A0 is integrally similar to a matrix A whose lattice
A Z^d splits the integer lattice into two cosets distinguished by a
parity functional: there are vectors ``ell`` (a coset representative)
and ``q`` (a 0/1 parity pattern) with

    Z^d = A Z^d  (disjoint union)  ell + A Z^d,
    q . v even  <=>  v in A Z^d,

plus the compatibility laws used by the frame telescoping argument.
:func:`reduce` constructs the similarity; :func:`verify_partition`
checks all of the above on a finite window by brute force.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product

from .errors import PreconditionError, InvariantError
from .lattice import (
    IntMatrix,
    Shear,
    Vec,
    det2_factorize,
    det_exact,
    factor_inverse,
    recompose,
    vneg,
    vsub,
)


class CosetLabel(str, Enum):
    IN_LATTICE = "InAZd"
    SHIFTED = "InShiftedCoset"


@dataclass(frozen=True)
class PartitionData:
    """The tuple ``(A0, A, S, ell, q)`` with ``S^-1 A S == A0``."""

    A0: IntMatrix
    A: IntMatrix
    S: IntMatrix
    S_inv: IntMatrix
    ell: Vec
    q: Vec

    def __post_init__(self) -> None:
        d = self.A0.dim
        for m in (self.A, self.S, self.S_inv):
            if m.dim != d:
                raise PreconditionError("dimension mismatch in partition data")
        if len(self.ell) != d or len(self.q) != d:
            raise PreconditionError("vector length mismatch in partition data")
        if self.S @ self.S_inv != IntMatrix.identity(d):
            raise PreconditionError("S_inv is not the inverse of S")
        if self.S_inv @ self.A @ self.S != self.A0:
            raise PreconditionError("S does not conjugate A to A0")

    @property
    def dim(self) -> int:
        return self.A0.dim


@dataclass(frozen=True)
class PartitionReport:
    passed: bool
    violations: tuple[str, ...]


def in_dilated_lattice(a: IntMatrix, v: Vec) -> bool:
    """Exact membership test for ``v in A Z^d`` when ``|det A| == 2``.

    Uses the adjugate: ``A^-1 v == adj(A) v / det``, so integrality is a
    per-coordinate divisibility check on integers.
    """
    det = det_exact(a)
    if det == 0:
        raise PreconditionError("lattice test needs a nonsingular matrix")
    w = a.adjugate().matvec(v)
    return all(x % det == 0 for x in w)


def coset_of(v: Vec, a: IntMatrix) -> CosetLabel:
    """Which of the two cosets of ``A Z^d`` the vector lies in."""
    if abs(det_exact(a)) != 2:
        raise PreconditionError("coset split requires |det| == 2")
    return CosetLabel.IN_LATTICE if in_dilated_lattice(a, v) else CosetLabel.SHIFTED


def _window(d: int, radius: int):
    return product(range(-radius, radius + 1), repeat=d)


def reduce(a0: IntMatrix) -> PartitionData:
    """Build the full partition tuple for an integer matrix of det +/-2.

    The construction runs three factorization passes:

    1. ``A0 = W1 D_d U1`` (swap-pivot shape) and conjugation by ``U1``
       turns the left factor into the new tail: ``C1 = U1 A0 U1^-1``.
    2. ``C1 = W2 D_d U2`` likewise, after which ``C2 = W2^-1 C1 W2``
       has the shape ``D_d U2 W2``.
    3. A final shear conjugation ``X`` (identity when the second pivot
       already sits at the last coordinate) produces ``A = X C2 X^-1``
       whose own factorization pivot ``p`` yields ``ell = e_p`` and
       ``q = e_p + sum of e_j`` over the parity flags.

    Raises :class:`PreconditionError` when ``|det| != 2`` and
    :class:`InvariantError` if any internal recomposition check fails.
    """
    d = a0.dim
    if abs(det_exact(a0)) != 2:
        raise PreconditionError("reduction requires determinant +/-2")

    f1 = det2_factorize(a0)
    u1 = recompose(f1.right, d)
    u1_inv = recompose([factor_inverse(g) for g in reversed(f1.right)], d)
    c1 = u1 @ a0 @ u1_inv

    f2 = det2_factorize(c1)
    q_piv = f2.p
    w2 = recompose(f2.left, d)
    w2_inv = recompose([factor_inverse(g) for g in reversed(f2.left)], d)
    c2 = w2_inv @ c1 @ w2

    if q_piv == d:
        x = IntMatrix.identity(d)
        x_inv = x
    else:
        x = recompose([Shear(d, q_piv, -1)], d)
        x_inv = recompose([Shear(d, q_piv, 1)], d)
    a = x @ c2 @ x_inv

    s = x @ w2_inv @ u1
    s_inv = u1_inv @ w2 @ x_inv
    if s_inv @ a @ s != a0:
        raise InvariantError("similarity accumulation failed")
    if abs(det_exact(s)) != 1:
        raise InvariantError("similarity matrix is not unimodular")

    f3 = det2_factorize(a)
    p0 = f3.p
    ell = tuple(1 if i == p0 - 1 else 0 for i in range(d))
    q = tuple(1 if (i == p0 - 1 or (i < p0 - 1 and f3.r[i])) else 0
              for i in range(d))

    pd = PartitionData(A0=a0, A=a, S=s, S_inv=s_inv, ell=ell, q=q)
    report = verify_partition(pd, radius=2)
    if not report.passed:
        raise InvariantError(
            "constructed partition failed verification: "
            + "; ".join(report.violations[:4]))
    return pd


def verify_partition(pd: PartitionData, radius: int = 3) -> PartitionReport:
    """Brute-force check of the partition laws on ``[-radius, radius]^d``.

    Collects human-readable violation strings instead of raising, so a
    deliberately broken tuple can be inspected.
    """
    d = pd.dim
    a = pd.A
    violations: list[str] = []

    det = det_exact(a)
    if abs(det) != 2:
        violations.append(f"|det A| = {abs(det)}, expected 2")
        return PartitionReport(False, tuple(violations))
    if abs(det_exact(pd.S)) != 1:
        violations.append("S is not unimodular")

    # Membership in A Z^d via the adjugate, computed once: with
    # K = 2 A^-1 integer, v in A Z^d iff K v is even coordinatewise.
    k2 = a.adjugate()
    if det < 0:
        k2 = IntMatrix(tuple(tuple(-x for x in row) for row in k2.entries))
    krows = k2.entries

    def mem(v: Vec) -> bool:
        return all(sum(kr[t] * v[t] for t in range(d)) % 2 == 0 for kr in krows)

    # (1) A^-1 A^T integral <=> K A^T even.
    ka = k2 @ a.transpose()
    if any(x % 2 for row in ka.entries for x in row):
        violations.append("A^-1 A^T is not an integer matrix")

    # (2) the two cosets tile the window, (3) parity functional matches
    for v in _window(d, radius):
        in_lat = mem(v)
        in_shift = mem(vsub(v, pd.ell))
        if in_lat == in_shift:
            violations.append(
                f"point {v}: lattice membership {in_lat} equals shifted "
                f"membership {in_shift}; cosets must partition")
        parity_even = sum(qi * vi for qi, vi in zip(pd.q, v)) % 2 == 0
        if parity_even != in_lat:
            violations.append(
                f"point {v}: parity says {'lattice' if parity_even else 'shifted'}"
                f" but membership says {'lattice' if in_lat else 'shifted'}")

    # (4)/(5) shifted set identities, sampled over a handful of shifts n
    # and both coset choices of m.  For m in the lattice the two sets
    # must partition Z^d; for m in the shifted coset they must coincide.
    units = [tuple(1 if t == i else 0 for t in range(d)) for i in range(d)]
    samples_n = [(0,) * d, *units, tuple(1 for _ in range(d)),
                 tuple(-1 for _ in range(d))]
    for w in [(0,) * d, *units, vneg(units[0])]:
        m_lat = a.matvec(w)
        m_shift = tuple(x + e for x, e in zip(m_lat, pd.ell))
        for n in samples_n:
            for v in _window(d, radius):
                first = mem(vsub(n, v))
                res = tuple(vi - li + mi + ni for vi, li, mi, ni
                            in zip(v, pd.ell, m_lat, n))
                if first == mem(res):
                    violations.append(
                        f"lattice shift m={m_lat}, n={n}, v={v}: sets overlap or "
                        "leave a gap")
                res = tuple(vi - li + mi + ni for vi, li, mi, ni
                            in zip(v, pd.ell, m_shift, n))
                if first != mem(res):
                    violations.append(
                        f"coset shift m={m_shift}, n={n}, v={v}: sets disagree")
                if len(violations) > 64:
                    return PartitionReport(False, tuple(violations))

    return PartitionReport(not violations, tuple(violations))
