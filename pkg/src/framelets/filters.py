"""Frequency-domain filter diagnostics: transfer function, QMF deviation,
truncated infinite products, and a compact-support radius bound.

The transfer function of a mask is
``m0(t) = 2^{-1/2} sum_n h_n exp(-i n . t)``; the quadrature-mirror
deviation measures ``|m0(t)|^2 + |m0(t + pi q)|^2 - 1`` over sampled
frequencies, which vanishes exactly when the mask solves its
orthogonality system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .errors import PreconditionError
from .lattice import IntMatrix, Vec, inv_pow_numerator, is_expansive
from .lawton import Mask
from .partition import PartitionData

_SQRT2_INV = 1.0 / math.sqrt(2.0)


def eval_m0(mask: Mask, t) -> complex:
    """Transfer function value at the frequency vector ``t``."""
    t = np.asarray(t, dtype=float)
    if t.shape != (mask.dim,):
        raise PreconditionError(f"frequency must have shape ({mask.dim},)")
    supp = np.array(mask.support, dtype=float)
    coeffs = np.array(mask.coeffs)
    return _SQRT2_INV * complex(np.sum(coeffs * np.exp(-1j * (supp @ t))))


def _m0_batch(mask: Mask, pts: np.ndarray) -> np.ndarray:
    supp = np.array(mask.support, dtype=float)
    coeffs = np.array(mask.coeffs)
    return _SQRT2_INV * (np.exp(-1j * (pts @ supp.T)) @ coeffs)


def check_qmf(mask: Mask, pd: PartitionData, samples: int = 1000,
              seed: int = 0) -> float:
    """Max deviation of the mirror identity over seeded quasi-random points.

    Points are Halton samples of ``[-pi, pi)^d`` plus fixed corner cases
    (the origin, ``pi*q`` and the axis points ``pi*e_j``).
    """
    d = mask.dim
    if d != pd.dim:
        raise PreconditionError("mask dimension does not match partition data")
    if samples < 1:
        raise PreconditionError("need at least one sample")
    halton = qmc.Halton(d=d, scramble=True, seed=seed)
    pts = (halton.random(samples) - 0.5) * (2.0 * math.pi)
    corners = [np.zeros(d), math.pi * np.array(pd.q, dtype=float)]
    for j in range(d):
        e = np.zeros(d)
        e[j] = math.pi
        corners.append(e)
    pts = np.vstack([pts, corners])
    q_shift = math.pi * np.array(pd.q, dtype=float)
    v0 = np.abs(_m0_batch(mask, pts)) ** 2
    v1 = np.abs(_m0_batch(mask, pts + q_shift[None, :])) ** 2
    return float(np.max(np.abs(v0 + v1 - 1.0)))


def cube_transform(s) -> complex:
    """Fourier transform of the unit-cube indicator (without the 2 pi factor):
    ``prod_j (1 - exp(-i s_j)) / (i s_j)``, continuously extended by 1 at 0.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    # (1 - e^{-is})/(is) = e^{-is/2} * sinc(s / (2 pi)) with numpy's sinc
    factors = np.exp(-0.5j * s) * np.sinc(s / (2.0 * math.pi))
    return complex(np.prod(factors))


def transfer_products(mask: Mask, a: IntMatrix, points: np.ndarray,
                      depth: int) -> np.ndarray:
    """Vectorized ``prod_{j=1..depth} m0((A^T)^{-j} xi)`` for rows of ``points``.

    The inverse powers are exact integer matrices over ``2^j``; conversion
    to float happens once per level.
    """
    if depth < 0:
        raise PreconditionError("product depth must be non-negative")
    out = np.ones(len(points), dtype=complex)
    for j in range(1, depth + 1):
        num, den = inv_pow_numerator(a, j)
        w = num.to_numpy().T.astype(float) / den  # (A^T)^{-j}
        out *= _m0_batch(mask, points @ w.T)
    return out


def eval_g(mask: Mask, a: IntMatrix, xi, depth: int) -> complex:
    """Truncated infinite-product value
    ``(2 pi)^{-d/2} prod_{j=1..depth} m0((A^T)^{-j} xi)``;
    ``depth == 0`` gives the constant ``(2 pi)^{-d/2}``.
    """
    xi = np.asarray(xi, dtype=float)
    d = mask.dim
    if xi.shape != (d,):
        raise PreconditionError(f"frequency must have shape ({d},)")
    scale = (2.0 * math.pi) ** (-d / 2.0)
    prod = transfer_products(mask, a, xi[None, :], depth)[0]
    return scale * complex(prod)


@dataclass(frozen=True)
class SupportBound:
    """Radius bound for the closed support of the limit function.

    ``terms`` holds the operator norms ``||A^-j||_2`` until they fall
    below 1/2 (at ``tail_start`` the geometric tail takes over with rate
    ``beta_op``); ``radius`` bounds the attractor of the support set map
    centered at the origin.
    """

    radius: float
    terms: tuple[float, ...]
    tail_start: int
    beta_op: float
    constants: dict


def support_bound(mask: Mask, a: IntMatrix, max_terms: int = 200) -> SupportBound:
    """Bound the support radius of the cascade limit for this mask.

    The fixed point of ``K = union_n (A^-1 K + A^-1 n)`` lies inside the
    ball of radius ``max|n| * sum_{j>=1} ||A^-j||``; the series is summed
    until the norms halve, and the remainder is dominated geometrically.
    Raises for non-expansive dilations, where the series may diverge.
    """
    if not is_expansive(a):
        raise PreconditionError("support bound requires an expansive dilation")
    max_n = max((math.sqrt(sum(x * x for x in n)) for n in mask.support),
                default=0.0)
    terms: list[float] = []
    j = 0
    q = 1.0
    while j < max_terms:
        j += 1
        num, den = inv_pow_numerator(a, j)
        q = float(np.linalg.norm(num.to_numpy().astype(float) / den, 2))
        terms.append(q)
        if q < 0.5:
            break
    else:
        raise PreconditionError(
            "operator norms of inverse powers do not contract; "
            "the dilation is too close to non-expansive")
    prefix = float(np.sum(np.array(terms)))
    total = prefix / (1.0 - q)
    n0 = mask.degree_bound
    d = mask.dim
    constants = {
        "N0": n0,
        "B0": 2.0 * math.sqrt(d) * n0,
        "prefix_sum": prefix,
    }
    return SupportBound(radius=max_n * total, terms=tuple(terms),
                        tail_start=len(terms) + 1, beta_op=q,
                        constants=constants)
