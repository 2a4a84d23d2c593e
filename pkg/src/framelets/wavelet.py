"""Wavelet mask construction and change of coordinates back to the
original dilation.

Given a scaling mask ``h`` and partition data ``(ell, q)``, the wavelet
mask is the mirrored, parity-modulated reflection

    g_n = (-1)^(q . n) h_(ell - n),   n in ell - support(h),

and the wavelet itself is one two-scale step of the current scaling
iterate driven by ``g``.  Conjugation by the unimodular similarity ``S``
carries results for the reduced dilation ``A`` back to the input matrix
``A0``: on cell indices it is the exact relabeling ``m -> S^-1 m``,
which agrees with running the whole cascade over ``A0`` with the
index-translated mask.
"""

from __future__ import annotations

import math

from .errors import PreconditionError
from .cascade import SampledFunction, cascade_step, _l2_distance
from .lawton import Mask
from .partition import PartitionData


def wavelet_mask(mask: Mask, pd: PartitionData) -> Mask:
    """High-pass companion of a scaling mask under the partition parity."""
    if mask.dim != pd.dim:
        raise PreconditionError("mask dimension does not match partition data")
    support = []
    coeffs = []
    for n, h in zip(mask.support, mask.coeffs):
        m = tuple(l - x for l, x in zip(pd.ell, n))
        sign = -1.0 if sum(q * x for q, x in zip(pd.q, m)) % 2 else 1.0
        support.append(m)
        coeffs.append(sign * h)
    return Mask(dim=mask.dim, support=tuple(support), coeffs=tuple(coeffs),
                role="wavelet")


def build_wavelet(phi: SampledFunction, mask: Mask,
                  pd: PartitionData) -> SampledFunction:
    """One two-scale step of ``phi`` with the wavelet mask.

    ``phi`` should be a cascade iterate of ``mask`` over ``pd.A``; the
    result lives one level finer.
    """
    if phi.matrix != pd.A:
        raise PreconditionError("scaling iterate does not live over pd.A")
    return cascade_step(phi, wavelet_mask(mask, pd))


def conjugate_mask(mask: Mask, pd: PartitionData) -> Mask:
    """Translate a mask through the similarity: support ``S^-1 n``."""
    support = tuple(pd.S_inv.matvec(n) for n in mask.support)
    return Mask(dim=mask.dim, support=support, coeffs=mask.coeffs,
                role=mask.role, verified=mask.verified,
                verified_tol=mask.verified_tol)


def conjugate_to_original(f: SampledFunction, pd: PartitionData) -> SampledFunction:
    """Carry a sampled function over ``A`` to one over ``A0``.

    Cell indices are relabeled by ``S^-1``; values and the level are
    unchanged, so the multiset of values -- and hence every L2 quantity --
    is preserved exactly.  The result equals the level-``k`` cascade
    iterate over ``A0`` driven by the index-translated mask.
    """
    if f.matrix != pd.A:
        raise PreconditionError("function does not live over pd.A")
    values = {pd.S_inv.matvec(m): v for m, v in f.values.items()}
    if len(values) != len(f.values):
        raise PreconditionError("similarity relabeling collided; S not unimodular?")
    return SampledFunction(pd.A0, f.level, values)


def two_scale_residual(phi_k: SampledFunction, phi_k1: SampledFunction,
                       mask: Mask) -> float:
    """L2 distance between ``phi_k1`` and one mask step applied to ``phi_k``."""
    if phi_k1.level != phi_k.level + 1:
        raise PreconditionError("iterates must be consecutive levels")
    return _l2_distance(cascade_step(phi_k, mask), phi_k1)
