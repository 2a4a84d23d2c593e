"""Cascade iteration for refinable functions on dilated lattice cells.

A :class:`SampledFunction` with matrix ``A`` and level ``k`` represents a
function that is constant on the cells ``A^-k (m + [0,1)^d)``; the value
map is keyed by the integer corner ``m``.  Each cell has measure
``2^-k`` because ``|det A| == 2``.

The cascade step implements the two-scale operator: starting from the
unit-cube indicator, ``phi_{k+1}[m] = sqrt(2) * sum_n h_n phi_k[m - A^k n]``,
which is the digital form of ``phi <- sqrt(2) sum_n h_n phi(A x - n)``.
All cell bookkeeping is exact integer arithmetic; only the values are
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import PreconditionError
from .lattice import IntMatrix, Vec, det_exact, int_pow, inv_pow_numerator
from .lawton import Mask

_PRUNE = 1e-300  # drop cells whose value underflows to effectively zero

SQRT2 = math.sqrt(2.0)


@dataclass
class SampledFunction:
    """Piecewise-constant function on level-``k`` cells of the dilation."""

    matrix: IntMatrix
    level: int
    values: dict[Vec, float]

    def __post_init__(self) -> None:
        if self.level < 0:
            raise PreconditionError("cell level must be non-negative")
        if abs(det_exact(self.matrix)) != 2:
            raise PreconditionError("sampled functions require |det A| == 2")

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @property
    def cell_measure(self) -> float:
        return 2.0 ** (-self.level)

    def copy(self) -> "SampledFunction":
        return SampledFunction(self.matrix, self.level, dict(self.values))

    def __len__(self) -> int:
        return len(self.values)


def init_indicator(a: IntMatrix) -> SampledFunction:
    """The unit cube indicator: one level-0 cell at the origin."""
    return SampledFunction(a, 0, {(0,) * a.dim: 1.0})


# ---------------------------------------------------------------------------
# packed-key combination helpers (deterministic: sort, then reduce runs)


def _pack(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Pack integer index rows into single int64 keys (collision-free)."""
    lo = arr.min(axis=0)
    span = arr.max(axis=0) - lo + 1
    strides = np.ones(arr.shape[1], dtype=np.int64)
    for i in range(arr.shape[1] - 2, -1, -1):
        strides[i] = strides[i + 1] * span[i + 1]
    if np.prod(span.astype(object)) >= 2 ** 62:
        raise PreconditionError("index box too large to pack")
    keys = (arr - lo) @ strides
    return keys, lo, strides, span


def _combine(idx: np.ndarray, vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sum values over duplicate index rows, deterministically.

    Rows are sorted by packed key and runs reduced in that fixed order,
    so the float result does not depend on input order.
    """
    keys, *_ = _pack(idx)
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    idx = idx[order]
    vals = vals[order]
    starts = np.flatnonzero(np.concatenate(([True], keys[1:] != keys[:-1])))
    sums = np.add.reduceat(vals, starts)
    return idx[starts], sums


def _to_arrays(values: dict[Vec, float]) -> tuple[np.ndarray, np.ndarray]:
    items = sorted(values.items())
    idx = np.array([m for m, _ in items], dtype=np.int64).reshape(len(items), -1)
    vals = np.array([v for _, v in items], dtype=float)
    return idx, vals


def _to_dict(idx: np.ndarray, vals: np.ndarray) -> dict[Vec, float]:
    keep = np.abs(vals) > _PRUNE
    return {tuple(int(x) for x in row): float(v)
            for row, v in zip(idx[keep], vals[keep])}


# ---------------------------------------------------------------------------
# the two-scale step


def _scatter_step(idx: np.ndarray, vals: np.ndarray, mask: Mask,
                  shift_matrix: IntMatrix) -> tuple[np.ndarray, np.ndarray]:
    """One refinement: out[m] = sqrt(2) sum_n h_n in[m - M n]."""
    d = idx.shape[1]
    supp = np.array(mask.support, dtype=np.int64)
    shifts = supp @ np.array(shift_matrix.entries, dtype=np.int64).T
    # two-scale weight sqrt(2) h computed as (2 h) / sqrt(2): one rounding
    # either way, but this form maps h = fl(sqrt(2)/2) to exactly 1.0, so
    # indicator fixed points stay bit-exact across levels
    coeffs = (2.0 * np.array(mask.coeffs)) / SQRT2
    big_idx = (idx[:, None, :] + shifts[None, :, :]).reshape(-1, d)
    big_vals = (vals[:, None] * coeffs[None, :]).reshape(-1)
    return _combine(big_idx, big_vals)


def cascade_step(phi: SampledFunction, mask: Mask) -> SampledFunction:
    """Apply the two-scale operator once; the level rises by one."""
    if mask.dim != phi.dim:
        raise PreconditionError("mask dimension does not match the function")
    if not phi.values:
        return SampledFunction(phi.matrix, phi.level + 1, {})
    idx, vals = _to_arrays(phi.values)
    a_k = int_pow(phi.matrix, phi.level)
    out_idx, out_vals = _scatter_step(idx, vals, mask, a_k)
    return SampledFunction(phi.matrix, phi.level + 1, _to_dict(out_idx, out_vals))


@dataclass(frozen=True)
class CascadeResult:
    phi: SampledFunction
    diffs: tuple[float, ...]
    converged: bool
    eps: float


def iterate(mask: Mask, a: IntMatrix, k_max: int = 8,
            eps: float = 1e-6) -> CascadeResult:
    """Run the cascade from the cube indicator until the L2 increments
    drop below ``eps`` or ``k_max`` steps have been taken.

    Non-convergence is reported through the ``converged`` flag rather
    than raised: the last iterate is often still informative.
    """
    phi = init_indicator(a)
    diffs: list[float] = []
    for k in range(k_max):
        nxt = cascade_step(phi, mask)
        # compare on the common refinement grid two levels down
        level = nxt.level + 2
        diffs.append(_l2_distance(point_samples(phi, level),
                                  point_samples(nxt, level)))
        phi = nxt
        if diffs[-1] < eps:
            return CascadeResult(phi, tuple(diffs), True, eps)
    return CascadeResult(phi, tuple(diffs), False, eps)


# ---------------------------------------------------------------------------
# exact point sampling on refined lattices
#
# With |det A| == 2, A^-r equals an integer matrix divided by 2^r, so the
# cell of the level-L point A^-L m inside a level-k grid has corner
# floor(A^-(L-k) m), computable with pure integer shifts.


def dyadic_cube_points(a: IntMatrix, r: int) -> np.ndarray:
    """All integer points in ``A^r [0,1)^d`` (there are exactly ``2^r``)."""
    d = a.dim
    if r == 0:
        return np.zeros((1, d), dtype=np.int64)
    m = int_pow(a, r).to_numpy()
    lo = np.minimum(m, 0).sum(axis=1)
    hi = np.maximum(m, 0).sum(axis=1)
    axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    num, _ = inv_pow_numerator(a, r)
    y = grid @ num.to_numpy().T
    keep = np.all((y >= 0) & (y < (1 << r)), axis=1)
    pts = grid[keep]
    if len(pts) != (1 << r):
        raise PreconditionError(
            f"expected {1 << r} lattice points in the dilated cube, got {len(pts)}")
    return pts


def point_samples(phi: SampledFunction, level: int) -> SampledFunction:
    """Sample ``phi`` at all level-``level`` lattice points of its support.

    The result stores point values keyed by the level-``level`` index;
    since ``phi`` is constant on its level-``k`` cells this is exact.
    """
    if level < phi.level:
        raise PreconditionError("sampling level must refine the cell level")
    r = level - phi.level
    if not phi.values:
        return SampledFunction(phi.matrix, level, {})
    idx, vals = _to_arrays(phi.values)
    cube = dyadic_cube_points(phi.matrix, r)
    a_r = int_pow(phi.matrix, r).to_numpy()
    base = idx @ a_r.T
    d = idx.shape[1]
    big = (base[:, None, :] + cube[None, :, :]).reshape(-1, d)
    rep = np.repeat(vals, len(cube))
    return SampledFunction(phi.matrix, level, _to_dict(big, rep))


def sample_at_level(mask: Mask, a: IntMatrix, k: int, level: int) -> SampledFunction:
    """Exact point values of the k-th cascade iterate on the level grid.

    Runs the two-index refinement recurrence
    ``V^(j,l)[m] = sqrt(2) sum_n h_n V^(j-1,l-1)[m - A^(l-1) n]`` starting
    from the indicator's point samples, so no intermediate rounding to
    cells occurs.  Requires ``level >= k``.
    """
    if level < k:
        raise PreconditionError("sampling level must be at least the stage")
    base_level = level - k
    idx = dyadic_cube_points(a, base_level)
    vals = np.ones(len(idx))
    cur = base_level
    for _ in range(k):
        shift = int_pow(a, cur)
        idx, vals = _scatter_step(idx, vals, mask, shift)
        keep = np.abs(vals) > _PRUNE
        idx, vals = idx[keep], vals[keep]
        cur += 1
    return SampledFunction(a, level, _to_dict(idx, vals))


# ---------------------------------------------------------------------------
# norms, Gram matrices, Fourier transform


def _pairwise_sum(values: Iterable[float]) -> float:
    arr = np.asarray(list(values))
    return float(np.sum(arr)) if arr.size else 0.0


def l2_norm(phi: SampledFunction) -> float:
    """L2 norm: cells are disjoint with measure ``2^-level``."""
    if not phi.values:
        return 0.0
    _, vals = _to_arrays(phi.values)
    return math.sqrt(phi.cell_measure * float(np.sum(vals * vals)))


def _l2_distance(f: SampledFunction, g: SampledFunction) -> float:
    if f.level != g.level:
        raise PreconditionError("distance requires a common level")
    keys = sorted(set(f.values) | set(g.values))
    acc = np.array([f.values.get(m, 0.0) - g.values.get(m, 0.0) for m in keys])
    return math.sqrt(f.cell_measure * float(np.sum(acc * acc))) if keys else 0.0


def translates_gram(phi: SampledFunction, offsets: list[Vec]) -> np.ndarray:
    """Gram matrix of the lattice translates ``phi(. - a)`` for given offsets.

    Entry ``(a, b)`` is ``2^-k sum_m v[m - A^k a] v[m - A^k b]``, which only
    depends on ``b - a``; the correlations are computed once per
    difference.
    """
    if not phi.values:
        return np.zeros((len(offsets), len(offsets)))
    idx, vals = _to_arrays(phi.values)
    a_k = int_pow(phi.matrix, phi.level).to_numpy()
    keys, lo, strides, span = _pack(idx)
    order = np.argsort(keys, kind="stable")
    keys_sorted = keys[order]
    vals_sorted = vals[order]

    def corr(delta: Vec) -> float:
        shift = a_k @ np.array(delta, dtype=np.int64)
        shifted = idx - shift[None, :]
        # pack with the same offset/strides; rows outside the original
        # bounding box cannot match any key
        rel = shifted - lo
        inbox = np.all((rel >= 0) & (rel < span), axis=1)
        q = np.where(inbox[:, None], rel, 0) @ strides
        pos = np.searchsorted(keys_sorted, q)
        pos = np.clip(pos, 0, len(keys_sorted) - 1)
        hit = inbox & (keys_sorted[pos] == q)
        prod = vals * np.where(hit, vals_sorted[pos], 0.0)
        return phi.cell_measure * float(np.sum(prod))

    cache: dict[Vec, float] = {}
    n = len(offsets)
    gram = np.zeros((n, n))
    for i, a_off in enumerate(offsets):
        for j, b_off in enumerate(offsets):
            delta = tuple(int(x - y) for x, y in zip(b_off, a_off))
            if delta not in cache:
                cache[delta] = corr(delta)
            gram[i, j] = cache[delta]
    return gram


def fourier_transform(phi: SampledFunction, xi) -> complex:
    """Closed-form Fourier transform of the piecewise-constant function.

    Each cell contributes the transform of a sheared cube, giving
    ``(2 pi)^{-d/2} 2^{-k} f0(eta) sum_m v[m] exp(-i m . eta)`` with
    ``eta = (A^T)^{-k} xi`` and ``f0`` the unit-cube transform.
    """
    from .filters import cube_transform

    d = phi.dim
    xi = np.asarray(xi, dtype=float)
    num, den = inv_pow_numerator(phi.matrix, phi.level)
    eta = (num.to_numpy().T @ xi) / den
    if not phi.values:
        return 0.0 + 0.0j
    idx, vals = _to_arrays(phi.values)
    phase = np.exp(-1j * (idx @ eta))
    total = complex(np.sum(vals * phase))
    scale = (2.0 * math.pi) ** (-d / 2.0) * (2.0 ** (-phi.level))
    return scale * cube_transform(eta) * total
