"""Frame-side numerical verification: analysis coefficients, partial
Parseval sums, scaling-energy curves, and the finite-stage telescoping
identity.

Conventions.  For a sampled function ``g`` at cell level ``k`` the
dilated translate ``D^n T_l g`` is the function ``2^{n/2} g(A^n x - l)``;
for ``n >= -k`` it is again a sampled function at level ``k + n`` whose
cells are the cells of ``g`` shifted by ``A^k l``.  Analysis coefficients
``<f, D^n T_l g>`` are computed on a common refinement grid: exactly when
the grids align (``f.level == g.level + n``), and by point-sample
quadrature at ``max(f.level, g.level + n, 0) + margin`` otherwise.

The telescoping law verified here couples consecutive cascade stages:
one extra dilation level of the *previous* stage equals the current
stage plus its wavelet layer,

    I_{J+1}[phi_k] = I_J[phi_{k+1}] + F_J[psi_k],

which holds exactly (up to rounding and the mask's orthogonality
residual) because ``phi_{k+1}`` and ``psi_k`` are literally one two-scale
step of ``phi_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import PreconditionError
from .cascade import (
    SampledFunction,
    _combine,
    _to_arrays,
    _to_dict,
    l2_norm,
    point_samples,
)
from .lattice import IntMatrix, Vec, int_pow, inv_pow_numerator


# ---------------------------------------------------------------------------
# correlation engine
#
# Everything below reduces to sums of the form
#     c(l) = 2^-L * 2^(n/2) * sum_m fL[m] * g[ floor(A^-r m) - A^kg l ]
# with r = L - g.level - n >= 0.  The floor is exact integer arithmetic
# (inverse powers have denominator 2^r), and each admissible l is found
# from the geometry of the two supports rather than guessed.


class _Correlator:
    def __init__(self, f: SampledFunction, g: SampledFunction, n: int,
                 margin: int = 2):
        if f.matrix != g.matrix:
            raise PreconditionError("functions must share the dilation matrix")
        self.level = max(f.level, g.level + n, 0)
        if f.level != g.level + n:
            self.level += margin
        self.n = n
        self.g = g
        self.scale = 2.0 ** (-self.level) * 2.0 ** (n / 2.0)

        fl = f if f.level == self.level else point_samples(f, self.level)
        self.empty = not fl.values or not g.values
        if self.empty:
            return
        fidx, fvals = _to_arrays(fl.values)
        self.fvals = fvals

        r = self.level - g.level - n
        num, _ = inv_pow_numerator(f.matrix, r)
        # floor(A^-r m) = (num @ m) >> r, exact for all signs
        self.q = (fidx @ num.to_numpy().T) >> r

        gidx, gvals = _to_arrays(g.values)
        self.gidx = gidx
        self.gvals = gvals
        self.a_kg = int_pow(g.matrix, g.level).to_numpy()

        # lookup table over g's support box
        self.glo = gidx.min(axis=0)
        self.gspan = gidx.max(axis=0) - self.glo + 1
        strides = np.ones(gidx.shape[1], dtype=np.int64)
        for i in range(gidx.shape[1] - 2, -1, -1):
            strides[i] = strides[i + 1] * self.gspan[i + 1]
        self.gstrides = strides
        table = np.zeros(int(np.prod(self.gspan)), dtype=float)
        table[(gidx - self.glo) @ strides] = gvals
        self.gtable = table

    def window(self) -> list[Vec]:
        """All translates l whose basis support can meet the f samples."""
        if self.empty:
            return []
        lo = self.q.min(axis=0) - self.gidx.max(axis=0)
        hi = self.q.max(axis=0) - self.gidx.min(axis=0)
        # l ranges over integer points with A^kg l in [lo, hi]; bound the
        # preimage box by the float inverse and verify exactly.
        kg = self.g.level
        num, den = inv_pow_numerator(self.g.matrix, kg)
        inv = num.to_numpy().astype(float) / den
        corners = np.array(list(product(*zip(lo, hi))), dtype=float)
        pre = corners @ inv.T
        cand_lo = np.floor(pre.min(axis=0)).astype(np.int64) - 1
        cand_hi = np.ceil(pre.max(axis=0)).astype(np.int64) + 1
        axes = [np.arange(a, b + 1) for a, b in zip(cand_lo, cand_hi)]
        if not axes:
            return []
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        grid = grid.reshape(-1, len(axes))
        img = grid @ self.a_kg.T
        keep = np.all((img >= lo) & (img <= hi), axis=1)
        return [tuple(int(x) for x in row) for row in grid[keep]]

    def coeff(self, l: Vec) -> float:
        if self.empty:
            return 0.0
        shift = self.a_kg @ np.array(l, dtype=np.int64)
        rel = self.q - shift[None, :] - self.glo
        inbox = np.all((rel >= 0) & (rel < self.gspan), axis=1)
        pos = np.where(inbox[:, None], rel, 0) @ self.gstrides
        gv = np.where(inbox, self.gtable[pos], 0.0)
        return self.scale * float(np.sum(self.fvals * gv))


def analysis_coeff(f: SampledFunction, g: SampledFunction, n: int, l: Vec,
                   margin: int = 2) -> float:
    """Inner product ``<f, D^n T_l g>`` on the common refinement grid.

    Exact whenever ``f.level == g.level + n`` (and in d = 1, where dyadic
    grids nest); otherwise a point-sample quadrature ``margin`` levels
    below the finer of the two grids.
    """
    return _Correlator(f, g, n, margin).coeff(tuple(int(x) for x in l))


def analysis_window(f: SampledFunction, g: SampledFunction, n: int,
                    margin: int = 2) -> list[Vec]:
    """The translates enumerated automatically for ``<f, D^n T_l g>``."""
    return _Correlator(f, g, n, margin).window()


@dataclass(frozen=True)
class ParsevalPartial:
    """Partial sum of squared analysis coefficients over scales and shifts."""

    value: float
    by_scale: dict[int, float] = field(repr=False)
    window_sizes: dict[int, int] = field(repr=False)

    def __float__(self) -> float:
        return self.value


def parseval_partial_sum(f: SampledFunction, psi: SampledFunction,
                         n_range: tuple[int, int],
                         margin: int = 2) -> ParsevalPartial:
    """Sum of ``|<f, D^n T_l psi>|^2`` over scales ``n_lo..n_hi`` with the
    shift window chosen automatically at every scale."""
    n_lo, n_hi = n_range
    if n_lo > n_hi:
        raise PreconditionError("empty scale range")
    by_scale: dict[int, float] = {}
    windows: dict[int, int] = {}
    for n in range(n_lo, n_hi + 1):
        corr = _Correlator(f, psi, n, margin)
        win = corr.window()
        windows[n] = len(win)
        terms = sorted(corr.coeff(l) ** 2 for l in win)
        by_scale[n] = float(np.sum(np.array(terms))) if terms else 0.0
    total = float(np.sum(np.array([by_scale[n] for n in sorted(by_scale)])))
    return ParsevalPartial(value=total, by_scale=by_scale, window_sizes=windows)


def lj_curve(f: SampledFunction, phi: SampledFunction,
             j_range: tuple[int, int], margin: int = 2) -> dict[int, float]:
    """Scaling-energy curve ``L_J = sum_l |<f, D^J T_l phi>|^2``."""
    j_lo, j_hi = j_range
    if j_lo > j_hi:
        raise PreconditionError("empty scale range")
    out: dict[int, float] = {}
    for j in range(j_lo, j_hi + 1):
        corr = _Correlator(f, phi, j, margin)
        terms = sorted(corr.coeff(l) ** 2 for l in corr.window())
        out[j] = float(np.sum(np.array(terms))) if terms else 0.0
    return out


def _reconstruction(f: SampledFunction, g: SampledFunction, n: int,
                    target_level: int, margin: int) -> dict[Vec, float]:
    """``sum_l <f, D^n T_l g> D^n T_l g`` represented on the target grid."""
    if g.level + n != target_level:
        raise PreconditionError("basis functions must live on the target grid")
    corr = _Correlator(f, g, n, margin)
    win = corr.window()
    if not win:
        return {}
    gidx, gvals = _to_arrays(g.values)
    a_kg = int_pow(g.matrix, g.level).to_numpy()
    amp = 2.0 ** (n / 2.0)
    chunks_idx = []
    chunks_val = []
    for l in win:
        c = corr.coeff(l)
        if c == 0.0:
            continue
        shift = a_kg @ np.array(l, dtype=np.int64)
        chunks_idx.append(gidx + shift[None, :])
        chunks_val.append(gvals * (amp * c))
    if not chunks_idx:
        return {}
    idx, vals = _combine(np.concatenate(chunks_idx),
                         np.concatenate(chunks_val))
    return _to_dict(idx, vals)


def telescope_check(f: SampledFunction, phi_k: SampledFunction,
                    phi_k1: SampledFunction, psi_k: SampledFunction,
                    j: int, margin: int = 2) -> float:
    """L2 residual of the mixed-stage telescoping identity at scale ``j``.

    Verifies ``I_{j+1}[phi_k] == I_j[phi_{k+1}] + F_j[psi_k]`` where the
    I/F sums run over the automatic shift windows.  Preconditions:
    ``phi_k1`` is one cascade step of ``phi_k``, ``psi_k`` its wavelet
    layer (both one level finer than ``phi_k``), and ``j >= 0``.  The
    identity is exact at finite stage for masks solving the
    orthogonality system; choosing ``f`` on the level ``phi_k.level+j+1``
    grid makes the check exact to rounding.
    """
    if phi_k1.level != phi_k.level + 1 or psi_k.level != phi_k.level + 1:
        raise PreconditionError(
            "need consecutive stages: phi_k1 and psi_k one level finer")
    if not (phi_k.matrix == phi_k1.matrix == psi_k.matrix == f.matrix):
        raise PreconditionError("all functions must share the dilation")
    if j < 0:
        raise PreconditionError("scale j must be non-negative")
    target = phi_k.level + j + 1
    lhs = _reconstruction(f, phi_k, j + 1, target, margin)
    rhs_a = _reconstruction(f, phi_k1, j, target, margin)
    rhs_b = _reconstruction(f, psi_k, j, target, margin)
    keys = set(lhs) | set(rhs_a) | set(rhs_b)
    if not keys:
        return 0.0
    acc = np.array([lhs.get(m, 0.0) - rhs_a.get(m, 0.0) - rhs_b.get(m, 0.0)
                    for m in sorted(keys)])
    return math.sqrt(2.0 ** (-target) * float(np.sum(acc * acc)))


def random_test_function(a: IntMatrix, level: int, lo: Vec, hi: Vec,
                         seed: int = 0) -> SampledFunction:
    """Seeded uniform[-1, 1] values on the index box ``[lo, hi]`` at the
    given cell level; the standard test input for frame diagnostics."""
    if len(lo) != a.dim or len(hi) != a.dim:
        raise PreconditionError("box corners must match the dimension")
    rng = np.random.default_rng(seed)
    axes = [range(int(x), int(y) + 1) for x, y in zip(lo, hi)]
    values = {}
    for m in product(*axes):
        values[m] = float(rng.uniform(-1.0, 1.0))
    return SampledFunction(a, level, values)


@dataclass(frozen=True)
class FrameReport:
    """Bundle of frame diagnostics for one scaling/wavelet pair."""

    f_norm_sq: float
    lj_curve: dict[int, float]
    parseval_partial: dict[str, float]
    telescope_residuals: tuple[dict, ...]
    meta: dict


def frame_report(f: SampledFunction, phi: SampledFunction,
                 psi: SampledFunction, phi_next: SampledFunction,
                 j_range: tuple[int, int] = (-8, 5),
                 parseval_range: tuple[int, int] | None = None,
                 telescope_scales: tuple[int, ...] = (0, 1),
                 margin: int = 2, meta: dict | None = None) -> FrameReport:
    """Run the standard battery and collect the results."""
    curve = lj_curve(f, phi, j_range, margin)
    parseval: dict[str, float] = {}
    if parseval_range is not None:
        part = parseval_partial_sum(f, psi, parseval_range, margin)
        parseval[f"{parseval_range[0]}..{parseval_range[1]}"] = part.value
    residuals = []
    for j in telescope_scales:
        res = telescope_check(f, phi, phi_next, psi, j, margin)
        residuals.append({"J": j, "residual": res})
    return FrameReport(
        f_norm_sq=l2_norm(f) ** 2,
        lj_curve=curve,
        parseval_partial=parseval,
        telescope_residuals=tuple(residuals),
        meta=dict(meta or {}),
    )
