"""Orthogonality (Lawton-type) systems for scaling masks and their solver.

A mask is a finitely supported real coefficient family ``h_n`` on the
integer lattice.  For a dilation ``A`` with ``|det| == 2`` the system
couples one quadratic row per admissible shift ``k`` (nonzero shifts in
``A Z^d`` reachable as support differences, one per +/- pair) to the
autocorrelation of the mask, plus the unit-sum-of-squares row at k = 0
and the linear normalization  sum h = sqrt(2).

The solver is a damped Gauss-Newton (Levenberg-Marquardt) iteration with
seeded multistart; the system is usually underdetermined, so distinct
restarts may land on distinct admissible masks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np

from .errors import PreconditionError
from .lattice import IntMatrix, Vec, det_exact, vsub
from .partition import PartitionData, in_dilated_lattice

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Mask:
    """Finitely supported real filter coefficients.

    ``support`` is lexicographically sorted and aligned with ``coeffs``.
    ``verified`` may only be set by a residual check that passed at
    ``verified_tol``.
    """

    dim: int
    support: tuple[Vec, ...]
    coeffs: tuple[float, ...]
    role: str = "scaling"
    verified: bool = False
    verified_tol: float | None = None

    def __post_init__(self) -> None:
        if len(self.support) != len(self.coeffs):
            raise PreconditionError("support/coefficient length mismatch")
        if len(set(self.support)) != len(self.support):
            raise PreconditionError("duplicate support points")
        for n in self.support:
            if len(n) != self.dim:
                raise PreconditionError("support point of wrong dimension")
        order = sorted(range(len(self.support)), key=lambda i: self.support[i])
        object.__setattr__(self, "support",
                           tuple(self.support[i] for i in order))
        object.__setattr__(self, "coeffs",
                           tuple(float(self.coeffs[i]) for i in order))

    @property
    def degree_bound(self) -> int:
        """Smallest N with the support inside [-N, N]^d."""
        return max((abs(x) for n in self.support for x in n), default=0)

    def as_dict(self) -> dict[Vec, float]:
        return dict(zip(self.support, self.coeffs))

    def coeff_sum(self) -> float:
        return float(sum(self.coeffs))


@dataclass(frozen=True)
class LawtonSystem:
    """Quadratic + linear residual system for masks on a fixed support."""

    matrix: IntMatrix
    support: tuple[Vec, ...]
    shifts: tuple[Vec, ...]           # nonzero admissible shifts, one per pair
    pairs: tuple[tuple[np.ndarray, np.ndarray], ...] = field(repr=False)
    # pairs[t] holds index arrays (i, j) with support[j] == support[i] + shift
    # (shift == 0 for t == 0); row t residual is sum h[i] h[j] - (t == 0).

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @property
    def n_rows(self) -> int:
        return len(self.shifts) + 2  # k = 0 row + shift rows + normalization

    @property
    def n_unknowns(self) -> int:
        return len(self.support)


def build_system(support: list[Vec] | tuple[Vec, ...],
                 pd: PartitionData) -> LawtonSystem:
    """Assemble the residual system for the given support over ``pd.A``.

    Shift rows are indexed by the nonzero differences of support points
    that land in ``A Z^d``; each +/- pair contributes a single row (the
    lexicographically positive representative), with both orders of the
    product pair summed.
    """
    a = pd.A
    if abs(det_exact(a)) != 2:
        raise PreconditionError("system requires |det A| == 2")
    supp = tuple(sorted(tuple(int(x) for x in n) for n in support))
    if len(set(supp)) != len(supp):
        raise PreconditionError("duplicate support points")
    if not supp:
        raise PreconditionError("empty support")
    index = {n: i for i, n in enumerate(supp)}
    d = a.dim

    diffs = set()
    for na, nb in product(supp, repeat=2):
        k = vsub(na, nb)
        if k != (0,) * d and in_dilated_lattice(a, k):
            diffs.add(max(k, tuple(-x for x in k)))
    shifts = tuple(sorted(diffs))

    pairs = []
    # k = 0: the diagonal pairs
    idx = np.arange(len(supp))
    pairs.append((idx, idx))
    for k in shifts:
        ii, jj = [], []
        for n, i in index.items():
            # both orderings: h_n h_{n+k} and h_n h_{n-k}
            for kk in (k, tuple(-x for x in k)):
                m = tuple(x + y for x, y in zip(n, kk))
                j = index.get(m)
                if j is not None:
                    ii.append(i)
                    jj.append(j)
        pairs.append((np.array(ii, dtype=np.intp), np.array(jj, dtype=np.intp)))

    return LawtonSystem(matrix=a, support=supp, shifts=shifts,
                        pairs=tuple(pairs))


def residual(mask: Mask, system: LawtonSystem) -> np.ndarray:
    """Residual vector (k = 0 row, shift rows, normalization row)."""
    h = _coeff_vector(mask, system)
    return _residual_vec(h, system)


def _coeff_vector(mask: Mask, system: LawtonSystem) -> np.ndarray:
    lookup = mask.as_dict()
    h = np.zeros(len(system.support))
    seen = 0
    for i, n in enumerate(system.support):
        if n in lookup:
            h[i] = lookup[n]
            seen += 1
    if seen != len(lookup):
        raise PreconditionError("mask support is not contained in the system support")
    return h


def _residual_vec(h: np.ndarray, system: LawtonSystem) -> np.ndarray:
    out = np.empty(len(system.pairs) + 1)
    for t, (ii, jj) in enumerate(system.pairs):
        s = float(np.dot(h[ii], h[jj]))
        # nonzero-shift rows count each unordered pair twice (both orders);
        # halve so the row is sum_n h_n h_{n+k} exactly.
        if t == 0:
            out[0] = s - 1.0
        else:
            out[t] = 0.5 * s
    out[-1] = float(np.sum(h)) - SQRT2
    return out


def _residual_sharp(h: np.ndarray, system: LawtonSystem) -> np.ndarray:
    """Residuals evaluated in 40-digit decimal arithmetic.

    Near a tangential root the Jacobian is rank deficient and Newton
    steps amplify residual-evaluation noise by the reciprocal of the
    distance to the root; double precision then stalls around 1e-8.
    Decimal evaluation (including sqrt(2) to full working precision)
    pushes the stall below the float lattice, so the polished
    coefficients are correct to their last bit.
    """
    import decimal

    with decimal.localcontext() as ctx:
        ctx.prec = 40
        dec = decimal.Decimal
        hd = [dec(float(x)) for x in h]
        out = np.empty(len(system.pairs) + 1)
        for t, (ii, jj) in enumerate(system.pairs):
            s = sum(hd[i] * hd[j] for i, j in zip(ii.tolist(), jj.tolist()))
            out[t] = float(s - 1) if t == 0 else 0.5 * float(s)
        out[-1] = float(sum(hd) - dec(2).sqrt())
    return out


def _jacobian(h: np.ndarray, system: LawtonSystem) -> np.ndarray:
    n = len(h)
    jac = np.zeros((len(system.pairs) + 1, n))
    for t, (ii, jj) in enumerate(system.pairs):
        scale = 1.0 if t == 0 else 0.5
        np.add.at(jac[t], ii, scale * h[jj])
        np.add.at(jac[t], jj, scale * h[ii])
    jac[-1, :] = 1.0
    return jac


@dataclass(frozen=True)
class SolveConfig:
    tol: float = 1e-10
    max_iter: int = 200
    restarts: int = 64
    seed: int = 0


@dataclass(frozen=True)
class LawtonCheck:
    passed: bool
    max_residual: float


def solve(system: LawtonSystem, cfg: SolveConfig | None = None, **kw) -> list[Mask]:
    """Multistart Levenberg-Marquardt solve of the mask system.

    Returns the deduplicated converged masks sorted by (residual,
    coefficients); an empty list when no restart converges.  The result
    is a deterministic function of the system and the seed.
    """
    if cfg is None:
        cfg = SolveConfig(**kw)
    elif kw:
        raise PreconditionError("pass either a config object or keyword options")

    n = system.n_unknowns
    found: list[tuple[float, tuple[float, ...]]] = []
    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, restart])
        h = rng.uniform(-1.0, 1.0, size=n)
        h = _lm(h, system, cfg.max_iter)
        if h is None:
            continue
        res = float(np.max(np.abs(_residual_vec(h, system))))
        if res <= cfg.tol:
            found.append((res, tuple(float(x) for x in h)))

    found.sort(key=lambda rc: (rc[0], rc[1]))
    unique: list[tuple[float, tuple[float, ...]]] = []
    for res, coeffs in found:
        dup = False
        for _, kept in unique:
            if max(abs(a - b) for a, b in zip(coeffs, kept)) <= 1e-6:
                dup = True
                break
        if not dup:
            unique.append((res, coeffs))

    return [Mask(dim=system.dim, support=system.support, coeffs=coeffs,
                 verified=True, verified_tol=cfg.tol)
            for _, coeffs in unique]


def _lm(h: np.ndarray, system: LawtonSystem, max_iter: int) -> np.ndarray | None:
    """One LM descent; returns the refined point or None on breakdown."""
    r = _residual_vec(h, system)
    cost = float(r @ r)
    lam = 1e-3
    nu = 2.0
    for _ in range(max_iter):
        if math.sqrt(cost) < 1e-15:
            break
        jac = _jacobian(h, system)
        g = jac.T @ r
        if float(np.max(np.abs(g))) < 1e-14 and math.sqrt(cost) > 1e-10:
            # stuck at a non-root stationary point
            return None
        jtj = jac.T @ jac
        diag = np.diag(jtj).copy()
        diag[diag < 1e-12] = 1e-12
        try:
            step = np.linalg.solve(jtj + lam * np.diag(diag), -g)
        except np.linalg.LinAlgError:
            return None
        trial = h + step
        r_try = _residual_vec(trial, system)
        cost_try = float(r_try @ r_try)
        pred = float(step @ (lam * diag * step - g))
        rho = (cost - cost_try) / pred if pred > 0 else -1.0
        if cost_try < cost:
            h, r, cost = trial, r_try, cost_try
            lam = lam * max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0) ** 3)
            nu = 2.0
        else:
            lam *= nu
            nu *= 2.0
            if lam > 1e12:
                return None
    else:
        if math.sqrt(cost) > 1e-10:
            return None

    # Gauss-Newton polish with sharply evaluated residuals.  Simple roots
    # converge quadratically in two or three steps; a tangential root
    # (e.g. a circle touching the normalization line) converges linearly,
    # hence the generous iteration cap.
    scale = max(1.0, float(np.max(np.abs(h))))
    for _ in range(60):
        jac = _jacobian(h, system)
        step, *_ = np.linalg.lstsq(jac, -_residual_sharp(h, system), rcond=None)
        h = h + step
        if float(np.max(np.abs(step))) < 1e-16 * scale:
            break
    return h


def verify(mask: Mask, pd: PartitionData, tol: float = 1e-10) -> LawtonCheck:
    """Residual check of a mask against the system built on its own support."""
    system = build_system(list(mask.support), pd)
    res = float(np.max(np.abs(residual(mask, system))))
    return LawtonCheck(passed=res <= tol, max_residual=res)


def mark_verified(mask: Mask, pd: PartitionData, tol: float = 1e-10) -> Mask:
    """Return a copy with the verified flag set iff the check passes."""
    check = verify(mask, pd, tol)
    if check.passed:
        return replace(mask, verified=True, verified_tol=tol)
    return replace(mask, verified=False, verified_tol=None)
