"""JSON and CSV persistence plus the small text parsers used by the CLI.

Matrices serialize as native JSON integers, mask coefficients as decimal
strings (17+ significant digits) so a write/read round trip reproduces
every value bit-for-bit.  All dumps sort keys, making equal objects
produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import ParseError
from .lattice import Dilate, IntMatrix, Shear, SignFlip, Swap
from .partition import PartitionData
from .lawton import Mask
from .cascade import SampledFunction
from .filters import SupportBound


def dump_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(obj: Any, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(obj))


def read_json(path) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read JSON from {path!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# matrices and factor lists

def matrix_to_json(m: IntMatrix) -> dict:
    return {"d": m.dim, "entries": [list(row) for row in m.entries]}


def matrix_from_json(obj: Any) -> IntMatrix:
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ParseError("matrix JSON must be an object with an 'entries' key")
    entries = obj["entries"]
    if not isinstance(entries, list) or not entries:
        raise ParseError("matrix 'entries' must be a non-empty list of rows")
    d = obj.get("d", len(entries))
    if d != len(entries) or any(
        not isinstance(row, list) or len(row) != d for row in entries
    ):
        raise ParseError(f"matrix 'entries' must form a {d}x{d} square array")
    for row in entries:
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool):
                raise ParseError(f"matrix entries must be integers, got {x!r}")
    return IntMatrix.from_rows(entries)


_FACTOR_KINDS = {"swap", "sign", "shear", "dilate"}


def factor_to_json(f) -> dict:
    if isinstance(f, Swap):
        return {"kind": "swap", "i": f.i, "j": f.j}
    if isinstance(f, SignFlip):
        return {"kind": "sign", "p": f.p}
    if isinstance(f, Shear):
        return {"kind": "shear", "i": f.i, "j": f.j, "sign": f.sign}
    if isinstance(f, Dilate):
        return {"kind": "dilate", "p": f.p}
    raise TypeError(f"not an elementary factor: {f!r}")


def factor_from_json(obj: Any):
    if not isinstance(obj, dict) or obj.get("kind") not in _FACTOR_KINDS:
        raise ParseError(f"unknown factor record: {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "swap":
            return Swap(obj["i"], obj["j"])
        if kind == "sign":
            return SignFlip(obj["p"])
        if kind == "shear":
            return Shear(obj["i"], obj["j"], obj["sign"])
        return Dilate(obj["p"])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad factor record {obj!r}: {exc}") from exc


def factors_to_json(factors: Sequence) -> list:
    return [factor_to_json(f) for f in factors]


def factors_from_json(obj: Any) -> tuple:
    if not isinstance(obj, list):
        raise ParseError("factor list JSON must be an array")
    return tuple(factor_from_json(f) for f in obj)


# ---------------------------------------------------------------------------
# partitions

def partition_to_json(pd: PartitionData) -> dict:
    return {
        "A0": matrix_to_json(pd.A0),
        "A": matrix_to_json(pd.A),
        "S": matrix_to_json(pd.S),
        "S_inv": matrix_to_json(pd.S_inv),
        "ell": list(pd.ell),
        "q": list(pd.q),
    }


def _int_vector(obj: Any, what: str) -> tuple:
    if not isinstance(obj, list) or any(
        not isinstance(x, int) or isinstance(x, bool) for x in obj
    ):
        raise ParseError(f"{what} must be a list of integers, got {obj!r}")
    return tuple(obj)


def partition_from_json(obj: Any) -> PartitionData:
    if not isinstance(obj, dict):
        raise ParseError("partition JSON must be an object")
    try:
        return PartitionData(
            A0=matrix_from_json(obj["A0"]),
            A=matrix_from_json(obj["A"]),
            S=matrix_from_json(obj["S"]),
            S_inv=matrix_from_json(obj["S_inv"]),
            ell=_int_vector(obj["ell"], "'ell'"),
            q=_int_vector(obj["q"], "'q'"),
        )
    except KeyError as exc:
        raise ParseError(f"partition JSON is missing key {exc}") from exc


# ---------------------------------------------------------------------------
# masks

def _coeff_str(x: float) -> str:
    # 18 significant digits; float() parses this back to the identical bits
    return f"{x:.17e}"


def mask_to_json(mask: Mask) -> dict:
    obj = {
        "dim": mask.dim,
        "support": [
            {"n": list(n), "h": _coeff_str(h)}
            for n, h in zip(mask.support, mask.coeffs)
        ],
    }
    if mask.role != "scaling":
        obj["role"] = mask.role
    return obj


def mask_from_json(obj: Any) -> Mask:
    if not isinstance(obj, dict) or "support" not in obj:
        raise ParseError("mask JSON must be an object with a 'support' key")
    entries = obj["support"]
    if not isinstance(entries, list) or not entries:
        raise ParseError("mask 'support' must be a non-empty array")
    support = []
    coeffs = []
    for rec in entries:
        if not isinstance(rec, dict) or "n" not in rec or "h" not in rec:
            raise ParseError(f"mask support record needs 'n' and 'h': {rec!r}")
        support.append(_int_vector(rec["n"], "support point"))
        try:
            coeffs.append(float(rec["h"]))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad coefficient {rec['h']!r}") from exc
    dim = obj.get("dim", len(support[0]))
    return Mask(
        dim=dim,
        support=tuple(support),
        coeffs=tuple(coeffs),
        role=obj.get("role", "scaling"),
    )


def masks_to_json(masks: Sequence[Mask]) -> dict:
    return {"masks": [mask_to_json(m) for m in masks]}


def masks_from_json(obj: Any) -> list:
    """Accept either a single mask object or a {"masks": [...]} bundle."""
    if isinstance(obj, dict) and "masks" in obj:
        bundle = obj["masks"]
        if not isinstance(bundle, list) or not bundle:
            raise ParseError("'masks' must be a non-empty array")
        return [mask_from_json(m) for m in bundle]
    return [mask_from_json(obj)]


# ---------------------------------------------------------------------------
# sampled functions

def sampled_to_json(f: SampledFunction) -> dict:
    cells = [
        {"m": list(m), "v": v} for m, v in sorted(f.values.items())
    ]
    return {"A": matrix_to_json(f.matrix), "level": f.level, "cells": cells}


def sampled_from_json(obj: Any) -> SampledFunction:
    if not isinstance(obj, dict) or "cells" not in obj:
        raise ParseError("sampled-function JSON must have a 'cells' key")
    try:
        matrix = matrix_from_json(obj["A"])
        level = obj["level"]
    except KeyError as exc:
        raise ParseError(f"sampled-function JSON is missing key {exc}") from exc
    if not isinstance(level, int) or level < 0:
        raise ParseError(f"'level' must be a nonnegative integer, got {level!r}")
    values = {}
    for rec in obj["cells"]:
        if not isinstance(rec, dict) or "m" not in rec or "v" not in rec:
            raise ParseError(f"cell record needs 'm' and 'v': {rec!r}")
        values[_int_vector(rec["m"], "cell index")] = float(rec["v"])
    return SampledFunction(matrix=matrix, level=level, values=values)


def sampled_to_csv(f: SampledFunction) -> str:
    d = f.dim
    header = ",".join(f"m{i+1}" for i in range(d)) + ",value"
    lines = [header]
    for m, v in sorted(f.values.items()):
        lines.append(",".join(str(c) for c in m) + f",{v!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# verification reports

def qmf_report_to_json(max_dev: float, samples: int, seed: int) -> dict:
    return {"max_dev": max_dev, "samples": samples, "seed": seed}


def support_bound_to_json(sb: SupportBound) -> dict:
    return {"radius": sb.radius, "terms": list(sb.terms)}


def frame_report_to_json(report) -> dict:
    return {
        "f_norm_sq": report.f_norm_sq,
        "lj_curve": {str(j): v for j, v in sorted(report.lj_curve.items())},
        "parseval_partial": dict(sorted(report.parseval_partial.items())),
        "telescope_residuals": [dict(r) for r in report.telescope_residuals],
        "meta": dict(report.meta),
    }


def frame_report_csv_lj(obj: dict) -> str:
    curve = obj.get("lj_curve", {})
    lines = ["J,L_J"]
    for j in sorted(curve, key=int):
        lines.append(f"{int(j)},{curve[j]!r}")
    return "\n".join(lines) + "\n"


def _window_key(window: str) -> tuple:
    lo, hi = window.split("..")
    return (int(hi) - int(lo), int(hi))


def frame_report_csv_partial(obj: dict) -> str:
    part = obj.get("parseval_partial", {})
    lines = ["window,partial_sum"]
    for w in sorted(part, key=_window_key):
        lines.append(f"{w},{part[w]!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# CLI text parsers

def parse_support_box(text: str) -> tuple:
    """Parse "0..3,0..1,-1..1" into the tuple of all index vectors in the box."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty support box")
    ranges = []
    for part in text.split(","):
        part = part.strip()
        lo_hi = part.split("..")
        if len(lo_hi) != 2:
            raise ParseError(f"bad range {part!r}: expected 'a..b'")
        try:
            lo, hi = int(lo_hi[0]), int(lo_hi[1])
        except ValueError as exc:
            raise ParseError(f"bad range bounds in {part!r}") from exc
        if hi < lo:
            raise ParseError(f"range {part!r} is empty")
        ranges.append(range(lo, hi + 1))
    out = [()]
    for r in ranges:
        out = [p + (x,) for p in out for x in r]
    return tuple(out)


# ---------------------------------------------------------------------------
# project manifest

@dataclass
class Project:
    """Everything one pipeline run produced, with file references for bulk data."""

    partition: PartitionData
    masks: list
    iterates: dict = field(default_factory=dict)   # name -> relative file path
    reports: dict = field(default_factory=dict)    # name -> inline JSON object
    meta: dict = field(default_factory=dict)


def project_to_json(p: Project) -> dict:
    return {
        "partition": partition_to_json(p.partition),
        "masks": [mask_to_json(m) for m in p.masks],
        "iterates": dict(p.iterates),
        "reports": p.reports,
        "meta": p.meta,
    }


def project_from_json(obj: Any) -> Project:
    if not isinstance(obj, dict):
        raise ParseError("project JSON must be an object")
    try:
        return Project(
            partition=partition_from_json(obj["partition"]),
            masks=[mask_from_json(m) for m in obj["masks"]],
            iterates=dict(obj.get("iterates", {})),
            reports=dict(obj.get("reports", {})),
            meta=dict(obj.get("meta", {})),
        )
    except KeyError as exc:
        raise ParseError(f"project JSON is missing key {exc}") from exc
