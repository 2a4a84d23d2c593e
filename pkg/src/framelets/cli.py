"""Command-line front end: reduce, solve, cascade, wavelet, verify-filter,
verify-frame, pipeline, export.

Exit codes: 0 ok, 2 parse error, 3 precondition violated, 4 invariant or
verification breach, 5 solver found nothing.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import (
    FrameletError,
    InvariantError,
    NoSolutionError,
    ParseError,
    PreconditionError,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_INVARIANT = 4
EXIT_NO_SOLUTION = 5


def _load_arg(text: str):
    """Accept either a path to a JSON file or inline JSON."""
    from . import serialize

    stripped = text.strip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"inline JSON does not parse: {exc}") from exc
    return serialize.read_json(text)


def _load_matrix(text: str):
    from . import serialize

    obj = _load_arg(text)
    if isinstance(obj, list):  # bare [[...],[...]] row array
        obj = {"d": len(obj), "entries": obj}
    return serialize.matrix_from_json(obj)


def _load_partition_opts(args):
    """Resolve --partition / --matrix into a PartitionData."""
    from . import partition, serialize

    if getattr(args, "partition", None):
        return serialize.partition_from_json(_load_arg(args.partition))
    if getattr(args, "matrix", None):
        m = _load_matrix(args.matrix)
        _require_det2(m)
        _warn_not_expansive(m)
        return partition.reduce(m)
    raise ParseError("need --partition or --matrix")


def _require_det2(m) -> None:
    if abs(m.det()) != 2:
        raise PreconditionError(
            f"determinant must be +/-2, got {m.det()} for {m.entries!r}"
        )


def _warn_not_expansive(m) -> None:
    from .lattice import expansiveness

    verdict = expansiveness(m)
    if verdict != "expansive":
        print(
            f"warning: matrix is {verdict.replace('_', ' ')}; "
            "the lattice partition still applies but no wavelet construction "
            "is guaranteed",
            file=sys.stderr,
        )


def _write_or_print(obj, out: str | None) -> None:
    from . import serialize

    if out:
        serialize.write_json(obj, out)
    else:
        sys.stdout.write(serialize.dump_json(obj))


# ---------------------------------------------------------------------------
# subcommands

def cmd_reduce(args) -> int:
    from . import partition, serialize

    m = _load_matrix(args.matrix)
    _require_det2(m)
    _warn_not_expansive(m)
    pd = partition.reduce(m)
    report = partition.verify_partition(pd, radius=args.radius)
    if not report.passed:
        raise InvariantError(
            f"partition verification failed with {len(report.violations)} "
            f"violation(s); first: {report.violations[:3]!r}"
        )
    _write_or_print(serialize.partition_to_json(pd), args.out)
    print(f"reduced: A = {pd.A.entries}")
    print(f"similarity S = {pd.S.entries}")
    print(f"coset shift ell = {pd.ell}, parity vector q = {pd.q}")
    print(f"partition properties verified on radius-{args.radius} window: ok")
    return EXIT_OK


def cmd_solve(args) -> int:
    from . import lawton, serialize

    pd = _load_partition_opts(args)
    support = serialize.parse_support_box(args.support)
    system = lawton.build_system(support, pd)
    masks = lawton.solve(
        system,
        tol=args.tol,
        restarts=args.restarts,
        seed=args.seed,
    )
    if not masks:
        raise NoSolutionError(
            f"no filter on the {len(support)}-point support solves the "
            f"system to tolerance {args.tol}"
        )
    _write_or_print(serialize.masks_to_json(masks), args.out)
    best = max(abs(float(r)) for r in lawton.residual(masks[0], system))
    print(f"system: {system.n_rows} equations, {system.n_unknowns} unknowns")
    print(f"solutions found: {len(masks)} (distinct at 1e-6)")
    print(f"best max-residual: {best:.3e}")
    return EXIT_OK


def _mask_and_partition(args):
    from . import lawton, serialize

    pd = _load_partition_opts(args)
    masks = serialize.masks_from_json(_load_arg(args.mask))
    mask = masks[0]
    check = lawton.verify(mask, pd, tol=args.tol)
    if not check.passed:
        raise PreconditionError(
            f"mask fails its defining equations: max residual "
            f"{check.max_residual:.3e} > {args.tol}"
        )
    return lawton.mark_verified(mask, pd, tol=args.tol), pd


def cmd_cascade(args) -> int:
    from . import cascade, serialize

    mask, pd = _mask_and_partition(args)
    result = cascade.iterate(mask, pd.A, k_max=args.iters, eps=args.eps)
    _write_or_print(serialize.sampled_to_json(result.phi), args.out)
    print(f"iterations: {len(result.diffs)}, cells: {len(result.phi)}")
    print("diffs: " + ", ".join(f"{d:.3e}" for d in result.diffs))
    print(f"converged at eps={result.eps}: {result.converged}")
    return EXIT_OK


def cmd_wavelet(args) -> int:
    from . import cascade, serialize, wavelet

    mask, pd = _mask_and_partition(args)
    result = cascade.iterate(mask, pd.A, k_max=args.iters, eps=args.eps)
    psi = wavelet.build_wavelet(result.phi, mask, pd)
    if args.original:
        psi = wavelet.conjugate_to_original(psi, pd)
        print(f"wavelet conjugated back to the input dilation: "
              f"{pd.A0.entries}")
    _write_or_print(serialize.sampled_to_json(psi), args.out)
    print(f"wavelet cells: {len(psi)}, level: {psi.level}")
    return EXIT_OK


def cmd_verify_filter(args) -> int:
    from . import filters, serialize

    mask, pd = _mask_and_partition(args)
    dev = filters.check_qmf(mask, pd, samples=args.samples, seed=args.seed)
    report = {
        "qmf": serialize.qmf_report_to_json(dev, args.samples, args.seed),
    }
    try:
        sb = filters.support_bound(mask, pd.A)
        report["support_bound"] = serialize.support_bound_to_json(sb)
    except PreconditionError as exc:
        report["support_bound"] = {"error": str(exc)}
    _write_or_print(report, args.out)
    print(f"quadrature-mirror deviation over {args.samples} samples: {dev:.3e}")
    if "radius" in report["support_bound"]:
        print(f"support radius bound: {report['support_bound']['radius']:.4f}")
    if dev > args.tol:
        raise InvariantError(
            f"quadrature-mirror identity violated: {dev:.3e} > {args.tol}"
        )
    return EXIT_OK


def cmd_verify_frame(args) -> int:
    from . import cascade, frame, serialize, wavelet

    mask, pd = _mask_and_partition(args)
    result = cascade.iterate(mask, pd.A, k_max=args.iters, eps=args.eps)
    phi_k = result.phi
    phi_k1 = cascade.cascade_step(phi_k, mask)
    psi_k = wavelet.build_wavelet(phi_k, mask, pd)
    f = frame.random_test_function(
        pd.A,
        level=args.level,
        lo=(0,) * pd.A.dim,
        hi=(1,) * pd.A.dim,
        seed=args.seed,
    )
    report = frame.frame_report(
        f,
        phi_k,
        psi_k,
        phi_k1,
        j_range=(-4, 3),
        parseval_range=(-6, 2),
        telescope_scales=(0, 1),
        meta={"seed": args.seed, "stage": phi_k.level, "tol": args.tol},
    )
    _write_or_print(serialize.frame_report_to_json(report), args.out)
    residuals = [r["residual"] for r in report.telescope_residuals]
    worst = max(residuals) if residuals else 0.0
    print(f"f norm^2: {report.f_norm_sq:.6f}")
    print("telescope residuals: " + ", ".join(f"{r:.3e}" for r in residuals))
    for window, value in sorted(report.parseval_partial.items()):
        print(f"truncated tight-frame sum over {window}: {value:.6f}")
    if worst > args.tol:
        raise InvariantError(
            f"telescoping identity violated: {worst:.3e} > {args.tol}"
        )
    return EXIT_OK


def cmd_pipeline(args) -> int:
    from . import cascade, filters, frame, lawton, serialize, wavelet

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    pd = _load_partition_opts(args)
    serialize.write_json(serialize.partition_to_json(pd), out_dir / "partition.json")

    if args.mask:
        masks = serialize.masks_from_json(_load_arg(args.mask))
        for m in masks:
            check = lawton.verify(m, pd, tol=args.tol)
            if not check.passed:
                raise PreconditionError(
                    f"preloaded mask fails its equations: "
                    f"{check.max_residual:.3e} > {args.tol}"
                )
        print(f"preloaded {len(masks)} mask(s); solver skipped")
    else:
        if not args.support:
            raise ParseError("pipeline needs --support unless --mask is given")
        support = serialize.parse_support_box(args.support)
        system = lawton.build_system(support, pd)
        masks = lawton.solve(
            system, tol=args.tol, restarts=args.restarts, seed=args.seed
        )
        if not masks:
            raise NoSolutionError(
                f"no filter on the {len(support)}-point support solves the "
                f"system to tolerance {args.tol}"
            )
        print(f"solved: {len(masks)} distinct filter(s)")
    serialize.write_json(serialize.masks_to_json(masks), out_dir / "masks.json")
    mask = masks[0]

    result = cascade.iterate(mask, pd.A, k_max=args.iters, eps=args.eps)
    phi_k = result.phi
    phi_k1 = cascade.cascade_step(phi_k, mask)
    psi_k = wavelet.build_wavelet(phi_k, mask, pd)
    psi_orig = wavelet.conjugate_to_original(psi_k, pd)
    phi_orig = wavelet.conjugate_to_original(phi_k, pd)
    serialize.write_json(serialize.sampled_to_json(phi_k), out_dir / "phi.json")
    serialize.write_json(serialize.sampled_to_json(psi_k), out_dir / "psi.json")
    serialize.write_json(
        serialize.sampled_to_json(phi_orig), out_dir / "phi_original.json"
    )
    serialize.write_json(
        serialize.sampled_to_json(psi_orig), out_dir / "psi_original.json"
    )
    print(f"cascade: {len(result.diffs)} step(s), "
          f"final diff {result.diffs[-1]:.3e}, converged: {result.converged}")

    dev = filters.check_qmf(mask, pd, samples=1000, seed=args.seed)
    qmf_report = serialize.qmf_report_to_json(dev, 1000, args.seed)
    serialize.write_json(qmf_report, out_dir / "qmf.json")

    f = frame.random_test_function(
        pd.A,
        level=args.level,
        lo=(0,) * pd.A.dim,
        hi=(1,) * pd.A.dim,
        seed=args.seed,
    )
    report = frame.frame_report(
        f,
        phi_k,
        psi_k,
        phi_k1,
        j_range=(-3, 2),
        parseval_range=(-6, 2),
        telescope_scales=(0, 1),
        meta={
            "seed": args.seed,
            "stage": phi_k.level,
            "tol": args.tol,
            "qmf_max_dev": dev,
        },
    )
    report_json = serialize.frame_report_to_json(report)
    serialize.write_json(report_json, out_dir / "frame_report.json")

    project = serialize.Project(
        partition=pd,
        masks=masks,
        iterates={
            "phi": "phi.json",
            "psi": "psi.json",
            "phi_original": "phi_original.json",
            "psi_original": "psi_original.json",
        },
        reports={"qmf": qmf_report, "frame": report_json},
        meta={
            "version": _version(),
            "seeds": {"solver": args.seed, "frame": args.seed},
            "tolerances": {"mask": args.tol, "cascade_eps": args.eps},
        },
    )
    serialize.write_json(serialize.project_to_json(project), out_dir / "project.json")

    worst_telescope = max(r["residual"] for r in report.telescope_residuals)
    partials = report.parseval_partial.values()
    cap = report.f_norm_sq * (1.0 + 1e-6) + 1e-9
    checks = {
        "qmf": dev <= 1e-8,
        "telescope": worst_telescope <= 1e-8,
        "parseval_window": bool(partials)
        and all(-1e-12 <= p <= cap for p in partials),
    }
    for name, ok in sorted(checks.items()):
        print(f"verify {name}: {'pass' if ok else 'FAIL'}")
    if not all(checks.values()):
        raise InvariantError(
            "pipeline verification failed: "
            + ", ".join(k for k, v in sorted(checks.items()) if not v)
        )
    print(f"artifacts written to {out_dir}")
    return EXIT_OK


def cmd_export(args) -> int:
    from . import serialize

    obj = _load_arg(args.input)
    if not isinstance(obj, dict):
        raise ParseError("cannot export: input is not a JSON object")
    if "cells" in obj:
        text = serialize.sampled_to_csv(serialize.sampled_from_json(obj))
    elif "lj_curve" in obj or "parseval_partial" in obj:
        if args.curve == "partial":
            text = serialize.frame_report_csv_partial(obj)
        else:
            text = serialize.frame_report_csv_lj(obj)
    else:
        raise ParseError(
            "input JSON has no tabular form (expected sampled-function "
            "'cells' or a frame report)"
        )
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing

def _version() -> str:
    from . import __version__

    return __version__


def _add_common_mask_opts(p) -> None:
    p.add_argument("--partition", help="partition JSON (file or inline)")
    p.add_argument("--matrix", help="dilation matrix JSON; reduced on the fly")
    p.add_argument("--mask", required=True,
                   help="mask JSON, single object or {'masks': [...]} bundle")
    p.add_argument("--tol", type=float, default=1e-10,
                   help="mask verification tolerance")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="framelets",
        description="Compactly supported Parseval frame wavelets for "
                    "integer dilations with determinant +/-2.",
    )
    ap.add_argument("--version", action="version", version=_version())
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="similarity-reduce a dilation matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="solve the filter design system")
    p.add_argument("--partition")
    p.add_argument("--matrix")
    p.add_argument("--support", required=True,
                   help="index box like '0..3,0..1,0..1'")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("cascade", help="iterate the refinement operator")
    _add_common_mask_opts(p)
    p.add_argument("--iters", type=int, default=8)
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cascade)

    p = sub.add_parser("wavelet", help="build the wavelet from a filter")
    _add_common_mask_opts(p)
    p.add_argument("--iters", type=int, default=4)
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--original", action="store_true",
                   help="conjugate the result back to the input dilation")
    p.add_argument("--out")
    p.set_defaults(func=cmd_wavelet)

    p = sub.add_parser("verify-filter", help="check the filter identities")
    _add_common_mask_opts(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_filter)

    p = sub.add_parser("verify-frame", help="check the frame identities")
    _add_common_mask_opts(p)
    p.add_argument("--iters", type=int, default=3)
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_frame)

    p = sub.add_parser("pipeline", help="solve, iterate, build, verify")
    p.add_argument("--partition")
    p.add_argument("--matrix")
    p.add_argument("--mask", help="preload masks and skip the solver")
    p.add_argument("--support")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=3)
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("export", help="convert a JSON artifact to CSV")
    p.add_argument("input", help="JSON file produced by another subcommand")
    p.add_argument("--curve", choices=("lj", "partial"), default="lj")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NoSolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except InvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except FrameletError as exc:  # any remaining library error
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
