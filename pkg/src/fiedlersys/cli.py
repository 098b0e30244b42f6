"""Command-line front end: ``fiedlersys {pencil,zeros,recover,verify,report} FILE``.

Exit codes: 0 success, 1 invalid input, 2 numeric failure (singularity),
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys as _sys
from typing import Sequence

import numpy as np

from . import index as ix
from . import io
from . import verify as vf
from .errors import SingularityError, SpuriousVectorError, ValidationError
from .fiedler import BlockPencil, fiedler_pencil, is_operation_free
from .pgf import hermitian_pgf, parse_pgf, pgf_pencil, tridiagonal_pgf
from .recovery import project_left, project_right
from .spectral import match_multisets, pencil_residual, solve_pencil
from .system import cluster_roots, invariant_zeros_oracle

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3


def _fmt(z: complex) -> str:
    z = complex(z)
    return f"{z.real:+.12e}{z.imag:+.12e}j"


def _vec(v) -> str:
    return "[" + ", ".join(_fmt(x) for x in np.asarray(v).ravel()) + "]"


def _parse_lambda(text: str) -> complex:
    parts = text.split(",")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ValidationError(f"--lambda expects 're,im', got {text!r}") from None
    if len(vals) not in (1, 2) or not all(np.isfinite(vals)):
        raise ValidationError(f"--lambda expects 're,im', got {text!r}")
    return complex(vals[0], vals[1] if len(vals) == 2 else 0.0)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("FIEDLER_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValidationError(f"FIEDLER_SEED must be an integer, got {env!r}") from None


def _order_for(args, m: int):
    if getattr(args, "order", None):
        return ix._check_permutation(ix.parse_order(args.order), m)
    if getattr(args, "companion", None) == 2:
        return ix.second_companion(m)
    return ix.first_companion(m)


def _build(args, sys) -> BlockPencil:
    chosen = [bool(args.order), bool(args.pgf), args.companion is not None,
              args.tridiag, args.hermitian]
    if sum(chosen) > 1:
        raise ValidationError("choose at most one of --order, --pgf, --companion, --tridiag, --hermitian")
    if args.pgf:
        return pgf_pencil(sys, parse_pgf(args.pgf))
    if args.tridiag:
        return tridiagonal_pgf(sys)
    if args.hermitian:
        return hermitian_pgf(sys)
    return fiedler_pencil(sys, _order_for(args, sys.m))


def _structure_lines(pencil: BlockPencil, sys) -> list:
    lines = [f"pencil {pencil.label}: dim={pencil.dim} n={pencil.n} m={pencil.m} r={pencil.r}"]
    meta = pencil.meta
    if "order" in meta:
        sig = ix.from_factor_order(meta["order"])
        lines.append(f"factor order: {','.join(map(str, meta['order']))}")
        lines.append(f"CISS: {ix.ciss(sig)}")
        lines.append(f"(c1, i1) = {ix.leading_runs(sig)}")
    if "w" in meta:
        w0, w1 = meta["w"]
        lines.append(f"w0 = {tuple(w0)}  CIP(w0) = {tuple(ix.cip(w0))}")
        lines.append(f"w1 = {tuple(w1)}")
    if "warning" in meta:
        lines.append(f"warning: {meta['warning']}")
    tags = dict(pencil.tags, operation_free=is_operation_free(pencil, sys))
    lines.append("tags: " + " ".join(f"{k}={'yes' if v else 'no'}" for k, v in sorted(tags.items())))
    lines.append(f"block bandwidth: {pencil.bandwidth}")
    return lines


def cmd_pencil(args, out) -> int:
    sys = io.load_system(args.file)
    pencil = _build(args, sys)
    for line in _structure_lines(pencil, sys):
        print(line, file=out)
    if args.out:
        io.dump_pencil(pencil, args.out, {"operation_free": is_operation_free(pencil, sys)})
        print(f"wrote {args.out}", file=out)
    return EXIT_OK


def _pencil_zeros(sys, pencil, seed, inf_tol):
    spec = solve_pencil(pencil, seed=seed, inf_tol=inf_tol)
    scale = max(1.0, float(np.max(np.abs(spec.eigenvalues)))) if len(spec) else 1.0
    return spec, cluster_roots(spec.eigenvalues, 1e-7 * scale)


def cmd_zeros(args, out) -> int:
    sys = io.load_system(args.file)
    seed = _seed(args)
    lines = []
    pen_eigs = ora = None
    if args.method in ("pencil", "both"):
        pencil = fiedler_pencil(sys, _order_for(args, sys.m))
        spec, clusters = _pencil_zeros(sys, pencil, seed, args.inf_tol)
        pen_eigs = spec.eigenvalues
        lines.append(f"pencil {pencil.label}: {len(spec)} finite, {spec.num_infinite} infinite")
        lines += [f"  {_fmt(z)}  mult={k}" for z, k in clusters]
    if args.method in ("oracle", "both"):
        clusters = invariant_zeros_oracle(sys, with_multiplicity=True)
        ora = np.array([z for z, k in clusters for _ in range(k)], dtype=complex)
        lines.append(f"oracle det S: {len(ora)} roots")
        lines += [f"  {_fmt(z)}  mult={k}" for z, k in clusters]
    code = EXIT_OK
    if args.method == "both":
        gap, pairs = match_multisets(pen_eigs, ora)
        lines.append("pairing (pencil, oracle, |gap|):")
        lines += [f"  {_fmt(a)}  {_fmt(b)}  {abs(a - b):.3e}" for a, b in pairs]
        lines.append(f"max discrepancy: {gap:.3e}")
        if not gap <= args.pair_tol:
            lines.append(f"discrepancy exceeds {args.pair_tol:.1e}")
            code = EXIT_VERIFY
    print("\n".join(lines), file=out)
    return code


def _null_pair(pencil: BlockPencil, lam: complex):
    """Right and left (``w^T M = 0``) null vectors from the smallest singular triplet."""
    u, s, vh = np.linalg.svd(pencil(lam))
    return vh[-1].conj(), u[:, -1].conj(), s[-1] / max(s[0], np.finfo(float).tiny)


def _print_direction(zd, out, verbose, vec, selector, pencil_res):
    print(f"{zd.side} direction at {_fmt(zd.lam)}", file=out)
    print(f"  u = {_vec(zd.u)}", file=out)
    print(f"  x = {_vec(zd.x)}", file=out)
    print(f"  relative residual = {zd.residual:.3e}", file=out)
    if verbose:
        print(f"  pencil residual = {pencil_res:.3e}", file=out)
        print(f"  selector block = {selector}", file=out)
        print(f"  pencil vector = {_vec(vec)}", file=out)


def cmd_recover(args, out) -> int:
    sys = io.load_system(args.file)
    order = _order_for(args, sys.m)
    pencil = fiedler_pencil(sys, order)
    sig = ix.from_factor_order(order)
    m = sys.m
    c1, i1 = ix.leading_runs(sig)
    f_block, k_block = m - c1, (m if c1 > 0 else m - i1)
    T, N = np.asarray(pencil.T), np.asarray(pencil.N)
    if args.all_zeros:
        spec = solve_pencil(pencil, seed=_seed(args), inf_tol=args.inf_tol)
        items = [(lam, spec.right[:, k], spec.left[:, k]) for k, lam in enumerate(spec.eigenvalues)]
    else:
        if args.lam is None:
            raise ValidationError("give --lambda re,im or --all-zeros")
        lam = _parse_lambda(args.lam)
        v, w, rel_sv = _null_pair(pencil, lam)
        if rel_sv > args.zero_tol:
            print(f"warning: {_fmt(lam)} is not a zero within tolerance "
                  f"(relative smallest singular value {rel_sv:.3e})", file=out)
        items = [(lam, v, w)]
    for lam, v, w in items:
        if args.side in ("right", "both"):
            zd = project_right(sys, order, v, lam)
            _print_direction(zd, out, args.verbose, v, f"F: block {f_block}",
                             pencil_residual(T, N, lam, v))
        if args.side in ("left", "both"):
            zd = project_left(sys, order, w, lam)
            _print_direction(zd, out, args.verbose, w, f"K: block {k_block}",
                             pencil_residual(T, N, lam, w, left=True))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    sys = io.load_system(args.file)
    pencil = _build(args, sys)
    report = vf.verify_all(sys, pencil, args.samples, _seed(args), args.rank_tol_scale)
    print(report.to_json() if args.format == "json" else report.to_text(), end="\n" if args.format == "json" else "", file=out)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_report(args, out) -> int:
    """Structure, zeros and verification for one pencil in a single document."""
    sys = io.load_system(args.file)
    pencil = _build(args, sys)
    seed = _seed(args)
    lines = [f"system: {sys.name or args.file}"]
    lines += _structure_lines(pencil, sys)
    spec, clusters = _pencil_zeros(sys, pencil, seed, args.inf_tol)
    lines.append(f"invariant zeros: {len(spec)} finite, {spec.num_infinite} infinite")
    lines += [f"  {_fmt(z)}  mult={k}" for z, k in clusters]
    report = vf.verify_all(sys, pencil, args.samples, seed, args.rank_tol_scale)
    lines.append(report.to_text().rstrip("\n"))
    print("\n".join(lines), file=out)
    return EXIT_OK if report.passed else EXIT_VERIFY


def _add_pencil_choice(p, orders_only=False):
    p.add_argument("--order", help='factor order, e.g. "1,3,5,0,2,4"')
    p.add_argument("--companion", type=int, choices=(1, 2))
    if not orders_only:
        p.add_argument("--pgf", help='proper permutation "w0;w1", e.g. "0,2;1,3"')
        p.add_argument("--tridiag", action="store_true", help="block tridiagonal PGF K_o")
        p.add_argument("--hermitian", action="store_true", help="Hermitian PGF (odd m)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (falls back to $FIEDLER_SEED, then 0)")
    common.add_argument("--verbose", "-v", action="store_true")
    common.add_argument("--rank-tol-scale", type=float, default=vf.RANK_TOL_SCALE)
    common.add_argument("--inf-tol", type=float, default=1e-10,
                        help="|mu| below inf_tol*||Y|| counts as infinite")

    parser = argparse.ArgumentParser(prog="fiedlersys", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pencil", parents=[common], help="build a pencil and classify it")
    p.add_argument("file")
    _add_pencil_choice(p)
    p.add_argument("--out", help="write the pencil as JSON")
    p.set_defaults(func=cmd_pencil)

    p = sub.add_parser("zeros", parents=[common], help="invariant zeros")
    p.add_argument("file")
    _add_pencil_choice(p, orders_only=True)
    p.add_argument("--method", choices=("pencil", "oracle", "both"), default="pencil")
    p.add_argument("--pair-tol", type=float, default=1e-7)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("recover", parents=[common], help="zero directions from pencil vectors")
    p.add_argument("file")
    _add_pencil_choice(p, orders_only=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lambda", dest="lam", metavar="RE,IM")
    g.add_argument("--all-zeros", action="store_true")
    p.add_argument("--side", choices=("right", "left", "both"), default="right")
    p.add_argument("--zero-tol", type=float, default=1e-8,
                   help="warn when sigma_min/sigma_max of the pencil at lambda exceeds this")
    p.set_defaults(func=cmd_recover)

    for name, func, helptext in (("verify", cmd_verify, "verification report"),
                                 ("report", cmd_report, "structure, zeros and verification")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file")
        _add_pencil_choice(p)
        p.add_argument("--samples", type=int, default=20)
        if name == "verify":
            p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = _sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (ValidationError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    except (SingularityError, SpuriousVectorError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=_sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
