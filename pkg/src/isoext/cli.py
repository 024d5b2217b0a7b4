"""Command line front end: verify, span, extend, generate.

Exit codes: 0 success, 1 mathematical failure (the report carries an
"error" object), 2 malformed input.
"""

from __future__ import annotations

import argparse
import datetime
import platform
import sys

import numpy as np

from . import __version__
from .completion import apply_global, build_axis_extension, build_global, decompose
from .errors import IsoextError, IsometryViolation
from .extension import build_extension, evaluate, image_span
from .generate import KINDS, generate
from .instance import ProblemInstance, SchemaError, dumps
from .pointset import bounding_radius, cube_check, validate_isometry
from .span import (
    build_span,
    constant_coordinates,
    contains,
    gs_power,
    index_set_finite,
    index_set_span,
    is_axis_aligned,
    subspace_residual,
)

EXIT_OK, EXIT_MATH, EXIT_SCHEMA = 0, 1, 2


def _error(exc: Exception) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc)}
    residual = getattr(exc, "residual", None)
    if residual is not None:
        err["residual"] = residual
    return err


def cmd_verify(inst: ProblemInstance, tol: float | None = None) -> tuple[dict, int]:
    tols = inst.tolerances(tol)
    s = inst.sample()
    report = validate_isometry(s, tols["isometry"])
    out = {
        "command": "verify",
        "passed": report.passed,
        "validation": report.as_dict(),
        "cube": {
            "sources": cube_check(s.sources).as_dict(),
            "targets": cube_check(s.targets).as_dict(),
        },
    }
    if not report.passed:
        out["error"] = _error(IsometryViolation(
            f"relative distance residual {report.relative_residual:.3e} exceeds "
            f"{tols['isometry']:.1e}",
            residual=report.relative_residual,
        ))
        return out, EXIT_MATH
    return out, EXIT_OK


def cmd_span(inst: ProblemInstance, tol: float | None = None) -> tuple[dict, int]:
    tols = inst.tolerances(tol)
    s = inst.sample()
    E = s.source_set
    S = build_span(E, s.p, tols["rank"])
    T = build_span(s.target_set, s.q, tols["rank"])
    r0 = bounding_radius(E, s.p).radius
    stab = []
    for n in (1, 2, 3, 5):
        for mult in (1, 2, 10):
            Sn = gs_power(E, s.p, n, mult * r0, tols["rank"])
            stab.append({"order": n, "radius": mult * r0, "rank": Sn.rank,
                         "residual_vs_first_order": subspace_residual(S, Sn)})
    out = {
        "command": "span",
        "source_span": S.as_dict(),
        "target_span": T.as_dict(),
        "index_set_points": list(index_set_finite(E)),
        "index_set_span": list(index_set_span(S, tols["membership"])),
        "constant_coordinates": list(constant_coordinates(S)),
        "axis_aligned": is_axis_aligned(S, tols["membership"]),
        "stabilization": stab,
        "max_stabilization_residual": max(d["residual_vs_first_order"] for d in stab),
    }
    return out, EXIT_OK


def cmd_extend(inst: ProblemInstance, tol: float | None = None,
               lam: list | None = None) -> tuple[dict, int]:
    tols = inst.tolerances(tol)
    s = inst.sample()
    out: dict = {"command": "extend"}
    try:
        F2 = build_extension(s, tols["isometry"], tols["rank"], level=2)
        F = F2.lower
        G = build_global(F2)
    except IsoextError as exc:
        out["error"] = _error(exc)
        return out, EXIT_MATH
    img = image_span(F2, tols["rank"])
    tgt = build_span(s.target_set, s.q, tols["rank"])
    out.update(
        span_isometry=F.as_dict(),
        second_order=F2.as_dict(),
        global_isometry=G.as_dict(),
        determinant=G.determinant(),
        decomposition=decompose(G, F2).as_dict(),
        image_span_residual=subspace_residual(img, tgt),
    )
    if lam is not None:
        try:
            A = build_axis_extension(F2, lam, tols["membership"])
        except (IsoextError, ValueError) as exc:
            out["error"] = _error(exc)
            return out, EXIT_MATH
        out["axis_extension"] = A.as_dict()
    queries = []
    for qv in inst.queries:
        qv = np.asarray(qv, dtype=float)
        inside = contains(F2.domain, qv, tols["membership"])
        entry = {"x": qv, "in_domain": inside, "global": apply_global(G, qv)}
        if inside:
            entry["span"] = evaluate(F2, qv, tols["membership"])
        queries.append(entry)
    out["queries"] = queries
    return out, EXIT_OK


def cmd_generate(kind: str, n: int, rank: int | None, seed: int, points: int | None = None,
                 delta: float = 1e-3, queries: int = 0) -> ProblemInstance:
    return generate(kind, n, rank, seed, points, delta, queries)


def _meta() -> dict:
    return {
        "tool": "isoext",
        "version": __version__,
        "python": platform.python_version(),
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--no-meta", action="store_true", help="omit tool/version/timestamp block")

    inp = argparse.ArgumentParser(add_help=False)
    inp.add_argument("instance", help="instance JSON file, or - for stdin")
    inp.add_argument("--tol", type=float, help="isometry tolerance (overrides the instance)")

    parser = argparse.ArgumentParser(prog="isoext", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common, inp], help="check that the pairs form an isometry")
    sub.add_parser("span", parents=[common, inp], help="report spans and index sets")
    ext = sub.add_parser("extend", parents=[common, inp], help="build span and global isometries")
    ext.add_argument("--lambda", dest="lam", metavar="I,J,...",
                     help="1-based axis set for the axis-wise construction")
    gen = sub.add_parser("generate", parents=[common], help="synthesize an instance")
    gen.add_argument("--kind", choices=KINDS, default="isometric")
    gen.add_argument("--dim", "-n", type=int, default=16)
    gen.add_argument("--rank", "-k", type=int, default=None)
    gen.add_argument("--points", "-m", type=int, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--delta", type=float, default=1e-3)
    gen.add_argument("--queries", type=int, default=0)
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _emit(doc: dict, args) -> None:
    if not args.no_meta:
        doc = {"meta": _meta(), **doc}
    text = dumps(doc) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "generate":
        try:
            inst = cmd_generate(args.kind, args.dim, args.rank, args.seed,
                                args.points, args.delta, args.queries)
        except ValueError as exc:
            sys.stderr.write(f"isoext: {exc}\n")
            return EXIT_SCHEMA
        _emit(inst.to_dict(), args)
        return EXIT_OK

    try:
        inst = ProblemInstance.loads(_read(args.instance))
        inst.sample()
        lam = None
        if getattr(args, "lam", None):
            lam = [int(v) for v in args.lam.split(",") if v.strip()]
    except (OSError, SchemaError, ValueError) as exc:
        sys.stderr.write(f"isoext: {exc}\n")
        _emit({"command": args.command, "error": _error(exc)}, args)
        return EXIT_SCHEMA

    if args.command == "verify":
        doc, code = cmd_verify(inst, args.tol)
    elif args.command == "span":
        doc, code = cmd_span(inst, args.tol)
    else:
        doc, code = cmd_extend(inst, args.tol, lam)
    _emit(doc, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
