"""Command-line front end: reproducible analysis runs with JSON reports.

Exit codes: 0 = certified success, 1 = usage/structural/precondition error,
2 = a mathematical claim failed on this instance (a falsification finding,
kept distinct from ordinary errors on purpose).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .constants import constants_report
from .doubling import (
    doubling_constant,
    sandwich_doubling_check,
    snowflake_doubling_check,
    weak_doubling_constant,
)
from .embed import (
    DegenerateEmbeddingError,
    EmbeddingConfig,
    NonMetricError,
    assouad_embed,
    bmetric_assouad_pipeline,
    converse_bound,
)
from .remetrize import FrinkPreconditionError, chain_metric, epsilon_remetrize, frink_verify
from .spaces import GeneratorSpec, SemimetricSpace, StructuralError, generate, validate

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors by default; the contract reserves
    # 2 for certified bound violations, so usage errors map to 1 instead.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_ERROR)


class ViolationError(Exception):
    """A certified mathematical claim failed on this instance."""


def _read_space(path: str) -> SemimetricSpace:
    text = Path(path).read_text()
    if path.endswith(".csv"):
        space = SemimetricSpace.from_csv(text)
    else:
        space = SemimetricSpace.from_json(text)
    report = validate(space)
    if not report.ok:
        bad = report.s1_witness if not report.s1_ok else report.s2_witness
        raise StructuralError(f"input is not a semimetric space (witness pair {bad})")
    return space


def _manifest(args, command: str, parameters: dict) -> dict:
    return {
        "command": command,
        "input": getattr(args, "in_path", None),
        "parameters": parameters,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "out": getattr(args, "out", None),
    }


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        if not args.quiet:
            print(args.out)
    elif not args.quiet:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    params = {}
    for key in ("n", "m", "K", "k", "p", "dim"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    if args.seed is not None:
        params["seed"] = args.seed
    space = generate(GeneratorSpec(args.family, params))
    out = args.space_out
    if out is None:
        raise StructuralError("generate requires --space-out PATH")
    if args.format == "csv":
        Path(out).write_text(space.to_csv())
    else:
        Path(out).write_text(space.to_json() + "\n")
    _emit(args, {"manifest": _manifest(args, "generate", params) | {"space_out": out},
                 "report": {"points": space.n, "family": args.family}})
    return EXIT_OK


def cmd_constants(args) -> int:
    space = _read_space(args.in_path)
    rep = constants_report(space)
    _emit(args, {"manifest": _manifest(args, "constants", {}), "report": rep.to_dict()})
    return EXIT_OK


def cmd_remetrize(args) -> int:
    space = _read_space(args.in_path)
    if args.eps is None:
        rem = chain_metric(space)
    else:
        rem = epsilon_remetrize(space, args.eps)
    if args.matrix_out:
        Path(args.matrix_out).write_text(
            space.with_dist(rem.D).to_json() + "\n"
        )
    _emit(args, {"manifest": _manifest(args, "remetrize", {"eps": args.eps}),
                 "report": rem.to_dict()})
    return EXIT_OK


def cmd_doubling(args) -> int:
    space = _read_space(args.in_path)
    report: dict = {"doubling": doubling_constant(space, args.exact_max).to_dict()}
    if args.weak:
        report["weak"] = weak_doubling_constant(space, min(args.exact_max, 20)).to_dict()
    _emit(args, {"manifest": _manifest(args, "doubling",
                                       {"exact_max": args.exact_max, "weak": args.weak}),
                 "report": report})
    return EXIT_OK


def cmd_embed(args) -> int:
    space = _read_space(args.in_path)
    config = EmbeddingConfig(
        alpha=args.alpha,
        tau=args.tau,
        conflict_factor=args.conflict_factor,
        phase_blocks=args.phase_blocks,
    )
    emb = assouad_embed(space, config)
    if args.coords_out:
        Path(args.coords_out).write_text(emb.coords_csv())
    _emit(args, {"manifest": _manifest(args, "embed", {
        "alpha": args.alpha, "tau": args.tau,
        "conflict_factor": args.conflict_factor, "phase_blocks": args.phase_blocks}),
        "report": emb.to_dict()})
    return EXIT_OK


def cmd_pipeline(args) -> int:
    space = _read_space(args.in_path)
    result = bmetric_assouad_pipeline(space, args.alpha)
    _emit(args, {"manifest": _manifest(args, "pipeline", {"alpha": args.alpha}),
                 "report": result.to_dict()})
    return EXIT_OK


def _verify_report(args, claim: str, holds: bool, detail: dict) -> int:
    _emit(args, {"manifest": _manifest(args, "verify", {"theorem": claim}),
                 "report": {"theorem": claim, "holds": holds, **detail}})
    return EXIT_OK if holds else EXIT_VIOLATION


def cmd_verify(args) -> int:
    space = _read_space(args.in_path)
    claim = args.theorem
    n = space.n
    mask = ~np.eye(n, dtype=bool)
    if claim == "2.1":
        cert = frink_verify(space)
        return _verify_report(args, claim, cert.holds, cert.to_dict())
    if claim == "2.2":
        eps = args.eps if args.eps is not None else 1.0
        rem = epsilon_remetrize(space, eps)
        powered = space.dist ** rem.p
        holds = bool(
            (rem.D[mask] <= powered[mask]).all()
            and (powered[mask] <= (1.0 + eps) * rem.D[mask] * (1.0 + 1e-12)).all()
        )
        return _verify_report(args, claim, holds,
                              {"p": rem.p, "eps": eps, "sandwich_hi": rem.sandwich_hi})
    if claim == "3.3":
        check = snowflake_doubling_check(space, args.p, args.exact_max)
        return _verify_report(args, claim, check.holds, check.to_dict())
    if claim == "3.4":
        rem = chain_metric(space)
        alpha = max(1.0, rem.sandwich_hi)
        check = sandwich_doubling_check(space, space.with_dist(rem.D), alpha, args.exact_max)
        return _verify_report(args, claim, check.holds, check.to_dict() | {"alpha": alpha})
    if claim == "3.5":
        try:
            result = bmetric_assouad_pipeline(space, args.alpha)
        except AssertionError as exc:
            return _verify_report(args, claim, False, {"detail": str(exc)})
        return _verify_report(args, claim, True, result.to_dict())
    if claim == "4.1":
        try:
            result = bmetric_assouad_pipeline(space, args.alpha)
        except AssertionError as exc:
            return _verify_report(args, claim, False, {"detail": str(exc)})
        rep = converse_bound(space, result.embedding.pairwise_norms(), result.alpha_prime)
        return _verify_report(args, claim, rep.holds, rep.to_dict())
    if claim == "4.3":
        rem = chain_metric(space)
        c = rem.sandwich_hi
        holds = bool(
            (rem.D[mask] <= space.dist[mask]).all()
            and (space.dist[mask] <= c * rem.D[mask] * (1.0 + 1e-12)).all()
        )
        return _verify_report(args, claim, holds, {"c": c})
    raise StructuralError(f"unknown claim {claim}")


def build_parser() -> _Parser:
    parser = _Parser(prog="bmetric", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--quiet", action="store_true")

    g = sub.add_parser("generate", help="write a generated space to a file")
    g.add_argument("--family", required=True,
                   choices=("example31", "doubling-not-weak", "random-bmetric",
                            "snowflaked-grid", "euclidean-points"))
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--K", type=float)
    g.add_argument("--k", type=int)
    g.add_argument("--p", type=float)
    g.add_argument("--dim", type=int)
    g.add_argument("--space-out", required=True, help="path for the generated space file")
    common(g)
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("constants", help="relaxation and polygonal constants")
    c.add_argument("in_path")
    common(c)
    c.set_defaults(func=cmd_constants)

    r = sub.add_parser("remetrize", help="chain metric, optionally with a snowflake exponent")
    r.add_argument("in_path")
    r.add_argument("--eps", type=float, default=None,
                   help="search for p with a (1+eps) sandwich; omit for the plain chain metric")
    r.add_argument("--matrix-out", default=None, help="write the metric matrix as a space file")
    common(r)
    r.set_defaults(func=cmd_remetrize)

    db = sub.add_parser("doubling", help="doubling constant (and optionally the weak analog)")
    db.add_argument("in_path")
    db.add_argument("--exact-max", type=int, default=15)
    db.add_argument("--weak", action="store_true")
    common(db)
    db.set_defaults(func=cmd_doubling)

    e = sub.add_parser("embed", help="snowflake embedding of a metric space into R^N")
    e.add_argument("in_path")
    e.add_argument("--alpha", type=float, required=True)
    e.add_argument("--tau", type=float, default=1.0 / 3.0)
    e.add_argument("--conflict-factor", type=float, default=3.0)
    e.add_argument("--phase-blocks", type=int, default=3)
    e.add_argument("--coords-out", default=None, help="write coordinates as CSV")
    common(e)
    e.set_defaults(func=cmd_embed)

    pl = sub.add_parser("pipeline", help="remetrize then embed an arbitrary semimetric space")
    pl.add_argument("in_path")
    pl.add_argument("--alpha", type=float, required=True)
    common(pl)
    pl.set_defaults(func=cmd_pipeline)

    v = sub.add_parser("verify", help="certify one of the toolkit's supported claims")
    v.add_argument("in_path")
    v.add_argument("--theorem", required=True,
                   choices=("2.1", "2.2", "3.3", "3.4", "3.5", "4.1", "4.3"),
                   help="claim identifier")
    v.add_argument("--eps", type=float, default=None)
    v.add_argument("--p", type=float, default=0.5)
    v.add_argument("--alpha", type=float, default=0.75)
    v.add_argument("--exact-max", type=int, default=15)
    common(v)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    try:
        return args.func(args)
    except (StructuralError, FrinkPreconditionError, NonMetricError, ValueError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (DegenerateEmbeddingError, AssertionError) as exc:
        print(f"falsification finding: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ViolationError as exc:
        print(f"falsification finding: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    raise SystemExit(main())
