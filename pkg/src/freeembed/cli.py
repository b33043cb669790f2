"""Command-line entry point: ``freeembed {nc,moment,report,verify-embedding,simulate}``.

Exit codes: 0 success, 2 usage or configuration error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any

from . import __version__
from .errors import FreeEmbedError, SizeLimitError, ValidationError
from .mp import free_moment, lemma2_moment, make_word, theorem2_rhs, word_report
from .partitions import (
    SetPartition,
    enumerate_nc,
    enumerate_nc2,
    from_text,
    kreweras,
    mobius,
    to_text,
)
from .poly import YPolynomial
from .sim import (
    SimConfig,
    convergence_study,
    embedding_check,
    mc_trace_moment,
    reports_to_csv,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3


class UsageError(Exception):
    pass


def _manifest(args: argparse.Namespace) -> dict[str, Any]:
    config = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    return {
        "subcommand": args.command,
        "config": config,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "seed": getattr(args, "seed", None),
    }


def _emit_json(args, result: dict) -> None:
    print(json.dumps({"manifest": _manifest(args), "result": result}, sort_keys=True))


def _emit_csv(rows: list[dict], columns: list[str]) -> None:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    sys.stdout.write(buf.getvalue())


def _partition_arg(text: str, k: int) -> SetPartition:
    ground = range(1, k + 1)
    if text.strip() == "0":
        return SetPartition.singletons(ground)
    if text.strip() == "1":
        return SetPartition.one_block(ground)
    try:
        return from_text(text, ground)
    except ValidationError as exc:
        raise UsageError(str(exc)) from None


def _word_arg(text: str):
    try:
        return make_word(text)
    except ValidationError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------

def cmd_nc(args) -> int:
    k = args.k
    if k < 1:
        raise UsageError("k must be >= 1")
    result: dict[str, Any] = {"k": k}
    if args.kreweras is not None:
        p = _partition_arg(args.kreweras, k)
        result["partition"] = to_text(p)
        result["kreweras"] = to_text(kreweras(p))
    elif args.mobius is not None:
        s, p = (_partition_arg(t, k) for t in args.mobius)
        result["lower"], result["upper"] = to_text(s), to_text(p)
        result["mobius"] = mobius(s, p)
    else:
        parts = enumerate_nc2(k) if args.pairs else enumerate_nc(k)
        result["kind"] = "NC2" if args.pairs else "NC"
        result["count"] = len(parts)
        result["partitions"] = [[list(b) for b in p.blocks] for p in parts]

    if args.format == "json":
        _emit_json(args, result)
    elif args.format == "csv":
        if "partitions" in result:
            _emit_csv(
                [{"index": i, "partition": to_text(SetPartition.from_blocks(b))}
                 for i, b in enumerate(result["partitions"])],
                ["index", "partition"],
            )
        else:
            keys = [c for c in result if c != "k"]
            _emit_csv([{c: result[c] for c in keys}], keys)
    else:
        if "kreweras" in result:
            print(result["kreweras"])
        elif "mobius" in result:
            print(result["mobius"])
        else:
            for b in result["partitions"]:
                print(to_text(SetPartition.from_blocks(b)))
            print(f"# {result['count']} partitions")
    return EXIT_OK


def _parse_y(text: str) -> Fraction:
    try:
        y = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse y={text!r}; use an integer or num/den") from None
    if y <= 0:
        raise UsageError("y must be positive")
    return y


def cmd_moment(args) -> int:
    w = _word_arg(args.word)
    methods = ["lemma2", "free", "theorem2"] if args.method == "all" else [args.method]
    values: dict[str, YPolynomial] = {}
    for m in methods:
        if m == "lemma2":
            values[m] = lemma2_moment(w, exponent=args.lemma2_form)
        elif m == "free":
            values[m] = YPolynomial.coerce(free_moment(w))
        else:
            values[m] = theorem2_rhs(w)
    y = None if args.y is None else _parse_y(args.y)
    agree = len({v for v in values.values()}) == 1

    result: dict[str, Any] = {"word": list(w), "y": None if y is None else str(y)}
    result["polynomials"] = {m: v.to_json_obj() for m, v in values.items()}
    result["text"] = {m: str(v) for m, v in values.items()}
    if y is not None:
        result["values"] = {m: str(Fraction(v.evaluate(y))) for m, v in values.items()}
    if len(methods) > 1:
        result["verdict"] = "AGREE" if agree else "DISAGREE"

    if args.format == "json":
        _emit_json(args, result)
    elif args.format == "csv":
        rows = [
            {"method": m, "polynomial": str(v),
             "value": "" if y is None else str(Fraction(v.evaluate(y)))}
            for m, v in values.items()
        ]
        _emit_csv(rows, ["method", "polynomial", "value"])
    else:
        for m, v in values.items():
            shown = str(v) if y is None else str(Fraction(v.evaluate(y)))
            print(shown if len(methods) == 1 else f"{m}: {shown}")
        if len(methods) > 1:
            print(result["verdict"])
    return EXIT_OK if agree else EXIT_VERIFY


def cmd_report(args) -> int:
    w = _word_arg(args.word)
    rep = word_report(w)
    agree = rep["lemma2"] == rep["free_mixed"] == rep["theorem2_rhs"]
    counts_match = all(c["A"] == c["B"] for c in rep["profile_counts"].values())
    if args.format == "json":
        _emit_json(args, rep)
    elif args.format == "csv":
        rows = [{"profile": t, "A": c["A"], "B": c["B"]} for t, c in rep["profile_counts"].items()]
        _emit_csv(rows, ["profile", "A", "B"])
    else:
        print(f"word {','.join(map(str, w))}")
        for key in ("lemma2", "free_mixed", "theorem2_rhs"):
            print(f"{key}: {YPolynomial.from_json_obj(rep[key])}")
        for t, c in rep["profile_counts"].items():
            print(f"profile ({t}): #A={c['A']} #B={c['B']}")
    return EXIT_OK if agree and counts_match else EXIT_VERIFY


def cmd_verify_embedding(args) -> int:
    if args.p < 1 or args.n < 1:
        raise UsageError("p and n must be >= 1")
    dev, allowed = embedding_check(args.p, args.n, args.law, args.seed)
    ok = dev <= allowed
    result = {
        "p": args.p, "n": args.n, "seed": args.seed, "law": args.law,
        "deviation": dev, "allowed": allowed, "status": "PASS" if ok else "FAIL",
    }
    if args.format == "json":
        _emit_json(args, result)
    elif args.format == "csv":
        _emit_csv([result], list(result))
    else:
        print(f"max deviation {dev:.3e} (allowed {allowed:.3e}): {result['status']}")
    return EXIT_OK if ok else EXIT_VERIFY


def _parse_ladder(text: str) -> list[tuple[int, int]]:
    ladder = []
    for rung in text.split(","):
        try:
            p, n = rung.lower().split("x")
            ladder.append((int(p), int(n)))
        except ValueError:
            raise UsageError(f"bad ladder rung {rung!r}; use PxN,PxN,...") from None
    return ladder


def cmd_simulate(args) -> int:
    w = _word_arg(args.word)
    if args.ladder:
        reports = convergence_study(
            w, _parse_ladder(args.ladder), args.reps, args.seed, args.law, workers=args.workers
        )
    else:
        cfg = SimConfig(args.p, args.n, w, args.reps, args.seed, args.law)
        reports = [mc_trace_moment(cfg, workers=args.workers)]
    if args.format == "json":
        result: Any = [r.to_dict() for r in reports]
        _emit_json(args, {"reports": result})
    elif args.format == "csv":
        sys.stdout.write(reports_to_csv(reports))
    else:
        for r in reports:
            c = r.config
            se = "n/a" if r.std_error is None else f"{r.std_error:.5f}"
            print(
                f"p={c['p']} n={c['n']} y={c['y']:.4g} word={','.join(map(str, c['word']))} "
                f"reps={c['replicates']}: estimate {r.estimate:.5f} (se {se}), "
                f"oracle {r.oracle_value:.5f}, abs error {r.abs_error:.5f}"
            )
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freeembed", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=["text", "json", "csv"], default="text")

    nc = sub.add_parser("nc", help="enumerate NC(k), Kreweras complements, Möbius values")
    nc.add_argument("k", type=int)
    g = nc.add_mutually_exclusive_group()
    g.add_argument("--kreweras", metavar="PARTITION", help='e.g. "{{1,2},{3}}"')
    g.add_argument("--mobius", nargs=2, metavar=("LOWER", "UPPER"),
                   help='partition literals; "0" and "1" mean all-singletons and one block')
    g.add_argument("--pairs", action="store_true", help="enumerate pair partitions NC_2(k)")
    fmt(nc)
    nc.set_defaults(func=cmd_nc)

    mo = sub.add_parser("moment", help="mixed moment of free Marčenko-Pastur families")
    mo.add_argument("word", help="comma-separated 1-based family labels, e.g. 1,2,1,2")
    yg = mo.add_mutually_exclusive_group()
    yg.add_argument("--y", help="evaluate at a rational y, e.g. 1/2")
    yg.add_argument("--symbolic", action="store_true", help="print the polynomial in y (default)")
    mo.add_argument("--method", choices=["lemma2", "free", "theorem2", "all"], default="lemma2")
    mo.add_argument("--lemma2-form", choices=["proof", "display"], default="proof",
                    help="exponent used by the graded-count route")
    fmt(mo)
    mo.set_defaults(func=cmd_moment)

    rp = sub.add_parser("report", help="three-route comparison and profile counts for a word")
    rp.add_argument("word")
    fmt(rp)
    rp.set_defaults(func=cmd_report)

    ve = sub.add_parser("verify-embedding", help="check the Wigner embedding identity numerically")
    ve.add_argument("p", type=int)
    ve.add_argument("n", type=int)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--law", choices=["gaussian", "rademacher"], default="gaussian")
    fmt(ve)
    ve.set_defaults(func=cmd_verify_embedding)

    si = sub.add_parser("simulate", help="Monte Carlo normalized trace of an S-word")
    si.add_argument("word")
    si.add_argument("--p", type=int, default=100)
    si.add_argument("--n", type=int, default=100)
    si.add_argument("--reps", type=int, default=100)
    si.add_argument("--seed", type=int, default=0)
    si.add_argument("--law", choices=["gaussian", "rademacher"], default="gaussian")
    si.add_argument("--ladder", help="dimension ladder PxN,PxN,... (overrides --p/--n)")
    si.add_argument("--workers", type=int, default=1)
    fmt(si)
    si.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SizeLimitError, FreeEmbedError) as exc:
        print(f"freeembed {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
