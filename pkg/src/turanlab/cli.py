"""Command-line entry point: ``turanlab <command> ...``.

Exit codes: 0 success, 1 falsified verification, 2 usage or input error,
3 budget-truncated result under ``--require-optimal``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from math import comb
from typing import Sequence

from . import constructions as C
from .core import Hypergraph, HypergraphError, UniformityError, contains_copy, has_homomorphism
from .extremal import (
    DensitySeq,
    ExtremalResult,
    SearchBudget,
    bracket,
    density_seq,
    hom_turan_number,
    turan_number,
)
from .formats import atomic_write, dumps_json, dumps_khg, parse_hypergraph_file, to_json_obj
from . import verify as V

EXIT_OK, EXIT_FALSIFIED, EXIT_USAGE, EXIT_TRUNCATED = 0, 1, 2, 3

# exhaustive search beyond this many candidate edges needs an explicit budget
ORACLE_EDGE_LIMIT = 35


class UsageError(Exception):
    pass


def _frac(x: Fraction, decimal: bool) -> dict:
    out: dict = {"num": x.numerator, "den": x.denominator}
    if decimal:
        out["decimal"] = f"{float(x):.6f}"
    return out


def _emit(args, text: str) -> None:
    if args.output:
        atomic_write(args.output, text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj) -> None:
    _emit(args, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _budget(args) -> SearchBudget:
    return SearchBudget(args.budget_nodes, args.budget_secs)


def _require_budget(n: int, k: int, budget: SearchBudget) -> None:
    if comb(n, k) > ORACLE_EDGE_LIMIT and budget.unlimited:
        raise UsageError(
            f"n={n} gives {comb(n, k)} candidate edges; pass --budget-nodes or --budget-secs"
        )


def _result_json(res: ExtremalResult, decimal: bool) -> dict:
    return {
        "n": res.n,
        "k": res.k,
        "value": res.value,
        "density": _frac(res.density, decimal),
        "optimal": res.optimal,
        "relation": res.relation,
        "witness": to_json_obj(res.witness),
        "family": [to_json_obj(F) for F in res.family],
        "budget": res.budget.to_json(),
    }


def _check_format(args, allowed: Sequence[str]) -> str:
    fmt = args.format or allowed[0]
    if fmt not in allowed:
        raise UsageError(f"format {fmt!r} not available for this command; choose from {list(allowed)}")
    return fmt


# ---------------------------------------------------------------------------
# commands


def _need(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"gen {args.family} requires {' '.join(missing)}")


def cmd_gen(args) -> int:
    fmt = _check_format(args, ["khg", "json"])
    fam = args.family
    if fam == "ladder":
        _need(args, "k", "len")
        H = C.ladder(args.k, args.len)
    elif fam == "ladderfan":
        _need(args, "k", "len", "m")
        H = C.ladder_fan(args.k, args.len, args.m)
    elif fam == "zycle":
        _need(args, "k", "len")
        H = C.zycle(args.k, args.len)
    elif fam == "blowup":
        _need(args, "input", "t")
        H, _ = C.blow_up(parse_hypergraph_file(args.input), args.t)
    elif fam == "complete":
        _need(args, "k", "r")
        H = C.complete(args.k, args.r)
    elif fam == "partite":
        _need(args, "k", "sizes")
        H = C.complete_partite(args.k, _int_list(args.sizes))
    else:
        _need(args, "n")
        H = C.dj_construction(args.n)
    _emit(args, dumps_json(H) if fmt == "json" else dumps_khg(H))
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}")


def _finish_extremal(args, res: ExtremalResult) -> int:
    fmt = _check_format(args, ["json", "khg"])
    if fmt == "khg":
        _emit(args, dumps_khg(res.witness))
    else:
        _emit_json(args, _result_json(res, args.decimal))
    if args.require_optimal and not res.optimal:
        return EXIT_TRUNCATED
    return EXIT_OK


def cmd_ex(args) -> int:
    family = [parse_hypergraph_file(p) for p in args.forbid]
    budget = _budget(args)
    _require_budget(args.n, family[0].k, budget)
    return _finish_extremal(args, turan_number(args.n, family, budget, args.threads))


def cmd_exhom(args) -> int:
    if len(args.forbid) != 1:
        raise UsageError("exhom takes exactly one --forbid graph")
    F = parse_hypergraph_file(args.forbid[0])
    budget = _budget(args)
    _require_budget(args.n, F.k, budget)
    return _finish_extremal(args, hom_turan_number(args.n, F, budget, args.threads))


def cmd_seq(args) -> int:
    fmt = _check_format(args, ["csv", "json"])
    family = [parse_hypergraph_file(p) for p in args.forbid]
    budget = _budget(args)
    _require_budget(args.to, family[0].k, budget)
    seq = density_seq(family, args.from_, args.to, budget, hom=args.hom, threads=args.threads)
    if fmt == "csv":
        _emit(args, _seq_csv(seq, args.decimal))
    else:
        _emit_json(args, {
            "relation": seq.relation,
            "family": [to_json_obj(F) for F in seq.family],
            "points": [
                {"n": p.n, "ex": p.ex, "ratio": _frac(p.ratio, args.decimal), "optimal": p.optimal}
                for p in seq.points
            ],
        })
    if args.require_optimal and not all(p.optimal for p in seq.points):
        return EXIT_TRUNCATED
    return EXIT_OK


def _seq_csv(seq: DensitySeq, decimal: bool) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["n", "ex", "binom", "ratio_num", "ratio_den", "optimal"]
    if decimal:
        header.append("ratio")
    w.writerow(header)
    for row, p in zip(seq.csv_rows(), seq.points):
        if decimal:
            row = row + [f"{float(p.ratio):.6f}"]
        w.writerow(row)
    return buf.getvalue()


def cmd_find(args) -> int:
    H = parse_hypergraph_file(args.host)
    F = parse_hypergraph_file(args.pattern)
    vmap = contains_copy(H, F) if args.command == "find" else has_homomorphism(F, H)
    _emit_json(args, {"found": vmap is not None, "map": None if vmap is None else vmap.to_json()})
    return EXIT_OK


def cmd_quotients(args) -> int:
    F = parse_hypergraph_file(args.pattern)
    members = C.hom_image_family(F)
    _emit_json(args, {"pattern": to_json_obj(F), "count": len(members), "members": [to_json_obj(Q) for Q in members]})
    return EXIT_OK


def cmd_bracket(args) -> int:
    family = [parse_hypergraph_file(p) for p in args.forbid]
    construction = parse_hypergraph_file(args.construction)
    budget = _budget(args)
    _require_budget(args.n, family[0].k, budget)
    br = bracket(family, construction, args.n, budget, args.threads)
    _emit_json(args, {
        "lower": _frac(br.lower, args.decimal),
        "n_lower": br.n_lower,
        "lower_witness": to_json_obj(br.lower_witness),
        "upper": _frac(br.upper, args.decimal),
        "n_upper": br.n_upper,
        "upper_optimal": br.upper_optimal,
        "upper_witness": to_json_obj(br.upper_result.witness),
    })
    if args.require_optimal and not br.upper_optimal:
        return EXIT_TRUNCATED
    return EXIT_OK


def cmd_verify(args) -> int:
    proc = args.procedure
    if proc == "dj":
        report = V.verify_dj_zycle_free(args.n, args.zycle_max)
    elif proc == "augment":
        if args.host is None or args.len is None or args.tail is None:
            raise UsageError("verify augment requires --host, --len and --tail")
        H = parse_hypergraph_file(args.host)
        report = V.verify_augment_ladder_free(H, args.len, _int_list(args.tail))
    elif proc == "monotonicity":
        if args.len is None or args.n is None:
            raise UsageError("verify monotonicity requires --len and --n")
        budget = _budget(args)
        _require_budget(args.n, args.k, budget)
        report = V.strict_monotonicity_experiment(args.k, args.len, args.n, budget, args.threads)
    elif proc == "pipeline":
        if args.host is None:
            raise UsageError("verify pipeline requires --host")
        H = parse_hypergraph_file(args.host)
        report = V.blowup_zycle_pipeline(H, args.cycle_to, args.t)
    else:
        if args.pattern is None or args.n is None or args.edge_floor is None:
            raise UsageError("verify supersat requires --pattern, --n and --edge-floor")
        F = parse_hypergraph_file(args.pattern)
        report = V.supersaturation_scan(F, args.n, args.edge_floor)
    _emit_json(args, report.to_json())
    return EXIT_FALSIFIED if report.falsified else EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("TURAN_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="output path (default: stdout)")
    common.add_argument("--format", choices=["khg", "json", "csv"])
    common.add_argument("--decimal", action="store_true", help="also render ratios as decimals")
    common.add_argument("--threads", type=int, default=_default_threads())

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--budget-nodes", type=int)
    search.add_argument("--budget-secs", type=float)
    search.add_argument("--require-optimal", action="store_true")

    ap = argparse.ArgumentParser(prog="turanlab", description="Exact finite Turán computations for hypergraphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a construction")
    g.add_argument("family", choices=["ladder", "ladderfan", "zycle", "blowup", "complete", "partite", "dj"])
    g.add_argument("--k", type=int)
    g.add_argument("--len", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--t", type=int)
    g.add_argument("--r", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--sizes")
    g.add_argument("--input")
    g.set_defaults(func=cmd_gen)

    for name, func in (("ex", cmd_ex), ("exhom", cmd_exhom)):
        p = sub.add_parser(name, parents=[common, search], help=f"compute {name}(n, F)")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--forbid", action="append", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("seq", parents=[common, search], help="density sequence over a range of n")
    p.add_argument("--forbid", action="append", required=True)
    p.add_argument("--from", dest="from_", type=int, required=True)
    p.add_argument("--to", type=int, required=True)
    p.add_argument("--hom", action="store_true")
    p.set_defaults(func=cmd_seq)

    for name in ("find", "hom"):
        p = sub.add_parser(name, parents=[common], help="search for a copy" if name == "find" else "search for a homomorphism")
        p.add_argument("--host", required=True)
        p.add_argument("--pattern", required=True)
        p.set_defaults(func=cmd_find)

    p = sub.add_parser("quotients", parents=[common], help="homomorphic-image family of a pattern")
    p.add_argument("--pattern", required=True)
    p.set_defaults(func=cmd_quotients)

    p = sub.add_parser("bracket", parents=[common, search], help="construction lower bound vs exact upper value")
    p.add_argument("--forbid", action="append", required=True)
    p.add_argument("--construction", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("verify", parents=[common, search], help="run a proof-step verification")
    p.add_argument("procedure", choices=["dj", "augment", "monotonicity", "pipeline", "supersat"])
    p.add_argument("--n", type=int)
    p.add_argument("--zycle-max", type=int, default=3)
    p.add_argument("--host")
    p.add_argument("--pattern")
    p.add_argument("--len", type=int)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--tail")
    p.add_argument("--t", type=int)
    p.add_argument("--cycle-to", type=int, default=6)
    p.add_argument("--edge-floor", type=int)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.procedure == "dj" and args.n is None:
        parser.error("verify dj requires --n")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"turanlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HypergraphError, UniformityError, ValueError, OSError) as exc:
        print(f"turanlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
