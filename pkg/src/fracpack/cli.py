"""Command-line frontend.

Every analysis is a subcommand emitting JSON (default) or plot-ready CSV,
either to stdout or to a file named by --out.  File writes go through a
".partial" staging name and are renamed atomically, so an interrupted run
never leaves a truncated file under the final name.

Option resolution, lowest to highest: built-in defaults, --config file,
FRACPACK_* environment variables, command-line flags.

Exit codes: 0 success, 2 usage or validation error, 3 resource cap hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from .codespace import influence_count
from .config import RunConfig, resolve_config
from .ifs import Ball, IFSSystem, count_in_ball, distinct_level_points, project, similarity_dimension
from .measure import (
    SymbolicInterval,
    box_counting_profile,
    density_profile,
    measure_bounds,
    packing_premeasure_estimate,
    recommended_word_length,
)
from .numeric import CapError, SymbolicPoint, make_lacunary, parse_rational, rational_str
from .stats import borel_cantelli_table, monte_carlo_growth


def _round15(x: float) -> float:
    """Round to 15 significant digits; hides the last bit of bisection noise."""
    return float(f"{x:.15g}")


def _render_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _render_csv(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _emit(args, cfg: RunConfig, payload: dict, rows: list[list]) -> None:
    text = _render_json(payload) if args.format == "json" else _render_csv(rows)
    out = args.out
    if out is None and cfg.out_dir:
        out = os.path.join(cfg.out_dir, f"{args.command}.{args.format}")
    if out is None:
        sys.stdout.write(text)
        return
    partial = out + ".partial"
    with open(partial, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(partial, out)


def _system(args, cfg: RunConfig) -> IFSSystem:
    lam = make_lacunary(args.lam, materialize_cap=cfg.materialize_cap)
    return IFSSystem(lam, enumeration_cap=cfg.enum_cap)


def _check_trials(trials: int, cfg: RunConfig) -> int:
    if trials > cfg.trials_cap:
        raise CapError(f"trials = {trials} exceeds trials_cap = {cfg.trials_cap}")
    return trials


def _parse_ints(text: str, what: str) -> list[int]:
    items = [p.strip() for p in text.split(",") if p.strip()]
    if not items:
        raise ValueError(f"{what} must be a nonempty comma-separated list")
    try:
        return [int(p) for p in items]
    except ValueError as exc:
        raise ValueError(f"{what} must contain integers, got {text!r}") from exc


def cmd_dimension(args, cfg: RunConfig) -> int:
    parts = [p.strip() for p in args.ratios.split(",") if p.strip()]
    ratios = [parse_rational(p) for p in parts]
    s = _round15(similarity_dimension(ratios))
    if args.format is None and args.out is None:
        sys.stdout.write(f"{s!r}\n")
        return 0
    args.format = args.format or "json"
    payload = {"schema": 1, "ratios": [rational_str(r) for r in ratios], "dimension": s}
    _emit(args, cfg, payload, [["dimension"], [s]])
    return 0


def cmd_count(args, cfg: RunConfig) -> int:
    system = _system(args, cfg)
    center = project(args.center)
    radius = parse_rational(args.C) * Fraction(1, 4) ** args.n
    result = count_in_ball(system, args.n, Ball(center, radius),
                           witnesses=args.witnesses)
    payload = {
        "schema": 1,
        "lambda": system.lam.descriptor(),
        "n": args.n,
        "center": args.center,
        "C": rational_str(parse_rational(args.C)),
        "count": result.count,
    }
    rows = [["count"], [result.count]]
    if result.witnesses is not None:
        payload["witnesses"] = list(result.witnesses)
        rows = [["witness"]] + [[w] for w in result.witnesses]
    _emit(args, cfg, payload, rows)
    return 0


def cmd_influence(args, cfg: RunConfig) -> int:
    lam = make_lacunary(args.lam, materialize_cap=cfg.materialize_cap)
    j = args.j if args.j is not None else len(args.word)
    summary = influence_count(args.word, j, lam)
    payload = {
        "schema": 1,
        "lambda": lam.descriptor(),
        "word": args.word,
        "j": j,
        "S": summary.count,
        "records": [r.to_dict() for r in summary.records],
    }
    rows = [["i", "k"]] + [[r.i, r.k] for r in summary.records]
    _emit(args, cfg, payload, rows)
    return 0


def cmd_simulate(args, cfg: RunConfig) -> int:
    lam = make_lacunary(args.lam, materialize_cap=cfg.materialize_cap)
    checkpoints = _parse_ints(args.checkpoints, "checkpoints")
    trials = _check_trials(args.trials, cfg)
    report = monte_carlo_growth(lam, checkpoints, trials, args.seed)
    _emit(args, cfg, report.to_dict(), report.csv_rows())
    return 0


def cmd_density(args, cfg: RunConfig) -> int:
    system = _system(args, cfg)
    word = args.word
    if word is None:
        word = "0" * recommended_word_length(system.lam, args.n_max)
    report = density_profile(system, word, args.n_max, parse_rational(args.C))
    _emit(args, cfg, report.to_dict(), report.csv_rows())
    return 0


def cmd_measure(args, cfg: RunConfig) -> int:
    system = _system(args, cfg)
    lo = SymbolicPoint(parse_rational(args.lo), Fraction(0))
    hi = SymbolicPoint(parse_rational(args.hi), Fraction(0))
    report = measure_bounds(system, SymbolicInterval(lo, hi), args.n)
    payload = dict(report.to_dict())
    payload.update({"schema": 1, "lambda": system.lam.descriptor(),
                    "lo": rational_str(lo.p), "hi": rational_str(hi.p)})
    rows = [["n", "contained", "intersecting", "lower", "upper"],
            [report.n, report.contained, report.intersecting,
             float(report.lower), float(report.upper)]]
    _emit(args, cfg, payload, rows)
    return 0


def cmd_pack(args, cfg: RunConfig) -> int:
    system = _system(args, cfg)
    report = packing_premeasure_estimate(system, args.n, parse_rational(args.delta))
    payload = dict(report.to_dict())
    payload["lambda"] = system.lam.descriptor()
    rows = [["n", "delta", "accepted", "value"],
            [report.n, float(report.delta), report.accepted, report.value]]
    _emit(args, cfg, payload, rows)
    return 0


def cmd_boxcount(args, cfg: RunConfig) -> int:
    system = _system(args, cfg)
    report = box_counting_profile(system, args.n_max)
    _emit(args, cfg, report.to_dict(), report.csv_rows())
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    lam = make_lacunary(args.lam, materialize_cap=cfg.materialize_cap)
    table = borel_cantelli_table(lam, args.M, args.k_max)
    rows = [["k", "j_lo", "j_hi", "count", "N", "p", "M", "flagged",
             "hoeffding", "contribution", "log10_contribution"]]
    for row in table.rows:
        d = row.to_dict()
        rows.append([d[key] for key in rows[0]])
    _emit(args, cfg, table.to_dict(), rows)
    return 0


def _add_common(sub: argparse.ArgumentParser, cfg: RunConfig,
                with_lambda: bool = True) -> None:
    sub.add_argument("--config", default=None, help="key=value config file")
    sub.add_argument("--format", choices=("json", "csv"), default=cfg.format)
    sub.add_argument("--out", default=None, metavar="PATH",
                     help="output file (default: stdout, or out_dir from config)")
    if with_lambda:
        sub.add_argument("--lambda", dest="lam", default=cfg.lam, metavar="DESC",
                         help="sequence descriptor: paper | geometric:b=B,start=S"
                              " | explicit:t1,t2,...")


def build_parser(cfg: RunConfig) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracpack",
        description="Exact-arithmetic analyses of a base-4 self-similar set "
                    "with a lacunary third translation.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("dimension", help="similarity dimension of a ratio list")
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--out", default=None, metavar="PATH")
    p.add_argument("--ratios", required=True,
                   help="comma-separated contraction ratios, e.g. 1/4,1/4,1/4")
    p.set_defaults(func=cmd_dimension)

    p = subs.add_parser("count", help="level-n points inside a ball")
    _add_common(p, cfg)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--center", required=True, metavar="WORD",
                   help="code word over {0,1,u}; the ball center is its projection")
    p.add_argument("--C", default="1", help="radius coefficient: radius = C*4**-n")
    p.add_argument("--witnesses", action="store_true",
                   help="list the accepted words as well")
    p.set_defaults(func=cmd_count)

    p = subs.add_parser("influence", help="influencing positions of a word")
    _add_common(p, cfg)
    p.add_argument("--word", required=True)
    p.add_argument("--j", type=int, default=None,
                   help="target position (default: word length)")
    p.set_defaults(func=cmd_influence)

    p = subs.add_parser("simulate", help="Monte Carlo growth of influence counts")
    _add_common(p, cfg)
    p.add_argument("--checkpoints", required=True,
                   help="comma-separated positions, e.g. 6,14,30")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=cfg.seed)
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("density", help="lower density ratio profile at a point")
    _add_common(p, cfg)
    p.add_argument("--word", default=None,
                   help="code word for the center (default: all zeros)")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--C", default="3", help="ball radius coefficient")
    p.set_defaults(func=cmd_density)

    p = subs.add_parser("measure", help="natural-measure bounds for an interval")
    _add_common(p, cfg)
    p.add_argument("--lo", required=True, help="left endpoint (rational)")
    p.add_argument("--hi", required=True, help="right endpoint (rational)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_measure)

    p = subs.add_parser("pack", help="greedy packing pre-measure estimate")
    _add_common(p, cfg)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", required=True, help="separation gauge (rational)")
    p.set_defaults(func=cmd_pack)

    p = subs.add_parser("boxcount", help="occupied 4**-n cells per level")
    _add_common(p, cfg)
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_boxcount)

    p = subs.add_parser("verify", help="per-scale tail-bound summability table")
    _add_common(p, cfg)
    p.add_argument("--M", type=int, default=0, help="threshold in the tail bound")
    p.add_argument("--k-max", type=int, default=2)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config", default=None)
        known, _ = pre.parse_known_args(argv)
        cfg = resolve_config(known.config)
        parser = build_parser(cfg)
        args = parser.parse_args(argv)
        return args.func(args, cfg)
    except SystemExit as exc:
        code = exc.code
        return 0 if code is None else int(code)
    except CapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
