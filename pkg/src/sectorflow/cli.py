"""Command-line entry point.

Exit status: 0 on success, 1 for an unreadable or invalid scenario, 2 for a
computational failure (disconnected graph, conflicting attacks, ...).
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

from . import paths, spectral
from .engine import simulate
from .errors import ScenarioError, SectorFlowError, ValidationError
from .output import write_baseline_diff, write_comparison_csv, write_ranking_csv, write_trace_csv
from .scenario import ScenarioDocument, bundled_scenarios, load_scenario


def _run(doc: ScenarioDocument, with_attacks: bool = True):
    attacks = doc.attacks if with_attacks else ()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        trace = simulate(doc.graph(), doc.initial_state(), attacks, doc.horizon)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return trace


def _spectral_params(doc: ScenarioDocument, args) -> spectral.SpectralParams:
    p = doc.params
    try:
        return spectral.SpectralParams(
            alpha=args.alpha if args.alpha is not None else p.alpha,
            beta=args.beta if args.beta is not None else p.beta,
            c_exp=args.c if args.c is not None else p.c,
            sdos_factor=args.sdos_factor if args.sdos_factor is not None else p.sdos_factor,
        )
    except ValueError as exc:
        raise ValidationError("flags", str(exc)) from None


def _path_params(doc: ScenarioDocument, args) -> paths.PathParams:
    p = doc.params
    try:
        return paths.PathParams(
            weight_lost=args.weight_lost if args.weight_lost is not None else p.weight_lost,
            max_n=args.max_n if args.max_n is not None else p.max_n,
        )
    except ValueError as exc:
        raise ValidationError("flags", str(exc)) from None


def cmd_simulate(args) -> int:
    doc = load_scenario(args.scenario)
    files = write_trace_csv(_run(doc), args.out)
    for f in files:
        print(f)
    return 0


def cmd_rank_spectral(args) -> int:
    doc = load_scenario(args.scenario)
    values = spectral.sweep(doc.graph(), args.attack, _spectral_params(doc, args))
    print(write_ranking_csv(values, Path(args.out) / f"spectral_{args.attack}.csv"))
    return 0


def cmd_rank_path(args) -> int:
    doc = load_scenario(args.scenario)
    graph, params = doc.graph(), _path_params(doc, args)
    out = Path(args.out)
    print(write_ranking_csv(paths.sweep(graph, "sectors", params), out / "path_sectors.csv"))
    print(write_ranking_csv(paths.sweep(graph, "routes", params), out / "path_routes.csv"))
    return 0


def cmd_compare(args) -> int:
    doc = load_scenario(args.scenario)
    report = paths.rank_compare(doc.graph(), _spectral_params(doc, args), _path_params(doc, args))
    print(write_comparison_csv(report, Path(args.out) / "comparison.csv"))
    print(f"max rank difference: {report.max_difference}")
    if report.failed:
        print(f"sectors without a rank: {report.failed}", file=sys.stderr)
    return 0


def cmd_baseline_diff(args) -> int:
    doc = load_scenario(args.scenario)
    base = _run(doc, with_attacks=False)
    attacked = _run(doc)
    for f in write_baseline_diff(base, attacked, args.out):
        print(f)
    return 0


def cmd_list(args) -> int:
    for name in bundled_scenarios():
        print(name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sectorflow",
        description="Air-traffic sector queue simulation under cyber attacks, and graph vulnerability rankings.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def scenario_cmd(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("scenario", help="scenario file, or the name of a bundled scenario")
        p.add_argument("--out", default="out", help="output directory (default: ./out)")
        p.set_defaults(func=func)
        return p

    def spectral_flags(p):
        p.add_argument("--alpha", type=int)
        p.add_argument("--beta", type=int)
        p.add_argument("--c", type=float, help="eigenvalue exponent")
        p.add_argument("--sdos-factor", type=float)

    def path_flags(p):
        p.add_argument("--weight-lost", type=float, help="weight of lost paths, in (0.5, 1)")
        p.add_argument("--max-n", type=int, help="longest path length counted (default: diameter)")

    scenario_cmd("simulate", cmd_simulate, "run the queue simulation and write trace CSVs")
    p = scenario_cmd("rank-spectral", cmd_rank_spectral, "rank targets by spectral vulnerability")
    p.add_argument("--attack", choices=["crdos", "prdos", "sdos"], required=True)
    spectral_flags(p)
    p = scenario_cmd("rank-path", cmd_rank_path, "rank sectors and routes by path vulnerability")
    path_flags(p)
    p = scenario_cmd("compare", cmd_compare, "compare path and spectral rankings per sector")
    spectral_flags(p)
    path_flags(p)
    scenario_cmd("baseline-diff", cmd_baseline_diff, "arrival and backlog deltas against an attack-free run")
    sub.add_parser("list", help="list bundled scenarios").set_defaults(func=cmd_list)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SectorFlowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
