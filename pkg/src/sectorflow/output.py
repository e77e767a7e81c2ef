"""CSV writers.  Row order is fixed so equal inputs give byte-identical files."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .paths import ComparisonReport
from .spectral import rank
from .state import SimulationTrace


def _fmt_route(r) -> str:
    return "" if r is None else f"{r[0]}->{r[1]}"


def _fmt_num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def _fmt_target(t) -> str:
    return f"{t[0]}-{t[1]}" if isinstance(t, tuple) else str(t)


def _write(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def _attack_target(a) -> str:
    return _fmt_route(a.route) if a.route is not None else str(a.sector)


def write_trace_csv(trace: Optional[SimulationTrace], out_dir) -> list[Path]:
    """backlogs.csv, arrivals.csv and events.csv under ``out_dir``.

    ``None`` stands for an empty trace and produces header-only files.
    """
    out = Path(out_dir)
    if trace is None:
        return [
            _write(out / "backlogs.csv", ["t", "from_sector", "to_sector", "backlog"], []),
            _write(out / "arrivals.csv", ["aircraft_id", "arrival_t"], []),
            _write(out / "events.csv", ["t", "event", "route", "aircraft_id"], []),
        ]
    backlog_rows = (
        (t, r[0], r[1], trace.backlogs[r][t]) for t in range(trace.horizon + 1) for r in trace.routes
    )
    arrival_rows = ((a, _fmt_num(t)) for a, t in sorted(trace.arrivals.items()))
    event_rows = []
    for t, a in trace.attack_log:
        event_rows.append((t, 0, (t, f"{a.kind.value}_active", _attack_target(a), _fmt_num(a.aircraft))))
    for e in trace.events:
        event_rows.append((e.t, 1, (e.t, e.kind, _fmt_route(e.route), _fmt_num(e.aircraft_id))))
    event_rows.sort(key=lambda x: (x[0], x[1]))
    return [
        _write(out / "backlogs.csv", ["t", "from_sector", "to_sector", "backlog"], backlog_rows),
        _write(out / "arrivals.csv", ["aircraft_id", "arrival_t"], arrival_rows),
        _write(out / "events.csv", ["t", "event", "route", "aircraft_id"], (r for _, _, r in event_rows)),
    ]


def write_ranking_csv(values: dict, path) -> Path:
    ranks = rank(values)
    rows = ((ranks[k], _fmt_target(k), _fmt_num(values[k])) for k in sorted(values, key=ranks.get))
    return _write(Path(path), ["rank", "target", "value"], rows)


def write_comparison_csv(report: ComparisonReport, path) -> Path:
    rows = (
        (
            r.sector,
            _fmt_num(r.vk_rank),
            _fmt_num(r.vk_value),
            _fmt_num(r.vt_rank),
            _fmt_num(r.vt_value),
            _fmt_num(r.difference),
            r.error,
        )
        for r in report.rows
    )
    header = ["sector", "vk_rank", "vk_value", "vt_rank", "vt_value", "difference", "error"]
    return _write(Path(path), header, rows)


def write_baseline_diff(base: SimulationTrace, attacked: SimulationTrace, out_dir) -> list[Path]:
    out = Path(out_dir)
    arrival_rows = []
    for a in sorted(base.arrivals):
        b, x = base.arrivals[a], attacked.arrivals.get(a)
        delta = "" if b is None or x is None else x - b
        arrival_rows.append((a, _fmt_num(b), _fmt_num(x), delta))
    backlog_rows = []
    for t in range(base.horizon + 1):
        for r in base.routes:
            b, x = base.backlogs[r][t], attacked.backlogs[r][t]
            backlog_rows.append((t, r[0], r[1], b, x, x - b))
    return [
        _write(out / "arrival_deltas.csv", ["aircraft_id", "baseline_t", "attack_t", "delta"], arrival_rows),
        _write(
            out / "backlog_deltas.csv",
            ["t", "from_sector", "to_sector", "baseline", "attack", "delta"],
            backlog_rows,
        ),
    ]
