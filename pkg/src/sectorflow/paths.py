"""Path-based shutdown vulnerability V_k.

For a shut-down sector (or route) k and each path length n, a sector pair
whose length-n simple paths all disappear contributes its baseline count to
``lost[n]``; a pair that keeps some (0 < after < before) contributes
``before - after`` to ``reduced[n]``.  Pairs containing a shut-down sector are
skipped.  Then

    V_k = sum_n (max_n - n + 1) * (w * lost[n] + (1 - w) * reduced[n]) / default[n]

where ``default[n]`` counts all baseline length-n paths.  Short paths get the
largest weight.  Pairs are unordered and each path is counted once; counting
both directions would double every term and leave V_k unchanged.

Graphs are treated as undirected.  Enumeration is exhaustive, so the cost
grows with the number of simple paths of length <= max_n; ``PathTable``
enumerates once and serves every shutdown target from the same table.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DivisionByZeroLength, SectorFlowError, UnknownRoute, UnknownSector
from .graph import Edge, SectorGraph
from .spectral import SpectralParams, crdos_vulnerability, rank

Target = Union[int, Edge]


@dataclass(frozen=True)
class PathParams:
    weight_lost: float = 0.75
    max_n: Optional[int] = None  # None: graph diameter

    def __post_init__(self):
        if not 0.5 < self.weight_lost < 1:
            raise ValueError(f"weight_lost must lie in (0.5, 1), got {self.weight_lost}")
        if self.max_n is not None and self.max_n < 1:
            raise ValueError("max_n must be >= 1")

    def resolve_max_n(self, graph: SectorGraph) -> int:
        return self.max_n if self.max_n is not None else default_max_n(graph)


def default_max_n(graph: SectorGraph) -> int:
    """Graph diameter; for a disconnected graph the largest diameter among
    its components.  Never below 1."""
    adj = graph.adjacency()
    best = 1
    for src in graph.order:
        dist = {src: 0}
        todo = deque([src])
        while todo:
            u = todo.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    todo.append(w)
        best = max(best, max(dist.values()))
    return best


@dataclass(frozen=True)
class PathCensus:
    """Counts indexed by path length: element n-1 holds length n."""

    target: Target
    max_n: int
    default: tuple[int, ...]
    lost: tuple[int, ...]
    reduced: tuple[int, ...]


class PathTable:
    """Every simple path of length <= ``max_n`` in ``graph``, enumerated once.

    Each path is stored as a bitmask of its sectors and one of its undirected
    edges, grouped by (pair, length).  A path survives shutting down sector k
    (or route k) exactly when it avoids k, so the census of any target is a
    filter over this table and the intact graph is never re-enumerated.
    """

    def __init__(self, graph: SectorGraph, max_n: int):
        if max_n < 1:
            raise ValueError("max_n must be >= 1")
        self.graph = graph
        self.max_n = max_n
        self._sector_bit = {s: 1 << k for k, s in enumerate(graph.order)}
        self._edge_bit = {e: 1 << k for k, e in enumerate(graph.undirected_edges())}
        adj = graph.adjacency()
        paths: dict[Edge, list[list[tuple[int, int]]]] = {}
        for src in graph.order:

            def dfs(u: int, depth: int, vmask: int, emask: int) -> None:
                for w in adj[u]:
                    bit = self._sector_bit[w]
                    if vmask & bit:
                        continue
                    e = self._edge_bit[(u, w) if u < w else (w, u)]
                    if w > src:
                        slots = paths.setdefault((src, w), [[] for _ in range(max_n + 1)])
                        slots[depth + 1].append((vmask | bit, emask | e))
                    if depth + 1 < max_n:
                        dfs(w, depth + 1, vmask | bit, emask | e)

            dfs(src, 0, self._sector_bit[src], 0)
        self._paths = paths
        self.default = tuple(
            sum(len(slots[n]) for slots in paths.values()) for n in range(1, max_n + 1)
        )

    def census(self, target: Target) -> PathCensus:
        if isinstance(target, tuple):
            i, j = target
            if (i, j) not in self.graph.routes and (j, i) not in self.graph.routes:
                raise UnknownRoute(f"unknown route ({i},{j})")
            bit, use_edges, excluded = self._edge_bit[(min(i, j), max(i, j))], True, ()
        else:
            if target not in self.graph.sectors:
                raise UnknownSector(f"unknown sector {target}")
            bit, use_edges, excluded = self._sector_bit[target], False, (target,)
        m = self.max_n
        lost = [0] * (m + 1)
        reduced = [0] * (m + 1)
        for pair, slots in self._paths.items():
            if pair[0] in excluded or pair[1] in excluded:
                continue
            for n in range(1, m + 1):
                a = len(slots[n])
                if not a:
                    continue
                b = sum(1 for vm, em in slots[n] if not (em if use_edges else vm) & bit)
                if b == 0:
                    lost[n] += a
                elif b < a:
                    reduced[n] += a - b
        return PathCensus(target, m, self.default, tuple(lost[1:]), tuple(reduced[1:]))


def path_census(graph: SectorGraph, shutdown: Target, params: PathParams = PathParams()) -> PathCensus:
    return PathTable(graph, params.resolve_max_n(graph)).census(shutdown)


def v_k_from_census(census: PathCensus, weight_lost: float) -> float:
    w = Fraction(weight_lost)
    total = Fraction(0)
    m = census.max_n
    for n in range(1, m + 1):
        num = w * census.lost[n - 1] + (1 - w) * census.reduced[n - 1]
        if census.default[n - 1] == 0:
            if num:
                raise DivisionByZeroLength(f"no baseline paths of length {n} but {num} lost/reduced")
            continue
        total += (m - n + 1) * num / census.default[n - 1]
    return float(total)


def v_k(graph: SectorGraph, shutdown: Target, params: PathParams = PathParams()) -> float:
    return v_k_from_census(path_census(graph, shutdown, params), params.weight_lost)


def sweep(graph: SectorGraph, targets: str = "sectors", params: PathParams = PathParams()) -> dict:
    """V_k for every sector, or every undirected route, of ``graph``."""
    if targets == "sectors":
        keys = list(graph.order)
    elif targets == "routes":
        keys = graph.undirected_edges()
    else:
        raise ValueError(f"unknown target kind {targets!r}")
    table = PathTable(graph, params.resolve_max_n(graph))
    return {k: v_k_from_census(table.census(k), params.weight_lost) for k in keys}


@dataclass(frozen=True)
class ComparisonRow:
    sector: int
    vk_value: Optional[float]
    vk_rank: Optional[int]
    vt_value: Optional[float]
    vt_rank: Optional[int]
    difference: Optional[int]
    error: str = ""


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[ComparisonRow, ...]

    @property
    def max_difference(self) -> Optional[int]:
        diffs = [r.difference for r in self.rows if r.difference is not None]
        return max(diffs) if diffs else None

    @property
    def failed(self) -> list[int]:
        return [r.sector for r in self.rows if r.error]


def rank_compare(
    graph: SectorGraph,
    spectral_params: SpectralParams = SpectralParams(),
    path_params: PathParams = PathParams(),
    sectors: Optional[Sequence[int]] = None,
) -> ComparisonReport:
    """Per-sector V_k against complete-RDOS V_T.

    Ranks are taken over the sectors where both metrics succeeded; a sector
    whose metric raised keeps whatever value was computed and records the
    error message instead of a rank.
    """
    if sectors is None:
        sectors = graph.order
    for s in sectors:
        if s not in graph.sectors:
            raise UnknownSector(f"unknown sector {s}")
    table = PathTable(graph, path_params.resolve_max_n(graph))
    vk: dict[int, float] = {}
    vt: dict[int, float] = {}
    errors: dict[int, str] = {}
    for s in sectors:
        try:
            vk[s] = v_k_from_census(table.census(s), path_params.weight_lost)
        except SectorFlowError as exc:
            errors[s] = f"V_k: {exc}"
        try:
            vt[s] = crdos_vulnerability(graph, s, spectral_params)
        except SectorFlowError as exc:
            errors[s] = (errors.get(s, "") + "; " if s in errors else "") + f"V_T: {exc}"
    ok = [s for s in sectors if s not in errors]
    vk_rank = rank({s: vk[s] for s in ok})
    vt_rank = rank({s: vt[s] for s in ok})
    rows = []
    for s in sorted(sectors):
        if s in errors:
            rows.append(ComparisonRow(s, vk.get(s), None, vt.get(s), None, None, errors[s]))
        else:
            rows.append(
                ComparisonRow(s, vk[s], vk_rank[s], vt[s], vt_rank[s], abs(vk_rank[s] - vt_rank[s]))
            )
    return ComparisonReport(tuple(rows))
