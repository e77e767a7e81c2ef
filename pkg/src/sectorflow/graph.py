"""Sector/route graph, Laplacian construction and pure graph surgery.

Sectors are small non-negative integers.  Every matrix or ordered output
indexes sectors in ascending identifier order (``SectorGraph.order``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import DisconnectedGraph, UnknownRoute, UnknownSector

Number = Union[int, float]
Edge = tuple[int, int]


@dataclass(frozen=True)
class Route:
    capacity: int = 1
    flow: Number = 0

    def __post_init__(self):
        if isinstance(self.capacity, bool) or not isinstance(self.capacity, int) or self.capacity < 0:
            raise ValueError(f"capacity must be a non-negative integer, got {self.capacity!r}")
        if isinstance(self.flow, bool) or not isinstance(self.flow, (int, float)) or self.flow < 0:
            raise ValueError(f"flow density must be a non-negative number, got {self.flow!r}")


@dataclass(frozen=True, eq=True)
class SectorGraph:
    """Directed sector graph.  A bidirectional route is two directed routes."""

    sectors: frozenset[int]
    routes: Mapping[Edge, Route] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "sectors", frozenset(self.sectors))
        object.__setattr__(self, "routes", dict(self.routes))
        for (i, j) in self.routes:
            if i == j:
                raise ValueError(f"self-loop route ({i},{j})")
            for s in (i, j):
                if s not in self.sectors:
                    raise UnknownSector(f"route ({i},{j}) references undeclared sector {s}")

    __hash__ = None  # routes is a dict

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Edge],
        sectors: Iterable[int] = (),
        *,
        bidirectional: bool = True,
        capacity: int = 1,
        flow: Number = 2,
    ) -> "SectorGraph":
        """Convenience constructor with uniform capacity and flow density."""
        secs = set(sectors)
        routes: dict[Edge, Route] = {}
        for i, j in edges:
            secs.update((i, j))
            routes[(i, j)] = Route(capacity, flow)
            if bidirectional:
                routes[(j, i)] = Route(capacity, flow)
        return cls(frozenset(secs), routes)

    @property
    def order(self) -> list[int]:
        return sorted(self.sectors)

    def has_route(self, i: int, j: int) -> bool:
        return (i, j) in self.routes

    def out_routes(self, s: int) -> list[Edge]:
        return sorted(r for r in self.routes if r[0] == s)

    def neighbors(self, s: int) -> list[int]:
        """Undirected neighbourhood of ``s``."""
        nb = {j for (i, j) in self.routes if i == s} | {i for (i, j) in self.routes if j == s}
        return sorted(nb)

    def undirected_edges(self) -> list[Edge]:
        return sorted({(min(i, j), max(i, j)) for (i, j) in self.routes})

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, set[int]] = {s: set() for s in self.sectors}
        for i, j in self.routes:
            adj[i].add(j)
            adj[j].add(i)
        return {s: sorted(nb) for s, nb in adj.items()}

    def pair_flow(self, i: int, j: int) -> Number:
        """Flow density of the undirected pair {i, j}: the lower-to-higher
        direction when present, otherwise the reverse one, 0 if not adjacent."""
        lo, hi = min(i, j), max(i, j)
        if (lo, hi) in self.routes:
            return self.routes[(lo, hi)].flow
        if (hi, lo) in self.routes:
            return self.routes[(hi, lo)].flow
        return 0

    def is_connected(self) -> bool:
        if not self.sectors:
            return True
        return len(_component(self.adjacency(), min(self.sectors))) == len(self.sectors)


def _component(adj: Mapping[int, list[int]], start: int) -> set[int]:
    seen = {start}
    todo = deque([start])
    while todo:
        u = todo.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def laplacian(graph: SectorGraph, symmetrize: bool = False) -> np.ndarray:
    """Unweighted Laplacian: -1 for each edge i->j, diagonal makes the row sum zero.

    Flow density does not enter the matrix.  With ``symmetrize`` an edge in
    either direction produces -1 at both (i, j) and (j, i).
    """
    if not graph.sectors:
        raise ValueError("graph has no sectors")
    order = graph.order
    pos = {s: k for k, s in enumerate(order)}
    n = len(order)
    L = np.zeros((n, n))
    for i, j in graph.routes:
        L[pos[i], pos[j]] = -1.0
        if symmetrize:
            L[pos[j], pos[i]] = -1.0
    np.fill_diagonal(L, 0.0)
    L[np.diag_indices(n)] = -L.sum(axis=1)
    return L


def diameter(graph: SectorGraph) -> int:
    """Longest shortest hop count over all sector pairs, edges taken as undirected."""
    adj = graph.adjacency()
    best = 0
    for src in graph.order:
        dist = {src: 0}
        todo = deque([src])
        while todo:
            u = todo.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    todo.append(w)
        if len(dist) != len(adj):
            missing = min(set(adj) - set(dist))
            raise DisconnectedGraph(f"sector {missing} is unreachable from sector {src}")
        best = max(best, max(dist.values()))
    return best


def count_simple_paths(graph: SectorGraph, i: int, j: int, n: int) -> int:
    """Number of simple undirected paths from ``i`` to ``j`` with exactly ``n`` edges."""
    if i == j:
        raise ValueError("endpoints must differ")
    if n < 1:
        raise ValueError("path length must be >= 1")
    if i not in graph.sectors or j not in graph.sectors:
        return 0
    adj = graph.adjacency()
    on_path = {i}
    count = 0

    def dfs(u: int, depth: int) -> None:
        nonlocal count
        for w in adj[u]:
            if w in on_path:
                continue
            if depth + 1 == n:
                if w == j:
                    count += 1
                continue
            if w == j:
                continue
            on_path.add(w)
            dfs(w, depth + 1)
            on_path.discard(w)

    dfs(i, 0)
    return count


def path_length_counts(graph: SectorGraph, max_n: int) -> dict[Edge, list[int]]:
    """Simple-path counts for every unordered pair (i < j), by exact length.

    ``result[(i, j)][n]`` is the number of paths with ``n`` edges, for
    ``0 <= n <= max_n`` (index 0 is always zero).  Pairs with no path of
    length <= max_n are omitted.
    """
    adj = graph.adjacency()
    counts: dict[Edge, list[int]] = {}
    for src in graph.order:
        on_path = {src}

        def dfs(u: int, depth: int) -> None:
            for w in adj[u]:
                if w in on_path:
                    continue
                if w > src:
                    counts.setdefault((src, w), [0] * (max_n + 1))[depth + 1] += 1
                if depth + 1 < max_n:
                    on_path.add(w)
                    dfs(w, depth + 1)
                    on_path.discard(w)

        dfs(src, 0)
    return counts


def remove_sector(graph: SectorGraph, k: int) -> SectorGraph:
    if k not in graph.sectors:
        raise UnknownSector(f"unknown sector {k}")
    routes = {r: v for r, v in graph.routes.items() if k not in r}
    return SectorGraph(graph.sectors - {k}, routes)


def remove_route(graph: SectorGraph, i: int, j: int) -> SectorGraph:
    """Drop the route between ``i`` and ``j`` in both directions."""
    if (i, j) not in graph.routes and (j, i) not in graph.routes:
        raise UnknownRoute(f"unknown route ({i},{j})")
    routes = {r: v for r, v in graph.routes.items() if r not in ((i, j), (j, i))}
    return SectorGraph(graph.sectors, routes)


def with_flows(graph: SectorGraph, flows: Mapping[Edge, Number]) -> SectorGraph:
    """Copy of ``graph`` with the flow density of the given routes replaced."""
    routes = dict(graph.routes)
    for r, f in flows.items():
        if r not in routes:
            raise UnknownRoute(f"unknown route {r}")
        routes[r] = Route(routes[r].capacity, f)
    return SectorGraph(graph.sectors, routes)


def relabel(graph: SectorGraph, mapping: Mapping[int, int]) -> SectorGraph:
    routes = {(mapping[i], mapping[j]): v for (i, j), v in graph.routes.items()}
    return SectorGraph(frozenset(mapping[s] for s in graph.sectors), routes)
