"""Spectral vulnerability metric.

V_T = sum over sector pairs i < j of f_ij**alpha * |v_i - v_j|**beta, divided
by lambda**c, where (lambda, v) is the smallest positive eigenpair of the
symmetric graph Laplacian.  lambda does not depend on the pair, so the
division is applied once to the sum.

Attack variants:

* complete RDOS: sum of V_T over the graphs obtained by keeping exactly one
  edge of the target sector;
* partial RDOS: V_T with the blocked route removed;
* SDOS: V_T with the target's outgoing flow densities scaled, structure
  unchanged.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DisconnectedGraph,
    DisconnectedVariant,
    MultipleEigenvalue,
    NoPositiveEigenvalue,
    NotSymmetric,
    UnknownSector,
)
from .graph import Edge, SectorGraph, laplacian, remove_route

EIG_TOL = 1e-9


@dataclass(frozen=True)
class SpectralParams:
    alpha: int = 1
    beta: int = 1
    c_exp: float = 1
    sdos_factor: float = 3

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if self.c_exp < 0:
            raise ValueError("c_exp must be non-negative")
        if self.sdos_factor <= 0:
            raise ValueError("sdos_factor must be positive")


@dataclass(frozen=True)
class SpectralResult:
    eigenvalue: float
    vector: np.ndarray
    order: tuple[int, ...]
    edge_values: dict[Edge, float] = field(default_factory=dict)
    total: float = 0.0

    __hash__ = None


def fiedler(L: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue above ``EIG_TOL`` and its unit eigenvector.

    The sign is fixed so the first component that is not ~0 is positive.
    """
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    if L.ndim != 2 or n != L.shape[1] or n < 2:
        raise ValueError("need a square matrix of size >= 2")
    if not np.array_equal(L, L.T):
        raise NotSymmetric("Laplacian is not symmetric; symmetrize the graph first")
    w, V = np.linalg.eigh(L)
    pos = np.flatnonzero(w > EIG_TOL)
    if pos.size == 0:
        raise NoPositiveEigenvalue("Laplacian has no positive eigenvalue (edgeless graph)")
    k = pos[0]
    lam = float(w[k])
    if k + 1 < n and abs(w[k + 1] - lam) <= 1e-8 * max(1.0, lam):
        warnings.warn(
            f"smallest positive eigenvalue {lam:.6g} is repeated; "
            "the eigenvector (and V_T) depends on the solver's basis choice",
            MultipleEigenvalue,
            stacklevel=2,
        )
    v = V[:, k].copy()
    v /= np.linalg.norm(v)
    # components that are numerically zero would make the sign arbitrary
    lead = np.flatnonzero(np.abs(v) > 1e-9)[0]
    if v[lead] < 0:
        v = -v
    return lam, v


def edge_vulnerability(f: float, dv: float, params: SpectralParams) -> float:
    return f**params.alpha * dv**params.beta


def _evaluate(graph: SectorGraph, params: SpectralParams, flows=None) -> SpectralResult:
    if len(graph.sectors) < 2:
        raise DisconnectedGraph("need at least two sectors")
    if not graph.is_connected():
        raise DisconnectedGraph("graph is disconnected")
    order = tuple(graph.order)
    pos = {s: k for k, s in enumerate(order)}
    lam, v = fiedler(laplacian(graph, symmetrize=True))
    values = {}
    for i, j in graph.undirected_edges():
        f = graph.pair_flow(i, j) if flows is None else flows[(i, j)]
        values[(i, j)] = edge_vulnerability(f, abs(v[pos[i]] - v[pos[j]]), params)
    total = sum(values[e] for e in sorted(values)) / lam**params.c_exp
    return SpectralResult(lam, v, order, values, float(total))


def total_vulnerability(graph: SectorGraph, params: SpectralParams = SpectralParams()) -> SpectralResult:
    return _evaluate(graph, params)


def crdos_vulnerability(graph: SectorGraph, target: int, params: SpectralParams = SpectralParams()) -> float:
    if target not in graph.sectors:
        raise UnknownSector(f"unknown sector {target}")
    nbrs = graph.neighbors(target)
    if not nbrs:
        raise DisconnectedVariant(target, None)
    total = 0.0
    for keep in nbrs:
        variant = graph
        for other in nbrs:
            if other != keep:
                variant = remove_route(variant, target, other)
        edge = (min(target, keep), max(target, keep))
        if not variant.is_connected():
            raise DisconnectedVariant(target, edge)
        total += _evaluate(variant, params).total
    return total


def prdos_vulnerability(graph: SectorGraph, route: Edge, params: SpectralParams = SpectralParams()) -> float:
    i, j = route
    reduced = remove_route(graph, i, j)
    if not reduced.is_connected():
        raise DisconnectedGraph(f"removing route {i}-{j} disconnects the graph")
    return _evaluate(reduced, params).total


def sdos_vulnerability(graph: SectorGraph, target: int, params: SpectralParams = SpectralParams()) -> float:
    """V_T with the flow density of the target's outflows multiplied by
    ``params.sdos_factor``; an edge reached only by an inflow keeps its flow."""
    if target not in graph.sectors:
        raise UnknownSector(f"unknown sector {target}")
    flows = {}
    for i, j in graph.undirected_edges():
        if target in (i, j):
            other = j if i == target else i
            if graph.has_route(target, other):
                flows[(i, j)] = graph.routes[(target, other)].flow * params.sdos_factor
                continue
        flows[(i, j)] = graph.pair_flow(i, j)
    return _evaluate(graph, params, flows).total


RANK_TIE_TOL = 1e-9


def rank(values: dict, descending: bool = True, tol: float = RANK_TIE_TOL) -> dict:
    """1-based ranks, highest value first, ties broken by ascending key.

    Values within ``tol`` (relative, absolute below 1) of the first value of a
    run count as tied, so symmetric targets whose metric differs only by
    rounding noise are ordered by key rather than by that noise.
    """
    keys = sorted(values, key=lambda k: -values[k] if descending else values[k])
    ordered: list = []
    run: list = []
    for k in keys:
        if run and abs(values[k] - values[run[0]]) > tol * max(1.0, abs(values[run[0]])):
            ordered.extend(sorted(run))
            run = []
        run.append(k)
    ordered.extend(sorted(run))
    return {k: n + 1 for n, k in enumerate(ordered)}


def sweep(graph: SectorGraph, attack: str, params: SpectralParams = SpectralParams()) -> dict:
    """Metric value for every candidate target of one attack type.

    Sector targets for ``crdos``/``sdos``, undirected edges for ``prdos``.
    Errors propagate.
    """
    if attack == "crdos":
        return {s: crdos_vulnerability(graph, s, params) for s in graph.order}
    if attack == "sdos":
        return {s: sdos_vulnerability(graph, s, params) for s in graph.order}
    if attack == "prdos":
        return {e: prdos_vulnerability(graph, e, params) for e in graph.undirected_edges()}
    raise ValueError(f"unknown attack type {attack!r}")
