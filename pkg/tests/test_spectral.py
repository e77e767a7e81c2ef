import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import jacobi_eigh
from sectorflow.errors import (
    DisconnectedGraph,
    DisconnectedVariant,
    MultipleEigenvalue,
    NoPositiveEigenvalue,
    NotSymmetric,
    UnknownRoute,
    UnknownSector,
)
from sectorflow.graph import Route, SectorGraph, laplacian, relabel, remove_route, with_flows
from sectorflow.spectral import (
    SpectralParams,
    crdos_vulnerability,
    edge_vulnerability,
    fiedler,
    prdos_vulnerability,
    rank,
    sdos_vulnerability,
    sweep,
    total_vulnerability,
)

R2 = math.sqrt(2)
P1 = SpectralParams()


@st.composite
def connected_graphs(draw, min_n=2, max_n=6):
    """Random spanning tree plus extra edges, bidirectional, random integer flows."""
    n = draw(st.integers(min_n, max_n))
    edges = set()
    for k in range(1, n):
        edges.add((draw(st.integers(0, k - 1)), k))
    extra = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges]
    if extra:
        edges |= set(draw(st.lists(st.sampled_from(extra), unique=True, max_size=len(extra))))
    routes = {}
    for i, j in edges:
        f = draw(st.integers(1, 5))
        routes[(i, j)] = Route(1, f)
        routes[(j, i)] = Route(1, f)
    return SectorGraph(frozenset(range(n)), routes)


def simple_fiedler(g):
    w = np.linalg.eigvalsh(laplacian(g, symmetrize=True))
    pos = w[w > 1e-9]
    return len(pos) == 1 or pos[1] - pos[0] > 1e-6


# -- fiedler -----------------------------------------------------------------


def test_fiedler_k2(k2):
    lam, v = fiedler(laplacian(k2))
    assert lam == pytest.approx(2, abs=1e-12)
    assert v == pytest.approx([1 / R2, -1 / R2], abs=1e-12)


def test_fiedler_p3(p3):
    lam, v = fiedler(laplacian(p3))
    assert lam == pytest.approx(1, abs=1e-12)
    assert v == pytest.approx([1 / R2, 0, -1 / R2], abs=1e-12)


def test_fiedler_errors():
    with pytest.raises(NoPositiveEigenvalue):
        fiedler(np.zeros((3, 3)))
    with pytest.raises(NotSymmetric):
        fiedler(np.array([[1.0, -1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        fiedler(np.zeros((1, 1)))


def test_fiedler_warns_on_repeated_eigenvalue(triangle):
    with pytest.warns(MultipleEigenvalue):
        lam, _ = fiedler(laplacian(triangle))
    assert lam == pytest.approx(3)


@settings(max_examples=80, deadline=None)
@given(connected_graphs())
def test_fiedler_residual_and_orthogonality(g):
    L = laplacian(g, symmetrize=True)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MultipleEigenvalue)
        lam, v = fiedler(L)
    assert np.max(np.abs(L @ v - lam * v)) < 1e-9
    assert abs(v.sum()) < 1e-9
    assert np.linalg.norm(v) == pytest.approx(1, abs=1e-12)
    assert v[np.flatnonzero(np.abs(v) > 1e-9)[0]] > 0


@settings(max_examples=80, deadline=None)
@given(connected_graphs())
def test_fiedler_matches_jacobi_oracle(g):
    L = laplacian(g, symmetrize=True)
    w, vecs = jacobi_eigh(L.tolist())
    k = next(i for i, x in enumerate(w) if x > 1e-9)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MultipleEigenvalue)
        lam, v = fiedler(L)
    assert lam == pytest.approx(w[k], abs=1e-8)
    if simple_fiedler(g):
        ref = np.array(vecs[k])
        ref /= np.linalg.norm(ref)
        if ref[np.flatnonzero(np.abs(ref) > 1e-9)[0]] < 0:
            ref = -ref
        assert np.max(np.abs(v - ref)) < 1e-8


# -- edge / total ------------------------------------------------------------


@pytest.mark.parametrize(
    "f,dv,params,expected",
    [
        (2, 0, SpectralParams(3, 2), 0),
        (2, 1 / R2, P1, R2),
        (3, 2, SpectralParams(2, 2), 36),
    ],
)
def test_edge_vulnerability(f, dv, params, expected):
    assert edge_vulnerability(f, dv, params) == pytest.approx(expected, abs=1e-12)


def test_total_vulnerability_examples(k2, p3):
    assert total_vulnerability(k2).total == pytest.approx(R2, abs=1e-12)
    res = total_vulnerability(p3)
    assert res.total == pytest.approx(2 * R2, abs=1e-12)
    assert res.edge_values == pytest.approx({(1, 2): R2, (2, 3): R2})
    assert total_vulnerability(with_flows(p3, {r: 0 for r in p3.routes})).total == 0


def test_total_vulnerability_disconnected():
    with pytest.raises(DisconnectedGraph):
        total_vulnerability(SectorGraph.from_edges([(1, 2), (3, 4)]))


def test_one_way_route_uses_its_flow():
    g = SectorGraph(frozenset({1, 2}), {(2, 1): Route(1, 5)})
    assert total_vulnerability(g).total == pytest.approx(5 * R2 / 2, abs=1e-12)


def test_params_validation():
    for bad in (dict(alpha=0), dict(beta=1.5), dict(c_exp=-1), dict(sdos_factor=0), dict(alpha=True)):
        with pytest.raises(ValueError):
            SpectralParams(**bad)


# -- attack variants ---------------------------------------------------------


def test_crdos_examples(triangle, p3):
    assert crdos_vulnerability(triangle, 1) == pytest.approx(4 * R2, abs=1e-9)
    assert crdos_vulnerability(p3, 1) == pytest.approx(total_vulnerability(p3).total, abs=1e-12)
    with pytest.raises(DisconnectedVariant) as exc:
        crdos_vulnerability(p3, 2)
    assert "2" in str(exc.value)
    g = SectorGraph(frozenset({1, 2, 3, 4}), dict(p3.routes))
    with pytest.raises(DisconnectedVariant):
        crdos_vulnerability(g, 4)
    with pytest.raises(UnknownSector):
        crdos_vulnerability(p3, 9)


def test_prdos_examples(triangle, k2):
    assert prdos_vulnerability(triangle, (1, 2)) == pytest.approx(2 * R2, abs=1e-9)
    with pytest.raises(DisconnectedGraph):
        prdos_vulnerability(k2, (1, 2))
    with pytest.raises(UnknownRoute):
        prdos_vulnerability(remove_route(triangle, 1, 2), (1, 2))


def test_sdos_examples(p3, triangle):
    assert sdos_vulnerability(p3, 2) == pytest.approx(6 * R2, abs=1e-9)
    base = total_vulnerability(p3).total
    assert sdos_vulnerability(p3, 1, SpectralParams(sdos_factor=1)) == pytest.approx(base, abs=1e-12)
    star = SectorGraph.from_edges([(0, 1), (0, 2), (0, 3)])
    with pytest.warns(MultipleEigenvalue):
        assert sdos_vulnerability(star, 0) == pytest.approx(3 * total_vulnerability(star).total, rel=1e-12)


def test_sdos_only_scales_outflow():
    g = SectorGraph(frozenset({1, 2, 3}), {(1, 2): Route(1, 2), (2, 3): Route(1, 2)})
    # sector 2 has an outflow to 3 only; the 1->2 edge keeps f=2
    assert sdos_vulnerability(g, 2) == pytest.approx((2 + 6) / R2, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(connected_graphs(), st.data())
def test_sdos_monotone(g, data):
    target = data.draw(st.sampled_from(g.order))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MultipleEigenvalue)
        assert sdos_vulnerability(g, target) >= total_vulnerability(g).total - 1e-12


# -- properties --------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(connected_graphs(min_n=3), st.randoms(use_true_random=False))
def test_permutation_invariance(g, rnd):
    assume(simple_fiedler(g))
    labels = list(g.order)
    shuffled = labels[:]
    rnd.shuffle(shuffled)
    mapping = {a: b + 100 for a, b in zip(labels, shuffled)}
    h = relabel(g, mapping)
    a, b = total_vulnerability(g), total_vulnerability(h)
    assert b.eigenvalue == pytest.approx(a.eigenvalue, abs=1e-12)
    assert b.total == pytest.approx(a.total, abs=1e-12, rel=1e-12)
    for s in labels:
        assert sdos_vulnerability(h, mapping[s]) == pytest.approx(sdos_vulnerability(g, s), rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(connected_graphs(), st.integers(1, 3), st.integers(2, 5))
def test_flow_scaling(g, alpha, k):
    params = SpectralParams(alpha=alpha)
    scaled = SectorGraph(g.sectors, {r: Route(v.capacity, v.flow * k) for r, v in g.routes.items()})
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MultipleEigenvalue)
        a = total_vulnerability(g, params).total
        b = total_vulnerability(scaled, params).total
    assert b == pytest.approx(k**alpha * a, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(min_n=3))
def test_crdos_degree_one_equals_intact(g):
    leaves = [s for s in g.order if len(g.neighbors(s)) == 1]
    assume(leaves)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MultipleEigenvalue)
        assert crdos_vulnerability(g, leaves[0]) == pytest.approx(total_vulnerability(g).total, rel=1e-12)


# -- ranking -----------------------------------------------------------------


def test_rank_ties_broken_by_key():
    assert rank({3: 1.0, 1: 2.0, 2: 1.0}) == {1: 1, 2: 2, 3: 3}


def test_sweep_on_grid():
    from sectorflow.scenario import load_scenario

    g = load_scenario("metric_grid").graph()
    for attack in ("crdos", "sdos", "prdos"):
        vals = sweep(g, attack)
        assert vals and all(v > 0 for v in vals.values())
    with pytest.raises(ValueError):
        sweep(g, "rst")
