import warnings

import pytest

from sectorflow.attacks import (
    AttackKind,
    AttackScenario,
    apply_rst_visibility,
    resolve_modifiers,
    validate_attacks,
)
from sectorflow.engine import initial_state, simulate
from sectorflow.errors import (
    ConflictingAttack,
    HorizonTooSmall,
    UnknownAircraft,
    UnknownRoute,
    UnknownSector,
    ValidationError,
)
from sectorflow.graph import Route, SectorGraph
from sectorflow.scenario import load_scenario
from sectorflow.state import GHOST, Aircraft, StepModifiers


@pytest.fixture
def case_graph():
    return load_scenario("case_study").graph()


def quiet_simulate(*args):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HorizonTooSmall)
        return simulate(*args)


# -- scenario construction ---------------------------------------------------


def test_constructors_and_labels():
    a = AttackScenario.partial_rdos([3, 8], 1, 2)
    assert a.kind is AttackKind.PRDOS and a.route == (3, 8)
    assert a.label == "prdos: 3->8"
    assert AttackScenario.complete_rdos(8, 1, 1, name="hit").label == "hit: sector 8"
    assert "aircraft 15" in AttackScenario.rst(15, (3, 8), 0, 2).label


def test_bad_windows_and_missing_fields():
    with pytest.raises(ValueError):
        AttackScenario.complete_rdos(8, 3, 2)
    with pytest.raises(ValueError):
        AttackScenario.sdos(8, -1, 2)
    with pytest.raises(ValueError):
        AttackScenario(AttackKind.RST, 0, 1, route=(3, 8))


def test_validate_attacks(case_graph):
    validate_attacks([AttackScenario.complete_rdos(8, 1, 1)], case_graph, [])
    with pytest.raises(UnknownSector):
        validate_attacks([AttackScenario.complete_rdos(99, 1, 1)], case_graph, [])
    with pytest.raises(UnknownRoute):
        validate_attacks([AttackScenario.partial_rdos((3, 12), 1, 1)], case_graph, [])
    with pytest.raises(UnknownAircraft):
        validate_attacks([AttackScenario.rst(40, (3, 8), 0, 1)], case_graph, [1, 2])


# -- resolve_modifiers -------------------------------------------------------


def test_resolve_modifiers_crdos(case_graph):
    m = resolve_modifiers([AttackScenario.complete_rdos(8, 1, 1)], 1, case_graph)
    assert m.capacity_mask == {(8, 11): 0}
    assert m.mask((3, 8)) == 1 and not m.flush


def test_identity_outside_window(case_graph):
    attacks = [
        AttackScenario.complete_rdos(8, 2, 4),
        AttackScenario.partial_rdos((3, 7), 2, 4),
        AttackScenario.sdos(4, 2, 4),
        AttackScenario.rst(15, (3, 8), 2, 4),
    ]
    for t in (0, 1, 5, 10):
        assert resolve_modifiers(attacks, t, case_graph).is_identity()
    assert not resolve_modifiers(attacks, 3, case_graph).is_identity()


def test_crdos_equals_union_of_prdos():
    g = SectorGraph.from_edges([(1, 2), (1, 3), (1, 4), (2, 3)])
    crdos = resolve_modifiers([AttackScenario.complete_rdos(1, 0, 5)], 2, g)
    union = resolve_modifiers([AttackScenario.partial_rdos(r, 0, 5) for r in g.out_routes(1)], 2, g)
    assert crdos == union
    assert set(crdos.capacity_mask) == {(1, 2), (1, 3), (1, 4)}


def test_rst_ghost_only_when_window_opens(case_graph):
    a = [AttackScenario.rst(15, (3, 8), 2, 4)]
    assert resolve_modifiers(a, 2, case_graph).ghost_increment == {(3, 8): 1}
    assert resolve_modifiers(a, 3, case_graph).ghost_increment == {}


def test_conflicting_attack(case_graph):
    attacks = [AttackScenario.sdos(8, 1, 3), AttackScenario.partial_rdos((8, 11), 3, 5)]
    resolve_modifiers(attacks, 2, case_graph)
    with pytest.raises(ConflictingAttack):
        resolve_modifiers(attacks, 3, case_graph)


def test_sdos_flush_modifier(case_graph):
    m = resolve_modifiers([AttackScenario.sdos(8, 2, 2)], 2, case_graph)
    assert m.flush == {8} and not m.capacity_mask


# -- RST visibility ----------------------------------------------------------


def _three_in_queue(capacity):
    g = SectorGraph(frozenset({3, 8}), {(3, 8): Route(capacity, 2)})
    fleet = [Aircraft(i, (3, 8)) for i in (14, 15, 16)]
    return g, initial_state(g, fleet)


def test_rst_target_is_skipped_by_service():
    g, s0 = _three_in_queue(2)
    tr = simulate(g, s0, [AttackScenario.rst(15, (3, 8), 1, 2)], 4)
    served_t1 = {e.aircraft_id for e in tr.events if e.t == 1 and e.kind == "served"}
    assert served_t1 == {14, 16}
    assert tr.arrivals[15] == 3  # released at end+1 and served straight away


def test_rst_visibility_flags():
    g, s0 = _three_in_queue(1)
    a = AttackScenario.rst(15, (3, 8), 1, 2)
    s = apply_rst_visibility(s0, a, 0)
    assert s.aircraft[15].managed
    s = apply_rst_visibility(s, a, 1)
    assert s.aircraft[15].unmanaged
    s = apply_rst_visibility(s, a, 3)
    assert s.aircraft[15].managed
    assert s.queues[(3, 8)] == (14, 16, 15)


def test_rst_on_arrived_aircraft_raises():
    g = SectorGraph(frozenset({3, 8}), {(3, 8): Route(1, 2)})
    s0 = initial_state(g, [Aircraft(1, (3, 8))])
    with pytest.raises(UnknownAircraft):
        simulate(g, s0, [AttackScenario.rst(1, (3, 8), 3, 4)], 5)


def test_rst_ghost_route_must_start_at_aircraft_sector():
    g = SectorGraph.from_edges([(3, 8), (8, 11)], bidirectional=False)
    s0 = initial_state(g, [Aircraft(1, (3, 8, 11))])
    with pytest.raises(ValidationError):
        simulate(g, s0, [AttackScenario.rst(1, (8, 11), 0, 1)], 3)


def test_ghost_never_travels_downstream():
    doc = load_scenario("case_study_rst")
    tr = quiet_simulate(doc.graph(), doc.initial_state(), doc.attacks, doc.horizon)
    ghost_events = [e for e in tr.events if e.kind.startswith("ghost")]
    assert ghost_events and all(e.route == (3, 8) for e in ghost_events)
    assert sum(tr.ghost_inflow[(3, 8)]) == 1
    assert all(sum(tr.ghost_inflow[r]) == 0 for r in tr.routes if r != (3, 8))
    assert all(e.aircraft_id is not None for e in tr.events if e.kind in ("served", "flushed"))


def test_rst_delays_target_and_keeps_fleet_size():
    doc = load_scenario("case_study_rst")
    g = doc.graph()
    base = quiet_simulate(g, doc.initial_state(), [], doc.horizon)
    hit = quiet_simulate(g, doc.initial_state(), doc.attacks, doc.horizon)
    assert hit.arrivals[15] >= base.arrivals[15]
    assert hit.arrivals[15] > base.arrivals[15]
    assert set(hit.arrivals) == set(base.arrivals)
    # aircraft queued behind the hidden one may overtake it
    assert hit.arrivals[16] < base.arrivals[16]


def test_sdos_drops_ghosts_and_forwards_aircraft():
    g = SectorGraph(frozenset({3, 8}), {(3, 8): Route(1, 2)})
    s0 = initial_state(g, [Aircraft(i, (3, 8)) for i in (1, 2, 3)])
    attacks = [AttackScenario.rst(2, (3, 8), 0, 5), AttackScenario.sdos(3, 1, 1)]
    tr = simulate(g, s0, attacks, 3)
    kinds = [(e.kind, e.aircraft_id) for e in tr.events if e.t == 1]
    assert ("ghost_dropped", None) in kinds
    assert {a for k, a in kinds if k == "flushed"} == {1, 2, 3}
    assert tr.backlogs[(3, 8)][1] == 0


def test_modifier_helpers():
    m = StepModifiers({(1, 2): 0}, {(1, 2): 2})
    assert m.mask((1, 2)) == 0 and m.mask((2, 1)) == 1
    assert m.ghosts((1, 2)) == 2 and m.ghosts((2, 1)) == 0
    assert StepModifiers().is_identity()
    assert repr(GHOST)


def test_rdos_downstream_drop_arrives_one_hop_later():
    doc = load_scenario("case_study")
    base = quiet_simulate(doc.graph(), doc.initial_state(), [], doc.horizon)
    hit = quiet_simulate(doc.graph(), doc.initial_state(), doc.attacks, doc.horizon)
    # the block at t=1 withholds an aircraft that would have reached 11->12 at t=2
    assert hit.backlogs[(11, 12)][1] == base.backlogs[(11, 12)][1]
    assert hit.backlogs[(11, 12)][2] < base.backlogs[(11, 12)][2]
