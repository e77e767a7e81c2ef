"""Discrete-time dynamic queuing network engine.

Each directed route (i, j) owns a FIFO queue at sector i.  Per interval t:

1. aircraft served upstream at t-1 (and injections scheduled for t) join
   their next queue, in ascending aircraft id;
2. ghost tokens requested by the modifiers join the back of their queue;
3. each queue serves up to ``mask * capacity`` tokens, skipping aircraft
   hidden by an RST attack, or is flushed entirely when its sector is under
   SDOS.

Served aircraft reach the next queue at t+1, or arrive if that was their last
hop.  The backlog of a route at t is its queue length after step 3, so with
no hidden aircraft and no flush it follows ``step_backlog`` exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

from .attacks import AttackScenario, apply_rst_visibility, resolve_modifiers, validate_attacks
from .errors import HorizonTooSmall, InconsistentState, RouteExhausted, UnknownRoute, UnknownSector
from .graph import SectorGraph
from .state import (
    GHOST,
    Aircraft,
    Edge,
    Event,
    Ghost,
    NetworkState,
    SimulationTrace,
    Status,
    StepModifiers,
)


def next_outflow(aircraft: Aircraft) -> Edge:
    if aircraft.status is Status.ARRIVED or aircraft.hop_index >= len(aircraft.route) - 1:
        raise RouteExhausted(f"aircraft {aircraft.id} is at its final sector")
    h = aircraft.hop_index
    return (aircraft.route[h], aircraft.route[h + 1])


def step_backlog(x_prev: int, u: int, c: int, capacity_mask: int, ghost: int) -> int:
    return max(0, u + ghost + x_prev - capacity_mask * c)


def initial_state(
    graph: SectorGraph,
    aircraft: Iterable[Aircraft],
    injections: Optional[Mapping[int, int]] = None,
) -> NetworkState:
    """State at t=0.

    Aircraft listed in ``injections`` (id -> interval >= 1) join their queue
    at that interval; all others start queued at their current hop.
    """
    injections = dict(injections or {})
    queues: dict[Edge, list[int]] = {r: [] for r in sorted(graph.routes)}
    inbound = []
    fleet: dict[int, Aircraft] = {}
    for a in sorted(aircraft, key=lambda a: a.id):
        if a.id in fleet:
            raise ValueError(f"duplicate aircraft id {a.id}")
        for hop in zip(a.route, a.route[1:]):
            if hop not in graph.routes:
                raise UnknownRoute(f"aircraft {a.id}: route hop {hop} is not in the graph")
        r = next_outflow(a)
        t_in = injections.get(a.id, 0)
        if t_in > 0:
            fleet[a.id] = replace(a, status=Status.SCHEDULED)
            inbound.append((t_in, r, a.id))
        else:
            fleet[a.id] = replace(a, status=Status.QUEUED)
            queues[r].append(a.id)
    return NetworkState(
        clock=0,
        aircraft=fleet,
        queues={r: tuple(q) for r, q in queues.items()},
        inbound=tuple(sorted(inbound)),
    )


@dataclass
class _StepRecord:
    inflow: dict = field(default_factory=dict)
    ghost_inflow: dict = field(default_factory=dict)
    served: dict = field(default_factory=dict)
    events: list = field(default_factory=list)


def _check_modifiers(graph: SectorGraph, mods: StepModifiers) -> None:
    for r in list(mods.capacity_mask) + list(mods.ghost_increment):
        if r not in graph.routes:
            raise UnknownRoute(f"modifier references unknown route {r}")
    for s in mods.flush:
        if s not in graph.sectors:
            raise UnknownSector(f"modifier references unknown sector {s}")


def _add_ghosts(queues: dict, mods: StepModifiers, t: int, rec: _StepRecord) -> None:
    for r in sorted(mods.ghost_increment):
        n = mods.ghost_increment[r]
        if n:
            queues[r].extend([GHOST] * n)
            rec.ghost_inflow[r] = rec.ghost_inflow.get(r, 0) + n
            rec.events.extend(Event(t, "ghost_injected", r, None) for _ in range(n))


def _step(state: NetworkState, graph: SectorGraph, mods: StepModifiers) -> tuple[NetworkState, _StepRecord]:
    _check_modifiers(graph, mods)
    t = state.clock + 1
    rec = _StepRecord()
    fleet = dict(state.aircraft)
    arrivals = dict(state.arrivals)
    queues = {r: list(state.queues.get(r, ())) for r in sorted(graph.routes)}

    due = sorted((e for e in state.inbound if e[0] <= t), key=lambda e: e[2])
    inbound = [e for e in state.inbound if e[0] > t]
    for _, r, aid in due:
        queues[r].append(aid)
        fleet[aid] = replace(fleet[aid], status=Status.QUEUED)
        rec.inflow[r] = rec.inflow.get(r, 0) + 1
    _add_ghosts(queues, mods, t, rec)

    def depart(aid: int, r: Edge, kind: str) -> None:
        craft = fleet[aid].advanced()
        fleet[aid] = craft
        rec.served[r] = rec.served.get(r, 0) + 1
        rec.events.append(Event(t, kind, r, aid))
        if craft.status is Status.ARRIVED:
            arrivals[aid] = t
            rec.events.append(Event(t, "arrived", None, aid, str(craft.route[-1])))
        else:
            inbound.append((t + 1, next_outflow(craft), aid))

    for r, q in queues.items():
        if r[0] in mods.flush:
            for tok in q:
                if isinstance(tok, Ghost):
                    rec.events.append(Event(t, "ghost_dropped", r, None))
                else:
                    depart(tok, r, "flushed")
            queues[r] = []
            continue
        slots = mods.mask(r) * graph.routes[r].capacity
        left = []
        for tok in q:
            if slots and isinstance(tok, Ghost):
                slots -= 1
                rec.events.append(Event(t, "ghost_served", r, None))
            elif slots and fleet[tok].managed:
                slots -= 1
                depart(tok, r, "served")
            else:
                left.append(tok)
        queues[r] = left

    seen: set[int] = set()
    for r, q in queues.items():
        for tok in q:
            if isinstance(tok, Ghost):
                continue
            if tok in seen:
                raise InconsistentState(f"aircraft {tok} appears in more than one queue")
            seen.add(tok)
    for _, _, aid in inbound:
        if aid in seen:
            raise InconsistentState(f"aircraft {aid} is both queued and in transit")
        seen.add(aid)

    new = NetworkState(
        clock=t,
        aircraft=fleet,
        queues={r: tuple(q) for r, q in queues.items()},
        inbound=tuple(sorted(inbound)),
        arrivals=arrivals,
    )
    return new, rec


def advance(state: NetworkState, graph: SectorGraph, modifiers: StepModifiers) -> NetworkState:
    """Let one interval elapse; see the module docstring for the step order."""
    return _step(state, graph, modifiers)[0]


def simulate(
    graph: SectorGraph,
    initial: NetworkState,
    attacks: Sequence[AttackScenario],
    horizon: int,
) -> SimulationTrace:
    """Run ``horizon`` intervals from ``initial`` (interval 0).

    Interval 0 is the initial snapshot: no service happens there, but an RST
    window opening at t=0 already hides its aircraft and places its ghost.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    attacks = list(attacks)
    validate_attacks(attacks, graph, initial.aircraft)
    routes = tuple(sorted(graph.routes))
    backlogs = {r: [] for r in routes}
    inflow = {r: [] for r in routes}
    ghost_inflow = {r: [] for r in routes}
    served = {r: [] for r in routes}
    events: list[Event] = []
    attack_log: list = []

    def record(state: NetworkState, rec: _StepRecord, t: int) -> None:
        for r in routes:
            backlogs[r].append(state.backlog(r))
            inflow[r].append(rec.inflow.get(r, 0))
            ghost_inflow[r].append(rec.ghost_inflow.get(r, 0))
            served[r].append(rec.served.get(r, 0))
        events.extend(rec.events)
        attack_log.extend((t, a) for a in attacks if a.active(t))

    state = initial
    for a in attacks:
        state = apply_rst_visibility(state, a, 0)
    rec0 = _StepRecord()
    mods0 = resolve_modifiers(attacks, 0, graph)
    if mods0.ghost_increment:
        queues = {r: list(q) for r, q in state.queues.items()}
        _add_ghosts(queues, mods0, 0, rec0)
        state = replace(state, queues={r: tuple(q) for r, q in queues.items()})
    record(state, rec0, 0)

    for t in range(1, horizon + 1):
        for a in attacks:
            state = apply_rst_visibility(state, a, t)
        state, rec = _step(state, graph, resolve_modifiers(attacks, t, graph))
        record(state, rec, t)

    pending = sorted(a for a in state.aircraft if a not in state.arrivals)
    if pending:
        warnings.warn(
            f"{len(pending)} aircraft not arrived by t={horizon}: {pending[:10]}",
            HorizonTooSmall,
            stacklevel=2,
        )
    return SimulationTrace(
        horizon=horizon,
        routes=routes,
        backlogs={r: tuple(v) for r, v in backlogs.items()},
        inflow={r: tuple(v) for r, v in inflow.items()},
        ghost_inflow={r: tuple(v) for r, v in ghost_inflow.items()},
        served={r: tuple(v) for r, v in served.items()},
        arrivals={a: state.arrivals.get(a) for a in sorted(state.aircraft)},
        events=tuple(events),
        attack_log=tuple(attack_log),
    )
