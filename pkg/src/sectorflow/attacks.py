"""Attack scenarios and their translation into per-interval engine modifiers.

* complete RDOS: every outflow of the target sector has capacity mask 0;
* partial RDOS: one route has capacity mask 0;
* RST: one ghost token enters the ghost route when the window opens, and the
  real aircraft is hidden from service until the window closes;
* SDOS: the target sector's queues are flushed downstream each interval.

Windows are inclusive on both ends.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .errors import ConflictingAttack, UnknownAircraft, UnknownRoute, UnknownSector, ValidationError
from .graph import SectorGraph
from .state import Edge, NetworkState, Status, StepModifiers


class AttackKind(str, enum.Enum):
    CRDOS = "crdos"
    PRDOS = "prdos"
    RST = "rst"
    SDOS = "sdos"


@dataclass(frozen=True)
class AttackScenario:
    kind: AttackKind
    start: int
    end: int
    sector: Optional[int] = None  # CRDOS, SDOS
    route: Optional[Edge] = None  # PRDOS blocked route; RST ghost route
    aircraft: Optional[int] = None  # RST target
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", AttackKind(self.kind))
        if self.route is not None:
            object.__setattr__(self, "route", tuple(self.route))
        if self.start < 0 or self.start > self.end:
            raise ValueError(f"bad attack window [{self.start}, {self.end}]")
        needs = {
            AttackKind.CRDOS: ("sector",),
            AttackKind.SDOS: ("sector",),
            AttackKind.PRDOS: ("route",),
            AttackKind.RST: ("route", "aircraft"),
        }[self.kind]
        for attr in needs:
            if getattr(self, attr) is None:
                raise ValueError(f"{self.kind.value} attack needs '{attr}'")

    @classmethod
    def complete_rdos(cls, sector: int, start: int, end: int, name: str = "") -> "AttackScenario":
        return cls(AttackKind.CRDOS, start, end, sector=sector, name=name)

    @classmethod
    def partial_rdos(cls, route: Edge, start: int, end: int, name: str = "") -> "AttackScenario":
        return cls(AttackKind.PRDOS, start, end, route=route, name=name)

    @classmethod
    def rst(cls, aircraft: int, ghost_route: Edge, start: int, end: int, name: str = "") -> "AttackScenario":
        return cls(AttackKind.RST, start, end, route=ghost_route, aircraft=aircraft, name=name)

    @classmethod
    def sdos(cls, sector: int, start: int, end: int, name: str = "") -> "AttackScenario":
        return cls(AttackKind.SDOS, start, end, sector=sector, name=name)

    def active(self, t: int) -> bool:
        return self.start <= t <= self.end

    @property
    def label(self) -> str:
        if self.kind is AttackKind.RST:
            target = f"aircraft {self.aircraft} ghost {self.route[0]}->{self.route[1]}"
        elif self.route is not None:
            target = f"{self.route[0]}->{self.route[1]}"
        else:
            target = f"sector {self.sector}"
        return f"{self.name or self.kind.value}: {target}"


def validate_attacks(
    attacks: Sequence[AttackScenario], graph: SectorGraph, aircraft_ids: Iterable[int]
) -> None:
    ids = set(aircraft_ids)
    for a in attacks:
        if a.sector is not None and a.sector not in graph.sectors:
            raise UnknownSector(f"{a.label}: unknown sector {a.sector}")
        if a.route is not None and a.route not in graph.routes:
            raise UnknownRoute(f"{a.label}: unknown route {a.route}")
        if a.aircraft is not None and a.aircraft not in ids:
            raise UnknownAircraft(f"{a.label}: unknown aircraft {a.aircraft}")


def resolve_modifiers(attacks: Sequence[AttackScenario], t: int, graph: SectorGraph) -> StepModifiers:
    mask: dict[Edge, int] = {}
    ghosts: dict[Edge, int] = {}
    flush: set[int] = set()
    for a in attacks:
        if not a.active(t):
            continue
        if a.kind is AttackKind.CRDOS:
            for r in graph.out_routes(a.sector):
                mask[r] = 0
        elif a.kind is AttackKind.PRDOS:
            mask[a.route] = 0
        elif a.kind is AttackKind.RST:
            # one ghost per attack, entering when the window opens
            if t == a.start:
                ghosts[a.route] = ghosts.get(a.route, 0) + 1
        elif a.kind is AttackKind.SDOS:
            flush.add(a.sector)
    for r in sorted(mask):
        if r[0] in flush:
            raise ConflictingAttack(
                f"route {r[0]}->{r[1]} is both blocked and flushed at t={t}"
            )
    return StepModifiers(mask, ghosts, frozenset(flush))


def apply_rst_visibility(state: NetworkState, attack: AttackScenario, t: int) -> NetworkState:
    """Hide the RST target from service while the window is open.

    When the window closes (the interval after ``end``) the aircraft is
    managed again and rejoins the back of whatever queue it sits in.
    """
    if attack.kind is not AttackKind.RST:
        return state
    aid = attack.aircraft
    if aid not in state.aircraft:
        raise UnknownAircraft(f"{attack.label}: unknown aircraft {aid}")
    craft = state.aircraft[aid]

    if t == attack.start:
        if craft.status is Status.ARRIVED:
            raise UnknownAircraft(f"{attack.label}: aircraft {aid} has already arrived at t={t}")
        where = state.location(aid)
        if where is None or where[0] != attack.route[0]:
            raise ValidationError(
                f"attack '{attack.name or attack.kind.value}'",
                f"ghost route starts at sector {attack.route[0]} but aircraft {aid} "
                f"is at {where} when the window opens (t={t})",
            )

    if attack.active(t):
        if craft.managed and craft.status is not Status.ARRIVED:
            return _with_aircraft(state, replace(craft, managed=False))
        return state

    if t == attack.end + 1 and not craft.managed:
        state = _with_aircraft(state, replace(craft, managed=True))
        queues = dict(state.queues)
        for r, q in queues.items():
            if aid in q:
                queues[r] = tuple(x for x in q if x != aid) + (aid,)
                break
        return replace(state, queues=queues)
    return state


def _with_aircraft(state: NetworkState, craft) -> NetworkState:
    fleet = dict(state.aircraft)
    fleet[craft.id] = craft
    return replace(state, aircraft=fleet)
