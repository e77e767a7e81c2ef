"""Data types shared by the queue engine and the attack models."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Union

Edge = tuple[int, int]


class Status(enum.Enum):
    SCHEDULED = "scheduled"  # waiting for its injection interval
    QUEUED = "queued"
    IN_TRANSIT = "in_transit"
    ARRIVED = "arrived"


@dataclass(frozen=True)
class Aircraft:
    id: int
    route: tuple[int, ...]
    hop_index: int = 0
    status: Status = Status.QUEUED
    # False while a route-selection-tampering attack hides the aircraft.
    managed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "route", tuple(self.route))
        if len(self.route) < 2:
            raise ValueError(f"aircraft {self.id}: route needs at least two sectors")
        if len(set(self.route)) != len(self.route):
            raise ValueError(f"aircraft {self.id}: route revisits a sector")
        if not 0 <= self.hop_index < len(self.route):
            raise ValueError(f"aircraft {self.id}: hop index {self.hop_index} out of range")

    @property
    def unmanaged(self) -> bool:
        return not self.managed and self.status is not Status.ARRIVED

    def advanced(self) -> "Aircraft":
        hop = self.hop_index + 1
        status = Status.ARRIVED if hop == len(self.route) - 1 else Status.IN_TRANSIT
        return replace(self, hop_index=hop, status=status)


class Ghost:
    """Non-existent aircraft shown to a controller.  Never leaves its queue
    for a downstream sector; it only occupies a service slot."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "GHOST"


GHOST = Ghost()


Token = Union[int, Ghost]


@dataclass(frozen=True)
class NetworkState:
    """Queue contents at the end of interval ``clock``.

    ``queues`` maps each directed route to the FIFO of tokens waiting at its
    source sector.  ``inbound`` holds ``(due_t, route, aircraft_id)`` entries
    for aircraft that join a queue at a later interval, either because they
    were just served upstream or because their injection is scheduled.
    """

    clock: int
    aircraft: Mapping[int, Aircraft]
    queues: Mapping[Edge, tuple[Token, ...]]
    inbound: tuple[tuple[int, Edge, int], ...] = ()
    arrivals: Mapping[int, int] = field(default_factory=dict)

    __hash__ = None

    def backlog(self, route: Edge) -> int:
        return len(self.queues.get(route, ()))

    def location(self, aircraft_id: int) -> Optional[Edge]:
        """Queue the aircraft is in or heading into; None once arrived."""
        for r, q in self.queues.items():
            if aircraft_id in q:
                return r
        for _, r, a in self.inbound:
            if a == aircraft_id:
                return r
        return None


@dataclass(frozen=True)
class StepModifiers:
    """Per-interval attack effects applied by ``advance``.

    ``capacity_mask`` holds 0 for blocked routes (routes absent are 1),
    ``ghost_increment`` the number of ghost tokens entering each route,
    ``flush`` the sectors whose queues are bypassed this interval.
    """

    capacity_mask: Mapping[Edge, int] = field(default_factory=dict)
    ghost_increment: Mapping[Edge, int] = field(default_factory=dict)
    flush: frozenset[int] = frozenset()

    __hash__ = None

    def mask(self, route: Edge) -> int:
        return self.capacity_mask.get(route, 1)

    def ghosts(self, route: Edge) -> int:
        return self.ghost_increment.get(route, 0)

    def is_identity(self) -> bool:
        return (
            all(v == 1 for v in self.capacity_mask.values())
            and not any(self.ghost_increment.values())
            and not self.flush
        )


@dataclass(frozen=True)
class Event:
    t: int
    kind: str
    route: Optional[Edge]
    aircraft_id: Optional[int]
    detail: str = ""


@dataclass(frozen=True)
class SimulationTrace:
    """Per-route series indexed by interval 0..horizon.

    ``inflow`` counts real aircraft joining each queue at each interval,
    ``ghost_inflow`` the ghost tokens, ``served`` real aircraft leaving it.
    """

    horizon: int
    routes: tuple[Edge, ...]
    backlogs: Mapping[Edge, tuple[int, ...]]
    inflow: Mapping[Edge, tuple[int, ...]]
    ghost_inflow: Mapping[Edge, tuple[int, ...]]
    served: Mapping[Edge, tuple[int, ...]]
    arrivals: Mapping[int, Optional[int]]
    events: tuple[Event, ...]
    attack_log: tuple  # (t, AttackScenario) for every active attack

    __hash__ = None
