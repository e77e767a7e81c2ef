"""Exception hierarchy.

Scenario problems (``ParseError``, ``ValidationError``) are separated from
computational failures so the CLI can map them to distinct exit codes.
"""

from __future__ import annotations


class SectorFlowError(Exception):
    """Base class for every error raised by this package."""


class ScenarioError(SectorFlowError):
    """Problem with an input document."""


class ParseError(ScenarioError):
    pass


class ValidationError(ScenarioError):
    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class UnknownSector(SectorFlowError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class UnknownRoute(SectorFlowError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class DisconnectedGraph(SectorFlowError):
    pass


class DisconnectedVariant(DisconnectedGraph):
    """A keep-one-edge variant used by the complete-RDOS metric is disconnected."""

    def __init__(self, target: int, kept_edge: tuple[int, int] | None):
        self.target = target
        self.kept_edge = kept_edge
        if kept_edge is None:
            msg = f"sector {target} has no routes, so every variant is disconnected"
        else:
            msg = (
                f"keeping only edge {kept_edge[0]}-{kept_edge[1]} of sector {target} "
                "disconnects the graph"
            )
        super().__init__(msg)


class NoPositiveEigenvalue(SectorFlowError):
    pass


class NotSymmetric(SectorFlowError):
    pass


class RouteExhausted(SectorFlowError):
    pass


class InconsistentState(SectorFlowError):
    pass


class ConflictingAttack(SectorFlowError):
    pass


class UnknownAircraft(SectorFlowError):
    pass


class DivisionByZeroLength(SectorFlowError):
    pass


class HorizonTooSmall(UserWarning):
    """Some aircraft had not arrived when the simulation horizon was reached."""


class MultipleEigenvalue(UserWarning):
    """The smallest positive Laplacian eigenvalue is repeated."""
