"""Scenario documents: JSON parsing, validation and serialisation.

Format (version 1)::

    {
      "version": 1,
      "name": "...", "notes": "...",              # optional free text
      "graph": {
        "sectors": [3, 4, 7],
        "routes": [{"from": 3, "to": 7, "capacity": 1, "flow": 2,
                    "bidirectional": false}]
      },
      "aircraft": [{"id": 1, "route": [3, 7], "hop": 0, "inject_t": 0}],
      "streams": [{"route": [3, 7], "per_interval": 2, "start": 1, "end": 5,
                   "first_id": 100}],             # optional, expanded to aircraft
      "attacks": [{"kind": "crdos", "sector": 7, "start": 1, "end": 1},
                  {"kind": "prdos", "route": [3, 7], "start": 1, "end": 2},
                  {"kind": "rst", "aircraft": 1, "ghost_route": [3, 8],
                   "start": 0, "end": 2},
                  {"kind": "sdos", "sector": 3, "start": 2, "end": 2}],
      "horizon": 20,
      "params": {"alpha": 1, "beta": 1, "c": 1, "sdos_factor": 3,
                 "weight_lost": 0.75, "max_n": null}
    }

``hop`` is the index in ``route`` of the sector whose queue the aircraft
starts in; ``inject_t`` > 0 delays its arrival in that queue.  Attack
``name`` is optional.  Unknown keys are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional

from .attacks import AttackKind, AttackScenario
from .errors import ParseError, ValidationError
from .graph import Route, SectorGraph
from .paths import PathParams
from .spectral import SpectralParams
from .state import Aircraft, NetworkState

VERSION = 1


@dataclass(frozen=True)
class RouteSpec:
    src: int
    dst: int
    capacity: int = 1
    flow: float = 0
    bidirectional: bool = False


@dataclass(frozen=True)
class AircraftSpec:
    id: int
    route: tuple[int, ...]
    hop: int = 0
    inject_t: int = 0


@dataclass(frozen=True)
class MetricParams:
    alpha: int = 1
    beta: int = 1
    c: float = 1
    sdos_factor: float = 3
    weight_lost: float = 0.75
    max_n: Optional[int] = None

    def spectral(self) -> SpectralParams:
        return SpectralParams(self.alpha, self.beta, self.c, self.sdos_factor)

    def path(self) -> PathParams:
        return PathParams(self.weight_lost, self.max_n)


@dataclass(frozen=True)
class ScenarioDocument:
    sectors: tuple[int, ...]
    routes: tuple[RouteSpec, ...]
    aircraft: tuple[AircraftSpec, ...] = ()
    attacks: tuple[AttackScenario, ...] = ()
    horizon: int = 1
    params: MetricParams = field(default_factory=MetricParams)
    name: str = ""
    notes: str = ""
    version: int = VERSION

    def graph(self) -> SectorGraph:
        routes = {}
        for r in self.routes:
            routes[(r.src, r.dst)] = Route(r.capacity, r.flow)
            if r.bidirectional:
                routes[(r.dst, r.src)] = Route(r.capacity, r.flow)
        return SectorGraph(frozenset(self.sectors), routes)

    def fleet(self) -> list[Aircraft]:
        return [Aircraft(a.id, a.route, a.hop) for a in self.aircraft]

    def injections(self) -> dict[int, int]:
        return {a.id: a.inject_t for a in self.aircraft if a.inject_t > 0}

    def initial_state(self) -> NetworkState:
        from .engine import initial_state

        return initial_state(self.graph(), self.fleet(), self.injections())


# -- parsing -----------------------------------------------------------------


def _keys(obj: Any, path: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(obj, dict):
        raise ValidationError(path, "expected an object")
    missing = sorted(required - obj.keys())
    if missing:
        raise ValidationError(path, f"missing field(s) {', '.join(missing)}")
    extra = sorted(obj.keys() - required - set(optional))
    if extra:
        raise ValidationError(path, f"unknown field(s) {', '.join(extra)}")
    return obj


def _int(v: Any, path: str, lo: Optional[int] = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(path, f"expected an integer, got {v!r}")
    if lo is not None and v < lo:
        raise ValidationError(path, f"must be >= {lo}, got {v}")
    return v


def _num(v: Any, path: str, lo: Optional[float] = None) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(path, f"expected a number, got {v!r}")
    if lo is not None and v < lo:
        raise ValidationError(path, f"must be >= {lo}, got {v}")
    return v


def _pair(v: Any, path: str) -> tuple[int, int]:
    if not isinstance(v, list) or len(v) != 2:
        raise ValidationError(path, "expected a [from, to] pair")
    return (_int(v[0], f"{path}[0]"), _int(v[1], f"{path}[1]"))


def _sector_list(v: Any, path: str, min_len: int = 0) -> tuple[int, ...]:
    if not isinstance(v, list) or len(v) < min_len:
        raise ValidationError(path, f"expected a list of at least {min_len} sector ids")
    return tuple(_int(x, f"{path}[{k}]", 0) for k, x in enumerate(v))


def _parse_graph(obj: Any) -> tuple[tuple[int, ...], tuple[RouteSpec, ...]]:
    g = _keys(obj, "graph", {"sectors", "routes"})
    sectors = _sector_list(g["sectors"], "graph.sectors")
    if len(set(sectors)) != len(sectors):
        raise ValidationError("graph.sectors", "duplicate sector id")
    if not isinstance(g["routes"], list):
        raise ValidationError("graph.routes", "expected a list")
    specs = []
    seen: set[tuple[int, int]] = set()
    for k, r in enumerate(g["routes"]):
        p = f"graph.routes[{k}]"
        _keys(r, p, {"from", "to"}, {"capacity", "flow", "bidirectional"})
        src, dst = _int(r["from"], f"{p}.from"), _int(r["to"], f"{p}.to")
        for end, s in (("from", src), ("to", dst)):
            if s not in sectors:
                raise ValidationError(f"{p}.{end}", f"sector {s} is not declared")
        if src == dst:
            raise ValidationError(p, "self-loop route")
        bidir = r.get("bidirectional", False)
        if not isinstance(bidir, bool):
            raise ValidationError(f"{p}.bidirectional", "expected true or false")
        for d in [(src, dst)] + ([(dst, src)] if bidir else []):
            if d in seen:
                raise ValidationError(p, f"duplicate route {d[0]}->{d[1]}")
            seen.add(d)
        specs.append(
            RouteSpec(
                src,
                dst,
                _int(r.get("capacity", 1), f"{p}.capacity", 0),
                _num(r.get("flow", 0), f"{p}.flow", 0),
                bidir,
            )
        )
    return sectors, tuple(specs)


def _route_pairs(routes: tuple[RouteSpec, ...]) -> set[tuple[int, int]]:
    pairs = set()
    for r in routes:
        pairs.add((r.src, r.dst))
        if r.bidirectional:
            pairs.add((r.dst, r.src))
    return pairs


def _check_route(route: tuple[int, ...], pairs, path: str) -> None:
    if len(set(route)) != len(route):
        raise ValidationError(path, "route revisits a sector")
    for hop in zip(route, route[1:]):
        if hop not in pairs:
            raise ValidationError(path, f"no route declared for hop {hop[0]}->{hop[1]}")


def _parse_aircraft(items: Any, streams: Any, pairs) -> tuple[AircraftSpec, ...]:
    if not isinstance(items, list):
        raise ValidationError("aircraft", "expected a list")
    out = []
    for k, a in enumerate(items):
        p = f"aircraft[{k}]"
        _keys(a, p, {"id", "route"}, {"hop", "inject_t"})
        route = _sector_list(a["route"], f"{p}.route", 2)
        _check_route(route, pairs, f"{p}.route")
        hop = _int(a.get("hop", 0), f"{p}.hop", 0)
        if hop >= len(route) - 1:
            raise ValidationError(f"{p}.hop", "aircraft must start before its final sector")
        out.append(AircraftSpec(_int(a["id"], f"{p}.id", 1), route, hop, _int(a.get("inject_t", 0), f"{p}.inject_t", 0)))
    if not isinstance(streams, list):
        raise ValidationError("streams", "expected a list")
    for k, s in enumerate(streams):
        p = f"streams[{k}]"
        _keys(s, p, {"route", "per_interval", "start", "end", "first_id"})
        route = _sector_list(s["route"], f"{p}.route", 2)
        _check_route(route, pairs, f"{p}.route")
        per = _int(s["per_interval"], f"{p}.per_interval", 0)
        start = _int(s["start"], f"{p}.start", 1)
        end = _int(s["end"], f"{p}.end", start)
        next_id = _int(s["first_id"], f"{p}.first_id", 1)
        for t in range(start, end + 1):
            for _ in range(per):
                out.append(AircraftSpec(next_id, route, 0, t))
                next_id += 1
    ids = [a.id for a in out]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise ValidationError("aircraft", f"duplicate aircraft id(s) {dupes}")
    return tuple(sorted(out, key=lambda a: a.id))


_ATTACK_FIELDS = {
    "crdos": {"sector"},
    "sdos": {"sector"},
    "prdos": {"route"},
    "rst": {"aircraft", "ghost_route"},
}


def _parse_attacks(items: Any, sectors, pairs, fleet: tuple[AircraftSpec, ...]) -> tuple[AttackScenario, ...]:
    if not isinstance(items, list):
        raise ValidationError("attacks", "expected a list")
    by_id = {a.id: a for a in fleet}
    out = []
    for k, a in enumerate(items):
        p = f"attacks[{k}]"
        if not isinstance(a, dict) or a.get("kind") not in _ATTACK_FIELDS:
            raise ValidationError(f"{p}.kind", f"expected one of {sorted(_ATTACK_FIELDS)}")
        kind = a["kind"]
        _keys(a, p, {"kind", "start", "end"} | _ATTACK_FIELDS[kind], {"name"})
        start = _int(a["start"], f"{p}.start", 0)
        end = _int(a["end"], f"{p}.end", start)
        name = a.get("name", "")
        if not isinstance(name, str):
            raise ValidationError(f"{p}.name", "expected a string")
        if kind in ("crdos", "sdos"):
            s = _int(a["sector"], f"{p}.sector")
            if s not in sectors:
                raise ValidationError(f"{p}.sector", f"sector {s} is not declared")
            out.append(AttackScenario(AttackKind(kind), start, end, sector=s, name=name))
        elif kind == "prdos":
            r = _pair(a["route"], f"{p}.route")
            if r not in pairs:
                raise ValidationError(f"{p}.route", f"no route {r[0]}->{r[1]}")
            out.append(AttackScenario.partial_rdos(r, start, end, name))
        else:
            aid = _int(a["aircraft"], f"{p}.aircraft")
            if aid not in by_id:
                raise ValidationError(f"{p}.aircraft", f"aircraft {aid} is not declared")
            r = _pair(a["ghost_route"], f"{p}.ghost_route")
            if r not in pairs:
                raise ValidationError(f"{p}.ghost_route", f"no route {r[0]}->{r[1]}")
            craft = by_id[aid]
            if start <= craft.inject_t and craft.route[craft.hop] != r[0]:
                raise ValidationError(
                    f"{p}.ghost_route",
                    f"ghost route must leave sector {craft.route[craft.hop]}, "
                    f"where aircraft {aid} is when the attack starts",
                )
            out.append(AttackScenario.rst(aid, r, start, end, name))
    return tuple(out)


def _parse_params(obj: Any) -> MetricParams:
    fields = {"alpha", "beta", "c", "sdos_factor", "weight_lost", "max_n"}
    _keys(obj, "params", set(), fields)
    d = MetricParams()
    max_n = obj.get("max_n", d.max_n)
    mp = MetricParams(
        alpha=_int(obj.get("alpha", d.alpha), "params.alpha", 1),
        beta=_int(obj.get("beta", d.beta), "params.beta", 1),
        c=_num(obj.get("c", d.c), "params.c", 0),
        sdos_factor=_num(obj.get("sdos_factor", d.sdos_factor), "params.sdos_factor"),
        weight_lost=_num(obj.get("weight_lost", d.weight_lost), "params.weight_lost"),
        max_n=None if max_n is None else _int(max_n, "params.max_n", 1),
    )
    if mp.sdos_factor <= 0:
        raise ValidationError("params.sdos_factor", "must be positive")
    if not 0.5 < mp.weight_lost < 1:
        raise ValidationError("params.weight_lost", "must lie strictly between 0.5 and 1")
    return mp


def parse_scenario(text: str) -> ScenarioDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return scenario_from_dict(obj)


def scenario_from_dict(obj: Any) -> ScenarioDocument:
    _keys(obj, "", {"version", "graph", "horizon"}, {"name", "notes", "aircraft", "streams", "attacks", "params"})
    if obj["version"] != VERSION:
        raise ValidationError("version", f"unsupported version {obj['version']!r} (expected {VERSION})")
    for key in ("name", "notes"):
        if not isinstance(obj.get(key, ""), str):
            raise ValidationError(key, "expected a string")
    sectors, routes = _parse_graph(obj["graph"])
    pairs = _route_pairs(routes)
    fleet = _parse_aircraft(obj.get("aircraft", []), obj.get("streams", []), pairs)
    attacks = _parse_attacks(obj.get("attacks", []), sectors, pairs, fleet)
    return ScenarioDocument(
        sectors=sectors,
        routes=routes,
        aircraft=fleet,
        attacks=attacks,
        horizon=_int(obj["horizon"], "horizon", 1),
        params=_parse_params(obj.get("params", {})),
        name=obj.get("name", ""),
        notes=obj.get("notes", ""),
    )


# -- serialisation -----------------------------------------------------------


def _attack_dict(a: AttackScenario) -> dict:
    d: dict[str, Any] = {"kind": a.kind.value}
    if a.name:
        d["name"] = a.name
    if a.kind in (AttackKind.CRDOS, AttackKind.SDOS):
        d["sector"] = a.sector
    elif a.kind is AttackKind.PRDOS:
        d["route"] = list(a.route)
    else:
        d["aircraft"] = a.aircraft
        d["ghost_route"] = list(a.route)
    d["start"], d["end"] = a.start, a.end
    return d


def scenario_to_dict(doc: ScenarioDocument) -> dict:
    p = doc.params
    return {
        "version": doc.version,
        "name": doc.name,
        "notes": doc.notes,
        "graph": {
            "sectors": list(doc.sectors),
            "routes": [
                {"from": r.src, "to": r.dst, "capacity": r.capacity, "flow": r.flow, "bidirectional": r.bidirectional}
                for r in doc.routes
            ],
        },
        "aircraft": [
            {"id": a.id, "route": list(a.route), "hop": a.hop, "inject_t": a.inject_t} for a in doc.aircraft
        ],
        "attacks": [_attack_dict(a) for a in doc.attacks],
        "horizon": doc.horizon,
        "params": {
            "alpha": p.alpha,
            "beta": p.beta,
            "c": p.c,
            "sdos_factor": p.sdos_factor,
            "weight_lost": p.weight_lost,
            "max_n": p.max_n,
        },
    }


def dump_scenario(doc: ScenarioDocument) -> str:
    return json.dumps(scenario_to_dict(doc), indent=2) + "\n"


def bundled_scenarios() -> list[str]:
    root = resources.files("sectorflow") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_scenario(ref: str) -> ScenarioDocument:
    """Load a scenario from a file path, or by name from the bundled set."""
    path = Path(ref)
    if path.is_file():
        return parse_scenario(path.read_text())
    bundled = resources.files("sectorflow") / "scenarios" / f"{ref}.json"
    if bundled.is_file():
        return parse_scenario(bundled.read_text())
    raise ValidationError("", f"no scenario file or bundled scenario named {ref!r}")
