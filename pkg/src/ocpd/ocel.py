"""Object-centric event logs: data model, JSON I/O, process executions, flattening."""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from datetime import datetime, timezone

import networkx as nx
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

__all__ = [
    "OCELError",
    "Event",
    "ObjectInstance",
    "OCEL",
    "ProcessExecution",
    "parse_ocel",
    "serialize_ocel",
    "object_graph",
    "connected_objects",
    "process_executions",
    "flatten",
    "is_traditional_log",
]


class OCELError(ValueError):
    """Raised for malformed or inconsistent event logs."""


@dataclass(frozen=True)
class Event:
    id: str
    activity: str
    timestamp: int


@dataclass(frozen=True)
class ObjectInstance:
    id: str
    object_type: str


@dataclass(frozen=True)
class OCEL:
    """An object-centric event log.

    ``traces`` maps every object id to the ids of its events, ordered by
    timestamp.  The event-to-object relation is derived from the traces.
    Use :meth:`from_links` to build a log from per-event object lists.
    """

    events: Mapping[str, Event] = field(default_factory=dict)
    objects: Mapping[str, ObjectInstance] = field(default_factory=dict)
    traces: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        for oid, trace in self.traces.items():
            if oid not in self.objects:
                raise OCELError(f"trace for unknown object {oid!r}")
            for eid in trace:
                if eid not in self.events:
                    raise OCELError(f"object {oid!r} references unknown event {eid!r}")
            for a, b in zip(trace, trace[1:]):
                if self.events[a].timestamp > self.events[b].timestamp:
                    raise OCELError(
                        f"trace of {oid!r} violates timestamp order at event {b!r}"
                    )
        for oid in self.objects:
            if oid not in self.traces:
                raise OCELError(f"object {oid!r} has no trace entry")
        linked = {eid for trace in self.traces.values() for eid in trace}
        for eid in self.events:
            if eid not in linked:
                raise OCELError(f"event {eid!r} is not linked to any object")

    @classmethod
    def from_links(
        cls,
        events: Iterable[Event],
        objects: Iterable[ObjectInstance],
        links: Mapping[str, Iterable[str]],
    ) -> OCEL:
        """Build a log from ``links`` (event id -> object ids).

        Traces are sorted by (timestamp, event id).
        """
        events = {e.id: e for e in events}
        objects = {o.id: o for o in objects}
        traces: dict[str, list[str]] = {oid: [] for oid in objects}
        for eid, oids in links.items():
            if eid not in events:
                raise OCELError(f"links reference unknown event {eid!r}")
            for oid in oids:
                if oid not in traces:
                    raise OCELError(f"event {eid!r} references unknown object {oid!r}")
                traces[oid].append(eid)
        ordered = {
            oid: tuple(sorted(set(t), key=lambda e: (events[e].timestamp, e)))
            for oid, t in traces.items()
        }
        return cls(events=events, objects=objects, traces=ordered)

    @property
    def object_types(self) -> list[str]:
        return sorted({o.object_type for o in self.objects.values()})

    def objects_of(self, event_id: str) -> frozenset[str]:
        return self.event_objects.get(event_id, frozenset())

    @property
    def event_objects(self) -> dict[str, frozenset[str]]:
        # recomputed lazily and cached on the instance dict
        cache = self.__dict__.get("_eo_cache")
        if cache is None:
            acc: dict[str, set[str]] = {}
            for oid, trace in self.traces.items():
                for eid in trace:
                    acc.setdefault(eid, set()).add(oid)
            cache = {eid: frozenset(s) for eid, s in acc.items()}
            object.__setattr__(self, "_eo_cache", cache)
        return cache

    def __eq__(self, other):
        if not isinstance(other, OCEL):
            return NotImplemented
        return (
            dict(self.events) == dict(other.events)
            and dict(self.objects) == dict(other.objects)
            and {k: tuple(v) for k, v in self.traces.items()}
            == {k: tuple(v) for k, v in other.traces.items()}
        )

    __hash__ = None


@dataclass(frozen=True)
class ProcessExecution:
    objects: frozenset[str]
    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]


# fromisoformat (3.10) only takes 3 or 6 fractional digits
_FRACTION = re.compile(r"(T\d{2}:\d{2}:\d{2})\.(\d+)")


def _pad_fraction(m: re.Match) -> str:
    return f"{m.group(1)}.{m.group(2)[:6].ljust(6, '0')}"


def _parse_timestamp(value, eid: str) -> int:
    if isinstance(value, bool):
        raise OCELError(f"event {eid!r}: invalid timestamp {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            dt = datetime.fromisoformat(_FRACTION.sub(_pad_fraction, value.replace("Z", "+00:00")))
        except ValueError:
            raise OCELError(f"event {eid!r}: invalid timestamp {value!r}") from None
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return int(round(dt.timestamp() * 1000))
    raise OCELError(f"event {eid!r}: invalid timestamp {value!r}")


def parse_ocel(data: bytes | str) -> OCEL:
    """Parse a log from its JSON document.

    Raises :class:`OCELError` naming the offending id on any inconsistency.
    """
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise OCELError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise OCELError("top-level JSON value must be an object")

    declared = doc.get("object_types")
    objects = []
    seen: set[str] = set()
    for raw in doc.get("objects", []):
        try:
            oid, otype = str(raw["id"]), str(raw["type"])
        except (KeyError, TypeError):
            raise OCELError(f"malformed object entry {raw!r}") from None
        if oid in seen:
            raise OCELError(f"duplicate object id {oid!r}")
        if declared is not None and otype not in declared:
            raise OCELError(f"object {oid!r} has undeclared type {otype!r}")
        seen.add(oid)
        objects.append(ObjectInstance(oid, otype))

    events = []
    links: dict[str, list[str]] = {}
    for raw in doc.get("events", []):
        try:
            eid = str(raw["id"])
            activity = str(raw["activity"])
            ts = raw["timestamp"]
            oids = [str(o) for o in raw["objects"]]
        except (KeyError, TypeError):
            raise OCELError(f"malformed event entry {raw!r}") from None
        if eid in links:
            raise OCELError(f"duplicate event id {eid!r}")
        if not oids:
            raise OCELError(f"event {eid!r} has no objects")
        events.append(Event(eid, activity, _parse_timestamp(ts, eid)))
        links[eid] = oids
    return OCEL.from_links(events, objects, links)


def serialize_ocel(log: OCEL) -> bytes:
    """Canonical JSON encoding: sorted keys, arrays sorted by id."""
    doc = {
        "object_types": log.object_types,
        "objects": [
            {"id": o.id, "type": o.object_type}
            for o in sorted(log.objects.values(), key=lambda o: o.id)
        ],
        "events": [
            {
                "id": e.id,
                "activity": e.activity,
                "timestamp": e.timestamp,
                "objects": sorted(log.objects_of(e.id)),
            }
            for e in sorted(log.events.values(), key=lambda e: e.id)
        ],
    }
    return (json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n").encode()


def object_graph(log: OCEL) -> nx.Graph:
    """Undirected graph of object co-appearance in events."""
    g = nx.Graph()
    g.add_nodes_from(sorted(log.objects))
    for eid in sorted(log.events):
        objs = sorted(log.objects_of(eid))
        for i, a in enumerate(objs):
            for b in objs[i + 1:]:
                g.add_edge(a, b)
    return g


def connected_objects(log: OCEL) -> list[frozenset[str]]:
    """Object sets of the process executions, ordered by smallest event id."""
    # components of the bipartite object/event incidence graph; same object
    # partition as the object graph, without materialising object pairs
    oids = sorted(log.objects)
    if not oids:
        return []
    eids = sorted(log.events)
    oidx = {o: i for i, o in enumerate(oids)}
    eidx = {e: len(oids) + i for i, e in enumerate(eids)}
    rows = [oidx[o] for o, trace in log.traces.items() for _ in trace]
    cols = [eidx[e] for trace in log.traces.values() for e in trace]
    n = len(oids) + len(eids)
    adj = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(adj, directed=False)
    groups: dict[int, list[str]] = {}
    for o in oids:
        groups.setdefault(int(labels[oidx[o]]), []).append(o)
    comps = [frozenset(g) for g in groups.values()]

    def key(comp):
        evs = [e for o in comp for e in log.traces[o]]
        return (0, min(evs)) if evs else (1, min(comp))

    return sorted(comps, key=key)


def process_executions(log: OCEL) -> list[ProcessExecution]:
    """One execution graph per connected component of the object graph.

    Returned in a stable order (by smallest event id of the component).
    """
    result = []
    for comp in connected_objects(log):
        nodes = frozenset(e for o in comp for e in log.traces[o])
        edges = frozenset(
            (a, b) for o in comp for a, b in zip(log.traces[o], log.traces[o][1:])
        )
        result.append(ProcessExecution(comp, nodes, edges))
    return result


def flatten(log: OCEL) -> OCEL:
    """Sequentialize each process execution into a single-object case.

    Cases are named ``case_<k>`` and typed with a fresh type (``case``
    unless the log already uses it).  Timestamp ties are broken by event id.
    """
    case_type = "case"
    while case_type in log.object_types:
        case_type += "_"
    objects = {}
    traces = {}
    for k, comp in enumerate(connected_objects(log)):
        oid = f"case_{k}"
        evs = {e for o in comp for e in log.traces[o]}
        objects[oid] = ObjectInstance(oid, case_type)
        traces[oid] = tuple(sorted(evs, key=lambda e: (log.events[e].timestamp, e)))
    return OCEL(events=dict(log.events), objects=objects, traces=traces)


def is_traditional_log(log: OCEL) -> bool:
    if len(log.object_types) != 1:
        return False
    return all(len(log.objects_of(e)) == 1 for e in log.events)
