"""Object-centric discovery: per-type Inductive Miner runs merged into one net."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

from .inductive import inductive_miner
from .ocel import OCEL, connected_objects
from .ocpn import AcceptingOCPN, Marking, OCPN
from .tree import tree_to_net

__all__ = ["TypedLog", "Cardinality", "project", "cardinalities", "discover", "visible_id"]


@dataclass(frozen=True)
class TypedLog:
    object_type: str
    traces: tuple[tuple[str, ...], ...]

    def variants(self) -> Counter:
        return Counter(self.traces)


class Cardinality(NamedTuple):
    min: int
    max: int


def visible_id(label: str) -> str:
    """Transition id shared by every type that observes ``label``."""
    return f"t[{label}]"


def project(log: OCEL, object_type: str) -> TypedLog:
    """Activity sequences of every object of one type, in object-id order."""
    if object_type not in log.object_types:
        raise KeyError(f"unknown object type {object_type!r}")
    traces = tuple(
        tuple(log.events[e].activity for e in log.traces[oid])
        for oid in sorted(log.objects)
        if log.objects[oid].object_type == object_type
    )
    return TypedLog(object_type, traces)


def cardinalities(log: OCEL) -> dict[tuple[str, str], Cardinality]:
    """Min/max number of objects of each type per event of each activity.

    Pairs where the type never occurs with the activity are omitted.
    """
    per_event = Counter(
        (eid, log.objects[oid].object_type) for oid, trace in log.traces.items() for eid in trace
    )
    occurrences = Counter(e.activity for e in log.events.values())
    seen = Counter()
    stats: dict[tuple[str, str], tuple[int, int]] = {}
    for (eid, ot), n in per_event.items():
        key = (log.events[eid].activity, ot)
        seen[key] += 1
        lo, hi = stats.get(key, (n, n))
        stats[key] = (min(lo, n), max(hi, n))
    # events of the activity without any object of the type count as 0
    return {
        key: Cardinality(lo if seen[key] == occurrences[key[0]] else 0, hi)
        for key, (lo, hi) in sorted(stats.items())
    }


def _initial_and_final(log: OCEL, sources: dict[str, str], sinks: dict[str, str]):
    # one marking pair per distinct object-type signature of the executions
    signatures = set()
    for comp in connected_objects(log):
        sig = Counter(log.objects[o].object_type for o in comp)
        signatures.add(tuple(sorted(sig.items())))
    init, final = [], []
    for sig in sorted(signatures):
        objs = [(ot, f"{ot}_{i}") for ot, n in sig for i in range(n)]
        init.append(Marking.of((sources[ot], o) for ot, o in objs))
        final.append(Marking.of((sinks[ot], o) for ot, o in objs))
    return tuple(init), tuple(final)


def discover(log: OCEL) -> AcceptingOCPN:
    """Discover an accepting object-centric Petri net from ``log``.

    Each object type is mined separately and compiled into a workflow net
    whose places carry that type.  Visible transitions with equal labels are
    fused across types; an arc of type ``ot`` at a fused transition is
    variable iff some event of that activity carries more than one object
    of ``ot``.  Initial markings hold one token per object of an execution
    in its type's source place (one marking per distinct type signature).
    """
    if not log.events:
        raise ValueError("cannot discover from an empty log")
    card = cardinalities(log)
    places: dict[str, str] = {}
    transitions: dict[str, str | None] = {}
    arcs: set[tuple[str, str]] = set()
    variable: set[tuple[str, str]] = set()
    sources, sinks = {}, {}
    for ot in log.object_types:
        sub = tree_to_net(inductive_miner(project(log, ot)), object_type=ot, prefix=f"{ot}:")
        net = sub.net
        rename = {}
        for t, lab in net.transitions.items():
            rename[t] = t if lab is None else visible_id(lab)
            transitions[rename[t]] = lab
        places.update(net.places)
        for s, t in net.arcs:
            arc = (rename.get(s, s), rename.get(t, t))
            arcs.add(arc)
            lab = net.transitions.get(t if t in net.transitions else s)
            if lab is not None and card.get((lab, ot), Cardinality(1, 1)).max > 1:
                variable.add(arc)
        ((sources[ot], _),) = sub.initial_markings[0].tokens
        ((sinks[ot], _),) = sub.final_markings[0].tokens
    init, final = _initial_and_final(log, sources, sinks)
    return AcceptingOCPN(OCPN(places, transitions, frozenset(arcs), frozenset(variable)), init, final)
