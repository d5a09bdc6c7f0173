from __future__ import annotations

import itertools
import json
from collections import Counter

import networkx as nx
import pytest
from hypothesis import given

from ocpd.ocel import (
    OCEL,
    Event,
    ObjectInstance,
    OCELError,
    flatten,
    is_traditional_log,
    object_graph,
    parse_ocel,
    process_executions,
    serialize_ocel,
)
from strategies import ocels


def _log(events, links, types):
    objs = [ObjectInstance(o, t) for o, t in types.items()]
    return OCEL.from_links([Event(*e) for e in events], objs, links)


# parsing and serialisation


def test_bicycle_trace_of_tire2(bicycle):
    assert bicycle.traces["Tire2"] == ("e2", "e7", "e10")


def test_bicycle_shape(bicycle):
    assert len(bicycle.events) == 11
    assert bicycle.object_types == ["Frame", "Tire", "Wheel"]
    assert bicycle.objects_of("e10") == {"Tire1", "Tire2", "Wheel1"}


def test_bicycle_reserialises_byte_identical(bicycle, bicycle_bytes):
    assert serialize_ocel(bicycle) == bicycle_bytes


def test_empty_log():
    log = parse_ocel(b'{"object_types": [], "objects": [], "events": []}')
    assert log == OCEL()
    assert process_executions(log) == []
    assert json.loads(serialize_ocel(log)) == {"events": [], "object_types": [], "objects": []}


def test_single_event_single_object():
    doc = {
        "object_types": ["X"],
        "objects": [{"id": "o", "type": "X"}],
        "events": [{"id": "e", "activity": "a", "timestamp": 3, "objects": ["o"]}],
    }
    log = parse_ocel(json.dumps(doc))
    assert log.traces == {"o": ("e",)}


def test_iso_timestamps_become_epoch_millis():
    doc = {
        "objects": [{"id": "o", "type": "X"}],
        "events": [
            {"id": "b", "activity": "a", "timestamp": "1970-01-01T00:00:01Z", "objects": ["o"]},
            {"id": "a", "activity": "a", "timestamp": "1970-01-01T00:00:02.5+00:00", "objects": ["o"]},
        ],
    }
    log = parse_ocel(json.dumps(doc))
    assert log.events["b"].timestamp == 1000
    assert log.events["a"].timestamp == 2500
    assert log.traces["o"] == ("b", "a")


def test_trace_ties_broken_by_event_id():
    log = _log([("e2", "a", 1), ("e1", "b", 1)], {"e2": ["o"], "e1": ["o"]}, {"o": "X"})
    assert log.traces["o"] == ("e1", "e2")


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ("{not json", "malformed JSON"),
        ('{"objects": [], "events": [{"id": "e1", "activity": "a", "timestamp": 1, "objects": ["ghost"]}]}', "ghost"),
        ('{"objects": [{"id": "o", "type": "X"}], "events": [{"id": "e1", "activity": "a", "timestamp": 1, "objects": []}]}', "e1"),
        ('{"objects": [{"id": "o", "type": "X"}, {"id": "o", "type": "X"}], "events": []}', "'o'"),
        ('{"objects": [{"id": "o", "type": "X"}], "events": [{"id": "e9", "activity": "a", "timestamp": "noon", "objects": ["o"]}]}', "e9"),
        ('{"object_types": ["Y"], "objects": [{"id": "o", "type": "X"}], "events": []}', "'o'"),
    ],
)
def test_parse_errors_name_the_offender(doc, fragment):
    with pytest.raises(OCELError, match=fragment):
        parse_ocel(doc)


def test_constructor_rejects_unordered_trace():
    with pytest.raises(OCELError, match="e1"):
        OCEL(
            events={"e0": Event("e0", "a", 5), "e1": Event("e1", "b", 1)},
            objects={"o": ObjectInstance("o", "X")},
            traces={"o": ("e0", "e1")},
        )


def test_constructor_rejects_dangling_event_reference():
    with pytest.raises(OCELError, match="e7"):
        OCEL(events={}, objects={"o": ObjectInstance("o", "X")}, traces={"o": ("e7",)})


def test_constructor_rejects_ownerless_event():
    with pytest.raises(OCELError, match="e0"):
        OCEL(events={"e0": Event("e0", "a", 0)}, objects={}, traces={})


@given(ocels())
def test_serialisation_round_trip(log):
    data = serialize_ocel(log)
    assert parse_ocel(data) == log
    assert serialize_ocel(parse_ocel(data)) == data


# object graph and executions


def test_bicycle_object_graph(bicycle):
    g = object_graph(bicycle)
    assert g.has_edge("Tire1", "Wheel1")
    assert g.has_edge("Wheel1", "Frame1")
    assert not g.has_edge("Tire1", "Frame1")


def test_object_graph_without_shared_events_is_edgeless():
    log = _log([("e1", "a", 1), ("e2", "b", 2)], {"e1": ["o1"], "e2": ["o2"]}, {"o1": "X", "o2": "Y"})
    g = object_graph(log)
    assert set(g.nodes) == {"o1", "o2"} and g.number_of_edges() == 0


def test_single_object_graph():
    log = _log([("e1", "a", 1)], {"e1": ["o"]}, {"o": "X"})
    g = object_graph(log)
    assert list(g.nodes) == ["o"] and g.number_of_edges() == 0


def test_bicycle_is_one_execution(bicycle):
    (px,) = process_executions(bicycle)
    assert px.nodes == set(bicycle.events)
    assert px.objects == set(bicycle.objects)
    assert ("e2", "e7") in px.edges and ("e10", "e11") in px.edges


def test_disjoint_objects_give_separate_executions():
    log = _log([("e1", "a", 1), ("e2", "b", 2)], {"e1": ["o1"], "e2": ["o2"]}, {"o1": "X", "o2": "X"})
    assert len(process_executions(log)) == 2


def test_k_single_object_paths():
    events, links = [], {}
    for k in range(4):
        for i in range(3):
            events.append((f"e{k}{i}", "abc"[i], i))
            links[f"e{k}{i}"] = [f"o{k}"]
    log = _log(events, links, {f"o{k}": "X" for k in range(4)})
    pxs = process_executions(log)
    assert len(pxs) == 4
    for px in pxs:
        g = nx.DiGraph(list(px.edges))
        assert len(px.nodes) == 3 and nx.is_directed_acyclic_graph(g)
        assert all(d <= 1 for _, d in g.out_degree()) and g.number_of_edges() == 2


def _brute_components(log):
    # union objects pairwise until nothing changes
    groups = [{o} for o in log.objects]
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(range(len(groups)), 2):
            ea = {e for o in groups[a] for e in log.traces[o]}
            eb = {e for o in groups[b] for e in log.traces[o]}
            if ea & eb:
                groups[a] |= groups.pop(b)
                changed = True
                break
    return {frozenset(g) for g in groups}


@given(ocels())
def test_executions_match_brute_force(log):
    pxs = process_executions(log)
    assert {px.objects for px in pxs} == _brute_components(log)
    # nodes partition the events; edges are exactly adjacent pairs of member traces
    assert sorted(e for px in pxs for e in px.nodes) == sorted(log.events)
    for px in pxs:
        adjacent = {(t[i], t[i + 1]) for o in px.objects for t in [log.traces[o]] for i in range(len(t) - 1)}
        assert px.edges == adjacent


# flattening


def test_flatten_bicycle(bicycle):
    flat = flatten(bicycle)
    assert is_traditional_log(flat)
    assert list(flat.objects) == ["case_0"]
    assert flat.traces["case_0"] == tuple(f"e{i}" for i in range(1, 12))


def test_flatten_traditional_log_is_fixed_point_up_to_renaming():
    log = _log(
        [("e1", "a", 1), ("e2", "b", 2), ("e3", "c", 1)],
        {"e1": ["x"], "e2": ["x"], "e3": ["y"]},
        {"x": "X", "y": "X"},
    )
    flat = flatten(log)
    assert sorted(flat.traces.values()) == sorted(log.traces.values())
    assert flat.object_types == ["case"]


def test_flatten_two_components():
    events = [(f"e{i}", "a", i) for i in range(7)]
    links = {f"e{i}": ["p" if i < 3 else "q"] for i in range(7)}
    links["e1"] = ["p", "p2"]
    flat = flatten(_log(events, links, {"p": "X", "p2": "Y", "q": "X"}))
    assert sorted(len(t) for t in flat.traces.values()) == [3, 4]


def test_flatten_picks_fresh_type():
    log = _log([("e1", "a", 1)], {"e1": ["o"]}, {"o": "case"})
    assert flatten(log).object_types == ["case_"]


def test_is_traditional_log_cases(bicycle):
    assert not is_traditional_log(bicycle)
    assert is_traditional_log(_log([("e1", "a", 1)], {"e1": ["o"]}, {"o": "X"}))


@given(ocels())
def test_flatten_contract(log):
    flat = flatten(log)
    assert is_traditional_log(flat) or not log.events
    assert flat.events == log.events
    assert Counter(e.activity for e in flat.events.values()) == Counter(
        e.activity for e in log.events.values()
    )
    assert len(flat.traces) == len(process_executions(log))
    for trace in flat.traces.values():
        ts = [flat.events[e].timestamp for e in trace]
        assert ts == sorted(ts)
    again = flatten(flat)
    assert sorted(again.traces.values()) == sorted(flat.traces.values())
