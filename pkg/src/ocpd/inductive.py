"""Directly-follows graphs and the basic Inductive Miner."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import networkx as nx

from .tree import Operator, ProcessTree, activity, loop, tau, xor

__all__ = ["DFG", "dfg", "inductive_miner"]

Trace = tuple[str, ...]


@dataclass(frozen=True)
class DFG:
    activities: frozenset[str]
    edges: Counter
    start: Counter
    end: Counter


def _variants(log) -> Counter:
    traces = getattr(log, "traces", log)
    return Counter(tuple(t) for t in traces)


def dfg(log) -> DFG:
    """Directly-follows graph of a log (a TypedLog or an iterable of traces)."""
    variants = _variants(log)
    if not variants:
        raise ValueError("cannot build a directly-follows graph of an empty log")
    edges, start, end = Counter(), Counter(), Counter()
    acts = set()
    for trace, n in variants.items():
        acts.update(trace)
        if not trace:
            continue
        start[trace[0]] += n
        end[trace[-1]] += n
        for a, b in zip(trace, trace[1:]):
            edges[(a, b)] += n
    return DFG(frozenset(acts), edges, start, end)


def _key(group) -> tuple:
    return tuple(sorted(group))


def _xor_cut(d: DFG) -> list[set[str]] | None:
    g = nx.Graph()
    g.add_nodes_from(sorted(d.activities))
    g.add_edges_from(d.edges)
    comps = [set(c) for c in nx.connected_components(g)]
    return sorted(comps, key=_key) if len(comps) > 1 else None


def _seq_cut(d: DFG) -> list[set[str]] | None:
    # activities share a part iff they reach each other both ways or not at
    # all; the parts must then be totally ordered by reachability
    g = nx.DiGraph()
    acts = sorted(d.activities)
    g.add_nodes_from(acts)
    g.add_edges_from(sorted(d.edges))
    reach = {a: nx.descendants(g, a) for a in acts}
    same = nx.Graph()
    same.add_nodes_from(acts)
    for a, b in itertools.combinations(acts, 2):
        if (b in reach[a]) == (a in reach[b]):
            same.add_edge(a, b)
    groups = [set(c) for c in nx.connected_components(same)]
    if len(groups) < 2:
        return None
    rank = [sum(1 for o in groups if o is not grp and any(reach[a] & o for a in grp)) for grp in groups]
    order = sorted(range(len(groups)), key=lambda i: (-rank[i], _key(groups[i])))
    groups = [groups[i] for i in order]
    for i, j in itertools.combinations(range(len(groups)), 2):
        for a in groups[i]:
            if not groups[j] <= reach[a]:
                return None
        for b in groups[j]:
            if reach[b] & groups[i]:
                return None
    return groups


def _par_cut(d: DFG) -> list[set[str]] | None:
    acts = sorted(d.activities)
    g = nx.Graph()
    g.add_nodes_from(acts)
    for a, b in itertools.combinations(acts, 2):
        if not ((a, b) in d.edges and (b, a) in d.edges):
            g.add_edge(a, b)
    groups = sorted((set(c) for c in nx.connected_components(g)), key=_key)
    if len(groups) < 2:
        return None
    good = [grp for grp in groups if grp & set(d.start) and grp & set(d.end)]
    bad = [grp for grp in groups if not (grp & set(d.start) and grp & set(d.end))]
    if not good:
        return None
    for grp in bad:
        good[0] |= grp
    return good if len(good) > 1 else None


def _loop_cut(d: DFG) -> list[set[str]] | None:
    start, end = set(d.start), set(d.end)
    body = start | end
    rest = d.activities - body
    if not rest:
        return None
    g = nx.Graph()
    g.add_nodes_from(sorted(rest))
    g.add_edges_from((a, b) for a, b in d.edges if a in rest and b in rest)
    redo = sorted((set(c) for c in nx.connected_components(g)), key=_key)

    def violates(comp):
        for a, b in d.edges:
            if b in comp and a in body and a not in end:
                return True
            if a in comp and b in body and b not in start:
                return True
        for x in comp:
            if any((e, x) in d.edges for e in end) and not all((e, x) in d.edges for e in end):
                return True
            if any((x, s) in d.edges for s in start) and not all((x, s) in d.edges for s in start):
                return True
        return False

    changed = True
    while changed:
        changed = False
        for comp in redo:
            if violates(comp):
                body |= comp
                redo.remove(comp)
                changed = True
                break
    if not redo:
        return None
    return [body] + redo


def _project(trace: Trace, group: set[str]) -> Trace:
    return tuple(a for a in trace if a in group)


def _split(log: Counter, groups, op: Operator) -> list[Counter]:
    parts = [Counter() for _ in groups]
    if op is Operator.XOR:
        for trace, n in log.items():
            i = next(i for i, g in enumerate(groups) if trace[0] in g)
            parts[i][trace] += n
    elif op in (Operator.SEQUENCE, Operator.PARALLEL):
        for trace, n in log.items():
            for i, g in enumerate(groups):
                parts[i][_project(trace, g)] += n
    else:
        where = {a: i for i, g in enumerate(groups) for a in g}
        for trace, n in log.items():
            for i, seg in itertools.groupby(trace, key=where.__getitem__):
                parts[i][tuple(seg)] += n
    return parts


def _flower(acts: list[str]) -> ProcessTree:
    return loop(xor(*(activity(a) for a in acts)), tau())


def _mine(log: Counter) -> ProcessTree:
    if () in log:
        rest = Counter({t: n for t, n in log.items() if t})
        if not rest:
            return tau()
        return xor(tau(), _mine(rest))
    acts = sorted({a for t in log for a in t})
    if len(acts) == 1:
        if all(len(t) == 1 for t in log):
            return activity(acts[0])
        return loop(activity(acts[0]), tau())
    d = dfg(log)
    for op, cut in (
        (Operator.XOR, _xor_cut),
        (Operator.SEQUENCE, _seq_cut),
        (Operator.PARALLEL, _par_cut),
        (Operator.LOOP, _loop_cut),
    ):
        groups = cut(d)
        if groups:
            children = [_mine(part) for part in _split(log, groups, op)]
            if op is Operator.LOOP:
                redo = children[1] if len(children) == 2 else xor(*children[1:])
                return loop(children[0], redo)
            return ProcessTree(op, children=tuple(children))
    return _flower(acts)


def inductive_miner(log) -> ProcessTree:
    """Discover a process tree with the basic (noise-free) Inductive Miner.

    Cuts are tried in the order exclusive choice, sequence, parallel, loop.
    Logs containing empty traces become an optional choice with a silent
    leaf; when no cut applies the result is a flower over all activities.
    The tree always replays every trace of ``log``.
    """
    variants = _variants(log)
    if not variants:
        raise ValueError("cannot mine an empty log")
    return _mine(variants)
