"""Exact loop-free languages of accepting object-centric Petri nets.

A valid binding sequence leads from an initial to a final marking without
visiting any marking twice (the initial marking included).  The reachable
marking graph is explored once; label sequences are then assembled per
strongly connected component.  A path that leaves a component can never
re-enter it, so the simple-path restriction only has to be enforced inside
components.
"""

from __future__ import annotations

import os
from collections import Counter
from collections.abc import Iterator

import networkx as nx

from .ocpn import AcceptingOCPN, Binding, Marking, StateSpaceOverflow, enabled_bindings

__all__ = [
    "DEFAULT_STATE_BUDGET",
    "StateSpaceOverflow",
    "state_budget",
    "StateGraph",
    "loop_free_binding_sequences",
    "iter_binding_sequences",
    "language",
]

DEFAULT_STATE_BUDGET = 10**6

Trace = tuple[str, ...]


def state_budget() -> int:
    """Marking budget, overridable through ``OCPD_STATE_BUDGET``."""
    raw = os.environ.get("OCPD_STATE_BUDGET")
    return int(raw) if raw else DEFAULT_STATE_BUDGET


class StateGraph:
    """Reachable marking graph of an accepting net.

    ``edges[i]`` lists ``(binding, label, j)`` for every enabled binding in
    marking ``i`` leading to a different marking ``j``; bindings whose
    firing leaves the marking unchanged can never occur in a loop-free
    sequence and are dropped.
    """

    def __init__(self, model: AcceptingOCPN, budget: int | None = None):
        self.model = model
        self.budget = state_budget() if budget is None else budget
        net = model.net
        self.markings: list[Marking] = []
        self.index: dict[Marking, int] = {}
        self.edges: list[list[tuple[Binding, str | None, int]]] = []

        def add(m: Marking) -> int:
            i = self.index.get(m)
            if i is None:
                if len(self.markings) >= self.budget:
                    raise StateSpaceOverflow(
                        f"more than {self.budget} reachable markings"
                    )
                i = len(self.markings)
                self.index[m] = i
                self.markings.append(m)
                self.edges.append([])
            return i

        self.initial = [add(m) for m in model.initial_markings]
        finals = set(model.final_markings)
        pre, post, places = net.preset, net.postset, net.places
        k = 0
        while k < len(self.markings):
            m = self.markings[k]
            tokens = Counter(m.tokens)
            out = self.edges[k]
            for b in enabled_bindings(net, m):
                objs = dict(b.assignment)
                t = b.transition
                nxt = tokens.copy()
                for p in pre[t]:
                    for o in objs.get(places[p], ()):
                        nxt[(p, o)] -= 1
                for p in post[t]:
                    for o in objs.get(places[p], ()):
                        nxt[(p, o)] += 1
                succ = Marking.from_counter(+nxt)
                if succ == m:
                    continue
                out.append((b, net.transitions[t], add(succ)))
            k += 1
        self.final = {i for i, m in enumerate(self.markings) if m in finals}
        self._suffixes: dict[int, set[Trace]] | None = None
        self._steps = 0
        self._witnesses: dict[Trace, tuple[Binding, ...] | None] = {}

    def __len__(self):
        return len(self.markings)

    def _tick(self, n: int = 1):
        self._steps += n
        if self._steps > self.budget:
            raise StateSpaceOverflow(f"path search exceeded budget of {self.budget} steps")

    def _components(self):
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.markings)))
        g.add_edges_from((i, j) for i, es in enumerate(self.edges) for _, _, j in es)
        sccs = list(nx.strongly_connected_components(g))
        cond = nx.condensation(g, sccs)
        comp_of = cond.graph["mapping"]
        order = list(nx.topological_sort(cond))
        return sccs, comp_of, order

    @property
    def acyclic(self) -> bool:
        self.suffixes()
        return self._acyclic

    def suffixes(self) -> dict[int, set[Trace]]:
        """Label sequences of loop-free paths from a marking to a final one.

        Defined for every marking that a path can enter from outside its
        strongly connected component (in particular every marking of an
        acyclic graph and every initial marking).
        """
        if self._suffixes is not None:
            return self._suffixes
        sccs, comp_of, order = self._components()
        self._acyclic = all(len(c) == 1 for c in sccs)
        suf: dict[int, set[Trace]] = {}
        for ci in reversed(order):
            comp = sccs[ci]
            if len(comp) == 1:
                (v,) = comp
                acc = {()} if v in self.final else set()
                for _, lab, w in self.edges[v]:
                    tail = suf[w]
                    if lab is None:
                        acc |= tail
                    else:
                        acc.update((lab,) + s for s in tail)
                suf[v] = acc
                continue
            for v in sorted(self._entries(comp, comp_of, ci)):
                suf[v] = self._inner_paths(v, comp, suf)
        self._suffixes = suf
        return suf

    def _entries(self, comp, comp_of, ci) -> set[int]:
        entries = {i for i in self.initial if i in comp}
        for i, es in enumerate(self.edges):
            if comp_of[i] == ci:
                continue
            entries.update(j for _, _, j in es if j in comp)
        return entries

    def _inner_paths(self, start: int, comp: set[int], suf) -> set[Trace]:
        exits: dict[int, set[Trace]] = {}

        def exit_set(u: int) -> set[Trace]:
            if u not in exits:
                acc = {()} if u in self.final else set()
                for _, lab, w in self.edges[u]:
                    if w in comp:
                        continue
                    if lab is None:
                        acc |= suf[w]
                    else:
                        acc.update((lab,) + s for s in suf[w])
                exits[u] = acc
            return exits[u]

        inner = {
            u: [(lab, w) for _, lab, w in self.edges[u] if w in comp] for u in comp
        }
        result: set[Trace] = set()
        labels: list[str | None] = []

        def visit(u: int):
            self._tick()
            tails = exit_set(u)
            if tails:
                self._tick(len(tails))
                pre = tuple(lab for lab in labels if lab is not None)
                result.update(pre + s for s in tails)

        # iterative backtracking; ``seen`` is the current path only
        seen = {start}
        visit(start)
        stack = [(start, iter(inner[start]))]
        while stack:
            u, it = stack[-1]
            for lab, w in it:
                if w not in seen:
                    seen.add(w)
                    labels.append(lab)
                    visit(w)
                    stack.append((w, iter(inner[w])))
                    break
            else:
                stack.pop()
                if stack:
                    seen.discard(u)
                    labels.pop()
        return result

    def language(self) -> frozenset[Trace]:
        suf = self.suffixes()
        out: set[Trace] = set()
        for i in self.initial:
            out |= suf[i]
        return frozenset(out)

    def witness(self, trace: Trace) -> tuple[Binding, ...] | None:
        """Lexicographically least loop-free binding sequence producing ``trace``.

        Bindings are tried in sorted order, so the first complete sequence
        found by the depth-first search is the least one.
        """
        trace = tuple(trace)
        if trace not in self._witnesses:
            self._witnesses[trace] = self._least_witness(trace)
        return self._witnesses[trace]

    def _least_witness(self, trace: Trace):
        suf = self.suffixes()
        for i in sorted(self.initial, key=lambda k: self.markings[k]):
            if i in suf and trace not in suf[i]:
                continue
            found = self._witness_from(i, trace, suf)
            if found is not None:
                return found
        return None

    def _witness_from(self, start, trace, suf):
        n = len(trace)

        def dfs(u, pos, seen, path):
            if pos == n and u in self.final:
                return tuple(path)
            for b, lab, w in sorted(self.edges[u], key=lambda e: e[0]):
                if w in seen:
                    continue
                npos = pos
                if lab is not None:
                    if pos >= n or trace[pos] != lab:
                        continue
                    npos += 1
                if w in suf and trace[npos:] not in suf[w]:
                    continue
                path.append(b)
                seen.add(w)
                res = dfs(w, npos, seen, path)
                if res is not None:
                    return res
                seen.discard(w)
                path.pop()
            return None

        return dfs(start, 0, {start}, [])


def iter_binding_sequences(
    model: AcceptingOCPN, budget: int | None = None
) -> Iterator[tuple[Binding, ...]]:
    """Yield every loop-free binding sequence from an initial to a final marking.

    Plain depth-first enumeration of simple paths; exponential, meant for
    small nets and for cross-checking :func:`language`.
    """
    graph = StateGraph(model, budget)
    steps = 0
    for start in graph.initial:
        stack = [(start, (), frozenset([start]))]
        while stack:
            u, path, seen = stack.pop()
            steps += 1
            if steps > graph.budget:
                raise StateSpaceOverflow(f"path search exceeded budget of {graph.budget} steps")
            if u in graph.final:
                yield path
            for b, _, w in reversed(graph.edges[u]):
                if w not in seen:
                    stack.append((w, path + (b,), seen | {w}))


def loop_free_binding_sequences(
    model: AcceptingOCPN, budget: int | None = None
) -> set[tuple[Binding, ...]]:
    return set(iter_binding_sequences(model, budget))


def language(model: AcceptingOCPN, budget: int | None = None) -> frozenset[Trace]:
    """Visible label sequences of all loop-free binding sequences.

    Silent transitions are projected out.  Raises
    :class:`StateSpaceOverflow` instead of returning a partial language.
    """
    return StateGraph(model, budget).language()
