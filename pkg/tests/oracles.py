"""Independent brute-force reference implementations used as test oracles.

Nothing here imports the semantics under test: nets are read as plain
data (places, transitions, arcs, variable arcs, markings) and all firing
rules are re-implemented from scratch, as directly as possible.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque


def net_data(model):
    """Plain-data view of an AcceptingOCPN: dicts, sets and Counters only."""
    net = model.net
    pre = {t: sorted(p for p, x in net.arcs if x == t) for t in net.transitions}
    post = {t: sorted(p for x, p in net.arcs if x == t) for t in net.transitions}
    return {
        "places": dict(net.places),
        "labels": dict(net.transitions),
        "pre": pre,
        "post": post,
        "variable": set(net.variable_arcs),
        "initial": [Counter(m.tokens) for m in model.initial_markings],
        "final": [Counter(m.tokens) for m in model.final_markings],
    }


def _key(c: Counter):
    return tuple(sorted((k, v) for k, v in c.items() if v))


# classical (single-type, one token colour) Petri nets ----------------------


def classical_language(model, max_steps: int = 10**6) -> set[tuple[str, ...]]:
    """Loop-free visible language of a net read as a classical Petri net.

    Markings are place-count vectors; every simple path (no repeated
    marking, the initial one included) from an initial to a final marking
    contributes its visible labels.  Exponential, for small nets only.
    """
    d = net_data(model)
    out = set()
    steps = 0
    for init in d["initial"]:
        start = Counter(p for p, _ in init.elements())
        finals = {_key(Counter(p for p, _ in f.elements())) for f in d["final"]}
        stack = [(start, (), {_key(start)})]
        while stack:
            m, labels, seen = stack.pop()
            steps += 1
            assert steps < max_steps, "oracle budget exhausted"
            if _key(m) in finals:
                out.add(labels)
            for t in sorted(d["labels"]):
                if all(m[p] >= 1 for p in d["pre"][t]):
                    m2 = m.copy()
                    for p in d["pre"][t]:
                        m2[p] -= 1
                    for p in d["post"][t]:
                        m2[p] += 1
                    k = _key(m2)
                    if k in seen:
                        continue
                    lab = d["labels"][t]
                    stack.append((m2, labels + ((lab,) if lab is not None else ()), seen | {k}))
    return out


# object-centric nets ---------------------------------------------------------


def all_bindings(model, marking: Counter):
    """Every enabled (transition, {type: objects}) pair by subset enumeration."""
    d = net_data(model)
    out = []
    for t in sorted(d["labels"]):
        types = sorted({d["places"][p] for p in d["pre"][t] + d["post"][t]})
        # a type with at least one non-variable arc binds exactly one object
        single_types = {d["places"][p] for p in d["pre"][t] if (p, t) not in d["variable"]}
        single_types |= {d["places"][p] for p in d["post"][t] if (t, p) not in d["variable"]}
        present = sorted({o for (p, o), n in marking.items() if n > 0 and d["places"][p] in types})
        choices = []
        for ot in types:
            objs = [o for o in present if _type_of(marking, d, o) == ot]
            if ot in single_types:
                subsets = [(o,) for o in objs]
            else:
                subsets = [
                    c for r in range(1, len(objs) + 1) for c in itertools.combinations(objs, r)
                ]
            choices.append([(ot, s) for s in subsets])
        for combo in itertools.product(*choices):
            assign = dict(combo)
            need = Counter(
                (p, o) for p in d["pre"][t] for o in assign.get(d["places"][p], ())
            )
            if all(marking[k] >= n for k, n in need.items()):
                out.append((t, assign))
    return out


def _type_of(marking, d, obj):
    for (p, o), n in marking.items():
        if o == obj and n > 0:
            return d["places"][p]
    return None


def fire_binding(model, marking: Counter, t: str, assign: dict) -> Counter:
    d = net_data(model)
    m = marking.copy()
    for p in d["pre"][t]:
        for o in assign.get(d["places"][p], ()):
            m[(p, o)] -= 1
            assert m[(p, o)] >= 0
    for p in d["post"][t]:
        for o in assign.get(d["places"][p], ()):
            m[(p, o)] += 1
    return +m


def oc_language(model, max_steps: int = 10**6) -> set[tuple[str, ...]]:
    """Loop-free visible language by depth-first search over binding sequences."""
    d = net_data(model)
    finals = {_key(f) for f in d["final"]}
    out = set()
    steps = 0
    for init in d["initial"]:
        stack = [(+init, (), {_key(init)})]
        while stack:
            m, labels, seen = stack.pop()
            steps += 1
            assert steps < max_steps, "oracle budget exhausted"
            if _key(m) in finals:
                out.add(labels)
            for t, assign in all_bindings(model, m):
                m2 = fire_binding(model, m, t, assign)
                k = _key(m2)
                if k in seen:
                    continue
                lab = d["labels"][t]
                stack.append((m2, labels + ((lab,) if lab is not None else ()), seen | {k}))
    return out


def random_playout(model, rng, max_len: int = 200):
    """One random loop-free run; returns (labels, reached_final)."""
    d = net_data(model)
    finals = {_key(f) for f in d["final"]}
    init = d["initial"][int(rng.integers(len(d["initial"])))]
    m, labels, seen = +init, [], {_key(init)}
    for _ in range(max_len):
        if _key(m) in finals and rng.random() < 0.3:
            return tuple(labels), True
        options = []
        for t, assign in all_bindings(model, m):
            m2 = fire_binding(model, m, t, assign)
            if _key(m2) not in seen:
                options.append((t, m2))
        if not options:
            return tuple(labels), _key(m) in finals
        t, m = options[int(rng.integers(len(options)))]
        seen.add(_key(m))
        if d["labels"][t] is not None:
            labels.append(d["labels"][t])
    return tuple(labels), _key(m) in finals


# token replay ------------------------------------------------------------------


def replays(model, trace, max_states: int = 200_000) -> bool:
    """Whether a single-token-colour net can replay ``trace`` (silent moves allowed).

    Breadth-first search over (marking, position) states; silent cycles are
    cut by the visited set, so markings may repeat across visible steps.
    """
    d = net_data(model)
    start = Counter(p for p, _ in d["initial"][0].elements())
    final = _key(Counter(p for p, _ in d["final"][0].elements()))
    trace = tuple(trace)
    queue = deque([(start, 0)])
    seen = {(_key(start), 0)}
    while queue:
        m, i = queue.popleft()
        if i == len(trace) and _key(m) == final:
            return True
        for t in sorted(d["labels"]):
            if not all(m[p] >= 1 for p in d["pre"][t]):
                continue
            lab = d["labels"][t]
            if lab is not None and (i == len(trace) or trace[i] != lab):
                continue
            m2 = m.copy()
            for p in d["pre"][t]:
                m2[p] -= 1
            for p in d["post"][t]:
                m2[p] += 1
            state = (_key(m2), i + (lab is not None))
            if state not in seen:
                seen.add(state)
                assert len(seen) < max_states, "replay oracle budget exhausted"
                queue.append((m2, state[1]))
    return False


# metrics ----------------------------------------------------------------------


def linear_extensions(order_pairs, items) -> int:
    """Number of permutations of ``items`` respecting ``order_pairs`` (a < b)."""
    items = list(items)
    return sum(
        all(perm.index(a) < perm.index(b) for a, b in order_pairs)
        for perm in itertools.permutations(items)
    )
