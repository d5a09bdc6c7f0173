"""JSON and Graphviz DOT encodings of accepting object-centric Petri nets."""

from __future__ import annotations

import json

from .ocpn import AcceptingOCPN, Marking, NetError, OCPN

__all__ = ["net_to_dict", "net_from_dict", "dumps_net", "loads_net", "to_dot"]

# qualitative palette, cycled over object types
_COLORS = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2", "#edc948"]


def _marking_list(m: Marking):
    return [{"place": p, "object": o} for p, o in m.tokens]


def net_to_dict(model: AcceptingOCPN) -> dict:
    net = model.net
    transitions = []
    for t in sorted(net.transitions):
        entry = {"id": t}
        if net.transitions[t] is not None:
            entry["label"] = net.transitions[t]
        transitions.append(entry)
    return {
        "places": [{"id": p, "type": net.places[p]} for p in sorted(net.places)],
        "transitions": transitions,
        "arcs": [
            {"source": s, "target": t, "variable": (s, t) in net.variable_arcs}
            for s, t in sorted(net.arcs)
        ],
        "initial_markings": [_marking_list(m) for m in model.initial_markings],
        "final_markings": [_marking_list(m) for m in model.final_markings],
    }


def net_from_dict(doc: dict) -> AcceptingOCPN:
    try:
        places = {p["id"]: p["type"] for p in doc["places"]}
        transitions = {t["id"]: t.get("label") for t in doc["transitions"]}
        arcs = {(a["source"], a["target"]) for a in doc["arcs"]}
        variable = {(a["source"], a["target"]) for a in doc["arcs"] if a.get("variable")}

        def markings(key):
            return tuple(
                Marking.of((tok["place"], tok["object"]) for tok in m) for m in doc[key]
            )

        init, final = markings("initial_markings"), markings("final_markings")
    except (KeyError, TypeError) as exc:
        raise NetError(f"malformed net document: missing {exc}") from None
    return AcceptingOCPN(OCPN(places, transitions, arcs, variable), init, final)


def dumps_net(model: AcceptingOCPN) -> str:
    return json.dumps(net_to_dict(model), indent=1, sort_keys=True) + "\n"


def loads_net(text: str | bytes) -> AcceptingOCPN:
    return net_from_dict(json.loads(text))


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(model: AcceptingOCPN, name: str = "ocpn") -> str:
    """Render places coloured by type, variable arcs doubled, silent transitions black."""
    net = model.net
    colors = {ot: _COLORS[i % len(_COLORS)] for i, ot in enumerate(net.object_types)}
    init = {p for m in model.initial_markings for p, _ in m.tokens}
    final = {p for m in model.final_markings for p, _ in m.tokens}
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for p in sorted(net.places):
        c = colors[net.places[p]]
        shape = "doublecircle" if p in final else "circle"
        extra = ', style="filled", fillcolor="#dddddd"' if p in init else ""
        lines.append(
            f'  {_q(p)} [shape={shape}, label="", color="{c}", penwidth=2{extra}, '
            f"tooltip={_q(net.places[p])}];"
        )
    for t in sorted(net.transitions):
        lab = net.transitions[t]
        if lab is None:
            lines.append(
                f'  {_q(t)} [shape=box, label="", style=filled, fillcolor=black, width=0.15];'
            )
        else:
            lines.append(f"  {_q(t)} [shape=box, label={_q(lab)}];")
    for s, t in sorted(net.arcs):
        place = s if s in net.places else t
        c = colors[net.places[place]]
        if (s, t) in net.variable_arcs:
            attrs = f'color="{c}:invis:{c}"'
        else:
            attrs = f'color="{c}"'
        lines.append(f"  {_q(s)} -> {_q(t)} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
