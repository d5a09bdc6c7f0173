"""Process trees and their compilation into sound workflow nets."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import count

from .ocpn import AcceptingOCPN, Marking, OCPN

__all__ = [
    "Operator",
    "ProcessTree",
    "activity",
    "tau",
    "seq",
    "xor",
    "par",
    "loop",
    "tree_to_net",
    "NetBuilder",
]


class Operator(str, enum.Enum):
    ACTIVITY = "activity"
    TAU = "tau"
    SEQUENCE = "->"
    XOR = "X"
    PARALLEL = "+"
    LOOP = "*"


@dataclass(frozen=True)
class ProcessTree:
    """Process tree node.

    ``key`` is an optional stable identifier used to name the silent
    transitions of the node when compiled; it does not take part in equality.
    """

    kind: Operator
    label: str | None = None
    children: tuple[ProcessTree, ...] = ()
    key: str | None = field(default=None, compare=False)

    def __post_init__(self):
        leaf = self.kind in (Operator.ACTIVITY, Operator.TAU)
        if leaf and self.children:
            raise ValueError("leaves have no children")
        if self.kind is Operator.ACTIVITY and not self.label:
            raise ValueError("activity leaf needs a label")
        if self.kind is Operator.LOOP and len(self.children) != 2:
            raise ValueError("loop has exactly two children (body, redo)")
        if not leaf and len(self.children) < 2:
            raise ValueError(f"{self.kind.name.lower()} node needs at least two children")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def activities(self) -> set[str]:
        if self.kind is Operator.ACTIVITY:
            return {self.label}
        return set().union(*(c.activities() for c in self.children))

    def __str__(self):
        if self.kind is Operator.ACTIVITY:
            return self.label
        if self.kind is Operator.TAU:
            return "tau"
        return f"{self.kind.value}(" + ", ".join(map(str, self.children)) + ")"


def activity(label: str, key: str | None = None) -> ProcessTree:
    return ProcessTree(Operator.ACTIVITY, label, key=key)


def tau(key: str | None = None) -> ProcessTree:
    return ProcessTree(Operator.TAU, key=key)


def seq(*children: ProcessTree, key: str | None = None) -> ProcessTree:
    return ProcessTree(Operator.SEQUENCE, children=tuple(children), key=key)


def xor(*children: ProcessTree, key: str | None = None) -> ProcessTree:
    return ProcessTree(Operator.XOR, children=tuple(children), key=key)


def par(*children: ProcessTree, key: str | None = None) -> ProcessTree:
    return ProcessTree(Operator.PARALLEL, children=tuple(children), key=key)


def loop(body: ProcessTree, redo: ProcessTree, key: str | None = None) -> ProcessTree:
    return ProcessTree(Operator.LOOP, children=(body, redo), key=key)


class NetBuilder:
    """Accumulates places, transitions and arcs while compiling a tree.

    Subclasses may override :meth:`visible_id` and :meth:`silent_id` to
    control transition naming (used to fuse transitions across nets).
    """

    def __init__(self, object_type: str = "case", prefix: str = ""):
        self.object_type = object_type
        self.prefix = prefix
        self.places: dict[str, str] = {}
        self.transitions: dict[str, str | None] = {}
        self.arcs: set[tuple[str, str]] = set()
        self._pc = count()
        self._tc = count()

    def place(self) -> str:
        p = f"{self.prefix}p{next(self._pc)}"
        self.places[p] = self.object_type
        return p

    def visible_id(self, node: ProcessTree) -> str:
        return f"{self.prefix}t{next(self._tc)}"

    def silent_id(self, node: ProcessTree, role: str) -> str:
        return f"{self.prefix}tau{next(self._tc)}"

    def transition(self, tid: str, label: str | None, inputs, outputs):
        self.transitions[tid] = label
        self.arcs.update((p, tid) for p in inputs)
        self.arcs.update((tid, p) for p in outputs)

    def compile(self, node: ProcessTree, entry: str, exit_: str):
        k = node.kind
        if k is Operator.ACTIVITY:
            self.transition(self.visible_id(node), node.label, [entry], [exit_])
        elif k is Operator.TAU:
            self.transition(self.silent_id(node, "skip"), None, [entry], [exit_])
        elif k is Operator.SEQUENCE:
            cur = entry
            for i, child in enumerate(node.children):
                nxt = exit_ if i == len(node.children) - 1 else self.place()
                self.compile(child, cur, nxt)
                cur = nxt
        elif k is Operator.XOR:
            for child in node.children:
                self.compile(child, entry, exit_)
        elif k is Operator.PARALLEL:
            ins = [self.place() for _ in node.children]
            outs = [self.place() for _ in node.children]
            self.transition(self.silent_id(node, "split"), None, [entry], ins)
            for child, a, b in zip(node.children, ins, outs):
                self.compile(child, a, b)
            self.transition(self.silent_id(node, "join"), None, outs, [exit_])
        elif k is Operator.LOOP:
            body, redo = node.children
            s, m = self.place(), self.place()
            self.transition(self.silent_id(node, "enter"), None, [entry], [s])
            self.compile(body, s, m)
            self.compile(redo, m, s)
            self.transition(self.silent_id(node, "exit"), None, [m], [exit_])
        else:  # pragma: no cover
            raise ValueError(f"unknown operator {k!r}")

    def build(self, tree: ProcessTree) -> tuple[str, str]:
        """Compile ``tree`` between a fresh source and sink place."""
        source, sink = self.place(), self.place()
        self.compile(tree, source, sink)
        return source, sink


def tree_to_net(
    tree: ProcessTree, object_type: str = "case", prefix: str = "", obj: str = "o"
) -> AcceptingOCPN:
    """Compile a tree into a workflow net over a single object type.

    Parallel nodes become silent split/join transitions; loops get silent
    enter/exit transitions so the redo part returns inside the loop only.
    The initial marking holds ``obj`` in the source place, the final one in
    the sink place.
    """
    b = NetBuilder(object_type, prefix)
    source, sink = b.build(tree)
    net = OCPN(b.places, b.transitions, frozenset(b.arcs))
    return AcceptingOCPN(net, (Marking.of([(source, obj)]),), (Marking.of([(sink, obj)]),))
