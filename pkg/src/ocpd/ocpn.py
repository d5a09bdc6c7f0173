"""Object-centric Petri nets: structure, markings, bindings and firing."""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "NetError",
    "FiringError",
    "StateSpaceOverflow",
    "BindingOverflow",
    "OCPN",
    "Marking",
    "Binding",
    "AcceptingOCPN",
    "is_traditional_net",
    "enabled_bindings",
    "fire",
    "cons",
    "prod",
    "DEFAULT_BINDING_CAP",
]

DEFAULT_BINDING_CAP = 2**12


class NetError(ValueError):
    """Structural problem with a net or marking."""


class FiringError(ValueError):
    """Attempt to fire a binding that is not enabled."""


class StateSpaceOverflow(RuntimeError):
    """A state-space exploration exceeded its configured budget."""


class BindingOverflow(StateSpaceOverflow):
    """Too many variable-arc bindings in a single marking."""


@dataclass(frozen=True, eq=False)
class OCPN:
    """Petri net with typed places and variable arcs.

    ``places`` maps place id to object type, ``transitions`` maps transition
    id to its activity label (``None`` for silent transitions).  Arcs are
    (source, target) pairs between a place and a transition.
    """

    places: Mapping[str, str]
    transitions: Mapping[str, str | None]
    arcs: frozenset[tuple[str, str]]
    variable_arcs: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "places", dict(self.places))
        object.__setattr__(self, "transitions", dict(self.transitions))
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        object.__setattr__(self, "variable_arcs", frozenset(self.variable_arcs))
        clash = self.places.keys() & self.transitions.keys()
        if clash:
            raise NetError(f"ids used for both places and transitions: {sorted(clash)}")
        for s, t in self.arcs:
            if not (
                (s in self.places and t in self.transitions)
                or (s in self.transitions and t in self.places)
            ):
                raise NetError(f"arc ({s!r}, {t!r}) does not connect a place and a transition")
        if not self.variable_arcs <= self.arcs:
            extra = sorted(self.variable_arcs - self.arcs)
            raise NetError(f"variable arcs not in arc set: {extra}")

    def __eq__(self, other):
        if not isinstance(other, OCPN):
            return NotImplemented
        return (
            self.places == other.places
            and self.transitions == other.transitions
            and self.arcs == other.arcs
            and self.variable_arcs == other.variable_arcs
        )

    __hash__ = None

    @property
    def object_types(self) -> list[str]:
        return sorted(set(self.places.values()))

    @property
    def labeled_transitions(self) -> list[str]:
        return sorted(t for t, lab in self.transitions.items() if lab is not None)

    @cached_property
    def preset(self) -> dict[str, tuple[str, ...]]:
        pre = {t: [] for t in self.transitions}
        for s, t in self.arcs:
            if t in self.transitions:
                pre[t].append(s)
        return {t: tuple(sorted(ps)) for t, ps in pre.items()}

    @cached_property
    def postset(self) -> dict[str, tuple[str, ...]]:
        post = {t: [] for t in self.transitions}
        for s, t in self.arcs:
            if s in self.transitions:
                post[s].append(t)
        return {t: tuple(sorted(ps)) for t, ps in post.items()}

    def tpl(self, t: str) -> frozenset[str]:
        """Object types attached to ``t`` by any arc."""
        return self._tpl[t]

    def tpl_nv(self, t: str) -> frozenset[str]:
        """Object types attached to ``t`` by at least one non-variable arc."""
        return self._tpl_nv[t]

    @cached_property
    def _tpl(self) -> dict[str, frozenset[str]]:
        return {
            t: frozenset(self.places[p] for p in self.preset[t] + self.postset[t])
            for t in self.transitions
        }

    @cached_property
    def _tpl_nv(self) -> dict[str, frozenset[str]]:
        nv: dict[str, set[str]] = {t: set() for t in self.transitions}
        for arc in self.arcs - self.variable_arcs:
            s, t = arc
            if t in self.transitions:
                nv[t].add(self.places[s])
            else:
                nv[s].add(self.places[t])
        return {t: frozenset(v) for t, v in nv.items()}

    @cached_property
    def _preset_by_type(self) -> dict[str, dict[str, tuple[str, ...]]]:
        out: dict[str, dict[str, tuple[str, ...]]] = {}
        for t in self.transitions:
            by: dict[str, list[str]] = {ot: [] for ot in sorted(self._tpl[t])}
            for p in self.preset[t]:
                by[self.places[p]].append(p)
            out[t] = {ot: tuple(ps) for ot, ps in by.items()}
        return out


@dataclass(frozen=True, order=True)
class Marking:
    """Multiset of (place, object) tokens, kept in canonical sorted order."""

    tokens: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(sorted(self.tokens)))

    @classmethod
    def of(cls, tokens: Iterable[tuple[str, str]]) -> Marking:
        return cls(tuple(tokens))

    @classmethod
    def from_counter(cls, counter: Mapping[tuple[str, str], int]) -> Marking:
        return cls(tuple(tok for tok, n in counter.items() for _ in range(n)))

    def counter(self) -> Counter:
        return Counter(self.tokens)

    @property
    def objects(self) -> frozenset[str]:
        return frozenset(o for _, o in self.tokens)

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __repr__(self):
        return "Marking[" + ", ".join(f"{p}:{o}" for p, o in self.tokens) + "]"


@dataclass(frozen=True, order=True)
class Binding:
    """A transition with its per-type object assignment.

    ``assignment`` is a sorted tuple of (object type, sorted object ids).
    """

    transition: str
    assignment: tuple[tuple[str, tuple[str, ...]], ...] = ()

    @classmethod
    def of(cls, transition: str, assignment: Mapping[str, Iterable[str]]) -> Binding:
        return cls(
            transition,
            tuple(sorted((ot, tuple(sorted(objs))) for ot, objs in assignment.items())),
        )

    def objects(self, object_type: str) -> tuple[str, ...]:
        for ot, objs in self.assignment:
            if ot == object_type:
                return objs
        return ()

    def as_dict(self) -> dict[str, tuple[str, ...]]:
        return dict(self.assignment)


def _check_typed(net: OCPN, marking: Marking, object_types: Mapping[str, str]):
    for p, o in marking.tokens:
        if p not in net.places:
            raise NetError(f"token on unknown place {p!r}")
        ot = net.places[p]
        if object_types.setdefault(o, ot) != ot:
            raise NetError(
                f"object {o!r} occurs in places of types {object_types[o]!r} and {ot!r}"
            )


@dataclass(frozen=True, eq=False)
class AcceptingOCPN:
    net: OCPN
    initial_markings: tuple[Marking, ...]
    final_markings: tuple[Marking, ...]
    object_types: Mapping[str, str] = field(init=False, repr=False)

    def __post_init__(self):
        init = tuple(sorted(set(self.initial_markings)))
        final = tuple(sorted(set(self.final_markings)))
        if not init or not final:
            raise NetError("initial and final marking sets must be non-empty")
        types: dict[str, str] = {}
        for m in init + final:
            _check_typed(self.net, m, types)
        object.__setattr__(self, "initial_markings", init)
        object.__setattr__(self, "final_markings", final)
        object.__setattr__(self, "object_types", types)

    def __eq__(self, other):
        if not isinstance(other, AcceptingOCPN):
            return NotImplemented
        return (
            self.net == other.net
            and self.initial_markings == other.initial_markings
            and self.final_markings == other.final_markings
        )

    __hash__ = None


def is_traditional_net(net: OCPN) -> bool:
    return len(set(net.places.values())) == 1 and not net.variable_arcs


def cons(net: OCPN, binding: Binding) -> Counter:
    """Tokens consumed by ``binding``."""
    b = binding.as_dict()
    return Counter(
        (p, o) for p in net.preset[binding.transition] for o in b.get(net.places[p], ())
    )


def prod(net: OCPN, binding: Binding) -> Counter:
    """Tokens produced by ``binding``."""
    b = binding.as_dict()
    return Counter(
        (p, o) for p in net.postset[binding.transition] for o in b.get(net.places[p], ())
    )


def _nonempty_subsets(items: tuple[str, ...]):
    for r in range(1, len(items) + 1):
        yield from itertools.combinations(items, r)


def enabled_bindings(
    net: OCPN,
    marking: Marking,
    *,
    transitions: Iterable[str] | None = None,
    cap: int | None = None,
) -> list[Binding]:
    """All bindings enabled in ``marking``, sorted.

    Objects are drawn from those present in the marking.  Types reached
    through variable arcs only range over all non-empty subsets of the
    candidate objects.  More than ``cap`` bindings raises
    :class:`BindingOverflow`.
    """
    cap = DEFAULT_BINDING_CAP if cap is None else cap
    present = Counter(marking.tokens)
    by_type: dict[str, set[str]] = {}
    at_place: dict[str, set[str]] = {}
    for p, o in present:
        by_type.setdefault(net.places[p], set()).add(o)
        at_place.setdefault(p, set()).add(o)

    result: list[Binding] = []
    for t in sorted(net.transitions if transitions is None else transitions):
        choices = []
        for ot, pre in net._preset_by_type[t].items():
            if pre:
                cand = set.intersection(*(at_place.get(p, set()) for p in pre))
            else:
                cand = by_type.get(ot, set())
            if not cand:
                break
            cand = tuple(sorted(cand))
            if ot in net.tpl_nv(t):
                choices.append([(ot, (o,)) for o in cand])
            else:
                choices.append([(ot, s) for s in _nonempty_subsets(cand)])
        else:
            if not choices:
                # transition without any arcs: never enabled in a meaningful way
                continue
            for combo in itertools.product(*choices):
                result.append(Binding(t, tuple(combo)))
                if len(result) > cap:
                    raise BindingOverflow(
                        f"more than {cap} enabled bindings in {marking!r}"
                    )
    return result


def fire(net: OCPN, marking: Marking, binding: Binding) -> Marking:
    """Execute ``binding`` and return the successor marking."""
    t = binding.transition
    if t not in net.transitions:
        raise FiringError(f"unknown transition {t!r}")
    b = binding.as_dict()
    if set(b) != net.tpl(t):
        raise FiringError(
            f"binding for {t!r} assigns types {sorted(b)}, expected {sorted(net.tpl(t))}"
        )
    for ot in net.tpl_nv(t):
        if len(b[ot]) != 1:
            raise FiringError(f"type {ot!r} of {t!r} needs exactly one object")
    for ot, objs in b.items():
        if not objs:
            raise FiringError(f"empty object set for type {ot!r}")
    current = Counter(marking.tokens)
    consumed = cons(net, binding)
    missing = sorted((consumed - current).elements())
    if missing:
        raise FiringError(f"binding {binding} not enabled; missing tokens {missing}")
    return Marking.from_counter(current - consumed + prod(net, binding))
