"""Inter-/intra-object complexity and language-based fitness/precision."""

from __future__ import annotations

import math
from collections.abc import Set
from dataclasses import dataclass
from fractions import Fraction

from .language import language
from .ocpn import AcceptingOCPN, Marking, OCPN

__all__ = [
    "ComplexityProfile",
    "QualityScore",
    "EmptyLanguageError",
    "numt",
    "numot",
    "inter_complexity",
    "subnet",
    "tioc",
    "intra_complexity",
    "complexity_profile",
    "quality",
    "quality_from_languages",
    "INTER_THRESHOLD",
    "INTRA_THRESHOLD",
    "QUADRANTS",
    "quadrant",
]

INTER_THRESHOLD = 0.2
INTRA_THRESHOLD = 0.15
QUADRANTS = (
    "low-inter/low-intra",
    "low-inter/high-intra",
    "high-inter/low-intra",
    "high-inter/high-intra",
)


class EmptyLanguageError(ValueError):
    """Precision is undefined because the discovered language is empty."""


@dataclass(frozen=True)
class ComplexityProfile:
    numt: int
    numot: int
    inter: float
    intra: float


@dataclass(frozen=True)
class QualityScore:
    fitness: float
    precision: float


def _net(model) -> OCPN:
    return model.net if isinstance(model, AcceptingOCPN) else model


def numt(model) -> int:
    """Number of labeled (non-silent) transitions."""
    return len(_net(model).labeled_transitions)


def numot(model) -> int:
    return len(_net(model).object_types)


def inter_complexity(model) -> float:
    """Average number of extra object types in transition presets, normalised.

    Each transition contributes ``|types(preset)| - 1``; the sum is divided
    by the number of transitions and by ``|OT| - 1``.  A single-type net
    scores 1 by convention.
    """
    net = _net(model)
    if not net.transitions:
        raise ValueError("inter-object complexity of a net without transitions")
    for t in sorted(net.transitions):
        if not net.preset[t]:
            raise ValueError(f"transition {t!r} has an empty preset")
    k = len(net.object_types)
    if k == 1:
        return 1.0
    total = sum(len({net.places[p] for p in net.preset[t]}) - 1 for t in net.transitions)
    return float(Fraction(total, len(net.transitions) * (k - 1)))


def subnet(model: AcceptingOCPN, object_type: str) -> AcceptingOCPN:
    """Restriction of ``model`` to the places of one object type.

    Keeps the transitions touching those places with their labels, the
    induced arcs, and the markings' tokens of that type.  The result is a
    plain Petri net: variable arcs are not carried over.
    """
    net = model.net
    if object_type not in net.object_types:
        raise KeyError(f"unknown object type {object_type!r}")
    places = {p: ot for p, ot in net.places.items() if ot == object_type}
    transitions = {
        t: lab
        for t, lab in net.transitions.items()
        if any(p in places for p in net.preset[t] + net.postset[t])
    }
    arcs = frozenset(
        (s, t)
        for s, t in net.arcs
        if (s in places and t in transitions) or (s in transitions and t in places)
    )

    def restrict(ms):
        return tuple(Marking.of((p, o) for p, o in m.tokens if p in places) for m in ms)

    return AcceptingOCPN(
        OCPN(places, transitions, arcs),
        restrict(model.initial_markings),
        restrict(model.final_markings),
    )


def _tioc(sub: AcceptingOCPN, budget: int | None) -> Fraction:
    return Fraction(len(language(sub, budget)), math.factorial(numt(sub)))


def tioc(sub: AcceptingOCPN, budget: int | None = None) -> float:
    """Language size of a single-type net over the factorial of its labeled transitions."""
    return float(_tioc(sub, budget))


def intra_complexity(model: AcceptingOCPN, budget: int | None = None) -> float:
    """Mean :func:`tioc` over the per-type subnets."""
    types = model.net.object_types
    total = sum(_tioc(subnet(model, ot), budget) for ot in types)
    return float(total / len(types))


def complexity_profile(model: AcceptingOCPN, budget: int | None = None) -> ComplexityProfile:
    return ComplexityProfile(
        numt=numt(model),
        numot=numot(model),
        inter=inter_complexity(model),
        intra=intra_complexity(model, budget),
    )


def quality_from_languages(system: Set, discovered: Set) -> QualityScore:
    """Fitness and precision of two finite languages."""
    if not system:
        raise ValueError("system language is empty")
    if not discovered:
        raise EmptyLanguageError("discovered language is empty; precision undefined")
    common = len(set(system) & set(discovered))
    return QualityScore(common / len(system), common / len(discovered))


def quality(system: AcceptingOCPN, discovered: AcceptingOCPN, budget: int | None = None) -> QualityScore:
    return quality_from_languages(language(system, budget), language(discovered, budget))


def quadrant(inter: float, intra: float) -> str:
    """Taxonomy bin: inter above 0.2 is high, intra below 0.15 is low."""
    i = "high-inter" if inter > INTER_THRESHOLD else "low-inter"
    j = "low-intra" if intra < INTRA_THRESHOLD else "high-intra"
    return f"{i}/{j}"
