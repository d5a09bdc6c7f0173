from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ocpd.discovery import discover
from ocpd.language import language
from ocpd.metrics import (
    EmptyLanguageError,
    QUADRANTS,
    complexity_profile,
    inter_complexity,
    intra_complexity,
    numot,
    numt,
    quadrant,
    quality,
    quality_from_languages,
    subnet,
    tioc,
)
from ocpd.ocpn import OCPN, AcceptingOCPN, Marking
from ocpd.tree import activity, loop, par, seq, tau, tree_to_net, xor
from oracles import classical_language, linear_extensions


def two_types(shared: bool) -> AcceptingOCPN:
    """Two chains a->b (type X) and c->d (type Y); ``shared`` fuses every step."""
    places = {"x0": "X", "x1": "X", "x2": "X", "y0": "Y", "y1": "Y", "y2": "Y"}
    if shared:
        transitions = {"t1": "a", "t2": "b"}
        arcs = {("x0", "t1"), ("y0", "t1"), ("t1", "x1"), ("t1", "y1"),
                ("x1", "t2"), ("y1", "t2"), ("t2", "x2"), ("t2", "y2")}
    else:
        transitions = {"t1": "a", "t2": "b", "t3": "c", "t4": "d"}
        arcs = {("x0", "t1"), ("t1", "x1"), ("x1", "t2"), ("t2", "x2"),
                ("y0", "t3"), ("t3", "y1"), ("y1", "t4"), ("t4", "y2")}
    net = OCPN(places, transitions, arcs)
    return AcceptingOCPN(
        net, (Marking.of([("x0", "x"), ("y0", "y")]),), (Marking.of([("x2", "x"), ("y2", "y")]),)
    )


def test_disjoint_types_have_inter_zero():
    assert inter_complexity(two_types(False)) == 0


def test_fully_shared_types_have_inter_one():
    assert inter_complexity(two_types(True)) == 1


def test_traditional_net_has_inter_one_by_convention():
    assert inter_complexity(tree_to_net(seq(activity("a"), activity("b")))) == 1


def test_inter_counts_silent_transitions_and_averages():
    # t1 touches both types, t2 and t3 only one: (1 + 0 + 0) / 3
    places = {"x0": "X", "x1": "X", "y0": "Y", "y1": "Y"}
    net = OCPN(places, {"t1": "a", "t2": None, "t3": "c"},
               {("x0", "t1"), ("y0", "t1"), ("t1", "x1"), ("x1", "t2"), ("y1", "t3")})
    assert inter_complexity(net) == pytest.approx(1 / 3)


def test_inter_rejects_empty_preset():
    net = OCPN({"p": "X", "q": "Y"}, {"src": "a", "t": "b"}, {("src", "p"), ("p", "t"), ("q", "t")})
    with pytest.raises(ValueError, match="src"):
        inter_complexity(net)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_strict_sequence_has_tioc_one_over_factorial(n):
    model = tree_to_net(seq(*(activity(f"a{i}") for i in range(n))) if n > 1 else activity("a0"))
    assert tioc(model) == pytest.approx(1 / math.factorial(n))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_fully_concurrent_has_tioc_one(n):
    assert tioc(tree_to_net(par(*(activity(f"a{i}") for i in range(n))))) == 1


def test_intra_is_mean_of_type_values():
    # X: a, b concurrent (tioc 1); Y: c -> d -> e (tioc 1/6)
    x = tree_to_net(par(activity("a"), activity("b")), object_type="X", prefix="X:", obj="x")
    y = tree_to_net(seq(activity("c"), activity("d"), activity("e")), object_type="Y", prefix="Y:", obj="y")
    net = OCPN({**x.net.places, **y.net.places}, {**x.net.transitions, **y.net.transitions},
               x.net.arcs | y.net.arcs)
    model = AcceptingOCPN(
        net,
        (Marking.of(x.initial_markings[0].tokens + y.initial_markings[0].tokens),),
        (Marking.of(x.final_markings[0].tokens + y.final_markings[0].tokens),),
    )
    assert intra_complexity(model) == pytest.approx(float(Fraction(7, 12)))
    p = complexity_profile(model)
    assert (p.numt, p.numot, p.inter) == (5, 2, 0.0)


def test_partial_order_tioc_matches_linear_extension_count():
    # a -> (b || (c -> d)): linear extensions of a<b, a<c, c<d over 4 items
    tree = seq(activity("a"), par(activity("b"), seq(activity("c"), activity("d"))))
    want = linear_extensions([("a", "b"), ("a", "c"), ("c", "d")], "abcd") / math.factorial(4)
    assert tioc(tree_to_net(tree)) == pytest.approx(want)


def test_subnet_of_traditional_net_is_itself():
    model = tree_to_net(seq(activity("a"), xor(activity("b"), tau())))
    sub = subnet(model, "case")
    assert sub.net.places == model.net.places
    assert sub.net.transitions == model.net.transitions
    assert sub.net.arcs == model.net.arcs
    assert sub.initial_markings == model.initial_markings


def test_subnet_bicycle_tire_branch(bicycle):
    model = discover(bicycle)
    sub = subnet(model, "Tire")
    assert set(sub.net.places.values()) == {"Tire"}
    assert sorted(lab for lab in sub.net.transitions.values() if lab) == [
        "inflate tire", "insert tube", "mount tire on wheel"]
    # two tire tokens, each following the branch: interleavings of two copies of the chain
    one = ("insert tube", "inflate tire", "mount tire on wheel")
    lang = language(sub)
    merges = {
        tuple(one[mask[:i].count(0)] if bit == 0 else one[mask[:i].count(1)] for i, bit in enumerate(mask))
        for mask in itertools.product((0, 1), repeat=6)
        if mask.count(0) == 3
    }
    assert lang == merges


def test_subnet_unknown_type():
    with pytest.raises(KeyError):
        subnet(two_types(False), "Z")


def test_subnet_of_disjoint_type_excludes_the_other():
    sub = subnet(two_types(False), "X")
    assert sorted(sub.net.transitions) == ["t1", "t2"]


def test_numt_and_numot():
    model = tree_to_net(par(activity("a"), activity("b")))
    assert numt(model) == 2 and numot(model) == 1


def test_quality_identical():
    model = tree_to_net(par(activity("A"), activity("B")))
    q = quality(model, model)
    assert (q.fitness, q.precision) == (1.0, 1.0)


def test_quality_half_fitting():
    q = quality_from_languages({("A", "B"), ("B", "A")}, {("A", "B")})
    assert (q.fitness, q.precision) == (0.5, 1.0)


def test_quality_flower_uses_loop_free_language():
    flower = tree_to_net(loop(xor(activity("A"), activity("B")), tau()))
    system = {("A", "B")}
    disc = classical_language(flower)
    q = quality(tree_to_net(seq(activity("A"), activity("B"))), flower)
    common = len(system & disc)
    assert language(flower) == disc
    assert q.fitness == common / len(system)
    assert q.precision == common / len(disc)


def test_empty_discovered_language_is_an_error():
    with pytest.raises(EmptyLanguageError):
        quality_from_languages({("A",)}, set())


def test_quadrant_thresholds():
    assert quadrant(0.2, 0.15) == "low-inter/high-intra"
    assert quadrant(0.2000001, 0.1499999) == "high-inter/low-intra"
    assert quadrant(0.0, 0.0) == "low-inter/low-intra"
    assert quadrant(1.0, 1.0) == "high-inter/high-intra"
    assert set(QUADRANTS) == {quadrant(i, j) for i in (0, 1) for j in (0, 1)}


languages = st.sets(st.lists(st.sampled_from("ABC"), max_size=3).map(tuple), min_size=1, max_size=8)


@given(languages, languages)
def test_quality_is_symmetric(sys_, disc):
    a = quality_from_languages(sys_, disc)
    b = quality_from_languages(disc, sys_)
    assert (a.fitness, a.precision) == (b.precision, b.fitness)
    assert 0 <= a.fitness <= 1 and 0 <= a.precision <= 1
    assert (a.fitness == a.precision == 1) == (sys_ == disc)


@given(languages, languages, st.data())
def test_adding_system_trace_never_lowers_fitness(sys_, disc, data):
    trace = data.draw(st.sampled_from(sorted(sys_)))
    before = quality_from_languages(sys_, disc).fitness
    assert quality_from_languages(sys_, disc | {trace}).fitness >= before


@given(st.permutations(["p0", "p1", "p2", "q0", "q1", "q2"]))
def test_inter_is_invariant_under_renaming(names):
    model = two_types(False)
    ren = dict(zip(["x0", "x1", "x2", "y0", "y1", "y2"], names))
    net = model.net
    renamed = OCPN(
        {ren[p]: ot for p, ot in net.places.items()},
        {t: f"L{lab}" for t, lab in net.transitions.items()},
        {(ren.get(a, a), ren.get(b, b)) for a, b in net.arcs},
    )
    assert inter_complexity(renamed) == inter_complexity(net)
