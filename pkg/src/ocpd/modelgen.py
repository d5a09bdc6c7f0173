"""Random loop-free system models over several object types.

Every visible activity is shared by all object types with probability
``sharing_prob`` and otherwise owned by one type chosen uniformly.  The
shared activities form one random process tree (the skeleton).  Each type
gets its own random tree over its private activities plus one placeholder
leaf that is replaced by the skeleton, so all types contain the same
skeleton and synchronise on it while their private parts run
concurrently.  Trees use sequence, exclusive choice and parallel nodes,
never loops.  The per-type nets are fused on equal activity labels and on
the silent split/join transitions of the skeleton.
"""

from __future__ import annotations

import hashlib
import json
import string
from dataclasses import asdict, dataclass, field
from itertools import count
from pathlib import Path

import numpy as np

from .language import StateGraph, StateSpaceOverflow
from .metrics import QUADRANTS, ComplexityProfile, complexity_profile, quadrant
from .netio import dumps_net, loads_net
from .ocpn import AcceptingOCPN, Marking, OCPN
from .tree import NetBuilder, Operator, ProcessTree, activity

__all__ = [
    "GenParams",
    "SystemModel",
    "generate_model",
    "generate_corpus",
    "corpus_histogram",
    "write_corpus",
    "read_corpus",
]

_OPS = (Operator.SEQUENCE, Operator.XOR, Operator.PARALLEL)
# per-type tree draws before the activity ownership is redrawn
_TREE_ATTEMPTS = 100


@dataclass(frozen=True)
class GenParams:
    visible_activities: int = 7
    num_types: int = 2
    sharing_prob: float = 0.2
    # relative weights of sequence, exclusive choice, parallel
    weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
    seed: int | None = None
    max_children: int = 3
    # every run executes a shared activity, so the objects of any run meet
    # in at least one event
    connected: bool = False

    def __post_init__(self):
        if self.visible_activities < 1:
            raise ValueError("need at least one visible activity")
        if not 1 <= self.num_types <= self.visible_activities:
            raise ValueError("num_types must lie in [1, visible_activities]")
        if not 0.0 <= self.sharing_prob <= 1.0:
            raise ValueError("sharing_prob must lie in [0, 1]")
        if len(self.weights) != 3 or min(self.weights) < 0 or sum(self.weights) <= 0:
            raise ValueError("weights must be three non-negative numbers, not all zero")
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if self.connected and self.num_types > 1 and self.sharing_prob == 0.0:
            raise ValueError("connected models need a positive sharing_prob")


@dataclass(frozen=True)
class SystemModel:
    model: AcceptingOCPN = field(repr=False)
    profile: ComplexityProfile
    id: str
    params: GenParams | None = None
    language_size: int | None = None


def model_id(model: AcceptingOCPN) -> str:
    return hashlib.sha256(dumps_net(model).encode()).hexdigest()[:16]


def _labels(n: int) -> list[str]:
    if n <= 26:
        return list(string.ascii_lowercase[:n])
    return [f"a{i}" for i in range(n)]


def _random_tree(acts: list[str], rng, p, max_children: int, keys, tag: str) -> ProcessTree:
    if len(acts) == 1:
        return activity(acts[0])
    op = _OPS[rng.choice(3, p=p)]
    k = int(rng.integers(2, min(len(acts), max_children) + 1))
    cuts = sorted(rng.choice(np.arange(1, len(acts)), size=k - 1, replace=False).tolist())
    parts = [acts[a:b] for a, b in zip([0] + cuts, cuts + [len(acts)])]
    children = tuple(_random_tree(part, rng, p, max_children, keys, tag) for part in parts)
    return ProcessTree(op, children=children, key=f"{tag}{next(keys)}")


def _covered(node: ProcessTree, shared: set[str]) -> bool:
    """Whether every run of ``node`` executes an activity from ``shared``."""
    if node.kind is Operator.ACTIVITY:
        return node.label in shared
    if node.kind is Operator.TAU:
        return False
    if node.kind is Operator.XOR:
        return all(_covered(c, shared) for c in node.children)
    return any(_covered(c, shared) for c in node.children)


def _substitute(node: ProcessTree, label: str, sub: ProcessTree) -> ProcessTree:
    if node.kind is Operator.ACTIVITY:
        return sub if node.label == label else node
    if not node.children:
        return node
    kids = tuple(_substitute(c, label, sub) for c in node.children)
    return ProcessTree(node.kind, children=kids, key=node.key)


def _keys(node: ProcessTree, out: set[str]) -> set[str]:
    if node.key is not None:
        out.add(node.key)
    for c in node.children:
        _keys(c, out)
    return out


class _FusingBuilder(NetBuilder):
    def __init__(self, object_type: str, fused: set[str]):
        super().__init__(object_type, prefix=f"{object_type}:")
        self.fused = fused

    def visible_id(self, node):
        return f"t[{node.label}]"

    def silent_id(self, node, role):
        if node.key in self.fused:
            return f"{node.key}.{role}"
        return f"{self.object_type}:{node.key}.{role}"


# placeholder leaf for the skeleton; never a real activity label
_SKELETON = "\x00skeleton"


def _assemble(trees: dict[str, ProcessTree], fused: set[str]) -> AcceptingOCPN:
    places, transitions, arcs = {}, {}, set()
    init, final = [], []
    for ot, tree in trees.items():
        b = _FusingBuilder(ot, fused)
        source, sink = b.build(tree)
        places.update(b.places)
        transitions.update(b.transitions)
        arcs |= b.arcs
        init.append((source, f"{ot}_0"))
        final.append((sink, f"{ot}_0"))
    net = OCPN(places, transitions, frozenset(arcs))
    return AcceptingOCPN(net, (Marking.of(init),), (Marking.of(final),))


def _owners(acts, types, rng, p_share):
    while True:
        owners = {}
        for a in sorted(acts):
            if len(types) > 1 and rng.random() < p_share:
                owners[a] = tuple(types)
            else:
                owners[a] = (types[int(rng.integers(len(types)))],)
        if all(any(ot in ts for ts in owners.values()) for ot in types):
            return owners


def _type_trees(acts, owners, types, rng, p, params, need_cover):
    shared = [a for a in acts if len(owners[a]) > 1]
    skeleton = None
    if shared:
        skeleton = _random_tree(shared, rng, p, params.max_children, count(), "s")
    for _ in range(_TREE_ATTEMPTS):
        trees = {}
        for ot in types:
            items = [a for a in acts if owners[a] == (ot,)]
            if skeleton is not None:
                items.insert(int(rng.integers(len(items) + 1)), _SKELETON)
            tree = _random_tree(items, rng, p, params.max_children, count(), "g")
            if skeleton is not None:
                tree = _substitute(tree, _SKELETON, skeleton)
            trees[ot] = tree
        if not need_cover or all(_covered(t, set(shared)) for t in trees.values()):
            fused = _keys(skeleton, set()) if skeleton is not None else set()
            return trees, fused
    return None


def generate_model(
    params: GenParams, rng: np.random.Generator | None = None, budget: int | None = None
) -> SystemModel:
    """Draw a system model; deterministic given ``params.seed`` (or ``rng``).

    Draws whose language is empty or exceeds the state budget are discarded
    and redrawn from the same stream.
    """
    if rng is None:
        rng = np.random.default_rng(params.seed)
    p = np.asarray(params.weights) / sum(params.weights)
    types = [f"ot{i + 1}" for i in range(params.num_types)]
    need_cover = params.connected and len(types) > 1
    while True:
        acts = [str(a) for a in rng.permutation(_labels(params.visible_activities))]
        owners = _owners(acts, types, rng, params.sharing_prob)
        if need_cover and not any(len(ts) > 1 for ts in owners.values()):
            continue
        drawn = _type_trees(acts, owners, types, rng, p, params, need_cover)
        if drawn is None:
            continue
        model = _assemble(*drawn)
        try:
            size = len(StateGraph(model, budget).language())
            if size == 0:
                continue
            profile = complexity_profile(model, budget)
        except StateSpaceOverflow:
            continue
        return SystemModel(model, profile, model_id(model), params, size)


def generate_corpus(
    count_: int,
    seed: int = 0,
    activities: tuple[int, int] = (6, 8),
    sharing: tuple[float, float] = (0.0, 1.0),
    num_types: int = 2,
    weights: tuple[float, float, float] | None = None,
    balanced: bool = False,
    max_draws: int | None = None,
    connected: bool = True,
) -> list[SystemModel]:
    """Draw ``count_`` models with parameters spread over the given ranges.

    Each model gets its own child seed; operator weights are drawn from a
    flat Dirichlet unless fixed by ``weights``.  Models are ``connected``
    by default (see :class:`GenParams`), which needs a sharing range with a
    positive upper end.  With ``balanced`` the draws
    are filtered into equal quotas per complexity quadrant (draws whose
    quadrant is full are discarded); ``max_draws`` bounds the attempts.
    """
    if count_ < 1:
        raise ValueError("count must be at least 1")
    connected = connected and num_types > 1
    if connected and sharing[1] <= 0:
        raise ValueError("connected models need a positive sharing range")
    lo, hi = activities
    quota = {q: count_ // 4 + (i < count_ % 4) for i, q in enumerate(QUADRANTS)}
    limit = max_draws if max_draws is not None else 200 * count_
    models = []
    root = np.random.SeedSequence(seed)
    for draw in range(limit):
        if len(models) == count_:
            break
        child = np.random.SeedSequence(root.entropy, spawn_key=(draw,))
        mseed = int(child.generate_state(1)[0])
        prng = np.random.default_rng(child)
        w = tuple(prng.dirichlet([1.0, 1.0, 1.0]).tolist()) if weights is None else weights
        params = GenParams(
            visible_activities=int(prng.integers(lo, hi + 1)),
            num_types=num_types,
            sharing_prob=max(float(prng.uniform(*sharing)), 1e-3 if connected else 0.0),
            weights=w,
            seed=mseed,
            connected=connected,
        )
        model = generate_model(params)
        if balanced:
            q = quadrant(model.profile.inter, model.profile.intra)
            if quota[q] == 0:
                continue
            quota[q] -= 1
        models.append(model)
    if len(models) < count_:
        raise RuntimeError(f"only {len(models)} of {count_} models after {limit} draws")
    return models


def corpus_histogram(models, bins: int = 10):
    """2-D histogram of (inter, intra) over the unit square."""
    inter = [m.profile.inter for m in models]
    intra = [m.profile.intra for m in models]
    return np.histogram2d(inter, intra, bins=bins, range=[[0.0, 1.0], [0.0, 1.0]])


def write_corpus(models, directory) -> Path:
    """Write ``manifest.jsonl`` plus ``nets/<id>.net.json`` per model."""
    directory = Path(directory)
    (directory / "nets").mkdir(parents=True, exist_ok=True)
    lines = []
    for m in models:
        (directory / "nets" / f"{m.id}.net.json").write_text(dumps_net(m.model))
        row = {
            "id": m.id,
            "seed": None if m.params is None else m.params.seed,
            "params": None if m.params is None else asdict(m.params),
            "numt": m.profile.numt,
            "numot": m.profile.numot,
            "inter": m.profile.inter,
            "intra": m.profile.intra,
            "language_size": m.language_size,
        }
        lines.append(json.dumps(row, sort_keys=True))
    path = directory / "manifest.jsonl"
    path.write_text("".join(line + "\n" for line in lines))
    return path


def read_corpus(directory) -> list[SystemModel]:
    directory = Path(directory)
    models = []
    for line in (directory / "manifest.jsonl").read_text().splitlines():
        if not line.strip():
            continue
        row = json.loads(line)
        model = loads_net((directory / "nets" / f"{row['id']}.net.json").read_text())
        params = None
        if row.get("params"):
            raw = dict(row["params"])
            raw["weights"] = tuple(raw["weights"])
            params = GenParams(**raw)
        profile = ComplexityProfile(row["numt"], row["numot"], row["inter"], row["intra"])
        models.append(SystemModel(model, profile, row["id"], params, row.get("language_size")))
    return models
