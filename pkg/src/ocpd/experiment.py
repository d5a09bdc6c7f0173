"""Sampling, dual discovery and quality scoring over a corpus of system models.

For every model, sampling rate and replication a fraction of the system
language is drawn, materialised as an object-centric event log, and
discovered twice: directly and after flattening.  Both discovered nets are
scored against the system model by fitness and precision.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace, astuple, dataclass, field, fields
from pathlib import Path

import numpy as np

from .discovery import discover
from .language import StateGraph, StateSpaceOverflow
from .metrics import QUADRANTS, EmptyLanguageError, quadrant, quality_from_languages
from .modelgen import SystemModel, read_corpus
from .ocel import OCEL, Event, ObjectInstance, flatten
from .ocpn import AcceptingOCPN, Binding

__all__ = [
    "METHODS",
    "CSV_HEADER",
    "SampleConfig",
    "ExperimentRecord",
    "Sample",
    "sample_size",
    "sample_language",
    "gen_log",
    "run_experiment",
    "bin_records",
    "run_campaign",
    "records_to_csv",
]

METHODS = ("object-centric", "flattened")
CSV_HEADER = (
    "model_id,numt,numot,inter,intra,sample_rate,replication,method,"
    "fitness,precision,lang_sys,lang_disc,runtime_ms"
)


@dataclass(frozen=True)
class SampleConfig:
    rates: tuple[float, ...] = (0.05, 0.1, 0.25, 0.5, 1.0)
    replications: int = 3
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))
        if not self.rates:
            raise ValueError("at least one sampling rate is required")
        for r in self.rates:
            if not 0.0 < r <= 1.0:
                raise ValueError(f"sampling rate {r} outside (0, 1]")
        if self.replications < 1:
            raise ValueError("replications must be at least 1")


@dataclass(frozen=True)
class ExperimentRecord:
    model_id: str
    numt: int
    numot: int
    inter: float
    intra: float
    sample_rate: float
    replication: int
    method: str
    fitness: float | None
    precision: float | None
    language_size_system: int
    language_size_discovered: int | None
    runtime_ms: int = 0
    # reason for a skipped row; not part of the CSV
    note: str = field(default="", compare=False)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        for v in (self.fitness, self.precision):
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"score {v} outside [0, 1]")

    @property
    def skipped(self) -> bool:
        return self.fitness is None


@dataclass(frozen=True)
class Sample:
    trace: tuple[str, ...]
    bindings: tuple[Binding, ...]


def sample_size(rate: float, n: int) -> int:
    """``ceil(rate * n)``, robust against float noise such as 0.1 * 30."""
    return min(n, math.ceil(round(rate * n, 9)))


def sample_language(
    model: AcceptingOCPN | StateGraph, rate: float, rng: np.random.Generator
) -> list[Sample]:
    """Draw ``ceil(rate * |language|)`` distinct traces uniformly without replacement.

    Each trace comes with its lexicographically least witnessing binding
    sequence.  Samples are returned in sorted trace order.
    """
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"sampling rate {rate} outside (0, 1]")
    graph = model if isinstance(model, StateGraph) else StateGraph(model)
    lang = sorted(graph.language())
    if not lang:
        raise ValueError("cannot sample from an empty language")
    k = sample_size(rate, len(lang))
    picked = sorted(rng.choice(len(lang), size=k, replace=False).tolist()) if k < len(lang) else range(k)
    return [Sample(lang[i], graph.witness(lang[i])) for i in picked]


def gen_log(samples, model: AcceptingOCPN) -> OCEL:
    """Materialise sampled binding sequences as one object-centric event log.

    Execution ``k`` renames every object ``o`` to ``o-k``.  Each visible
    binding becomes one event whose timestamp is its position in the binding
    sequence.  Objects that take part in no visible binding are left out; an
    empty sequence keeps only its first object so it still forms an
    execution.
    """
    types = model.object_types
    events, objects, links = [], {}, {}
    n = 0
    for k, sample in enumerate(samples):
        bindings = sample.bindings if isinstance(sample, Sample) else tuple(sample)
        used = []
        for pos, b in enumerate(bindings):
            label = model.net.transitions[b.transition]
            if label is None:
                continue
            eid = f"e{n:06d}"
            n += 1
            objs = [f"{o}-{k}" for _, os_ in b.assignment for o in os_]
            events.append(Event(eid, label, pos))
            links[eid] = objs
            used.extend(o for _, os_ in b.assignment for o in os_)
        if not used:
            marking = _start_marking(model, bindings)
            used = sorted(marking.objects)[:1]
        for o in used:
            objects[f"{o}-{k}"] = ObjectInstance(f"{o}-{k}", types[o])
    return OCEL.from_links(events, objects.values(), links)


def _start_marking(model: AcceptingOCPN, bindings):
    # the initial marking the sequence starts from (empty sequences: the first)
    if bindings:
        objs = {o for _, os_ in bindings[0].assignment for o in os_}
        for m in model.initial_markings:
            if objs <= m.objects:
                return m
    return model.initial_markings[0]


def _score(system: frozenset, model: AcceptingOCPN, budget):
    lang = StateGraph(model, budget).language()
    q = quality_from_languages(system, lang)
    return q.fitness, q.precision, len(lang)


def run_experiment(
    model: SystemModel,
    config: SampleConfig,
    *,
    budget: int | None = None,
    timings: bool = False,
) -> list[ExperimentRecord]:
    """Two records (object-centric, flattened) per rate and replication.

    The random stream of each run is derived from the config seed, the
    model id, the rate index and the replication, so runs are independent
    of scheduling.  Overflows and empty discovered languages become skipped
    rows (no scores) with a note.
    """
    p = model.profile
    base = dict(model_id=model.id, numt=p.numt, numot=p.numot, inter=p.inter, intra=p.intra)
    graph = StateGraph(model.model, budget)
    system = graph.language()
    records = []
    # identical sample sets (always the case at rate 1) give identical scores
    seen: dict[tuple, list[ExperimentRecord]] = {}
    for ri, rate in enumerate(config.rates):
        for rep in range(config.replications):
            rng = np.random.default_rng([config.seed, int(model.id[:8], 16), ri, rep])
            samples = sample_language(graph, rate, rng)
            key = tuple(s.trace for s in samples)
            if key in seen and not timings:
                records += [replace(r, sample_rate=rate, replication=rep) for r in seen[key]]
                continue
            log = gen_log(samples, model.model)
            start = len(records)
            for method in METHODS:
                t0 = time.perf_counter()
                fit = prec = size = None
                note = ""
                try:
                    source = log if method == "object-centric" else flatten(log)
                    fit, prec, size = _score(system, discover(source), budget)
                except StateSpaceOverflow as exc:
                    note = f"state-space overflow: {exc}"
                except EmptyLanguageError as exc:
                    note = f"empty discovered language: {exc}"
                    size = 0
                ms = round((time.perf_counter() - t0) * 1000) if timings else 0
                records.append(
                    ExperimentRecord(
                        **base,
                        sample_rate=rate,
                        replication=rep,
                        method=method,
                        fitness=fit,
                        precision=prec,
                        language_size_system=len(system),
                        language_size_discovered=size,
                        runtime_ms=ms,
                        note=note,
                    )
                )
            seen[key] = records[start:]
    return records


def bin_records(records) -> dict:
    """Mean fitness and precision per (quadrant, method, rate).

    Returns ``{quadrant: {method: {rate: {"fitness", "precision", "runs",
    "models"}}}}`` with all four quadrants present; skipped rows are not
    averaged.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to bin")
    acc = defaultdict(list)
    for r in records:
        if not r.skipped:
            acc[(quadrant(r.inter, r.intra), r.method, r.sample_rate)].append(r)
    out = {q: {m: {} for m in METHODS} for q in QUADRANTS}
    for (q, m, rate), rows in sorted(acc.items()):
        out[q][m][rate] = {
            "fitness": float(np.mean([r.fitness for r in rows])),
            "precision": float(np.mean([r.precision for r in rows])),
            "runs": len(rows),
            "models": len({r.model_id for r in rows}),
        }
    return out


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER.split(","))
    for r in records:
        w.writerow([_fmt(v) for v in astuple(r)[: len(fields(r)) - 1]])
    return buf.getvalue()


def _model_task(args):
    model, config, budget, timings = args
    try:
        return run_experiment(model, config, budget=budget, timings=timings), None
    except Exception as exc:  # recorded, the campaign goes on
        return [], f"{model.id}: {type(exc).__name__}: {exc}"


def run_campaign(
    corpus,
    config: SampleConfig,
    out,
    *,
    workers: int | None = None,
    budget: int | None = None,
    timings: bool = False,
    summary_path=None,
) -> dict:
    """Run every model of ``corpus`` and write the CSV plus a summary JSON.

    ``corpus`` is a list of :class:`SystemModel` or a corpus directory.
    Models are processed by a pool of ``workers`` processes (default: CPU
    count; 1 runs inline); rows are written in corpus order.  ``runtime_ms``
    is 0 unless ``timings`` is set, keeping the CSV byte-reproducible.
    The summary goes to ``summary_path`` (default: ``out`` with suffix
    ``.summary.json``) and is also returned.
    """
    if isinstance(corpus, (str, os.PathLike)):
        corpus = read_corpus(corpus)
    corpus = list(corpus)
    tasks = [(m, config, budget, timings) for m in corpus]
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(tasks) <= 1:
        results = [_model_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_model_task, tasks, chunksize=1))
    records = [r for rows, _ in results for r in rows]
    failures = [err for _, err in results if err]
    failures += [
        f"{r.model_id} rate={r.sample_rate} rep={r.replication} {r.method}: {r.note}"
        for r in records
        if r.skipped
    ]
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(records_to_csv(records).encode("utf-8"))
    summary = {
        "models": len(corpus),
        "records": len(records),
        "config": {"rates": list(config.rates), "replications": config.replications, "seed": config.seed},
        "quadrant_models": {
            q: sum(quadrant(m.profile.inter, m.profile.intra) == q for m in corpus) for q in QUADRANTS
        },
        "bins": _json_bins(bin_records(records)) if records else {},
        "failures": failures,
    }
    summary_path = Path(summary_path) if summary_path else out.with_suffix(".summary.json")
    summary_path.write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n")
    return summary


def _json_bins(bins: dict) -> dict:
    return {q: {m: {repr(r): v for r, v in rates.items()} for m, rates in ms.items()} for q, ms in bins.items()}
