"""Command line interface: ``ocpd <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .discovery import discover
from .experiment import SampleConfig, gen_log, run_campaign, sample_language
from .language import StateSpaceOverflow, language
from .metrics import complexity_profile, quality
from .modelgen import corpus_histogram, generate_corpus, write_corpus
from .netio import dumps_net, loads_net, to_dot
from .ocel import OCELError, flatten, parse_ocel, serialize_ocel
from .ocpn import NetError


def _int_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition("..")
    lo, hi = int(lo), int(hi or lo)
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _float_range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition("..")
    lo, hi = float(lo), float(hi or lo)
    if not 0.0 <= lo <= hi <= 1.0:
        raise argparse.ArgumentTypeError(f"need 0 <= MIN <= MAX <= 1, got {text!r}")
    return lo, hi


def _rates(text: str) -> tuple[float, ...]:
    return tuple(float(r) for r in text.split(",") if r.strip())


def _load_model(path):
    return loads_net(Path(path).read_text())


def cmd_generate(args) -> int:
    models = generate_corpus(
        args.count,
        seed=args.seed,
        activities=args.activities,
        sharing=args.sharing,
        num_types=args.types,
        balanced=args.balanced,
        connected=not args.allow_disconnected,
    )
    manifest = write_corpus(models, args.out)
    hist, _, _ = corpus_histogram(models)
    print(f"wrote {len(models)} models to {manifest}")
    print("inter (rows, 0..1) x intra (columns, 0..1) histogram:")
    for row in hist.astype(int):
        print(" ".join(f"{v:4d}" for v in row))
    return 0


def cmd_sample(args) -> int:
    model = _load_model(args.model)
    samples = sample_language(model, args.rate, np.random.default_rng(args.seed))
    Path(args.out).write_bytes(serialize_ocel(gen_log(samples, model)))
    print(f"sampled {len(samples)} sequences into {args.out}")
    return 0


def cmd_discover(args) -> int:
    log = parse_ocel(Path(args.log).read_bytes())
    if args.flatten:
        log = flatten(log)
    model = discover(log)
    Path(args.out).write_text(dumps_net(model))
    if args.dot:
        Path(args.dot).write_text(to_dot(model))
    return 0


def cmd_metrics(args) -> int:
    model = _load_model(args.model)
    p = complexity_profile(model)
    print(f"numt: {p.numt}")
    print(f"numot: {p.numot}")
    print(f"inter: {p.inter:.6f}")
    print(f"intra: {p.intra:.6f}")
    print(f"language_size: {len(language(model))}")
    return 0


def cmd_quality(args) -> int:
    q = quality(_load_model(args.system), _load_model(args.discovered))
    print(f"fitness: {q.fitness:.6f}")
    print(f"precision: {q.precision:.6f}")
    return 0


def cmd_campaign(args) -> int:
    config = SampleConfig(rates=args.rates, replications=args.reps, seed=args.seed)
    summary = run_campaign(
        args.corpus, config, args.out, workers=args.workers, timings=args.timings
    )
    print(f"{summary['records']} records from {summary['models']} models written to {args.out}")
    if summary["failures"]:
        print(f"{len(summary['failures'])} failures (see summary JSON)", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ocpd", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a corpus of system models")
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--activities", type=_int_range, default=(6, 8), metavar="MIN..MAX")
    g.add_argument("--sharing", type=_float_range, default=(0.0, 1.0), metavar="MIN..MAX")
    g.add_argument("--types", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--balanced", action="store_true", help="equal model counts per quadrant")
    g.add_argument(
        "--allow-disconnected",
        action="store_true",
        help="allow runs in which the objects share no event",
    )
    g.add_argument("--out", required=True, metavar="DIR")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("sample", help="sample a model's language into an OCEL")
    s.add_argument("--model", required=True, metavar="FILE")
    s.add_argument("--rate", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, metavar="FILE.ocel.json")
    s.set_defaults(func=cmd_sample)

    d = sub.add_parser("discover", help="discover an object-centric Petri net from an OCEL")
    d.add_argument("--log", required=True, metavar="FILE")
    d.add_argument("--flatten", action="store_true")
    d.add_argument("--out", required=True, metavar="FILE.net.json")
    d.add_argument("--dot", metavar="FILE.dot")
    d.set_defaults(func=cmd_discover)

    m = sub.add_parser("metrics", help="complexity metrics and language size of a model")
    m.add_argument("--model", required=True, metavar="FILE")
    m.set_defaults(func=cmd_metrics)

    q = sub.add_parser("quality", help="fitness and precision against a system model")
    q.add_argument("--system", required=True, metavar="FILE")
    q.add_argument("--discovered", required=True, metavar="FILE")
    q.set_defaults(func=cmd_quality)

    c = sub.add_parser("campaign", help="run the sampling/discovery experiment over a corpus")
    c.add_argument("--corpus", required=True, metavar="DIR")
    c.add_argument("--rates", type=_rates, default=(0.05, 0.1, 0.25, 0.5, 1.0), metavar="LIST")
    c.add_argument("--reps", type=int, default=3)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True, metavar="results.csv")
    c.add_argument("--workers", type=int, default=None)
    c.add_argument("--timings", action="store_true", help="record wall-clock runtime_ms")
    c.set_defaults(func=cmd_campaign)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OCELError, NetError, StateSpaceOverflow, ValueError, KeyError, OSError) as exc:
        print(f"ocpd {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
