"""A small balanced campaign, summarised per complexity quadrant.

The full-size run behind the acceptance suite uses 200 models; this one
uses 20 so it finishes in a minute or two.
"""

from __future__ import annotations

import sys
from pathlib import Path

from ocpd.experiment import SampleConfig, run_campaign
from ocpd.modelgen import corpus_histogram, generate_corpus


def main(out="mini_campaign.csv"):
    models = generate_corpus(20, seed=11, balanced=True)
    hist, _, _ = corpus_histogram(models, bins=5)
    print("models per (inter, intra) cell, 5 x 5 grid:")
    print(hist.astype(int))
    summary = run_campaign(models, SampleConfig(replications=2, seed=11), Path(out))
    for q, methods in summary["bins"].items():
        print(q)
        for method, rates in methods.items():
            cells = "  ".join(f"{float(r):.2f}:{v['fitness']:.2f}/{v['precision']:.2f}" for r, v in rates.items())
            print(f"  {method:15s} {cells}")
    print(f"rows written to {out}; cells are rate:fitness/precision")


if __name__ == "__main__":
    main(*sys.argv[1:])
