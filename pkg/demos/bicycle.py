"""Walk through the bicycle log: executions, flattening and both discovered nets.

Run from the repository root: ``python demos/bicycle.py``.  Writes two DOT
files next to this script.
"""

from __future__ import annotations

from pathlib import Path

from ocpd.discovery import cardinalities, discover
from ocpd.metrics import complexity_profile
from ocpd.netio import to_dot
from ocpd.ocel import flatten, parse_ocel, process_executions

HERE = Path(__file__).parent
LOG = HERE.parent / "tests" / "data" / "bicycle.ocel.json"


def main():
    log = parse_ocel(LOG.read_bytes())
    print(f"{len(log.events)} events, objects {sorted(log.objects)}")
    for oid, trace in sorted(log.traces.items()):
        print(f"  {oid:7s} {' -> '.join(log.events[e].activity for e in trace)}")

    (px,) = process_executions(log)
    print(f"one process execution over {len(px.objects)} objects and {len(px.nodes)} events")

    flat = flatten(log)
    (case,) = flat.traces
    print(f"flattened case {case}: {len(flat.traces[case])} events in one sequence")

    print("cardinalities with more than one object per event:")
    for (act, ot), c in sorted(cardinalities(log).items()):
        if c.max > 1:
            print(f"  {act} / {ot}: min {c.min}, max {c.max} (variable arc)")

    oc = discover(log)
    tr = discover(flat)
    for name, model in (("object-centric", oc), ("flattened", tr)):
        p = complexity_profile(model)
        print(f"{name}: {len(model.net.places)} places, {len(model.net.transitions)} transitions, "
              f"inter {p.inter:.2f}")
        (HERE / f"bicycle_{name}.dot").write_text(to_dot(model, name=name))


if __name__ == "__main__":
    main()
