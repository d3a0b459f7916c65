#!/usr/bin/env python3
"""Run the cosmological preset and print the first tick.

One root clock with the Planck-scale lifetime fans out to k density
enhancements. In SI mode the root decay lands at 5.39056e-44 s exactly;
natural mode rescales the same topology to a unit lifetime.
"""

import argparse

from fcsim.core import UnitSystem, format_float
from fcsim.engine import EventKind, RunConfig, bigbang_scenario, run


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=int, default=4, help="number of child nodes")
    parser.add_argument("--units", choices=["natural", "si"], default="si")
    args = parser.parse_args(argv)

    units = UnitSystem.from_mode(args.units)
    net, excitations = bigbang_scenario(args.k, units)
    cfg = RunConfig(max_events=1 + 3 * args.k + args.k, units=units)
    log = run(net, cfg, excitations)

    for ev in log.events:
        if ev.kind == EventKind.DECAY and ev.node == "root":
            print(f"root decay at t={format_float(ev.time)}")
        elif ev.kind == EventKind.DETECTION:
            print(f"child {ev.node} detection at t={format_float(ev.time)}")
    print(f"{len(log.events)} events, termination={log.termination}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
