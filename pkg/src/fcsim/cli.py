"""Batch command-line surface.

Subcommands: run (simulate a scenario file and export logs), validate (static
checks plus cycle report, writes nothing), bigbang (emit the fan-out preset
as scenario text), unify (lifetime unification table).  Exit codes: 0 on
success, 1 on validation or run failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from .analysis import render_summary, unify_lifetimes
from .chronology import (
    StandardClock,
    build_arrow_map,
    build_timeline,
    label_event,
    write_arrow_map,
    write_timeline,
)
from .core import FcsimError, InteractionKind, UnitSystem, format_float
from .engine import EventKind, RunConfig, bigbang_scenario, run, write_event_log
from .network import detect_cycles
from .scenario import (
    Scenario,
    build_network,
    parse_scenario,
    serialize_scenario,
    with_overrides,
)

_MODE_CHOICES = ("deterministic", "stochastic", "det", "stoch")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fcsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a scenario and export logs")
    p_run.add_argument("--scenario", required=True, help="scenario file")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--mode", choices=_MODE_CHOICES)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--max-events", type=int, dest="max_events")
    p_run.add_argument("--until", type=float)
    p_run.add_argument("--units", choices=("natural", "si"))
    p_run.add_argument("--replicas", type=int, default=1)
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="static checks and cycle report")
    p_val.add_argument("--scenario", required=True, help="scenario file")
    p_val.set_defaults(func=_cmd_validate)

    p_bb = sub.add_parser("bigbang", help="emit the fan-out preset scenario")
    p_bb.add_argument("--k", type=int, required=True, help="number of child nodes")
    p_bb.add_argument("--units", choices=("natural", "si"), default="natural")
    p_bb.add_argument("--out", help="write scenario text here instead of stdout")
    p_bb.set_defaults(func=_cmd_bigbang)

    p_un = sub.add_parser("unify", help="unify per-interaction lifetimes")
    p_un.add_argument("--strong", type=float, required=True)
    p_un.add_argument("--em", type=float, required=True)
    p_un.add_argument("--weak", type=float, required=True)
    p_un.add_argument("--grav", type=float, required=True)
    p_un.add_argument("--tau-u", type=float, required=True, dest="tau_u")
    p_un.set_defaults(func=_cmd_unify)
    return parser


def _write(path: Path, render) -> None:
    with open(path, "w", newline="\n") as fh:
        render(fh)


def _run_one(scenario: Scenario, seed: int, out_dir: Path) -> str:
    cfg = RunConfig(
        mode=scenario.run.mode,
        seed=seed,
        max_events=scenario.run.max_events,
        until=scenario.run.until,
        units=scenario.units,
    )
    net = build_network(scenario)
    log = run(net, cfg, scenario.excitations)
    labels = [
        label_event(ev, scenario.clock)
        for ev in log.events
        if ev.kind == EventKind.DETECTION
    ]
    timeline = build_timeline(labels)
    arrows = build_arrow_map(log, labels)
    summary = render_summary(log, net)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write(out_dir / "events.tsv", lambda fh: write_event_log(log, fh))
    _write(out_dir / "timeline.tsv", lambda fh: write_timeline(timeline, fh))
    _write(out_dir / "arrows.tsv", lambda fh: write_arrow_map(arrows, fh))
    _write(out_dir / "summary.txt", lambda fh: fh.write(summary))
    return summary


def _cmd_run(args) -> int:
    scenario = parse_scenario(Path(args.scenario).read_text())
    scenario = with_overrides(
        scenario,
        mode=args.mode,
        seed=args.seed,
        max_events=args.max_events,
        until=args.until,
        units=args.units,
    )
    if args.replicas < 1:
        print("error: --replicas must be >= 1", file=sys.stderr)
        return 2
    out = Path(args.out)
    if args.replicas == 1:
        _run_one(scenario, scenario.run.seed, out)
    else:
        merged = []
        for offset in range(args.replicas):
            seed = scenario.run.seed + offset
            summary = _run_one(scenario, seed, out / f"replica-{seed}")
            merged.append(f"== replica seed={seed} ==\n{summary}")
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "summary.txt", "w", newline="\n") as fh:
            fh.write("".join(merged))
    print(f"wrote {out}")
    return 0


def _cmd_validate(args) -> int:
    scenario = parse_scenario(Path(args.scenario).read_text())
    net = build_network(scenario)
    cycles = detect_cycles(net)
    print(f"{len(cycles)} cycles")
    for cycle in cycles:
        print("cycle: " + " ".join(cycle))
    return 0


def _cmd_bigbang(args) -> int:
    units = UnitSystem.from_mode(args.units)
    net, excitations = bigbang_scenario(args.k, units)
    tau_root = units.hbar / net.nodes["root"].gamma
    scenario = Scenario(
        units=units,
        nodes=tuple(net.nodes.values()),
        channels=tuple(net.channels[c] for c in sorted(net.channels)),
        excitations=excitations,
        run=RunConfig(units=units),
        clock=StandardClock(tau_root, 0.0),
    )
    text = serialize_scenario(scenario)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_unify(args) -> int:
    lifetimes = {
        InteractionKind.STRONG: args.strong,
        InteractionKind.EM: args.em,
        InteractionKind.WEAK: args.weak,
        InteractionKind.GRAV: args.grav,
    }
    result = unify_lifetimes(lifetimes, args.tau_u)
    print(f"tau_u={format_float(result.tau_u)}")
    for kind in InteractionKind:
        print(
            f"kind={kind.value} tau={format_float(lifetimes[kind])} "
            f"scalar={format_float(result.scalars[kind])}"
        )
    return 0


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (FcsimError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
