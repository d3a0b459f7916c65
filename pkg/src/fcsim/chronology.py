"""Event-time labeling and arrow-of-time extraction.

A standard clock turns detection times into integer tick labels; each labeled
detection carries the triplet state built in ``qstate``.  From a finished log
this module recovers the two arrows: per-node quantum pointers (excitation
paired with the decay that consumed it, always strictly forward) and signed
classical intervals between labeled events.  ``audit_causality`` replays a log
against its network and reports every ordering or bookkeeping violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Iterable, Optional, Sequence

from .core import IntegrityError, InvalidParameterError, format_float
from .engine import EventKind, EventLog, SimEvent
from .network import Network, transit_lifetime
from .qstate import (
    ON_PULSE,
    StateVector,
    TimeLabelState,
    TripletState,
    disentangle,
    make_triplet,
)

# detection time must match emission time plus transit to this absolute slack
TRANSIT_TOL = 1e-12


@dataclass(frozen=True)
class StandardClock:
    """External reference clock: uniform ticks of the given period."""

    period: float
    origin: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.period) and self.period > 0):
            raise InvalidParameterError(f"period must be positive and finite, got {self.period!r}")
        if not math.isfinite(self.origin):
            raise InvalidParameterError(f"origin must be finite, got {self.origin!r}")


def tick_label(time: float, clock: StandardClock) -> float:
    """Tick index containing ``time``: floor((time - origin) / period)."""
    return float(math.floor((time - clock.origin) / clock.period))


@dataclass(frozen=True, eq=False)
class LabeledEvent:
    event: SimEvent
    triplet: TripletState
    t_e: float
    clock: StandardClock


def label_event(
    event: SimEvent,
    clock: StandardClock,
    induced: Optional[StateVector] = None,
) -> LabeledEvent:
    """Attach a tick label to a detection.

    Only detections are labelable: the label rides on the absorbed pulse.
    The induced factor defaults to a ground 2-level state."""
    if event.kind != EventKind.DETECTION:
        raise InvalidParameterError(
            f"only detection events can be labeled, got {event.kind.value!r}"
        )
    if induced is None:
        induced = StateVector.basis(2)
    t_e = tick_label(event.time, clock)
    triplet = make_triplet(TimeLabelState(t_e), ON_PULSE, induced)
    return LabeledEvent(event, triplet, t_e, clock)


def extract_time(labeled: LabeledEvent) -> float:
    """Destructive readout: the stored tick label, exactly."""
    t_e, _ = disentangle(labeled.triplet)
    return t_e


def build_timeline(labels: Iterable[LabeledEvent]) -> list:
    """Labeled events ordered by (tick label, event seq)."""
    return sorted(labels, key=lambda le: (le.t_e, le.event.seq))


def cat_interval(a: LabeledEvent, b: LabeledEvent, clock: StandardClock) -> float:
    """Signed classical interval from a to b in clock time units."""
    if a.clock != clock or b.clock != clock:
        raise InvalidParameterError("events were labeled against a different clock")
    return (b.t_e - a.t_e) * clock.period


@dataclass(frozen=True)
class QatPointer:
    """One irreversible excitation-to-decay arc on a single node."""

    node: str
    excitation: SimEvent
    decay: SimEvent


def qat_pointers(log: EventLog) -> list:
    """Replay a log and pair each decay with the event that excited the node.

    Detections count as excitations when they land on a ground-state node;
    excitations and detections hitting an already-excited node were absorbed
    and pair with nothing.  A decay on a ground-state node, or one that does
    not advance time, marks a malformed log."""
    pointers: list = []
    pending: dict = {}
    for ev in log.events:
        if ev.kind in (EventKind.EXCITATION, EventKind.DETECTION):
            if ev.node not in pending:
                pending[ev.node] = ev
        elif ev.kind == EventKind.DECAY:
            exciting = pending.pop(ev.node, None)
            if exciting is None:
                raise IntegrityError(f"event {ev.seq}: decay of ground-state node {ev.node!r}")
            if not ev.time > exciting.time:
                raise IntegrityError(
                    f"event {ev.seq}: decay does not advance past event {exciting.seq}"
                )
            pointers.append(QatPointer(ev.node, exciting, ev))
    return pointers


@dataclass(frozen=True, eq=False)
class ArrowMap:
    """Quantum pointers plus classical intervals for one run.

    cat_intervals maps (seq_a, seq_b) to the signed interval for consecutive
    timeline pairs, stored in both directions."""

    qats: tuple
    cat_intervals: dict


def build_arrow_map(log: EventLog, labels: Sequence[LabeledEvent]) -> ArrowMap:
    timeline = build_timeline(labels)
    intervals: dict = {}
    for a, b in zip(timeline, timeline[1:]):
        value = cat_interval(a, b, a.clock)
        intervals[(a.event.seq, b.event.seq)] = value
        intervals[(b.event.seq, a.event.seq)] = -value
    return ArrowMap(tuple(qat_pointers(log)), intervals)


@dataclass(frozen=True)
class CausalityReport:
    violations: tuple
    events_checked: int

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_causality(log: EventLog, net: Network) -> CausalityReport:
    """Replay a log against its network and collect every violation.

    Checks: log times never decrease; every detection names a previously
    emitted signal on the same channel, arriving at the channel target at
    emission time plus transit (within TRANSIT_TOL); emissions leave their
    channel's source exactly once per signal; every decay consumes a prior
    excitation and lands strictly after it."""
    violations: list = []
    emitted: dict = {}
    pending: dict = {}
    last_time = None
    for ev in log.events:
        if last_time is not None and ev.time < last_time:
            violations.append(f"event {ev.seq}: time decreases")
        last_time = ev.time
        if ev.kind == EventKind.EMISSION:
            if ev.signal is None or ev.channel is None:
                violations.append(f"event {ev.seq}: emission without signal or channel")
            elif ev.signal in emitted:
                violations.append(f"event {ev.seq}: signal {ev.signal} emitted twice")
            else:
                emitted[ev.signal] = ev
                channel = net.channels.get(ev.channel)
                if channel is None:
                    violations.append(f"event {ev.seq}: unknown channel {ev.channel!r}")
                elif channel.source != ev.node:
                    violations.append(
                        f"event {ev.seq}: emission on {ev.channel!r} from non-source {ev.node!r}"
                    )
        elif ev.kind == EventKind.DETECTION:
            origin = None if ev.signal is None else emitted.get(ev.signal)
            if origin is None:
                violations.append(
                    f"event {ev.seq}: detection of signal {ev.signal} with no prior emission"
                )
            elif ev.channel != origin.channel:
                violations.append(
                    f"event {ev.seq}: signal {ev.signal} detected on {ev.channel!r}, "
                    f"emitted on {origin.channel!r}"
                )
            else:
                channel = net.channels.get(ev.channel)
                if channel is None:
                    violations.append(f"event {ev.seq}: unknown channel {ev.channel!r}")
                else:
                    if channel.target != ev.node:
                        violations.append(
                            f"event {ev.seq}: detection on {ev.channel!r} at non-target {ev.node!r}"
                        )
                    expected = origin.time + transit_lifetime(channel)
                    if abs(ev.time - expected) > TRANSIT_TOL:
                        violations.append(
                            f"event {ev.seq}: arrival time {ev.time!r} differs from "
                            f"emission plus transit {expected!r}"
                        )
        if ev.kind in (EventKind.EXCITATION, EventKind.DETECTION):
            if ev.node not in pending:
                pending[ev.node] = ev
        elif ev.kind == EventKind.DECAY:
            exciting = pending.pop(ev.node, None)
            if exciting is None:
                violations.append(f"event {ev.seq}: decay of ground-state node {ev.node!r}")
            elif not ev.time > exciting.time:
                violations.append(
                    f"event {ev.seq}: decay does not advance past event {exciting.seq}"
                )
    return CausalityReport(tuple(violations), len(log.events))


def write_timeline(timeline: Sequence[LabeledEvent], fh: IO[str]) -> None:
    """Tab-separated rows: tick label, event seq, node, kind."""
    for le in timeline:
        fh.write(
            f"{format_float(le.t_e)}\t{le.event.seq}\t{le.event.node}\t{le.event.kind.value}\n"
        )


def write_arrow_map(arrows: ArrowMap, fh: IO[str]) -> None:
    """qat rows in pointer order, then cat rows for each unordered pair."""
    for p in arrows.qats:
        fh.write(
            f"qat\t{p.node}\t{p.excitation.seq}\t{p.decay.seq}\t"
            f"{format_float(p.excitation.time)}\t{format_float(p.decay.time)}\n"
        )
    for a, b in sorted(k for k in arrows.cat_intervals if k[0] < k[1]):
        fh.write(f"cat\t{a}\t{b}\t{format_float(arrows.cat_intervals[(a, b)])}\n")
