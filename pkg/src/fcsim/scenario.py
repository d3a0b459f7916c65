"""Line-oriented scenario files.

One directive per line, `key=value` tokens, `#` comments and blank lines
ignored.  Parsing reports the offending line number for every syntax error,
unknown directive or key, duplicate id, and dangling reference.  Serializing
a parsed scenario and parsing it again is a fixed point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Optional

from .core import FcsimError, InteractionKind, UnitSystem
from .engine import DEFAULT_MAX_EVENTS, MODES, RunConfig
from .chronology import StandardClock
from .network import CENode, ClockNode, Network, SENPath, SignalChannel

_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")

_MODE_SYNONYMS = {"det": "deterministic", "stoch": "stochastic"}


class ScenarioError(FcsimError):
    """Parse or validation failure, pinned to a 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Scenario:
    units: UnitSystem = field(default_factory=UnitSystem.natural)
    nodes: tuple = ()
    channels: tuple = ()
    cens: tuple = ()
    sen_paths: tuple = ()
    excitations: tuple = ()
    run: RunConfig = field(default_factory=RunConfig)
    clock: StandardClock = field(default_factory=lambda: StandardClock(1.0, 0.0))


def _split_kv(tokens, line_no: int, allowed, required) -> dict:
    kv = {}
    for token in tokens:
        if "=" not in token:
            raise ScenarioError(line_no, f"expected key=value, got {token!r}")
        key, value = token.split("=", 1)
        if key not in allowed:
            raise ScenarioError(line_no, f"unknown key {key!r}")
        if key in kv:
            raise ScenarioError(line_no, f"duplicate key {key!r}")
        if not value:
            raise ScenarioError(line_no, f"empty value for {key!r}")
        kv[key] = value
    for key in required:
        if key not in kv:
            raise ScenarioError(line_no, f"missing key {key!r}")
    return kv


def _to_float(value: str, line_no: int, key: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ScenarioError(line_no, f"{key} must be a number, got {value!r}") from None


def _to_int(value: str, line_no: int, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ScenarioError(line_no, f"{key} must be an integer, got {value!r}") from None


def _to_id(value: str, line_no: int, key: str) -> str:
    if not _ID_RE.match(value):
        raise ScenarioError(line_no, f"{key} must match {_ID_RE.pattern}, got {value!r}")
    return value


def parse_scenario(text: str) -> Scenario:
    units: Optional[UnitSystem] = None
    nodes: list = []
    channels: list = []
    cens: list = []
    sens: list = []
    excitations: list = []
    run_kv = None
    clock: Optional[StandardClock] = None
    seen_ids: dict = {}
    # channel endpoint / membership checks are deferred so declaration order
    # does not matter; each deferred check keeps its source line
    deferred: list = []

    def claim(scope: str, ident: str, line_no: int) -> None:
        if (scope, ident) in seen_ids:
            raise ScenarioError(line_no, f"duplicate id {ident!r}")
        seen_ids[(scope, ident)] = line_no

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directive, *tokens = line.split()
        if directive == "units":
            kv = _split_kv(tokens, line_no, {"mode"}, {"mode"})
            if kv["mode"] not in ("natural", "si"):
                raise ScenarioError(line_no, f"unknown unit mode {kv['mode']!r}")
            if units is not None:
                raise ScenarioError(line_no, "units declared twice")
            units = UnitSystem.from_mode(kv["mode"])
        elif directive == "clock":
            kv = _split_kv(
                tokens, line_no,
                {"id", "gamma", "interaction", "zeno", "momentum"},
                {"id", "gamma", "interaction"},
            )
            ident = _to_id(kv["id"], line_no, "id")
            claim("node", ident, line_no)
            if kv["interaction"] not in [k.value for k in InteractionKind]:
                raise ScenarioError(line_no, f"unknown interaction {kv['interaction']!r}")
            momentum = (0.0, 0.0, 0.0)
            if "momentum" in kv:
                parts = kv["momentum"].split(",")
                if len(parts) != 3:
                    raise ScenarioError(line_no, "momentum must be three comma-separated numbers")
                momentum = tuple(_to_float(p, line_no, "momentum") for p in parts)
            try:
                node = ClockNode(
                    ident,
                    _to_float(kv["gamma"], line_no, "gamma"),
                    InteractionKind(kv["interaction"]),
                    _to_float(kv.get("zeno", "1.0"), line_no, "zeno"),
                    momentum,
                )
            except FcsimError as exc:
                raise ScenarioError(line_no, str(exc)) from None
            nodes.append(node)
        elif directive == "channel":
            kv = _split_kv(
                tokens, line_no,
                {"id", "src", "dst", "distance", "velocity", "lifetime"},
                {"id", "src", "dst", "distance", "velocity"},
            )
            ident = _to_id(kv["id"], line_no, "id")
            claim("channel", ident, line_no)
            override = None
            if "lifetime" in kv:
                override = _to_float(kv["lifetime"], line_no, "lifetime")
            try:
                channel = SignalChannel(
                    ident,
                    _to_id(kv["src"], line_no, "src"),
                    _to_id(kv["dst"], line_no, "dst"),
                    _to_float(kv["distance"], line_no, "distance"),
                    _to_float(kv["velocity"], line_no, "velocity"),
                    override,
                )
            except FcsimError as exc:
                raise ScenarioError(line_no, str(exc)) from None
            channels.append(channel)
            deferred.append((line_no, "node", channel.source, f"unknown src {channel.source!r}"))
            deferred.append((line_no, "node", channel.target, f"unknown dst {channel.target!r}"))
        elif directive == "cen":
            kv = _split_kv(tokens, line_no, {"id", "members", "coupling"}, {"id", "members", "coupling"})
            ident = _to_id(kv["id"], line_no, "id")
            claim("cen", ident, line_no)
            members = tuple(_to_id(m, line_no, "members") for m in kv["members"].split(","))
            try:
                cen = CENode(ident, members, _to_float(kv["coupling"], line_no, "coupling"))
            except FcsimError as exc:
                raise ScenarioError(line_no, str(exc)) from None
            cens.append(cen)
            for member in members:
                deferred.append((line_no, "node", member, f"unknown member {member!r}"))
        elif directive == "sen":
            kv = _split_kv(tokens, line_no, {"id", "hops"}, {"id", "hops"})
            ident = _to_id(kv["id"], line_no, "id")
            claim("sen", ident, line_no)
            hops = []
            for part in kv["hops"].split(","):
                node_id, _, channel_id = part.partition(":")
                hops.append(
                    (
                        _to_id(node_id, line_no, "hops"),
                        _to_id(channel_id, line_no, "hops") if channel_id else None,
                    )
                )
            try:
                sen = SENPath(ident, tuple(hops))
            except FcsimError as exc:
                raise ScenarioError(line_no, str(exc)) from None
            sens.append(sen)
            for node_id, channel_id in hops:
                deferred.append((line_no, "node", node_id, f"unknown node {node_id!r}"))
                if channel_id is not None:
                    deferred.append(
                        (line_no, "channel", channel_id, f"unknown channel {channel_id!r}")
                    )
        elif directive == "excite":
            kv = _split_kv(tokens, line_no, {"node", "time"}, {"node", "time"})
            node_id = _to_id(kv["node"], line_no, "node")
            excitations.append((node_id, _to_float(kv["time"], line_no, "time")))
            deferred.append((line_no, "node", node_id, f"unknown node {node_id!r}"))
        elif directive == "stdclock":
            kv = _split_kv(tokens, line_no, {"period", "origin"}, {"period"})
            if clock is not None:
                raise ScenarioError(line_no, "stdclock declared twice")
            try:
                clock = StandardClock(
                    _to_float(kv["period"], line_no, "period"),
                    _to_float(kv.get("origin", "0.0"), line_no, "origin"),
                )
            except FcsimError as exc:
                raise ScenarioError(line_no, str(exc)) from None
        elif directive == "run":
            kv = _split_kv(
                tokens, line_no,
                {"mode", "seed", "max_events", "until"},
                set(),
            )
            if run_kv is not None:
                raise ScenarioError(line_no, "run declared twice")
            mode = kv.get("mode", "deterministic")
            mode = _MODE_SYNONYMS.get(mode, mode)
            if mode not in MODES:
                raise ScenarioError(line_no, f"unknown mode {kv['mode']!r}")
            until = _to_float(kv["until"], line_no, "until") if "until" in kv else None
            run_kv = dict(
                mode=mode,
                seed=_to_int(kv.get("seed", "0"), line_no, "seed"),
                max_events=_to_int(kv.get("max_events", str(DEFAULT_MAX_EVENTS)), line_no, "max_events"),
                until=until,
                line_no=line_no,
            )
        else:
            raise ScenarioError(line_no, f"unknown directive {directive!r}")

    node_ids = {n.id for n in nodes}
    channel_ids = {c.id for c in channels}
    pools = {"node": node_ids, "channel": channel_ids}
    for line_no, scope, ident, message in deferred:
        if ident not in pools[scope]:
            raise ScenarioError(line_no, message)

    # static chain consistency: each sen channel must leave its hop node and
    # reach the next one
    channel_map = {c.id: c for c in channels}
    sen_lines = {ident: line for (scope, ident), line in seen_ids.items() if scope == "sen"}
    for sen in sens:
        line_no = sen_lines[sen.id]
        for i, (node_id, channel_id) in enumerate(sen.hops):
            if channel_id is None:
                continue
            ch = channel_map[channel_id]
            if ch.source != node_id:
                raise ScenarioError(
                    line_no, f"channel {channel_id!r} does not leave {node_id!r}"
                )
            if i + 1 < len(sen.hops) and ch.target != sen.hops[i + 1][0]:
                raise ScenarioError(
                    line_no, f"channel {channel_id!r} does not reach {sen.hops[i + 1][0]!r}"
                )

    units = units if units is not None else UnitSystem.natural()
    if run_kv is None:
        run_cfg = RunConfig(units=units)
    else:
        line_no = run_kv.pop("line_no")
        try:
            run_cfg = RunConfig(units=units, **run_kv)
        except FcsimError as exc:
            raise ScenarioError(line_no, str(exc)) from None
    return Scenario(
        units=units,
        nodes=tuple(nodes),
        channels=tuple(channels),
        cens=tuple(cens),
        sen_paths=tuple(sens),
        excitations=tuple(excitations),
        run=run_cfg,
        clock=clock if clock is not None else StandardClock(1.0, 0.0),
    )


def _num(x: float) -> str:
    return repr(float(x))


def serialize_scenario(s: Scenario) -> str:
    """Canonical text form; floats use repr so values survive a round trip."""
    lines = [f"units mode={s.units.mode}"]
    for n in s.nodes:
        parts = [f"clock id={n.id}", f"gamma={_num(n.gamma)}", f"interaction={n.interaction.value}"]
        if n.zeno_factor != 1.0:
            parts.append(f"zeno={_num(n.zeno_factor)}")
        if n.momentum != (0.0, 0.0, 0.0):
            parts.append("momentum=" + ",".join(_num(p) for p in n.momentum))
        lines.append(" ".join(parts))
    for c in s.channels:
        parts = [
            f"channel id={c.id}", f"src={c.source}", f"dst={c.target}",
            f"distance={_num(c.distance)}", f"velocity={_num(c.velocity)}",
        ]
        if c.override_lifetime is not None:
            parts.append(f"lifetime={_num(c.override_lifetime)}")
        lines.append(" ".join(parts))
    for cen in s.cens:
        lines.append(
            f"cen id={cen.id} members={','.join(cen.members)} coupling={_num(cen.coupling_strength)}"
        )
    for sen in s.sen_paths:
        hops = ",".join(n if c is None else f"{n}:{c}" for n, c in sen.hops)
        lines.append(f"sen id={sen.id} hops={hops}")
    for node_id, time in s.excitations:
        lines.append(f"excite node={node_id} time={_num(time)}")
    lines.append(f"stdclock period={_num(s.clock.period)} origin={_num(s.clock.origin)}")
    parts = [
        f"run mode={s.run.mode}", f"seed={s.run.seed}", f"max_events={s.run.max_events}",
    ]
    if s.run.until is not None:
        parts.append(f"until={_num(s.run.until)}")
    lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def build_network(s: Scenario) -> Network:
    return Network.build(s.nodes, s.channels, s.cens, units=s.units)


def with_overrides(
    s: Scenario,
    mode: Optional[str] = None,
    seed: Optional[int] = None,
    max_events: Optional[int] = None,
    until: Optional[float] = None,
    units: Optional[str] = None,
) -> Scenario:
    """Command-line style overrides; unset fields keep the file's values."""
    new_units = s.units if units is None else UnitSystem.from_mode(units)
    run_mode = s.run.mode if mode is None else _MODE_SYNONYMS.get(mode, mode)
    run_cfg = RunConfig(
        mode=run_mode,
        seed=s.run.seed if seed is None else seed,
        max_events=s.run.max_events if max_events is None else max_events,
        until=s.run.until if until is None else until,
        units=new_units,
    )
    return replace(s, units=new_units, run=run_cfg)
