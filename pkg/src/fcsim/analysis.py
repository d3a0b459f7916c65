"""Post-run numerics.

Lifetime estimation from logged excitation/decay pairs, unification of
per-interaction lifetimes onto a common scale, the superluminal channel scan,
and the deterministic text summary the CLI writes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional

from .core import (
    InsufficientDataError,
    InteractionKind,
    InvalidParameterError,
    TopologyError,
    format_float,
)
from .chronology import audit_causality, qat_pointers
from .engine import EventLog
from .network import Network, effective_lifetime, transit_lifetime


@dataclass(frozen=True)
class LifetimeEstimate:
    node: str
    n: int
    mean: float
    stderr: float
    expected: float


def estimate_lifetime(log: EventLog, net: Network, node: str) -> LifetimeEstimate:
    """Sample mean and standard error of the node's logged decay delays.

    Samples are the excitation-to-decay gaps from the replayed pointers;
    stderr is the sample standard deviation over sqrt(n), zero for n = 1."""
    if node not in net.nodes:
        raise TopologyError(f"unknown node {node!r}")
    samples = [
        p.decay.time - p.excitation.time for p in qat_pointers(log) if p.node == node
    ]
    if not samples:
        raise InsufficientDataError(f"no completed decay pairs for node {node!r}")
    n = len(samples)
    mean = math.fsum(samples) / n
    if n == 1:
        stderr = 0.0
    else:
        var = math.fsum((x - mean) ** 2 for x in samples) / (n - 1)
        stderr = math.sqrt(var / n)
    expected = effective_lifetime(net.nodes[node], net.units)
    return LifetimeEstimate(node, n, mean, stderr, expected)


@dataclass(frozen=True)
class UnificationResult:
    tau_u: float
    scalars: Mapping[InteractionKind, float]


def unify_lifetimes(
    lifetimes: Mapping[InteractionKind, float], tau_u: float
) -> UnificationResult:
    """Scalar per interaction such that scalar * lifetime = tau_u.

    Any non-empty subset of interactions is accepted; each lifetime must be
    positive."""
    if not (math.isfinite(tau_u) and tau_u > 0):
        raise InvalidParameterError(f"tau_u must be positive and finite, got {tau_u!r}")
    if not lifetimes:
        raise InvalidParameterError("at least one lifetime is required")
    scalars = {}
    for kind, tau in lifetimes.items():
        kind = InteractionKind(kind)
        if not (math.isfinite(tau) and tau > 0):
            raise InvalidParameterError(
                f"lifetime for {kind.value} must be positive and finite, got {tau!r}"
            )
        scalars[kind] = tau_u / tau
    for kind, scalar in scalars.items():
        assert abs(scalar * lifetimes[kind] - tau_u) <= 1e-12 * tau_u
    return UnificationResult(tau_u, scalars)


@dataclass(frozen=True)
class SuperluminalChannel:
    channel: str
    transit: float
    light_time: float
    ratio: float  # effective speed over c


def superluminal_report(net: Network) -> list:
    """Channels whose effective transit beats light over their distance,
    sorted by channel id.  Zero-distance channels are skipped."""
    rows = []
    for channel_id in sorted(net.channels):
        ch = net.channels[channel_id]
        if ch.distance <= 0:
            continue
        transit = transit_lifetime(ch)
        light_time = ch.distance / net.units.c
        if transit < light_time:
            rows.append(
                SuperluminalChannel(
                    channel_id, transit, light_time, (ch.distance / transit) / net.units.c
                )
            )
    return rows


def render_summary(
    log: EventLog,
    net: Network,
    unification: Optional[UnificationResult] = None,
) -> str:
    """Stable plain-text digest of one run.

    Section order, row order (node ids, channel ids, interaction declaration
    order), and float formatting are all fixed so equal runs produce equal
    bytes."""
    lines = ["== run =="]
    lines.append(f"seed={log.rng_seed}")
    lines.append(f"mode={log.mode}")
    lines.append(f"units={log.units.mode}")
    lines.append(f"events={len(log.events)}")
    lines.append(f"termination={log.termination}")
    lines.append("== lifetime estimates ==")
    for node_id in sorted(net.nodes):
        try:
            est = estimate_lifetime(log, net, node_id)
        except InsufficientDataError:
            lines.append(f"node={node_id} n=0")
            continue
        lines.append(
            f"node={node_id} n={est.n} mean={format_float(est.mean)} "
            f"stderr={format_float(est.stderr)} expected={format_float(est.expected)}"
        )
    lines.append("== unification ==")
    if unification is None:
        lines.append("none")
    else:
        lines.append(f"tau_u={format_float(unification.tau_u)}")
        for kind in InteractionKind:
            if kind in unification.scalars:
                lines.append(
                    f"kind={kind.value} scalar={format_float(unification.scalars[kind])}"
                )
    lines.append("== superluminal channels ==")
    rows = superluminal_report(net)
    if not rows:
        lines.append("none")
    for row in rows:
        lines.append(
            f"channel={row.channel} transit={format_float(row.transit)} "
            f"light={format_float(row.light_time)} ratio={format_float(row.ratio)}"
        )
    lines.append("== causality audit ==")
    report = audit_causality(log, net)
    lines.append(f"violations={len(report.violations)}")
    lines.extend(report.violations)
    return "\n".join(lines) + "\n"
