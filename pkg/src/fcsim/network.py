"""Static causal-network structure.

Clock nodes joined by directed signal channels, plus two groupings that only
matter for lifetime algebra: collective nodes (several clocks sharing one
coupling) and sequential paths (alternating node/channel chains).  Everything
here is immutable; the event engine consumes a built ``Network``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import (
    InteractionKind,
    InvalidParameterError,
    TopologyError,
    UnitSystem,
    validate_gamma,
)
from .qstate import DIM_CAP, StateVector, tensor_product

Vec3 = tuple[float, float, float]


def _validate_vec3(value, name: str) -> Vec3:
    vec = tuple(float(x) for x in value)
    if len(vec) != 3 or not all(math.isfinite(x) for x in vec):
        raise InvalidParameterError(f"{name} must be a finite 3-vector, got {value!r}")
    return vec


@dataclass(frozen=True)
class ClockNode:
    """A decaying two-level system acting as a clock.

    gamma is the reconfiguration energy; zeno_factor scales the effective
    lifetime (repeated observation slows the decay, factor > 1)."""

    id: str
    gamma: float
    interaction: InteractionKind
    zeno_factor: float = 1.0
    momentum: Vec3 = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        if not self.id:
            raise InvalidParameterError("node id must be non-empty")
        object.__setattr__(self, "gamma", validate_gamma(self.gamma))
        object.__setattr__(self, "interaction", InteractionKind(self.interaction))
        if not (math.isfinite(self.zeno_factor) and self.zeno_factor > 0):
            raise InvalidParameterError(
                f"zeno factor must be positive and finite, got {self.zeno_factor!r}"
            )
        object.__setattr__(self, "momentum", _validate_vec3(self.momentum, "momentum"))


@dataclass(frozen=True)
class SignalChannel:
    """Directed propagation path for one decay product.

    Transit takes distance/velocity unless override_lifetime pins it, which is
    how an apparatus that flags arrivals faster than the geometric light time
    is modeled."""

    id: str
    source: str
    target: str
    distance: float
    velocity: float
    override_lifetime: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.id:
            raise InvalidParameterError("channel id must be non-empty")
        if not (math.isfinite(self.distance) and self.distance >= 0):
            raise InvalidParameterError(
                f"distance must be non-negative and finite, got {self.distance!r}"
            )
        if not (math.isfinite(self.velocity) and self.velocity > 0):
            raise InvalidParameterError(
                f"velocity must be positive and finite, got {self.velocity!r}"
            )
        if self.override_lifetime is not None and not (
            math.isfinite(self.override_lifetime) and self.override_lifetime > 0
        ):
            raise InvalidParameterError(
                f"override lifetime must be positive and finite, got {self.override_lifetime!r}"
            )


@dataclass(frozen=True)
class CENode:
    """Collective excitation: member clocks bound by one coupling energy."""

    id: str
    members: tuple[str, ...]
    coupling_strength: float

    def __post_init__(self) -> None:
        if not self.id:
            raise InvalidParameterError("collective node id must be non-empty")
        members = tuple(self.members)
        if not members:
            raise InvalidParameterError("collective node needs at least one member")
        if len(set(members)) != len(members):
            raise InvalidParameterError(f"duplicate members in {self.id!r}")
        object.__setattr__(self, "members", members)
        if not (math.isfinite(self.coupling_strength) and self.coupling_strength > 0):
            raise InvalidParameterError(
                f"coupling strength must be positive and finite, got {self.coupling_strength!r}"
            )


@dataclass(frozen=True)
class SENPath:
    """Sequential chain of (node, outgoing channel) hops.

    Only the final hop may omit its channel; that is how a path ends on a
    node instead of mid-flight."""

    id: str
    hops: tuple[tuple[str, Optional[str]], ...]

    def __post_init__(self) -> None:
        if not self.id:
            raise InvalidParameterError("path id must be non-empty")
        hops = tuple((str(n), c if c is None else str(c)) for n, c in self.hops)
        if not hops:
            raise InvalidParameterError("path needs at least one hop")
        for node, channel in hops[:-1]:
            if channel is None:
                raise InvalidParameterError(
                    f"path {self.id!r}: only the last hop may omit its channel"
                )
        object.__setattr__(self, "hops", hops)


@dataclass(frozen=True, eq=False)
class Network:
    nodes: dict
    channels: dict
    cens: dict
    units: UnitSystem
    outgoing: dict  # node id -> tuple of channel ids, sorted

    @classmethod
    def build(
        cls,
        nodes: Iterable[ClockNode],
        channels: Iterable[SignalChannel] = (),
        cens: Iterable[CENode] = (),
        units: Optional[UnitSystem] = None,
    ) -> "Network":
        units = units if units is not None else UnitSystem.natural()
        node_map: dict = {}
        for node in nodes:
            if node.id in node_map:
                raise TopologyError(f"duplicate node id {node.id!r}")
            node_map[node.id] = node
        channel_map: dict = {}
        for ch in channels:
            if ch.id in channel_map:
                raise TopologyError(f"duplicate channel id {ch.id!r}")
            if ch.source not in node_map:
                raise TopologyError(f"channel {ch.id!r}: unknown source {ch.source!r}")
            if ch.target not in node_map:
                raise TopologyError(f"channel {ch.id!r}: unknown target {ch.target!r}")
            channel_map[ch.id] = ch
        cen_map: dict = {}
        for cen in cens:
            if cen.id in cen_map:
                raise TopologyError(f"duplicate collective node id {cen.id!r}")
            for member in cen.members:
                if member not in node_map:
                    raise TopologyError(f"collective {cen.id!r}: unknown member {member!r}")
            cen_map[cen.id] = cen
        outgoing = {nid: [] for nid in node_map}
        for ch in channel_map.values():
            outgoing[ch.source].append(ch.id)
        outgoing = {nid: tuple(sorted(chs)) for nid, chs in outgoing.items()}
        return cls(node_map, channel_map, cen_map, units, outgoing)


def effective_lifetime(node: ClockNode, units: UnitSystem) -> float:
    """Observed lifetime: the zeno factor stretches the bare hbar/gamma."""
    return (node.zeno_factor * units.hbar) / node.gamma


def transit_lifetime(channel: SignalChannel) -> float:
    """Pseudo-lifetime of a signal in flight: distance over velocity, or the
    explicit override when the channel pins one."""
    if channel.override_lifetime is not None:
        return channel.override_lifetime
    return channel.distance / channel.velocity


def is_superluminal(channel: SignalChannel, units: UnitSystem) -> bool:
    """True when the effective transit beats light over the same distance.
    Zero-distance channels never qualify."""
    if channel.distance <= 0:
        return False
    return transit_lifetime(channel) < channel.distance / units.c


def cen_lifetime(cen: CENode, units: UnitSystem) -> float:
    """Collective lifetime set by the shared coupling, not the members."""
    return units.hbar / cen.coupling_strength


def cen_composite_state(
    cen: CENode,
    member_states: Sequence[StateVector],
    signal_state: StateVector,
    max_dim: int = DIM_CAP,
) -> StateVector:
    """Member states joined left to right, then the shared signal factor."""
    if len(member_states) != len(cen.members):
        raise InvalidParameterError(
            f"collective {cen.id!r} has {len(cen.members)} members, "
            f"got {len(member_states)} states"
        )
    state = member_states[0]
    for s in member_states[1:]:
        state = tensor_product(state, s, max_dim)
    return tensor_product(state, signal_state, max_dim)


def sen_lifetime(path: SENPath, net: Network) -> float:
    """Total pseudo-lifetime along the chain: each node's effective lifetime
    plus each traversed channel's transit, summed left to right."""
    total = 0.0
    hops = path.hops
    for i, (node_id, channel_id) in enumerate(hops):
        node = net.nodes.get(node_id)
        if node is None:
            raise TopologyError(f"path {path.id!r}: unknown node {node_id!r}")
        total += effective_lifetime(node, net.units)
        if channel_id is None:
            continue
        channel = net.channels.get(channel_id)
        if channel is None:
            raise TopologyError(f"path {path.id!r}: unknown channel {channel_id!r}")
        if channel.source != node_id:
            raise TopologyError(
                f"path {path.id!r}: channel {channel_id!r} does not leave {node_id!r}"
            )
        if i + 1 < len(hops) and channel.target != hops[i + 1][0]:
            raise TopologyError(
                f"path {path.id!r}: channel {channel_id!r} does not reach {hops[i + 1][0]!r}"
            )
        total += transit_lifetime(channel)
    return total


def check_momentum_conservation(
    incoming: Sequence[Vec3],
    outgoing: Sequence[Vec3],
    tol: float = 1e-9,
) -> bool:
    """Componentwise balance of momentum sums within tol."""
    if not (math.isfinite(tol) and tol >= 0):
        raise InvalidParameterError(f"tolerance must be non-negative, got {tol!r}")
    total_in = [0.0, 0.0, 0.0]
    total_out = [0.0, 0.0, 0.0]
    for vec in incoming:
        for k, x in enumerate(_validate_vec3(vec, "momentum")):
            total_in[k] += x
    for vec in outgoing:
        for k, x in enumerate(_validate_vec3(vec, "momentum")):
            total_out[k] += x
    return all(abs(a - b) <= tol for a, b in zip(total_in, total_out))


def detect_cycles(net: Network) -> list:
    """Elementary directed cycles as node lists, each rotated to start at its
    smallest id, sorted lexicographically.

    Rooted DFS: for each root in id order, walk only nodes >= root and record
    returns to the root, so every cycle is found exactly once.  Exponential in
    the worst case, fine for the small control graphs this targets.
    """
    adjacency = {
        nid: sorted({net.channels[c].target for c in net.outgoing.get(nid, ())})
        for nid in net.nodes
    }
    cycles: list = []
    for root in sorted(net.nodes):
        stack = [root]
        on_path = {root}

        def walk(u: str) -> None:
            for v in adjacency[u]:
                if v == root:
                    cycles.append(list(stack))
                elif v > root and v not in on_path:
                    stack.append(v)
                    on_path.add(v)
                    walk(v)
                    stack.pop()
                    on_path.remove(v)

        walk(root)
    cycles.sort()
    return cycles
