import io
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcsim.core import (
    CausalityError,
    InteractionKind,
    InvalidParameterError,
    PLANCK_TIME_S,
    TopologyError,
    UnitSystem,
)
from fcsim.engine import (
    EventKind,
    RunConfig,
    Simulator,
    SplitMix64,
    bigbang_scenario,
    decay_delay,
    run,
    write_event_log,
)
from fcsim.network import ClockNode, Network, SignalChannel


def node(nid, gamma=1.0, **kw):
    return ClockNode(nid, gamma, InteractionKind.EM, **kw)


def chain_net():
    return Network.build(
        [node("A"), node("B", 2.0)],
        [SignalChannel("c1", "A", "B", 2.0, 1.0)],
    )


def rows(log):
    return [(e.time, e.kind, e.node, e.signal, e.channel) for e in log.events]


def test_chain_worked_example():
    log = run(chain_net(), RunConfig(), [("A", 0.0)])
    assert rows(log) == [
        (0.0, EventKind.EXCITATION, "A", None, None),
        (1.0, EventKind.DECAY, "A", None, None),
        (1.0, EventKind.EMISSION, "A", 0, "c1"),
        (3.0, EventKind.DETECTION, "B", 0, "c1"),
        (3.5, EventKind.DECAY, "B", None, None),
    ]
    assert [e.seq for e in log.events] == [0, 1, 2, 3, 4]
    assert log.termination == "queue-empty"


def test_tie_break_is_time_then_node_then_entry():
    # both nodes excited at the same instant: A pops first by id
    net = Network.build([node("B"), node("A")])
    log = run(net, RunConfig(), [("B", 0.0), ("A", 0.0)])
    assert [(e.kind, e.node) for e in log.events[:2]] == [
        (EventKind.EXCITATION, "A"),
        (EventKind.EXCITATION, "B"),
    ]


def test_re_excitation_absorbed():
    net = Network.build([node("A")])
    log = run(net, RunConfig(), [("A", 0.0), ("A", 0.5)])
    kinds = [(e.time, e.kind) for e in log.events]
    assert kinds == [
        (0.0, EventKind.EXCITATION),
        (0.5, EventKind.EXCITATION),  # logged, but absorbed
        (1.0, EventKind.DECAY),
    ]


def test_detection_on_excited_node_absorbed():
    net = Network.build(
        [node("A"), node("B", 0.2)],
        [
            SignalChannel("c1", "A", "B", 1.0, 1.0),
            SignalChannel("c2", "A", "B", 2.0, 1.0),
        ],
    )
    log = run(net, RunConfig(), [("A", 0.0)])
    detections = [e for e in log.events if e.kind == EventKind.DETECTION]
    decays_b = [e for e in log.events if e.kind == EventKind.DECAY and e.node == "B"]
    assert [d.time for d in detections] == [2.0, 3.0]
    # second arrival lands on an excited node: one decay only, from the first
    assert [d.time for d in decays_b] == [7.0]


def test_emission_split_shares_budget():
    net = Network.build(
        [node("A", 3.0, momentum=(3.0, 0.0, -6.0)), node("B"), node("C"), node("D")],
        [
            SignalChannel("cb", "A", "B", 1.0, 1.0),
            SignalChannel("cc", "A", "C", 1.0, 1.0),
            SignalChannel("cd", "A", "D", 1.0, 1.0),
        ],
    )
    log = run(net, RunConfig(), [("A", 0.0)])
    assert [s.channel for s in log.signals] == ["cb", "cc", "cd"]
    assert [s.id for s in log.signals] == [0, 1, 2]
    for s in log.signals:
        assert s.energy == 1.0
        assert s.momentum == (1.0, 0.0, -2.0)
    assert abs(sum(s.energy for s in log.signals) - 3.0) <= 1e-12 * 3.0


def test_zeno_factor_stretches_decay():
    net = Network.build([node("A", 1.0, zeno_factor=10.0)])
    log = run(net, RunConfig(), [("A", 0.0)])
    assert rows(log)[1] == (10.0, EventKind.DECAY, "A", None, None)


def test_override_lifetime_sets_arrival():
    net = Network.build(
        [node("A"), node("B")],
        [SignalChannel("c1", "A", "B", 2.0, 1.0, override_lifetime=0.25)],
    )
    log = run(net, RunConfig(), [("A", 0.0)])
    detection = [e for e in log.events if e.kind == EventKind.DETECTION][0]
    assert detection.time == 1.25


def test_termination_reasons():
    log = run(chain_net(), RunConfig(max_events=2), [("A", 0.0)])
    assert len(log.events) == 2 and log.termination == "max-events"
    log = run(chain_net(), RunConfig(until=1.5), [("A", 0.0)])
    assert log.termination == "horizon"
    assert [e.time for e in log.events] == [0.0, 1.0, 1.0]  # detection at 3.0 unprocessed
    log = run(chain_net(), RunConfig(), [])
    assert log.events == () and log.termination == "queue-empty"


def test_scheduling_guards():
    sim = Simulator(chain_net(), RunConfig())
    with pytest.raises(TopologyError):
        sim.schedule_excitation("nope", 0.0)
    with pytest.raises(CausalityError):
        sim.schedule_excitation("A", -1.0)
    sim.schedule_excitation("A", 0.0)
    while sim.step():
        pass
    with pytest.raises(CausalityError):
        sim.schedule_excitation("A", 0.5)  # simulation time is already 3.5


def test_units_must_match():
    with pytest.raises(InvalidParameterError):
        run(chain_net(), RunConfig(units=UnitSystem.si()), [])


def test_run_config_validation():
    with pytest.raises(InvalidParameterError):
        RunConfig(mode="fuzzy")
    with pytest.raises(InvalidParameterError):
        RunConfig(max_events=0)
    with pytest.raises(InvalidParameterError):
        RunConfig(until=-1.0)
    with pytest.raises(InvalidParameterError):
        RunConfig(seed="0")


def test_splitmix64_reference_vector():
    # first five outputs for seed 0 from the reference implementation
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(5)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
        0xF88BB8A8724C81EC,
        0x1B39896A51A8749B,
    ]


def test_splitmix64_doubles_open_interval():
    rng = SplitMix64(12345)
    for _ in range(10000):
        u = rng.next_double()
        assert 0.0 < u < 1.0


def test_seed_is_masked_to_64_bits():
    a = SplitMix64(-1)
    b = SplitMix64((1 << 64) - 1)
    assert a.next_u64() == b.next_u64()


def test_decay_delay_modes():
    nat = UnitSystem.natural()
    n = node("A", 2.0)
    assert decay_delay(n, nat, "deterministic") == 0.5
    rng = SplitMix64(0)
    d1 = decay_delay(n, nat, "stochastic", rng)
    rng2 = SplitMix64(0)
    d2 = decay_delay(n, nat, "stochastic", rng2)
    assert d1 == d2 > 0
    with pytest.raises(InvalidParameterError):
        decay_delay(n, nat, "stochastic")
    with pytest.raises(InvalidParameterError):
        decay_delay(n, nat, "fuzzy", rng)


def test_exponential_mean_matches_lifetime():
    nat = UnitSystem.natural()
    n = node("A", 1.0)
    rng = SplitMix64(42)
    draws = [decay_delay(n, nat, "stochastic", rng) for _ in range(20000)]
    mean = sum(draws) / len(draws)
    assert abs(mean - 1.0) < 4 / math.sqrt(len(draws))
    assert min(draws) > 0.0


def test_tiny_delay_still_advances_time():
    # delay far below the resolution of the current time must not stall
    net = Network.build([ClockNode("A", 1e30, InteractionKind.EM)])
    sim = Simulator(net, RunConfig())
    sim.schedule_excitation("A", 1.0)
    sim.step()
    decay = sim.step()
    assert decay.kind == EventKind.DECAY
    assert decay.time == math.nextafter(1.0, math.inf)


def test_stochastic_replay_is_deterministic():
    net = Network.build(
        [node("A")],
        [SignalChannel("loop", "A", "A", 0.0, 1.0)],
    )
    cfg = RunConfig(mode="stochastic", seed=9, max_events=100)
    a = run(net, cfg, [("A", 0.0)])
    b = run(net, cfg, [("A", 0.0)])
    assert a.events == b.events
    other = run(net, RunConfig(mode="stochastic", seed=10, max_events=100), [("A", 0.0)])
    assert a.events != other.events


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 64 - 1))
def test_replay_property_over_seeds(seed):
    net = Network.build(
        [node("A"), node("B", 3.0)],
        [
            SignalChannel("ab", "A", "B", 0.5, 1.0),
            SignalChannel("ba", "B", "A", 0.25, 1.0),
        ],
    )
    cfg = RunConfig(mode="stochastic", seed=seed, max_events=60)
    assert run(net, cfg, [("A", 0.0)]).events == run(net, cfg, [("A", 0.0)]).events


def test_bigbang_natural():
    net, excitations = bigbang_scenario(4)
    assert excitations == (("root", 0.0),)
    assert sorted(net.nodes) == ["d1", "d2", "d3", "d4", "root"]
    log = run(net, RunConfig(units=net.units), excitations)
    decay_root = [e for e in log.events if e.kind == EventKind.DECAY and e.node == "root"]
    assert decay_root[0].time == 1.0
    detections = [e for e in log.events if e.kind == EventKind.DETECTION]
    assert [(e.node, e.time) for e in detections] == [
        ("d1", 2.0), ("d2", 3.0), ("d3", 4.0), ("d4", 5.0),
    ]


def test_bigbang_si_root_decay_exact():
    net, excitations = bigbang_scenario(2, UnitSystem.si())
    log = run(net, RunConfig(units=net.units), excitations)
    decay_root = [e for e in log.events if e.kind == EventKind.DECAY and e.node == "root"]
    assert decay_root[0].time == PLANCK_TIME_S


def test_bigbang_k_validation():
    with pytest.raises(InvalidParameterError):
        bigbang_scenario(0)
    with pytest.raises(InvalidParameterError):
        bigbang_scenario(True)


def test_event_log_export_format():
    log = run(chain_net(), RunConfig(seed=3), [("A", 0.0)])
    buf = io.StringIO()
    write_event_log(log, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "# seed=3 mode=deterministic units=natural"
    assert lines[1] == "0\t0\texcitation\tA\t-\t-"
    assert lines[3].split("\t") == ["2", "1", "emission", "A", "0", "c1"]
    assert len(lines) == 1 + len(log.events)
    # times round-trip through the printed field
    for line, ev in zip(lines[1:], log.events):
        assert float(line.split("\t")[1]) == ev.time
