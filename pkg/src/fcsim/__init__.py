"""Discrete-event simulator for causal networks of decaying clock nodes.

The pieces, in dependency order: ``core`` (constants, units, lifetime law),
``qstate`` (state vectors and the detection triplet), ``network`` (nodes,
channels, groupings, lifetime algebra), ``engine`` (the event loop),
``chronology`` (tick labels and arrows of time), ``analysis`` (estimators and
summaries), ``scenario``/``cli`` (text front ends).
"""

from .core import (
    C_SI,
    HBAR_SI,
    PLANCK_TIME_S,
    CapacityError,
    CausalityError,
    FcsimError,
    InsufficientDataError,
    IntegrityError,
    InteractionKind,
    InvalidParameterError,
    InvalidStateError,
    TopologyError,
    UnitSystem,
    lifetime_from_gamma,
)
from .qstate import (
    DIM_CAP,
    DisentanglementRecord,
    Qubit,
    StateVector,
    TimeLabelState,
    TripletState,
    compose_induced,
    disentangle,
    make_qubit,
    make_triplet,
    tensor_product,
)
from .network import (
    CENode,
    ClockNode,
    Network,
    SENPath,
    SignalChannel,
    cen_composite_state,
    cen_lifetime,
    check_momentum_conservation,
    detect_cycles,
    effective_lifetime,
    is_superluminal,
    sen_lifetime,
    transit_lifetime,
)
from .engine import (
    EventKind,
    EventLog,
    RunConfig,
    SignalRecord,
    SimEvent,
    Simulator,
    SplitMix64,
    bigbang_scenario,
    decay_delay,
    run,
    write_event_log,
)
from .chronology import (
    ArrowMap,
    CausalityReport,
    LabeledEvent,
    QatPointer,
    StandardClock,
    audit_causality,
    build_arrow_map,
    build_timeline,
    cat_interval,
    extract_time,
    label_event,
    qat_pointers,
    tick_label,
    write_arrow_map,
    write_timeline,
)
from .analysis import (
    LifetimeEstimate,
    SuperluminalChannel,
    UnificationResult,
    estimate_lifetime,
    render_summary,
    superluminal_report,
    unify_lifetimes,
)
from .scenario import (
    Scenario,
    ScenarioError,
    build_network,
    parse_scenario,
    serialize_scenario,
    with_overrides,
)

__version__ = "0.1.0"
