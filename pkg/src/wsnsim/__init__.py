"""Deterministic round-based simulator for heterogeneous WSN clustering
protocols: EMEEDP with residual-weighted election, sleep deferral and
advanced-node relaying, plus LEACH and SEP baselines."""

from .election import (
    ElectionParams,
    EpochTracker,
    elect,
    emeedp_probability,
    emeedp_threshold,
    epoch_length,
    k_opt_literal,
    leach_threshold,
    p_opt_from_k,
    suppress_overlaps,
    weighted_probabilities,
)
from .engine import (
    EMEEDP,
    LEACH,
    PROTOCOLS,
    SEP,
    ClusterAssignment,
    EmeedpEngine,
    LeachEngine,
    ProtocolEngine,
    RelayDecision,
    RoundOutcome,
    SepEngine,
    SimulationComplete,
    join_or_defer,
    make_engine,
    run_simulation,
    select_relay,
    stream_seed,
)
from .experiment import (
    ConfigError,
    ExperimentConfig,
    apply_overrides,
    load_config,
    render_plots,
    run_batch,
    run_single,
    save_config,
)
from .metrics import (
    RoundRecord,
    SummaryStats,
    export_csv,
    read_csv,
    record_round,
    summarize,
)
from .model import (
    Network,
    Node,
    NodeKind,
    PopulationConfig,
    RegionConfig,
    avg_distance_to_bs,
    deploy,
    distance,
    total_initial_energy,
)
from .radio import (
    RadioParams,
    aggregation_energy,
    ch_round_energy,
    cluster_round_energy,
    crossover_distance,
    network_round_energy,
    non_ch_round_energy,
    rx_energy,
    tx_energy,
    tx_energy_array,
)

__version__ = "0.1.0"
