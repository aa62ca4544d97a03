"""Batch experiments: INI config, seed x protocol runs, CSV/SVG artifacts.

Config files are INI (configparser) with sections [region], [population],
[radio], [election], [experiment]; every omitted key falls back to the
documented default, so an empty file is a valid full configuration. The
resolved config is echoed to ``manifest.ini`` and re-running an identical
config reproduces every artifact byte for byte.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace
from pathlib import Path
from statistics import median
from typing import Sequence

from .election import ElectionParams
from .engine import PROTOCOLS, make_engine
from .metrics import RoundRecord, SummaryStats, export_csv, read_csv, record_round, summarize
from .model import PopulationConfig, RegionConfig, deploy
from .radio import RadioParams
from .svgchart import write_line_chart

SUMMARY_HEADER = "protocol,seed,first_death_round,half_death_round,last_death_round,total_packets"
MANIFEST_NAME = "manifest.ini"
PLOT_NAMES = ("alive_nodes.svg", "residual_energy.svg", "cumulative_packets.svg")

# sentinel written for a milestone the run never reached
UNDEFINED_ROUND = -1


class ConfigError(ValueError):
    """Malformed or out-of-range experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    region: RegionConfig = RegionConfig()
    population: PopulationConfig = PopulationConfig()
    radio: RadioParams = RadioParams()
    election: ElectionParams = ElectionParams()
    protocols: tuple[str, ...] = PROTOCOLS
    seeds: tuple[int, ...] = (1,)
    max_rounds: int = 5000
    output_dir: str = "results"

    def __post_init__(self) -> None:
        if not self.protocols:
            raise ConfigError("experiment.protocols must name at least one protocol")
        for tag in self.protocols:
            if tag not in PROTOCOLS:
                raise ConfigError(
                    f"experiment.protocols: unknown protocol {tag!r}; expected one of {PROTOCOLS}"
                )
        if not self.seeds:
            raise ConfigError("experiment.seeds must contain at least one seed")
        if self.max_rounds < 1:
            raise ConfigError("experiment.max_rounds must be >= 1")


_SCHEMA = {
    "region": ("side_m", "bs_x", "bs_y"),
    "population": ("n", "m_fraction", "alpha", "e0"),
    "radio": ("e_elec", "eps_fs", "eps_mp", "e_da", "d0", "msg_bits"),
    "election": ("p_opt", "cluster_radius_m"),
    "experiment": ("protocols", "seeds", "max_rounds", "output_dir"),
}


def _getter(parser: configparser.ConfigParser):
    def get(section: str, key: str, cast, default):
        if not parser.has_option(section, key):
            return default
        raw = parser.get(section, key)
        try:
            return cast(raw)
        except ValueError:
            raise ConfigError(f"{section}.{key}: cannot parse value {raw!r}") from None

    return get


def _parse_seeds(raw: str) -> tuple[int, ...]:
    return tuple(int(part.strip()) for part in raw.split(",") if part.strip())


def _parse_protocols(raw: str) -> tuple[str, ...]:
    return tuple(part.strip().lower() for part in raw.split(",") if part.strip())


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse and validate a config file; errors name the offending key."""
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from None

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown config key {section}.{key}")

    get = _getter(parser)
    defaults = ExperimentConfig()
    try:
        region = RegionConfig(
            side_m=get("region", "side_m", float, defaults.region.side_m),
            bs_position=(
                get("region", "bs_x", float, defaults.region.bs_position[0]),
                get("region", "bs_y", float, defaults.region.bs_position[1]),
            ),
        )
        population = PopulationConfig(
            n=get("population", "n", int, defaults.population.n),
            m_fraction=get("population", "m_fraction", float, defaults.population.m_fraction),
            alpha=get("population", "alpha", float, defaults.population.alpha),
            e0=get("population", "e0", float, defaults.population.e0),
        )
        radio = RadioParams(
            e_elec=get("radio", "e_elec", float, defaults.radio.e_elec),
            eps_fs=get("radio", "eps_fs", float, defaults.radio.eps_fs),
            eps_mp=get("radio", "eps_mp", float, defaults.radio.eps_mp),
            e_da=get("radio", "e_da", float, defaults.radio.e_da),
            d0=get("radio", "d0", float, defaults.radio.d0),
            msg_bits=get("radio", "msg_bits", int, defaults.radio.msg_bits),
        )
        election = ElectionParams(
            p_opt=get("election", "p_opt", float, defaults.election.p_opt),
            alpha=population.alpha,
            m_fraction=population.m_fraction,
            cluster_radius_m=get(
                "election", "cluster_radius_m", float, defaults.election.cluster_radius_m
            ),
        )
        return ExperimentConfig(
            region=region,
            population=population,
            radio=radio,
            election=election,
            protocols=get("experiment", "protocols", _parse_protocols, defaults.protocols),
            seeds=get("experiment", "seeds", _parse_seeds, defaults.seeds),
            max_rounds=get("experiment", "max_rounds", int, defaults.max_rounds),
            output_dir=get("experiment", "output_dir", str, defaults.output_dir),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        # dataclass invariants already name their key, e.g. "population.e0 must be > 0"
        raise ConfigError(str(exc)) from None


def save_config(config: ExperimentConfig, path: str | Path) -> None:
    """Write the resolved config as INI; floats use repr so values round-trip exactly."""
    region, pop, radio, election = config.region, config.population, config.radio, config.election
    lines = [
        "[region]",
        f"side_m = {region.side_m!r}",
        f"bs_x = {region.bs_position[0]!r}",
        f"bs_y = {region.bs_position[1]!r}",
        "",
        "[population]",
        f"n = {pop.n}",
        f"m_fraction = {pop.m_fraction!r}",
        f"alpha = {pop.alpha!r}",
        f"e0 = {pop.e0!r}",
        "",
        "[radio]",
        f"e_elec = {radio.e_elec!r}",
        f"eps_fs = {radio.eps_fs!r}",
        f"eps_mp = {radio.eps_mp!r}",
        f"e_da = {radio.e_da!r}",
        f"d0 = {radio.d0!r}",
        f"msg_bits = {radio.msg_bits}",
        "",
        "[election]",
        f"p_opt = {election.p_opt!r}",
        f"cluster_radius_m = {election.cluster_radius_m!r}",
        "",
        "[experiment]",
        f"protocols = {','.join(config.protocols)}",
        f"seeds = {','.join(str(s) for s in config.seeds)}",
        f"max_rounds = {config.max_rounds}",
        f"output_dir = {config.output_dir}",
        "",
    ]
    Path(path).write_text("\n".join(lines), encoding="utf-8")


def run_single(
    config: ExperimentConfig, protocol: str, seed: int, immortal: bool = False
) -> tuple[list[RoundRecord], SummaryStats]:
    """One (protocol, seed) run: deployment, full round loop, records, summary.

    The deployment stream is seeded by ``seed`` alone, so all protocols see
    the identical network for a given seed; the protocol stream is hashed
    from (seed, protocol tag).
    """
    network = deploy(config.region, config.population, seed)
    engine = make_engine(
        protocol, network, config.radio, config.election, seed=seed, immortal=immortal
    )
    records: list[RoundRecord] = []
    for r in range(config.max_rounds):
        if not engine.any_alive():
            break
        outcome = engine.run_round(r)
        records.append(record_round(outcome, engine.nodes))
    return records, summarize(records, n=config.population.n)


def round_csv_name(protocol: str, seed: int) -> str:
    return f"{protocol}_seed{seed}.csv"


def _summary_row(protocol: str, seed: int, stats: SummaryStats) -> str:
    def cell(value: int | None) -> int:
        return UNDEFINED_ROUND if value is None else value

    return (
        f"{protocol},{seed},{cell(stats.first_node_death_round)},"
        f"{cell(stats.half_node_death_round)},{cell(stats.last_node_death_round)},"
        f"{stats.total_packets}"
    )


def run_batch(config: ExperimentConfig) -> list[Path]:
    """Run every (protocol, seed) pair and write the artifact set.

    Produces one round CSV per run, summary.csv, and manifest.ini in
    ``config.output_dir``. On any failure every file written so far is
    removed before the error propagates.
    """
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        summary_lines = [SUMMARY_HEADER]
        for protocol in config.protocols:
            for seed in config.seeds:
                records, stats = run_single(config, protocol, seed)
                path = out / round_csv_name(protocol, seed)
                path.write_bytes(export_csv(records))
                written.append(path)
                summary_lines.append(_summary_row(protocol, seed, stats))
        summary_path = out / "summary.csv"
        summary_path.write_text("\n".join(summary_lines) + "\n", encoding="ascii")
        written.append(summary_path)
        manifest_path = out / MANIFEST_NAME
        save_config(config, manifest_path)
        written.append(manifest_path)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


def read_summary(path: str | Path) -> list[tuple[str, int, int, int, int, int]]:
    """Parse summary.csv rows to (protocol, seed, fnd, hnd, lnd, packets)."""
    lines = Path(path).read_text(encoding="ascii").splitlines()
    if not lines or lines[0] != SUMMARY_HEADER:
        raise ValueError(f"unrecognized summary header in {path}")
    rows = []
    for line in lines[1:]:
        protocol, seed, fnd, hnd, lnd, packets = line.split(",")
        rows.append((protocol, int(seed), int(fnd), int(hnd), int(lnd), int(packets)))
    return rows


def _median_series(per_seed: Sequence[Sequence[float]], pad_last: bool) -> list[float]:
    """Per-round median across seeds; shorter runs are padded to the longest
    horizon with zero (dead network) or their final value (cumulative series)."""
    horizon = max(len(s) for s in per_seed)
    padded = []
    for s in per_seed:
        if len(s) < horizon:
            filler = (s[-1] if pad_last and s else 0.0)
            s = list(s) + [filler] * (horizon - len(s))
        padded.append(s)
    return [median(s[t] for s in padded) for t in range(horizon)]


def render_plots(output_dir: str | Path) -> list[Path]:
    """Render the three comparison charts from an existing batch directory.

    Each chart carries one line per protocol, the per-round median across
    that protocol's seeds. Output is deterministic for fixed input.
    """
    out = Path(output_dir)
    rows = read_summary(out / "summary.csv")
    histories: dict[str, list[list[RoundRecord]]] = {}
    for protocol, seed, *_ in rows:
        records = read_csv((out / round_csv_name(protocol, seed)).read_bytes())
        if not records:
            raise ValueError(f"empty round history for {protocol} seed {seed}")
        histories.setdefault(protocol, []).append(records)

    alive_series = []
    residual_series = []
    packet_series = []
    for protocol, runs in histories.items():
        alive_series.append(
            (protocol, _median_series([[r.alive_total for r in run] for run in runs], False))
        )
        residual_series.append(
            (protocol, _median_series([[r.total_residual_energy for r in run] for run in runs], False))
        )
        cumulative = []
        for run in runs:
            total = 0
            cumulative.append([total := total + r.packets_to_bs for r in run])
        packet_series.append((protocol, _median_series(cumulative, True)))

    paths = [out / name for name in PLOT_NAMES]
    write_line_chart(paths[0], "Alive nodes per round", "round", "alive nodes", alive_series)
    write_line_chart(paths[1], "Residual energy per round", "round", "energy (J)", residual_series)
    write_line_chart(paths[2], "Cumulative packets delivered", "round", "packets", packet_series)
    return paths


def apply_overrides(
    config: ExperimentConfig,
    protocols: Sequence[str] | None = None,
    seeds: Sequence[int] | None = None,
    max_rounds: int | None = None,
) -> ExperimentConfig:
    """Quick-experiment overrides used by the command line."""
    if protocols is not None:
        config = replace(config, protocols=tuple(protocols))
    if seeds is not None:
        config = replace(config, seeds=tuple(seeds))
    if max_rounds is not None:
        config = replace(config, max_rounds=max_rounds)
    return config
