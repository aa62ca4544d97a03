"""Per-round records, lifetime summaries, and the CSV serialization contract."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .engine import RoundOutcome
from .model import Node

CSV_HEADER = (
    "round,alive_total,alive_normal,alive_advanced,ch_count,"
    "relayed_count,packets_to_bs,total_residual_energy,energy_spent"
)


@dataclass(frozen=True)
class RoundRecord:
    """One round's metrics, taken after the round's deaths were applied."""

    round: int
    alive_total: int
    alive_normal: int
    alive_advanced: int
    ch_count: int
    relayed_count: int
    packets_to_bs: int
    total_residual_energy: float
    energy_spent: float


@dataclass(frozen=True)
class SummaryStats:
    """Lifetime milestones of one run; None marks a milestone not reached."""

    first_node_death_round: int | None
    half_node_death_round: int | None
    last_node_death_round: int | None
    total_packets: int
    rounds_simulated: int


def record_round(outcome: RoundOutcome, nodes: Iterable[Node]) -> RoundRecord:
    """Project one outcome plus the post-round node states into a record."""
    alive_normal = 0
    alive_advanced = 0
    residual = 0.0
    residuals = []
    for node in nodes:
        residuals.append(node.residual_energy)
        if node.alive:
            if node.is_advanced:
                alive_advanced += 1
            else:
                alive_normal += 1
    residual = math.fsum(residuals)
    return RoundRecord(
        round=outcome.round_index,
        alive_total=alive_normal + alive_advanced,
        alive_normal=alive_normal,
        alive_advanced=alive_advanced,
        ch_count=len(outcome.ch_ids),
        relayed_count=sum(1 for rd in outcome.relays if rd.relay_id is not None),
        packets_to_bs=outcome.packets_to_bs,
        total_residual_energy=residual,
        energy_spent=math.fsum(outcome.energy_spent.values()),
    )


def summarize(history: Sequence[RoundRecord], n: int | None = None) -> SummaryStats:
    """Scan a history for the first/half/last death milestones and totals.

    ``n`` is the population size; it defaults to the first record's alive
    count, which is exact whenever no node died in the very first round.
    """
    if not history:
        raise ValueError("history is empty")
    baseline = n if n is not None else history[0].alive_total
    first = next((rec.round for rec in history if rec.alive_total < baseline), None)
    half = next((rec.round for rec in history if rec.alive_total <= baseline / 2), None)
    last = next((rec.round for rec in history if rec.alive_total == 0), None)
    return SummaryStats(
        first_node_death_round=first,
        half_node_death_round=half,
        last_node_death_round=last,
        total_packets=sum(rec.packets_to_bs for rec in history),
        rounds_simulated=len(history),
    )


def export_csv(history: Sequence[RoundRecord]) -> bytes:
    """Serialize a history to CSV bytes: fixed column order, energies with 9
    significant digits, a single line feed after every row."""
    lines = [CSV_HEADER]
    for rec in history:
        lines.append(
            f"{rec.round},{rec.alive_total},{rec.alive_normal},{rec.alive_advanced},"
            f"{rec.ch_count},{rec.relayed_count},{rec.packets_to_bs},"
            f"{rec.total_residual_energy:.9g},{rec.energy_spent:.9g}"
        )
    return ("\n".join(lines) + "\n").encode("ascii")


def read_csv(data: bytes) -> list[RoundRecord]:
    """Parse bytes produced by export_csv back into records."""
    lines = data.decode("ascii").splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unrecognized round-history CSV header")
    records = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 9:
            raise ValueError(f"malformed round-history row: {line!r}")
        records.append(
            RoundRecord(
                round=int(parts[0]),
                alive_total=int(parts[1]),
                alive_normal=int(parts[2]),
                alive_advanced=int(parts[3]),
                ch_count=int(parts[4]),
                relayed_count=int(parts[5]),
                packets_to_bs=int(parts[6]),
                total_residual_energy=float(parts[7]),
                energy_spent=float(parts[8]),
            )
        )
    return records
