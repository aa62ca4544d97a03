"""Cluster-head election: thresholds, weighted probabilities, epoch bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .model import Node, NodeKind, Point, distance


@dataclass(frozen=True)
class ElectionParams:
    """Election inputs shared by all protocols."""

    p_opt: float = 0.1
    alpha: float = 1.0
    m_fraction: float = 0.1
    cluster_radius_m: float = 25.0

    def __post_init__(self) -> None:
        if not 0.0 < self.p_opt < 1.0:
            raise ValueError("election.p_opt must be in (0, 1)")
        if self.cluster_radius_m <= 0:
            raise ValueError("election.cluster_radius_m must be > 0")
        if self.alpha < 0:
            raise ValueError("election.alpha must be >= 0")
        if not 0.0 <= self.m_fraction <= 1.0:
            raise ValueError("election.m_fraction must be in [0, 1]")


def epoch_length(p: float) -> int:
    """Rounds per service epoch: ceil(1/p), with a guard so float noise in 1/p
    (e.g. 1/(1/11) = 11.000000000000002) does not stretch an exact epoch."""
    if p <= 0:
        raise ValueError("p must be > 0")
    if p >= 1:
        return 1
    inv = 1.0 / p
    nearest = round(inv)
    if abs(inv - nearest) <= 1e-9 * inv:
        return int(nearest)
    return math.ceil(inv)


def emeedp_threshold(p_i: float, r: int, in_g: bool) -> float:
    """Escalating election threshold for a per-node probability p_i.

    Zero outside the eligible set or for p_i = 0; clamped to 1 when the
    denominator reaches or crosses zero at the end of an epoch.
    """
    if not in_g or p_i <= 0.0:
        return 0.0
    if p_i >= 1.0:
        return 1.0
    denom = 1.0 - p_i * (r % epoch_length(p_i))
    if denom <= p_i:
        return 1.0
    return p_i / denom


def leach_threshold(p: float, r: int, in_g: bool) -> float:
    """Election threshold for a uniform probability p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    return emeedp_threshold(p, r, in_g)


def weighted_probabilities(e: ElectionParams) -> tuple[float, float]:
    """(normal, advanced) election probabilities derived from p_opt, alpha, m."""
    p_nrm = e.p_opt / (1.0 + e.alpha * e.m_fraction)
    return p_nrm, p_nrm * (1.0 + e.alpha)


def k_opt_literal(side_m: float, d_to_bs: float) -> float:
    """Naive cluster-count ratio side/d^2.

    Dimensionally odd and sub-1 for typical parameters; kept for reference
    only. The engines take p_opt from configuration instead.
    """
    if side_m <= 0:
        raise ValueError("side_m must be > 0")
    if d_to_bs <= 0:
        raise ValueError("d_to_bs must be > 0")
    return side_m / (d_to_bs * d_to_bs)


def p_opt_from_k(k_opt: float, n: int) -> float:
    """Per-node election probability that yields k_opt heads among n nodes."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return k_opt / n


def emeedp_probability(e: ElectionParams, node: Node) -> float:
    """Per-node election probability: residual-energy-weighted for normal
    nodes, the fixed advanced weight regardless of residual otherwise."""
    scale = 1.0 + e.alpha * e.m_fraction
    if node.kind is NodeKind.ADVANCED:
        return e.p_opt * (1.0 + e.alpha) / scale
    return e.p_opt / (scale * node.initial_energy) * node.residual_energy


@dataclass(frozen=True)
class EpochTracker:
    """Per-class service epochs driving the per-node G-set flags."""

    epoch_normal: int
    epoch_advanced: int

    @classmethod
    def uniform(cls, p: float) -> "EpochTracker":
        n = epoch_length(p)
        return cls(n, n)

    @classmethod
    def for_probabilities(cls, p_nrm: float, p_adv: float) -> "EpochTracker":
        return cls(epoch_length(p_nrm), epoch_length(p_adv))

    def epoch_for(self, node: Node) -> int:
        return self.epoch_advanced if node.kind is NodeKind.ADVANCED else self.epoch_normal

    def advance(self, node: Node) -> None:
        """Round-start tick: a past head re-enters G once its class epoch completes."""
        if node.in_g_set:
            return
        node.rounds_since_ch += 1
        if node.rounds_since_ch >= self.epoch_for(node):
            node.in_g_set = True

    def mark_elected(self, node: Node) -> None:
        node.in_g_set = False
        node.rounds_since_ch = 0


def thresholds_array(p: np.ndarray, r: int, in_g: np.ndarray) -> np.ndarray:
    """Vectorized emeedp_threshold over probability and G-membership arrays."""
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    live = in_g & (p > 0.0)
    saturated = live & (p >= 1.0)
    out[saturated] = 1.0
    scale = live & ~saturated
    if np.any(scale):
        ps = p[scale]
        inv = 1.0 / ps
        nearest = np.rint(inv)
        ni = np.where(np.abs(inv - nearest) <= 1e-9 * inv, nearest, np.ceil(inv))
        denom = 1.0 - ps * (r % ni.astype(np.int64))
        clamped = denom <= ps
        out[scale] = np.where(clamped, 1.0, ps / np.where(clamped, 1.0, denom))
    return out


def elect(nodes: Sequence[Node], probabilities: Mapping[int, float], r: int, rng) -> list[int]:
    """Candidate cluster heads for round r.

    One uniform draw per alive node, consumed in ascending id order whether
    or not the node is in G; this fixed draw order is the determinism
    contract for a round. Per-node results equal
    ``rng.random() < emeedp_threshold(p_i, r, in_g)``.
    """
    alive = [node for node in nodes if node.alive]
    if not alive:
        return []
    draws = [rng.random() for _ in alive]
    n = len(alive)
    p = np.fromiter((probabilities[node.id] for node in alive), dtype=float, count=n)
    in_g = np.fromiter((node.in_g_set for node in alive), dtype=bool, count=n)
    hits = np.asarray(draws) < thresholds_array(p, r, in_g)
    return [node.id for node, hit in zip(alive, hits) if hit]


def suppress_overlaps(
    candidates: Iterable[int],
    positions: Sequence[Point],
    energies: Sequence[float],
    cluster_radius_m: float,
) -> list[int]:
    """Greedy non-overlap filter, richest candidate first (ties to the lower id).

    Confirmed heads end up pairwise >= cluster_radius_m apart. Demoted
    candidates stay ordinary nodes and keep their G-set membership.
    """
    order = sorted(candidates, key=lambda cid: (-energies[cid], cid))
    confirmed: list[int] = []
    for cid in order:
        pos = positions[cid]
        if all(distance(pos, positions[other]) >= cluster_radius_m for other in confirmed):
            confirmed.append(cid)
    return sorted(confirmed)
