"""Network model: deployment region, node population, and geometry."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from enum import Enum

Point = tuple[float, float]


class NodeKind(Enum):
    """Two-level energy heterogeneity: advanced nodes start with extra energy."""

    NORMAL = "normal"
    ADVANCED = "advanced"


def distance(a: Point, b: Point) -> float:
    """Euclidean distance in meters."""
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return math.sqrt(dx * dx + dy * dy)


@dataclass(frozen=True)
class RegionConfig:
    """Square deployment region with a stationary base station."""

    side_m: float = 100.0
    bs_position: Point = (50.0, 50.0)

    def __post_init__(self) -> None:
        if self.side_m <= 0:
            raise ValueError("region.side_m must be > 0")
        x, y = self.bs_position
        if not (0.0 <= x <= self.side_m and 0.0 <= y <= self.side_m):
            raise ValueError("region.bs_position must lie within the region")


@dataclass(frozen=True)
class PopulationConfig:
    """Node population: n nodes, a fraction m of them advanced with alpha extra energy."""

    n: int = 100
    m_fraction: float = 0.1
    alpha: float = 1.0
    e0: float = 0.5

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("population.n must be >= 1")
        if not 0.0 <= self.m_fraction <= 1.0:
            raise ValueError("population.m_fraction must be in [0, 1]")
        if self.alpha < 0:
            raise ValueError("population.alpha must be >= 0")
        if self.e0 <= 0:
            raise ValueError("population.e0 must be > 0")

    @property
    def advanced_count(self) -> int:
        # round to nearest, ties upward: the advanced fraction is treated as exact
        return int(math.floor(self.n * self.m_fraction + 0.5))

    @property
    def advanced_energy(self) -> float:
        return self.e0 * (1.0 + self.alpha)


@dataclass(slots=True)
class Node:
    """One sensor with its per-round protocol state."""

    id: int
    kind: NodeKind
    position: Point
    initial_energy: float
    residual_energy: float
    alive: bool = True
    sleep_rounds_remaining: int = 0
    uncovered_rounds: int = 0
    in_g_set: bool = True
    rounds_since_ch: int = 0

    def clone(self) -> "Node":
        return replace(self)

    @property
    def is_advanced(self) -> bool:
        return self.kind is NodeKind.ADVANCED


@dataclass(frozen=True)
class Network:
    """Deployed network. Treat as immutable; engines mutate private clones only."""

    region: RegionConfig
    nodes: tuple[Node, ...]
    rng_seed: int


def total_initial_energy(pop: PopulationConfig) -> float:
    """Total starting energy of the heterogeneous population: n * e0 * (1 + alpha*m)."""
    return pop.n * pop.e0 * (1.0 + pop.alpha * pop.m_fraction)


def avg_distance_to_bs(region: RegionConfig | float) -> float:
    """Expected head-to-sink distance for a square region with a central sink,
    0.765 * (side/2). Accepts a RegionConfig or a bare side length."""
    side = region.side_m if isinstance(region, RegionConfig) else float(region)
    return 0.765 * (side / 2.0)


def deploy(region: RegionConfig, pop: PopulationConfig, seed: int) -> Network:
    """Place nodes independently and uniformly in the square region.

    The first ``advanced_count`` ids are advanced; position draws are consumed
    as (x, y) pairs in id order from ``random.Random(seed)``, so a seed pins
    the network bit-for-bit on every platform.
    """
    rng = random.Random(seed)
    n_adv = pop.advanced_count
    nodes = []
    for i in range(pop.n):
        x = rng.uniform(0.0, region.side_m)
        y = rng.uniform(0.0, region.side_m)
        advanced = i < n_adv
        energy = pop.advanced_energy if advanced else pop.e0
        nodes.append(
            Node(
                id=i,
                kind=NodeKind.ADVANCED if advanced else NodeKind.NORMAL,
                position=(x, y),
                initial_energy=energy,
                residual_energy=energy,
            )
        )
    return Network(region=region, nodes=tuple(nodes), rng_seed=seed)
