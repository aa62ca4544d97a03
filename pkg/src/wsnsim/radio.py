"""First-order radio dissipation model and analytical per-round energy forms.

The transmit model switches between d^2 (free-space) and d^4 (multipath)
amplifier loss at the configured threshold distance d0. The analytical
cluster/network forms keep the free-space coefficient on the head-to-sink
term by construction, so the k-fold cluster identity holds exactly; the
simulation engines always charge transmissions through ``tx_energy`` and
its branch logic instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RadioParams:
    """Radio constants; defaults are the standard first-order model values."""

    e_elec: float = 50e-9        # J/bit, transceiver electronics
    eps_fs: float = 10e-12       # J/bit/m^2, free-space amplifier
    eps_mp: float = 0.0013e-12   # J/bit/m^4, multipath amplifier
    e_da: float = 5e-9           # J/bit/message, aggregation cost
    d0: float = 70.0             # m, path-loss branch switch distance
    msg_bits: int = 4000         # bits per message

    def __post_init__(self) -> None:
        for name in ("e_elec", "eps_fs", "eps_mp", "e_da", "d0", "msg_bits"):
            if getattr(self, name) <= 0:
                raise ValueError(f"radio.{name} must be > 0")


def crossover_distance(p: RadioParams) -> float:
    """Distance where the two amplifier terms would meet, sqrt(eps_fs/eps_mp).

    Reference only: the branch switch uses the configured d0, which is kept
    independent of this derived value.
    """
    return math.sqrt(p.eps_fs / p.eps_mp)


def tx_energy(p: RadioParams, bits: int, d: float) -> float:
    """Energy to transmit ``bits`` over distance d, with the d0 branch switch."""
    if d < 0:
        raise ValueError("distance must be >= 0")
    d2 = d * d
    if d < p.d0:
        return bits * (p.e_elec + p.eps_fs * d2)
    return bits * (p.e_elec + p.eps_mp * (d2 * d2))


def tx_energy_array(p: RadioParams, bits: int, d: np.ndarray) -> np.ndarray:
    """Vectorized ``tx_energy``; element-for-element identical to the scalar form."""
    d = np.asarray(d, dtype=float)
    d2 = d * d
    amp = np.where(d < p.d0, p.eps_fs * d2, p.eps_mp * (d2 * d2))
    return bits * (p.e_elec + amp)


def rx_energy(p: RadioParams, bits: int) -> float:
    """Energy the radio spends receiving ``bits``."""
    return bits * p.e_elec


def aggregation_energy(p: RadioParams, messages: int) -> float:
    """Cost of fusing ``messages`` L-bit messages into one uplink message."""
    if messages < 0:
        raise ValueError("messages must be >= 0")
    return messages * p.msg_bits * p.e_da


def ch_round_energy(p: RadioParams, n: int, k: int, d_to_bs: float) -> float:
    """Analytical energy a cluster head dissipates in one round with n/k members."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < k:
        raise ValueError("n must be >= k")
    ratio = n / k
    bits = p.msg_bits
    return (
        (ratio - 1.0) * bits * p.e_elec
        + ratio * bits * p.e_da
        + bits * p.e_elec
        + bits * p.eps_fs * (d_to_bs * d_to_bs)
    )


def non_ch_round_energy(p: RadioParams, d_to_ch: float) -> float:
    """Analytical energy a cluster member dissipates in one round."""
    if d_to_ch < 0:
        raise ValueError("distance must be >= 0")
    return p.msg_bits * (p.e_elec + p.eps_fs * (d_to_ch * d_to_ch))


def cluster_round_energy(p: RadioParams, n: int, k: int, d_to_bs: float, d_to_ch: float) -> float:
    """Analytical energy one cluster (head plus n/k members) dissipates per round."""
    return ch_round_energy(p, n, k, d_to_bs) + (n / k) * non_ch_round_energy(p, d_to_ch)


def network_round_energy(p: RadioParams, n: int, k: int, d_to_bs: float, d_to_ch: float) -> float:
    """Analytical whole-network energy per round; equals k * cluster_round_energy."""
    if k < 1:
        raise ValueError("k must be >= 1")
    bits = p.msg_bits
    return bits * (
        2.0 * n * p.e_elec
        + n * p.e_da
        + k * p.eps_fs * (d_to_bs * d_to_bs)
        + n * p.eps_fs * (d_to_ch * d_to_ch)
    )
