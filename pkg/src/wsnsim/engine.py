"""Round engines for the EMEEDP, LEACH, and SEP clustering protocols.

Each engine owns a private mutable copy of a deployed network plus one
random stream; a run is a sequence of ``run_round`` calls. All randomness
is consumed in the election step (one uniform draw per alive node, in
ascending id order), so a (network, protocol, seed) triple fully
determines the outcome history.

Round flow, shared by all protocols:

1. epoch bookkeeping, election, head confirmation (EMEEDP additionally
   suppresses heads closer than the cluster radius);
2. every remaining alive node is assigned to exactly one of: member of a
   head, direct transmitter, or sleeper (EMEEDP only);
3. members pay one uplink to their head, heads pay one reception per
   member plus aggregation over members + self;
4. heads uplink one fused message each: EMEEDP normal heads may route it
   through an advanced relay node, everything else goes straight to the
   sink; direct transmitters pay one uncompressed uplink;
5. deaths are applied once at the end of the round. A node that runs out
   mid-round spends exactly its remaining energy, its message still
   counts as delivered, and it dies at step 5.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .election import (
    ElectionParams,
    EpochTracker,
    elect,
    emeedp_probability,
    suppress_overlaps,
    weighted_probabilities,
)
from .model import Network, Node, NodeKind, Point, distance
from .radio import RadioParams, aggregation_energy, rx_energy, tx_energy, tx_energy_array

EMEEDP = "emeedp"
LEACH = "leach"
SEP = "sep"
PROTOCOLS = (EMEEDP, LEACH, SEP)

SLEEP_ROUNDS = 3
UNCOVERED_LIMIT = 3

JOIN = "join"
SLEEP = "sleep"
DIRECT = "direct"


class SimulationComplete(Exception):
    """Raised when a round is requested on a network with no alive node."""


def stream_seed(seed: int, protocol: str) -> int:
    """Per-run RNG seed hashed from (seed, protocol tag) with SHA-256, so
    adding a protocol never perturbs another protocol's stream."""
    digest = hashlib.sha256(f"{seed}:{protocol}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class ClusterAssignment:
    """Where every alive node ended up this round: exactly one category each."""

    ch_ids: tuple[int, ...]
    members: Mapping[int, tuple[int, ...]]
    member_ch: Mapping[int, int]
    direct_transmitters: tuple[int, ...]
    sleepers: tuple[int, ...]


@dataclass(frozen=True)
class RelayDecision:
    """Uplink choice of one normal cluster head: via an advanced relay, or direct."""

    ch_id: int
    relay_id: int | None
    d_ch_relay: float | None
    d_relay_bs: float | None
    d_ch_bs: float


@dataclass(frozen=True)
class RoundOutcome:
    """Everything one round did: confirmed heads, assignment, relay choices,
    per-node energy spent (keyed by id, every alive-at-entry node present),
    messages delivered to the sink, and the ids that died this round."""

    round_index: int
    ch_ids: tuple[int, ...]
    assignment: ClusterAssignment
    relays: tuple[RelayDecision, ...]
    energy_spent: Mapping[int, float]
    packets_to_bs: int
    deaths: tuple[int, ...]


def join_or_defer(node: Node, chs: Sequence[Node], bs: Point, radio: RadioParams) -> tuple[str, int | None]:
    """Single join decision for one awake non-head node.

    Compares the cost of reaching the nearest head (distance ties broken to
    the lower head id) against transmitting straight to the sink. Returns
    (JOIN, head id), (SLEEP, None) when the sink is strictly cheaper, or
    (DIRECT, None) when no head exists.
    """
    if not chs:
        return DIRECT, None
    nearest = min(chs, key=lambda ch: (distance(node.position, ch.position), ch.id))
    e_join = tx_energy(radio, radio.msg_bits, distance(node.position, nearest.position))
    e_direct = tx_energy(radio, radio.msg_bits, distance(node.position, bs))
    if e_join <= e_direct:
        return JOIN, nearest.id
    return SLEEP, None


def select_relay(
    ch: Node,
    advanced_nodes: Iterable[Node],
    confirmed_chs: Iterable[int],
    bs: Point,
    radio: RadioParams,
) -> RelayDecision:
    """Pick an advanced relay near the midpoint of the head-sink segment.

    Eligible relays are alive, awake, advanced, not heads this round, closer
    to the head than the sink is, and strictly cheaper to reach than the
    sink (the head-energy-saving guard; the two conditions differ near the
    path-loss branch switch). Among eligible relays the midpoint score
    d(head, relay)^2 + d(relay, sink)^2 is divided by the relay's residual
    energy fraction, so forwarding duty rotates across relays instead of
    concentrating on the single best-placed one; the lowest score wins,
    ties to the lower id. With no eligible relay the head transmits direct
    (relay_id None).
    """
    ch_set = set(confirmed_chs)
    d_ch_bs = distance(ch.position, bs)
    tx_direct = tx_energy(radio, radio.msg_bits, d_ch_bs)
    best: tuple[float, int, float, float] | None = None
    for an in advanced_nodes:
        # a node depleted earlier in the same round is excluded even though
        # it is only marked dead at the end of the round
        if not an.alive or an.residual_energy <= 0.0:
            continue
        if an.id in ch_set or an.sleep_rounds_remaining > 0:
            continue
        d_ca = distance(ch.position, an.position)
        if d_ca >= d_ch_bs:
            continue
        if tx_energy(radio, radio.msg_bits, d_ca) >= tx_direct:
            continue
        d_ab = distance(an.position, bs)
        score = (d_ca * d_ca + d_ab * d_ab) / (an.residual_energy / an.initial_energy)
        if best is None or score < best[0]:
            best = (score, an.id, d_ca, d_ab)
    if best is None:
        return RelayDecision(ch.id, None, None, None, d_ch_bs)
    return RelayDecision(ch.id, best[1], best[2], best[3], d_ch_bs)


class ProtocolEngine:
    """Shared round machinery; subclasses pin election, joining, and uplink rules."""

    name = ""

    def __init__(
        self,
        network: Network,
        radio: RadioParams,
        election: ElectionParams,
        seed: int = 0,
        rng: random.Random | None = None,
        immortal: bool = False,
    ) -> None:
        self.radio = radio
        self.params = election
        self.rng = rng if rng is not None else random.Random(stream_seed(seed, self.name))
        self.immortal = immortal
        self.bs = network.region.bs_position
        self.nodes = [node.clone() for node in network.nodes]
        self._advanced = [node for node in self.nodes if node.is_advanced]
        self.tracker = self._make_tracker()

        pos = np.array([node.position for node in self.nodes], dtype=float)
        diff = pos[:, None, :] - pos[None, :, :]
        self._dmat = np.sqrt(diff[..., 0] * diff[..., 0] + diff[..., 1] * diff[..., 1])
        dbx = pos[:, 0] - self.bs[0]
        dby = pos[:, 1] - self.bs[1]
        self._d_bs = np.sqrt(dbx * dbx + dby * dby)
        # static per-node sink distances and direct-uplink costs, as plain lists
        # for cheap scalar access inside the round loop
        self._d_bs_list: list[float] = self._d_bs.tolist()
        self._e_direct = tx_energy_array(radio, radio.msg_bits, self._d_bs)
        self._e_direct_list: list[float] = self._e_direct.tolist()
        self._rx = rx_energy(radio, radio.msg_bits)
        self._spent: dict[int, float] = {}

    # -- protocol hooks -------------------------------------------------

    def _make_tracker(self) -> EpochTracker:
        raise NotImplementedError

    def _probabilities(self, alive: Sequence[Node]) -> dict[int, float]:
        raise NotImplementedError

    def _confirm_cluster_heads(self, candidates: list[int]) -> list[int]:
        return candidates

    def _assign(self, alive: Sequence[Node], ch_ids: Sequence[int]):
        raise NotImplementedError

    def _uplink(self, ch: Node, ch_ids: Sequence[int]) -> RelayDecision | None:
        self._charge(ch, float(self._e_direct[ch.id]))
        return None

    # -- machinery ------------------------------------------------------

    def any_alive(self) -> bool:
        return any(node.alive for node in self.nodes)

    def _charge(self, node: Node, joules: float) -> None:
        if self.immortal:
            return
        actual = joules if joules < node.residual_energy else node.residual_energy
        node.residual_energy -= actual
        self._spent[node.id] += actual

    def _nearest_heads(self, ids: Sequence[int], ch_ids: Sequence[int]):
        """Nearest confirmed head per node id, its distance, and the join cost.

        Distance ties resolve to the first (lowest) head id since ch_ids is
        ascending.
        """
        sub = self._dmat[np.ix_(ids, ch_ids)]
        order = np.argmin(sub, axis=1)
        d_near = sub[np.arange(len(ids)), order]
        e_near = tx_energy_array(self.radio, self.radio.msg_bits, d_near)
        return [ch_ids[k] for k in order], d_near, e_near.tolist()

    def run_round(self, r: int) -> RoundOutcome:
        alive = [node for node in self.nodes if node.alive]
        if not alive:
            raise SimulationComplete(f"no node alive entering round {r}")
        self._spent = {node.id: 0.0 for node in alive}

        for node in alive:
            self.tracker.advance(node)
        probabilities = self._probabilities(alive)
        candidates = elect(self.nodes, probabilities, r, self.rng)
        ch_ids = self._confirm_cluster_heads(candidates)
        for cid in ch_ids:
            node = self.nodes[cid]
            self.tracker.mark_elected(node)
            node.sleep_rounds_remaining = 0  # election wakes a sleeping node
            node.uncovered_rounds = 0

        assignment, member_energy = self._assign(alive, ch_ids)

        if not self.immortal:
            # hot path: one uplink charge per member and one reception charge
            # on its head, clamped at the payer's residual
            nodes = self.nodes
            spent = self._spent
            rx = self._rx
            for nid, (ch_id, e_tx) in member_energy.items():
                node = nodes[nid]
                actual = e_tx if e_tx < node.residual_energy else node.residual_energy
                node.residual_energy -= actual
                spent[nid] += actual
                head = nodes[ch_id]
                actual = rx if rx < head.residual_energy else head.residual_energy
                head.residual_energy -= actual
                spent[ch_id] += actual

        relays: list[RelayDecision] = []
        packets = 0
        for cid in ch_ids:
            ch = self.nodes[cid]
            messages = len(assignment.members.get(cid, ())) + 1
            self._charge(ch, aggregation_energy(self.radio, messages))
            decision = self._uplink(ch, ch_ids)
            if decision is not None:
                relays.append(decision)
            packets += 1
        for nid in assignment.direct_transmitters:
            self._charge(self.nodes[nid], self._e_direct_list[nid])
            packets += 1

        deaths = []
        for node in alive:
            if node.residual_energy <= 0.0:
                node.residual_energy = 0.0
                node.alive = False
                deaths.append(node.id)

        return RoundOutcome(
            round_index=r,
            ch_ids=tuple(ch_ids),
            assignment=assignment,
            relays=tuple(relays),
            energy_spent=self._spent,
            packets_to_bs=packets,
            deaths=tuple(deaths),
        )

    def _finish_assignment(self, ch_ids, members, member_energy, direct, sleepers):
        assignment = ClusterAssignment(
            ch_ids=tuple(ch_ids),
            members={cid: tuple(ids) for cid, ids in members.items()},
            member_ch={nid: ch for nid, (ch, _) in member_energy.items()},
            direct_transmitters=tuple(direct),
            sleepers=tuple(sleepers),
        )
        return assignment, member_energy


class LeachEngine(ProtocolEngine):
    """Uniform-probability election; members always join the nearest head."""

    name = LEACH

    def _make_tracker(self) -> EpochTracker:
        return EpochTracker.uniform(self.params.p_opt)

    def _probabilities(self, alive: Sequence[Node]) -> dict[int, float]:
        p = self.params.p_opt
        return {node.id: p for node in alive}

    def _assign(self, alive: Sequence[Node], ch_ids: Sequence[int]):
        ch_set = set(ch_ids)
        others = [node for node in alive if node.id not in ch_set]
        members: dict[int, list[int]] = {cid: [] for cid in ch_ids}
        member_energy: dict[int, tuple[int, float]] = {}
        direct: list[int] = []
        if not ch_ids:
            # no head this round: every alive node reports straight to the sink
            direct = [node.id for node in others]
        elif others:
            ids = [node.id for node in others]
            nearest, _, e_near = self._nearest_heads(ids, list(ch_ids))
            for i, node in enumerate(others):
                members[nearest[i]].append(node.id)
                member_energy[node.id] = (nearest[i], e_near[i])
        return self._finish_assignment(ch_ids, members, member_energy, direct, [])


class SepEngine(LeachEngine):
    """Class-weighted probabilities with separate epochs per node class."""

    name = SEP

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self._p_nrm, self._p_adv = weighted_probabilities(self.params)

    def _make_tracker(self) -> EpochTracker:
        return EpochTracker.for_probabilities(*weighted_probabilities(self.params))

    def _probabilities(self, alive: Sequence[Node]) -> dict[int, float]:
        return {
            node.id: self._p_adv if node.is_advanced else self._p_nrm
            for node in alive
        }


class EmeedpEngine(ProtocolEngine):
    """Residual-weighted election with overlap suppression, the join-or-sleep
    rule, the three-round coverage guarantee, and advanced-node relaying.

    Sleep semantics: a node without favorable coverage (no head at all, or
    the nearest head dearer to reach than the sink) defers for up to three
    rounds. While deferring it spends nothing and wakes only if elected
    head; when the countdown expires it joins a now-favorable head if one
    exists, otherwise it delivers straight to the sink that round, and the
    cycle restarts. Every alive node therefore reports at least once every
    four rounds.
    """

    name = EMEEDP

    def _make_tracker(self) -> EpochTracker:
        return EpochTracker.for_probabilities(*weighted_probabilities(self.params))

    def _probabilities(self, alive: Sequence[Node]) -> dict[int, float]:
        # equivalent to emeedp_probability per node; the per-node constant
        # factor is precomputed once
        factors = self._p_factors
        p_adv = self._p_advanced
        return {
            node.id: p_adv if node.kind is NodeKind.ADVANCED
            else factors[node.id] * node.residual_energy
            for node in alive
        }

    def _confirm_cluster_heads(self, candidates: list[int]) -> list[int]:
        if len(candidates) < 2:
            return candidates
        # rank by residual fraction so head duty stays class-fair between
        # advanced and normal nodes
        ratios = [node.residual_energy / node.initial_energy for node in self.nodes]
        positions = [node.position for node in self.nodes]
        return suppress_overlaps(candidates, positions, ratios, self.params.cluster_radius_m)

    def _assign(self, alive: Sequence[Node], ch_ids: Sequence[int]):
        ch_set = set(ch_ids)
        others = [node for node in alive if node.id not in ch_set]
        members: dict[int, list[int]] = {cid: [] for cid in ch_ids}
        member_energy: dict[int, tuple[int, float]] = {}
        direct: list[int] = []
        sleepers: list[int] = []
        if others and ch_ids:
            ids = [node.id for node in others]
            nearest, _, e_join = self._nearest_heads(ids, list(ch_ids))

        for i, node in enumerate(others):
            joinable = False
            if ch_ids:
                e1 = float(e_join[i])
                e2 = float(self._e_direct[node.id])
                joinable = e1 <= e2

            if node.sleep_rounds_remaining > 0:
                node.sleep_rounds_remaining -= 1
                node.uncovered_rounds += 1
                if node.sleep_rounds_remaining > 0:
                    sleepers.append(node.id)
                elif joinable:
                    members[nearest[i]].append(node.id)
                    member_energy[node.id] = (nearest[i], e1)
                    node.uncovered_rounds = 0
                else:
                    direct.append(node.id)
                    node.uncovered_rounds = 0
            elif joinable:
                members[nearest[i]].append(node.id)
                member_energy[node.id] = (nearest[i], e1)
                node.uncovered_rounds = 0
            elif node.uncovered_rounds >= UNCOVERED_LIMIT:
                # three straight rounds without coverage: deliver direct now
                direct.append(node.id)
                node.uncovered_rounds = 0
                node.sleep_rounds_remaining = 0
            else:
                # uncovered this round: defer, deliver by the fourth round
                node.sleep_rounds_remaining = SLEEP_ROUNDS
                node.uncovered_rounds += 1
                sleepers.append(node.id)
        return self._finish_assignment(ch_ids, members, member_energy, direct, sleepers)

    def _uplink(self, ch: Node, ch_ids: Sequence[int]) -> RelayDecision | None:
        if ch.kind is not NodeKind.NORMAL:
            self._charge(ch, float(self._e_direct[ch.id]))
            return None
        decision = select_relay(ch, self._advanced, ch_ids, self.bs, self.radio)
        if decision.relay_id is None:
            self._charge(ch, float(self._e_direct[ch.id]))
        else:
            relay = self.nodes[decision.relay_id]
            self._charge(ch, tx_energy(self.radio, self.radio.msg_bits, decision.d_ch_relay))
            self._charge(relay, self._rx)
            self._charge(relay, tx_energy(self.radio, self.radio.msg_bits, decision.d_relay_bs))
        return decision


_ENGINES = {EMEEDP: EmeedpEngine, LEACH: LeachEngine, SEP: SepEngine}


def make_engine(
    protocol: str,
    network: Network,
    radio: RadioParams,
    election: ElectionParams,
    seed: int = 0,
    rng: random.Random | None = None,
    immortal: bool = False,
) -> ProtocolEngine:
    try:
        cls = _ENGINES[protocol]
    except KeyError:
        raise ValueError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}") from None
    return cls(network, radio, election, seed=seed, rng=rng, immortal=immortal)


def run_simulation(
    network: Network,
    protocol: str,
    radio: RadioParams,
    election: ElectionParams,
    seed: int,
    max_rounds: int,
    immortal: bool = False,
) -> list[RoundOutcome]:
    """Run rounds until every node is dead or max_rounds is reached."""
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    engine = make_engine(protocol, network, radio, election, seed=seed, immortal=immortal)
    history: list[RoundOutcome] = []
    for r in range(max_rounds):
        if not engine.any_alive():
            break
        history.append(engine.run_round(r))
    return history
