"""Repeated-consensus decision oracle.

The consensus service is modelled as a correct-by-construction oracle: its
safety properties (agreement, per-instance finality, validity of decided
blocks) hold structurally, and the one freedom the abstraction leaves open --
WHICH valid proposal wins an instance -- is delegated to a pluggable
selection policy, including adversarial ones.

An instance becomes decidable once every correct replica has entered it with
a proposal and at least one registered proposal is valid against the decided
prefix.  If only invalid proposals are present the decision fires as soon as
the first valid one arrives.
"""

from __future__ import annotations

import random
from typing import Callable, Iterable, Optional

from .core import (
    CONSENSUS_SERVICE,
    Block,
    GENESIS,
    block_record,
    block_signing_bytes,
    hash_block,
    verify,
)
from .netsim import SimulationError

# validator(prefix_state, instance, block) -> bool, where prefix_state is the
# validity-model state after the decided prefix.
ProposalValidator = Callable[[object, int, Block], bool]


class SelectionPolicy:
    name: str

    def choose(self, instance: int, valids: dict[int, Block], rng: random.Random) -> int:
        """Pick the winning proposer among the valid proposals (never empty)."""
        raise NotImplementedError


class RoundRobinPolicy(SelectionPolicy):
    """Decide the designated proposer's block if valid, else the lowest valid id."""

    name = "round-robin"

    def __init__(self, n: int):
        self.n = n

    def choose(self, instance, valids, rng):
        designated = instance % self.n
        return designated if designated in valids else min(valids)


class ByzantineFirstPolicy(SelectionPolicy):
    """Always decide a corrupt replica's valid block when one exists."""

    name = "byzantine-first"

    def __init__(self, corrupt: Iterable[int]):
        self.corrupt = frozenset(corrupt)

    def choose(self, instance, valids, rng):
        byz = [r for r in sorted(valids) if r in self.corrupt]
        return byz[0] if byz else min(valids)


class RandomPolicy(SelectionPolicy):
    """Uniform choice among valid proposals, from the run's seeded generator."""

    name = "random"

    def choose(self, instance, valids, rng):
        return rng.choice(sorted(valids))


def make_policy(name: str, n: int, corrupt: Iterable[int]) -> SelectionPolicy:
    if name == "round-robin":
        return RoundRobinPolicy(n)
    if name == "byzantine-first":
        return ByzantineFirstPolicy(corrupt)
    if name == "random":
        return RandomPolicy()
    raise ValueError(f"unknown selection policy: {name!r}")


class RcOracle:
    """Decision state shared by all replicas of one run."""

    def __init__(self, sim, policy: SelectionPolicy, validator: ProposalValidator,
                 advance_state: Callable[[object, Block], None], initial_state):
        self.sim = sim
        self.policy = policy
        self.validator = validator
        # State after the decided prefix, advanced at every decision.
        self._advance_state = advance_state
        self.prefix_state = initial_state
        self.decided: list[Block] = [GENESIS]
        self.decided_proposer: list[Optional[int]] = [None]
        self.proposals: dict[int, dict[int, Block]] = {}
        self._inputs_seen: set[tuple[int, int]] = set()
        self._deciding = False

    @property
    def decided_count(self) -> int:
        # Genesis does not count towards the horizon.
        return len(self.decided) - 1

    def start(self) -> None:
        """Announce the genesis output at instance 0 to every replica."""
        self.sim.emit("rc-decided", CONSENSUS_SERVICE,
                      {"instance": 0, "proposer": None, "block": block_record(GENESIS)})
        for rid in self.sim.replica_ids:
            self.sim.network.post(CONSENSUS_SERVICE, rid, ("rc-output", 0))

    def input(self, replica: int, instance: int, block: Block, dropped=None) -> None:
        """Register a replica's proposal for an instance.

        ``dropped`` is an informational list of fusion drop witnesses
        ``[[txid, position], ...]``; the checker never trusts it and
        recomputes fusion independently.
        """
        correct = replica in self.sim.correct_replicas
        signed = block.proposer_sig is not None and verify(
            block.proposer_sig, block_signing_bytes(block.parent, block.txs), replica)
        if not signed:
            if correct:
                raise SimulationError(f"correct replica {replica} produced an unsigned block")
            return  # unsigned Byzantine input: rejected, never registered
        if correct:
            if self.sim.last_output(replica) != instance - 1:
                raise SimulationError(
                    f"replica {replica} input instance {instance} before outputting "
                    f"{instance - 1}")
            if (replica, instance) in self._inputs_seen:
                raise SimulationError(
                    f"replica {replica} input instance {instance} twice")
        self._inputs_seen.add((replica, instance))
        self.proposals.setdefault(instance, {})[replica] = block
        self.sim.emit("rc-input", replica,
                      {"instance": instance, "block": block_record(block),
                       "dropped": dropped or []})
        self.try_decide()

    def _is_valid(self, instance: int, block: Block) -> bool:
        if block.parent != hash_block(self.decided[instance - 1]):
            return False
        return self.validator(self.prefix_state, instance, block)

    def try_decide(self) -> None:
        if self._deciding:
            return
        self._deciding = True
        try:
            while True:
                instance = len(self.decided)
                pool = self.proposals.get(instance, {})
                if any(r not in pool for r in self.sim.correct_replicas):
                    break
                valids = {r: b for r, b in sorted(pool.items())
                          if self._is_valid(instance, b)}
                if not valids:
                    break
                proposer = self.policy.choose(instance, valids, self.sim.rng)
                self._decide(instance, valids[proposer], proposer)
        finally:
            self._deciding = False

    def _decide(self, instance: int, block: Block, proposer: int) -> None:
        self.decided.append(block)
        self.decided_proposer.append(proposer)
        self._advance_state(self.prefix_state, block)
        self.sim.emit("rc-decided", CONSENSUS_SERVICE,
                      {"instance": instance, "proposer": proposer,
                       "block": block_record(block)})
        # Notification travels through the simulated network like any message.
        for rid in self.sim.replica_ids:
            self.sim.network.post(CONSENSUS_SERVICE, rid, ("rc-output", instance))

    def decided_chain(self) -> tuple[Block, ...]:
        return tuple(self.decided)
