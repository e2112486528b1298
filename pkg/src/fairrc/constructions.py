"""Ledger constructions: clients and replicas over the consensus layers.

The replica over plain consensus and the replica over the fusion layer share
all of their code; they differ only in where the assembled block goes
(straight to the oracle vs. broadcast as a sub-proposal).  The pool scan is
FIFO in both, which makes the fairness gap attributable purely to the
consensus layer.

A replica whose pool yields an empty selection defers its input and retries
as soon as a new request arrives; without that, finite traces would fill with
empty instances under an empty workload.

The replicated-log adapter is the flattening view: a replica commits all log
positions of an output block at once, so its log is its chain with block
boundaries erased.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .core import (
    GENESIS,
    Block,
    Log,
    Transaction,
    Transfer,
    block_record,
    block_signing_bytes,
    flatten_chain_to_log,
    hash_block,
    tx_record,
    tx_signing_bytes,
    verify_transaction,
)
from .frc import FusionLayer
from .netsim import SimulationError
from .validity import ValidityModel


def fifo_pick(model: ValidityModel, prefix_state, pool: Sequence[Transaction],
              cap: int) -> list[Transaction]:
    """Scan the pool in arrival order, keeping transactions valid at their position.

    Stops once ``cap`` transactions are kept; invalid-at-position transactions
    are skipped but stay pooled.
    """
    kept: list[Transaction] = []
    state = model.copy_state(prefix_state)
    for tx in pool:
        if len(kept) >= cap:
            break
        if model.accepts(state, tx):
            model.apply(state, tx)
            kept.append(tx)
    return kept


class CorrectReplica:
    """Protocol-following replica for either construction."""

    def __init__(self, sim, rid: int):
        self.sim = sim
        self.rid = rid
        self.chain: list[Block] = [GENESIS]
        self.chain_state = sim.model.initial_state()
        self.chain_txids: set = set()
        self.pool: list[Transaction] = []
        self.seen_txids: set = set()
        self.last_output = -1
        self.last_input = 0
        self._pending_outputs: set[int] = set()
        self.fusion_layer: Optional[FusionLayer] = (
            FusionLayer(sim, self) if sim.fused else None)

    # Hook for equivocating strategies; None means "send nothing to this peer".
    def subprop_content(self, to: int, txs: tuple[Transaction, ...]):
        return txs

    def on_envelope(self, env) -> None:
        tag = env.payload[0]
        if tag == "req":
            _, client, tx = env.payload
            self.on_request(client, tx)
        elif tag == "sub-prop":
            _, sender, instance, txs, sig = env.payload
            if self.fusion_layer is not None:
                self.fusion_layer.on_subprop(sender, instance, txs, sig)
        elif tag == "rc-output":
            self.on_rc_output(env.payload[1])
        else:
            raise SimulationError(f"replica {self.rid}: unknown payload {tag!r}")

    def on_request(self, client: int, tx: Transaction) -> None:
        self.sim.emit("req-delivered", self.rid,
                      {"from": client, "tx": tx_record(tx)})
        if not verify_transaction(tx):
            return
        if tx.txid in self.seen_txids:
            return  # duplicate deliveries are idempotent
        self.seen_txids.add(tx.txid)
        if tx.txid in self.chain_txids:
            return  # already finalised; nothing to propose
        self.pool.append(tx)
        self.try_input()

    def on_rc_output(self, instance: int) -> None:
        # Corrupt protocol-following subclasses can see notifications out of
        # order (decisions are not gated on them); apply contiguously.
        self._pending_outputs.add(instance)
        while self.last_output + 1 in self._pending_outputs:
            self._pending_outputs.discard(self.last_output + 1)
            self._apply_output(self.last_output + 1)

    def _apply_output(self, instance: int) -> None:
        block = self.sim.rc.decided[instance]
        if instance > 0:
            if block.parent != hash_block(self.chain[-1]):
                raise SimulationError(f"replica {self.rid}: broken decided link")
            self.chain.append(block)
            for tx in block.txs:
                self.sim.model.apply(self.chain_state, tx)
                self.chain_txids.add(tx.txid)
        self.last_output = instance
        self.sim.emit("output", self.rid,
                      {"instance": instance, "block": block_record(block)})
        removed = [tx for tx in self.pool if tx.txid in self.chain_txids]
        self.pool = [tx for tx in self.pool if tx.txid not in self.chain_txids]
        self.sim.emit("pool-cleared", self.rid,
                      {"instance": instance,
                       "removed": [list(tx.txid) for tx in removed]})
        self.try_input()
        if self.fusion_layer is not None:
            self.fusion_layer.maybe_aggregate()

    def try_input(self) -> None:
        target = self.last_output + 1
        if self.last_input >= target:
            return
        kept = fifo_pick(self.sim.model, self.chain_state, self.pool,
                         self.sim.scenario.max_block_size)
        if not kept:
            return  # defer until the pool can fill a non-empty block
        self.last_input = target
        parent = hash_block(self.chain[-1])
        txs = tuple(kept)
        sig = self.sim.sign(self.rid, block_signing_bytes(parent, txs))
        block = Block(parent, txs, sig)
        if self.fusion_layer is not None:
            self.fusion_layer.input(target, block)
        else:
            self.sim.rc.input(self.rid, target, block)


class CorrectClient:
    """Scripted client: validates each transaction against its read() snapshot."""

    def __init__(self, sim, cid: int):
        self.sim = sim
        self.cid = cid
        self.next_seq = 1
        self._auto_nonces: dict[str, int] = {}

    def on_envelope(self, env) -> None:
        tag = env.payload[0]
        if tag != "issue":
            raise SimulationError(f"client {self.cid}: unknown payload {tag!r}")
        self.issue(env.payload[1])

    def materialize(self, payload_spec) -> Transaction:
        if payload_spec is None:
            payload = f"c{self.cid}-{self.next_seq}"
        elif isinstance(payload_spec, dict):
            nonce = payload_spec.get("nonce")
            src = payload_spec["src"]
            if nonce is None:
                nonce = self._auto_nonces.get(src, 0) + 1
            self._auto_nonces[src] = nonce
            payload = Transfer(src, payload_spec["dst"], payload_spec["amount"], nonce)
        else:
            payload = payload_spec
        seq = self.next_seq
        self.next_seq += 1
        sig = self.sim.sign(self.cid, tx_signing_bytes(self.cid, seq, payload))
        return Transaction(self.cid, seq, payload, sig)

    def issue(self, payload_spec) -> None:
        tx = self.materialize(payload_spec)
        chain, prefix_state = self.sim.read_chain()
        self.sim.emit("read-snapshot", self.cid,
                      {"length": len(chain), "head": hash_block(chain[-1])})
        ok = _single_tx_valid(self.sim.model, prefix_state, tx)
        self.sim.emit("request-issued", self.cid,
                      {"tx": tx_record(tx), "suppressed": not ok})
        if not ok:
            return  # invalid against the current chain: silently not sent
        for rid in self.sim.replica_ids:
            self.sim.network.send(self.cid, rid, ("req", self.cid, tx))


def _single_tx_valid(model: ValidityModel, prefix_state, tx: Transaction) -> bool:
    # validity of chain + one block containing just [tx]
    return model.accepts(model.copy_state(prefix_state), tx)


def replica_log(chain: Sequence[Block]) -> Log:
    """Committed log view of a replica's chain (the replicated-log adapter)."""
    return flatten_chain_to_log(tuple(chain))
