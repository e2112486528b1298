"""Byzantine behaviours for replicas and clients.

The adversary is omniscient over the trace so far: strategies are observers
invoked synchronously on every trace event (the strongest adaptive adversary
the oracle model permits).  It is static (corruption fixed per run), cannot
forge signatures, and cannot drop in-flight messages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .core import (
    Block,
    Certificate,
    CertificateEntry,
    Transaction,
    Transfer,
    block_signing_bytes,
    hash_block,
    parse_tx,
    sig_record,
    subprop_signing_bytes,
    tx_record,
    tx_signing_bytes,
)
from .constructions import CorrectReplica, fifo_pick


@dataclass
class AdversarySpec:
    corrupt_replicas: tuple[int, ...] = ()
    corrupt_clients: tuple[int, ...] = ()
    replica_strategy: Optional[dict] = None
    client_strategy: Optional[dict] = None
    rc_policy: str = "round-robin"
    pre_gst_delay_policy: dict = field(default_factory=lambda: {"name": "uniform"})

    def record(self) -> dict:
        return {"corrupt_replicas": list(self.corrupt_replicas),
                "corrupt_clients": list(self.corrupt_clients),
                "replica_strategy": self.replica_strategy,
                "client_strategy": self.client_strategy,
                "rc_policy": self.rc_policy,
                "pre_gst_delay_policy": self.pre_gst_delay_policy}

    @classmethod
    def from_record(cls, rec: Optional[dict]) -> "AdversarySpec":
        rec = rec or {}
        return cls(tuple(rec.get("corrupt_replicas", ())),
                   tuple(rec.get("corrupt_clients", ())),
                   rec.get("replica_strategy"),
                   rec.get("client_strategy"),
                   rec.get("rc_policy", "round-robin"),
                   rec.get("pre_gst_delay_policy") or {"name": "uniform"})


class SilentReplica:
    """Crash-like corrupt replica: receives everything, does nothing."""

    def __init__(self, sim, rid: int):
        self.sim = sim
        self.rid = rid

    def on_envelope(self, env) -> None:
        tag = env.payload[0]
        if tag == "req":
            self.sim.emit("req-delivered", self.rid,
                          {"from": env.payload[1], "tx": tx_record(env.payload[2])})

    def on_trace_event(self, ev) -> None:
        pass


class CensorReplica:
    """Behaves like a correct replica except that it deletes matching
    transactions from every block and sub-proposal it produces.

    It also races: being Byzantine it need not wait for its own output
    notification, so it proposes for instance i+1 the moment instance i is
    decided.  Under a byzantine-first selection policy this keeps a censored
    proposal on the table at every decision point.
    """

    def __init__(self, sim, rid: int, target_clients):
        self.sim = sim
        self.rid = rid
        self.targets = frozenset(target_clients)
        self.pool: list[Transaction] = []
        self.seen: set = set()
        self.subprops: dict[int, dict[int, tuple]] = {}
        self.inputs_done: set[int] = set()
        self.subproposed: set[int] = set()

    def matches(self, tx: Transaction) -> bool:
        return tx.client in self.targets

    def on_envelope(self, env) -> None:
        tag = env.payload[0]
        if tag == "req":
            _, client, tx = env.payload
            self.sim.emit("req-delivered", self.rid,
                          {"from": client, "tx": tx_record(tx)})
            if tx.txid not in self.seen:
                self.seen.add(tx.txid)
                self.pool.append(tx)
        elif tag == "sub-prop":
            _, sender, instance, txs, sig = env.payload
            self.sim.emit("sub-prop-delivered", self.rid,
                          {"from": sender, "instance": instance,
                           "txs": [tx_record(t) for t in txs], "sig": sig_record(sig)})
            self.subprops.setdefault(instance, {}).setdefault(sender, (txs, sig))
            if self.sim.fused:
                self.try_certified_input()
        # output notifications are ignored: the decided prefix is read directly

    def on_trace_event(self, ev) -> None:
        if ev.kind == "rc-decided":
            self.propose_next(ev.payload["instance"] + 1)

    def censored_pick(self) -> tuple[Transaction, ...]:
        decided_ids = self.sim.rc_decided_txids()
        self.pool = [tx for tx in self.pool if tx.txid not in decided_ids]
        candidates = [tx for tx in self.pool if not self.matches(tx)]
        kept = fifo_pick(self.sim.model, self.sim.rc.prefix_state, candidates,
                         self.sim.scenario.max_block_size)
        return tuple(kept)

    def propose_next(self, instance: int) -> None:
        if instance in self.inputs_done or instance in self.subproposed:
            return
        self.subproposed.add(instance)
        txs = self.censored_pick()
        with self.sim.as_process(self.rid):
            if self.sim.fused:
                # Sub-propose eagerly; the certified input follows once enough
                # sub-proposals are on hand.
                sig = self.sim.sign(self.rid,
                                    subprop_signing_bytes(self.rid, instance, txs))
                self.subprops.setdefault(instance, {}).setdefault(self.rid, (txs, sig))
                for to in self.sim.replica_ids:
                    if to == self.rid:
                        continue
                    self.sim.emit("sub-prop-sent", self.rid,
                                  {"to": to, "instance": instance,
                                   "txs": [tx_record(t) for t in txs],
                                   "sig": sig_record(sig)})
                    self.sim.network.send(self.rid, to,
                                          ("sub-prop", self.rid, instance, txs, sig))
                self.try_certified_input()
            else:
                parent = hash_block(self.sim.rc.decided[instance - 1])
                sig = self.sim.sign(self.rid, block_signing_bytes(parent, txs))
                self.inputs_done.add(instance)
                self.sim.rc.input(self.rid, instance, Block(parent, txs, sig))

    def try_certified_input(self) -> None:
        """Assemble the certificate whose fusion censors best and input it."""
        instance = len(self.sim.rc.decided)
        if instance in self.inputs_done:
            return
        received = self.subprops.get(instance, {})
        if self.rid not in received or len(received) < self.sim.f + 1:
            return
        others = sorted(s for s in received if s != self.rid)
        best = None
        for combo in combinations(others, self.sim.f):
            senders = (self.rid,) + combo
            contributions = {s: received[s][0] for s in senders}
            fused, _ = self.sim.fusion.fuse_from_state(self.sim.rc.prefix_state,
                                                       contributions)
            score = sum(1 for tx in fused if self.matches(tx))
            if best is None or (score, senders) < best[:2]:
                best = (score, senders, fused)
        if best is None:
            return
        _, senders, fused = best
        entries = tuple(CertificateEntry(s, received[s][0], received[s][1])
                        for s in sorted(senders))
        parent = hash_block(self.sim.rc.decided[instance - 1])
        with self.sim.as_process(self.rid):
            sig = self.sim.sign(self.rid, block_signing_bytes(parent, fused))
            self.inputs_done.add(instance)
            self.sim.rc.input(self.rid, instance,
                              Block(parent, fused, sig, Certificate(instance, entries)))


class EquivocateReplica(CorrectReplica):
    """Protocol-following corrupt replica that sends conflicting sub-proposal
    contents to different peers (signatures genuine, contents inconsistent).

    ``silent`` mode withholds sub-proposals entirely.
    """

    def __init__(self, sim, rid: int, mode: str = "split"):
        super().__init__(sim, rid)
        if mode not in ("split", "silent"):
            raise ValueError(f"unknown equivocation mode: {mode!r}")
        self.mode = mode

    def subprop_content(self, to: int, txs):
        if self.mode == "silent":
            return None
        if to % 2 == 1 and len(txs) > 1:
            return txs[:-1]
        return txs

    def on_trace_event(self, ev) -> None:
        pass


class ByzClient:
    """Corrupt client shell: scripted issues are broadcast without the
    validity guard; a strategy may add reactive behaviour on top."""

    def __init__(self, sim, cid: int):
        self.sim = sim
        self.cid = cid
        self.next_seq = 1

    def on_envelope(self, env) -> None:
        if env.payload[0] == "issue":
            self.issue_raw(env.payload[1])

    def issue_raw(self, payload_spec) -> None:
        payload = payload_spec if payload_spec is not None else f"c{self.cid}-{self.next_seq}"
        if isinstance(payload, dict):
            payload = Transfer(payload["src"], payload["dst"], payload["amount"],
                               payload.get("nonce", 1))
        seq = self.next_seq
        self.next_seq += 1
        sig = self.sim.sign(self.cid, tx_signing_bytes(self.cid, seq, payload))
        tx = Transaction(self.cid, seq, payload, sig)
        self.sim.emit("request-issued", self.cid,
                      {"tx": tx_record(tx), "suppressed": False})
        for rid in self.sim.replica_ids:
            self.sim.network.send(self.cid, rid, ("req", self.cid, tx))

    def on_trace_event(self, ev) -> None:
        pass


class SpamClient(ByzClient):
    """Races every observed target request with a conflicting transfer that
    consumes the same account nonce, so whichever lands first invalidates the
    other."""

    def __init__(self, sim, cid: int, target_client: int, dst: str = "SPAM"):
        super().__init__(sim, cid)
        self.target = target_client
        self.dst = dst

    def on_trace_event(self, ev) -> None:
        if ev.kind != "request-issued" or ev.process != self.target:
            return
        if ev.payload.get("suppressed"):
            return
        tx = parse_tx(ev.payload["tx"])
        if not isinstance(tx.payload, Transfer):
            return
        conflict = Transfer(tx.payload.src, self.dst, tx.payload.amount,
                            tx.payload.nonce)
        seq = self.next_seq
        self.next_seq += 1
        with self.sim.as_process(self.cid):
            sig = self.sim.sign(self.cid, tx_signing_bytes(self.cid, seq, conflict))
            spam = Transaction(self.cid, seq, conflict, sig)
            self.sim.emit("request-issued", self.cid,
                          {"tx": tx_record(spam), "suppressed": False})
            for rid in self.sim.replica_ids:
                self.sim.network.send(self.cid, rid, ("req", self.cid, spam))


def make_corrupt_replica(sim, rid: int, strategy: Optional[dict]):
    name = (strategy or {}).get("name", "silent")
    if name == "silent":
        return SilentReplica(sim, rid)
    if name == "censor":
        return CensorReplica(sim, rid, strategy.get("clients", ()))
    if name == "equivocate":
        return EquivocateReplica(sim, rid, strategy.get("mode", "split"))
    raise ValueError(f"unknown replica strategy: {name!r}")


def make_corrupt_client(sim, cid: int, strategy: Optional[dict]):
    name = (strategy or {}).get("name", "byz")
    if name == "byz":
        return ByzClient(sim, cid)
    if name == "spam-invalidator":
        return SpamClient(sim, cid, strategy["target"], strategy.get("dst", "SPAM"))
    raise ValueError(f"unknown client strategy: {name!r}")
