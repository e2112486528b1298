"""Offline verdict engine: replays a recorded trace and checks every property.

The checker is pure (same trace, same verdicts) and independent: it never
trusts trace annotations for validity or fusion, recomputing both from the
validity module.  Liveness-flavoured properties use bounded-horizon
semantics: a finite trace cannot refute them, so the third verdict
``horizon-inconclusive`` marks what the trace can neither confirm nor refute,
and a ``grace`` budget (decided instances after universal receipt) separates
"starving" from "still in flight".

Checks tolerate sparse traces (e.g. a violation witness replayed alone):
chains are reconstructed per replica from whatever output events exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import (
    GENESIS,
    block_signing_bytes,
    hash_block,
    parse_block,
    parse_tx,
    verify,
)
from .frc import certificate_ok, certified_extension_valid
from .scenario import ConfigError, Scenario
from .trace import TraceEvent
from .validity import FusionModel, make_model

PASS = "pass"
VIOLATION = "violation"
INCONCLUSIVE = "horizon-inconclusive"
NOT_APPLICABLE = "not-applicable"

PROPERTIES = (
    "agreement",
    "chain-validity",
    "chain-finality",
    "user-fairness",
    "fusion-validity",
    "stubborn-input",
    "valid-input",
    "valid-request",
    "request-agreement",
    "safety-log",
    "log-validity",
    "log-finality",
    "user-fairness-log",
)


@dataclass(frozen=True)
class Verdict:
    prop: str
    status: str
    witness: tuple[int, ...] = ()
    detail: str = ""

    def record(self) -> dict:
        return {"record": "verdict", "prop": self.prop, "status": self.status,
                "witness": list(self.witness), "detail": self.detail}


def exit_code(verdicts) -> int:
    statuses = {v.status for v in verdicts}
    if VIOLATION in statuses:
        return 1
    if INCONCLUSIVE in statuses:
        return 2
    return 0


# ---------------------------------------------------------------------------
# Trace replay index.
#
# Every payload is parsed exactly once; the ordered stream carries small
# tuples tagged by kind:
#   ("out", idx, rid, instance, block)
#   ("req", idx, client, tx, suppressed)
#   ("dlv", idx, rid, from_client, tx)
#   ("dec", idx, instance, proposer, block)
#   ("inp", idx, rid, instance, block)      consensus-layer input
#   ("sps", idx, rid, to, instance, txs)    sub-proposal sent (layer input)
# ---------------------------------------------------------------------------

class Replay:
    """Parsed, indexed view of one trace."""

    def __init__(self, scenario: Scenario, events: list[TraceEvent]):
        self.scenario = scenario
        self.events = events
        self.model = make_model(scenario.validity)
        self.fusion = FusionModel(self.model)
        self.fused = scenario.construction in ("bcfrc", "dlsmr-over-bcfrc")
        self.n = scenario.n
        self.f = scenario.f
        self.corrupt_replicas = frozenset(scenario.adversary.corrupt_replicas)
        self.corrupt_clients = frozenset(scenario.adversary.corrupt_clients)
        self.correct_replicas = tuple(r for r in range(self.n)
                                      if r not in self.corrupt_replicas)

        self.stream: list[tuple] = []
        # rid -> instance -> (idx, txs): the replica's own layer input, first
        # version seen (consensus input for bcrc, sub-proposal for bcfrc).
        self.own_inputs: dict[int, dict[int, tuple[int, tuple]]] = {}

        for idx, ev in enumerate(events):
            try:
                self._index_event(idx, ev)
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"malformed trace event {idx}: {exc}") from None

    def _index_event(self, idx: int, ev: TraceEvent) -> None:
        kind = ev.kind
        if kind == "output":
            self.stream.append(("out", idx, ev.process, ev.payload["instance"],
                                parse_block(ev.payload["block"])))
        elif kind == "request-issued":
            self.stream.append(("req", idx, ev.process, parse_tx(ev.payload["tx"]),
                                bool(ev.payload.get("suppressed"))))
        elif kind == "req-delivered":
            self.stream.append(("dlv", idx, ev.process, ev.payload.get("from"),
                                parse_tx(ev.payload["tx"])))
        elif kind == "rc-decided":
            self.stream.append(("dec", idx, ev.payload["instance"],
                                ev.payload.get("proposer"),
                                parse_block(ev.payload["block"])))
        elif kind == "rc-input":
            block = parse_block(ev.payload["block"])
            self.stream.append(("inp", idx, ev.process, ev.payload["instance"], block))
            if not self.fused:
                self.own_inputs.setdefault(ev.process, {}).setdefault(
                    ev.payload["instance"], (idx, block.txs))
        elif kind == "sub-prop-sent":
            txs = tuple(parse_tx(t) for t in ev.payload["txs"])
            self.stream.append(("sps", idx, ev.process, ev.payload["to"],
                                ev.payload["instance"], txs))
            if self.fused:
                self.own_inputs.setdefault(ev.process, {}).setdefault(
                    ev.payload["instance"], (idx, txs))

    def outputs(self):
        return (e for e in self.stream if e[0] == "out")

    def decided_blocks(self) -> dict[int, tuple[int, object]]:
        """First decided block per instance (duplicates are finality's business)."""
        out: dict[int, tuple[int, object]] = {}
        for e in self.stream:
            if e[0] == "dec":
                out.setdefault(e[2], (e[1], e[4]))
        return out

    def finalised(self) -> dict[tuple, tuple[int, int]]:
        """txid -> (decide event idx, instance) over decided blocks."""
        out: dict[tuple, tuple[int, int]] = {}
        for e in self.stream:
            if e[0] == "dec" and e[2] >= 1:
                for tx in e[4].txs:
                    out.setdefault(tx.txid, (e[1], e[2]))
        return out


# ---------------------------------------------------------------------------
# Safety-family checks on chains.
# ---------------------------------------------------------------------------

def _check_agreement(replay: Replay) -> Verdict:
    seen: dict[int, dict[int, tuple[int, str]]] = {}
    for _, idx, rid, instance, block in replay.outputs():
        if rid not in replay.correct_replicas:
            continue
        h = hash_block(block)
        slot = seen.setdefault(instance, {})
        for other_rid, (other_idx, other_h) in slot.items():
            if other_h != h:
                return Verdict("agreement", VIOLATION, (other_idx, idx),
                               f"replicas {other_rid} and {rid} output different blocks "
                               f"at instance {instance}")
        slot[rid] = (idx, h)
    return Verdict("agreement", PASS)


def _check_chain_validity(replay: Replay) -> Verdict:
    model = replay.model
    for rid in replay.correct_replicas:
        blocks = {inst: (idx, block) for _, idx, r, inst, block in replay.outputs()
                  if r == rid}
        if not blocks:
            continue
        state = model.initial_state()
        prev = None
        witness: list[int] = []
        instance = 0
        while instance in blocks:
            idx, block = blocks[instance]
            witness.append(idx)
            if instance == 0:
                if block != GENESIS:
                    return Verdict("chain-validity", VIOLATION, tuple(witness),
                                   f"replica {rid} output a non-genesis block at instance 0")
            else:
                if prev is None or block.parent != hash_block(prev):
                    return Verdict("chain-validity", VIOLATION, tuple(witness),
                                   f"replica {rid}: broken parent link at instance {instance}")
                sig = block.proposer_sig
                if (sig is None or sig.signer not in range(replay.n) or not verify(
                        sig, block_signing_bytes(block.parent, block.txs), sig.signer)):
                    return Verdict("chain-validity", VIOLATION, tuple(witness),
                                   f"replica {rid}: block at instance {instance} lacks a "
                                   f"verifying replica signature")
                if replay.fused and not certified_extension_valid(
                        replay.fusion, replay.f, state, instance, block):
                    return Verdict("chain-validity", VIOLATION, tuple(witness),
                                   f"replica {rid}: block at instance {instance} fails "
                                   f"the certified validity check")
                for tx in block.txs:
                    if not model.accepts(state, tx):
                        return Verdict("chain-validity", VIOLATION, tuple(witness),
                                       f"replica {rid}: invalid transaction {tx.txid} "
                                       f"at instance {instance}")
                    model.apply(state, tx)
            prev = block
            instance += 1
    return Verdict("chain-validity", PASS)


def _check_chain_finality(replay: Replay) -> Verdict:
    decided: dict[int, tuple[int, str]] = {}
    per_replica: dict[tuple[int, int], int] = {}
    for e in replay.stream:
        if e[0] == "dec":
            _, idx, inst, _, block = e
            h = hash_block(block)
            if inst in decided and decided[inst][1] != h:
                return Verdict("chain-finality", VIOLATION, (decided[inst][0], idx),
                               f"instance {inst} decided twice with different blocks")
            decided.setdefault(inst, (idx, h))
        elif e[0] == "out":
            _, idx, rid, inst, _ = e
            if rid not in replay.correct_replicas:
                continue
            key = (rid, inst)
            if key in per_replica:
                return Verdict("chain-finality", VIOLATION, (per_replica[key], idx),
                               f"replica {rid} output instance {inst} twice")
            per_replica[key] = idx
    return Verdict("chain-finality", PASS)


def _check_fusion_validity(replay: Replay) -> Verdict:
    if not replay.fused:
        return Verdict("fusion-validity", NOT_APPLICABLE, (),
                       "trace was not produced over the fusion layer")
    model = replay.model
    state = model.initial_state()
    decided = replay.decided_blocks()
    instance = 1
    while instance in decided:
        idx, block = decided[instance]
        cert = block.certificate
        if cert is None or not certificate_ok(cert, instance, replay.f):
            return Verdict("fusion-validity", VIOLATION, (idx,),
                           f"decided block at instance {instance} lacks a certificate "
                           f"with f+1 verified distinct senders")
        contributions = {e.sender: e.txs for e in cert.entries}
        fused, _ = replay.fusion.fuse_from_state(state, contributions)
        if fused != block.txs:
            return Verdict("fusion-validity", VIOLATION, (idx,),
                           f"decided block at instance {instance} differs from the "
                           f"recomputed fusion of its certificate entries")
        for tx in block.txs:
            if not model.accepts(state, tx):
                return Verdict("fusion-validity", VIOLATION, (idx,),
                               f"decided block at instance {instance} is invalid "
                               f"against the decided prefix")
            model.apply(state, tx)
        instance += 1
    return Verdict("fusion-validity", PASS)


# ---------------------------------------------------------------------------
# User fairness (chain-level and log-level finalisation).
# ---------------------------------------------------------------------------

@dataclass
class _Candidate:
    tx: object
    issue_idx: int
    witnesses: set = field(default_factory=set)
    invalid_to: set = field(default_factory=set)
    delivered: dict = field(default_factory=dict)


def _fairness_scan(replay: Replay, grace: int, log_level: bool):
    if grace < 1:
        raise ConfigError(f"grace: must be >= 1, got {grace}")
    model = replay.model
    states = {r: model.initial_state() for r in replay.correct_replicas}
    chain_ok = {r: True for r in replay.correct_replicas}
    candidates: dict[tuple, _Candidate] = {}
    unresolved: set = set()
    fates: dict[tuple, dict] = {}
    decide_indices: list[int] = []
    finalised: dict[tuple, int] = {}   # txid -> instance (decided blocks)
    committed: set = set()             # txids committed by some correct replica

    def valid_to(rid, tx) -> bool:
        return chain_ok[rid] and model.accepts(states[rid], tx)

    for e in replay.stream:
        tag = e[0]
        if tag == "out":
            _, idx, rid, instance, block = e
            if rid not in states or instance < 1:
                continue
            for tx in block.txs:
                committed.add(tx.txid)
                if chain_ok[rid] and model.accepts(states[rid], tx):
                    model.apply(states[rid], tx)
                else:
                    chain_ok[rid] = False
            for txid in unresolved:
                cand = candidates[txid]
                if rid in cand.witnesses and rid not in cand.invalid_to:
                    if not valid_to(rid, cand.tx):
                        cand.invalid_to.add(rid)
        elif tag == "req":
            _, idx, client, tx, suppressed = e
            if client in replay.corrupt_clients:
                continue
            if suppressed:
                fates.setdefault(tx.txid, {"fate": "suppressed", "instance": None})
                continue
            cand = _Candidate(tx, idx)
            cand.witnesses = {r for r in replay.correct_replicas if valid_to(r, tx)}
            if tx.txid not in candidates:
                candidates[tx.txid] = cand
                unresolved.add(tx.txid)
        elif tag == "dlv":
            _, idx, rid, _, tx = e
            if rid in states and tx.txid in candidates:
                candidates[tx.txid].delivered.setdefault(rid, idx)
        elif tag == "dec":
            _, idx, instance, _, block = e
            if instance < 1:
                continue
            decide_indices.append(idx)
            for tx in block.txs:
                finalised.setdefault(tx.txid, instance)
                unresolved.discard(tx.txid)

    violation: Optional[Verdict] = None
    inconclusive: Optional[Verdict] = None
    prop = "user-fairness-log" if log_level else "user-fairness"
    for txid, cand in candidates.items():
        is_final = (txid in committed) if log_level else (txid in finalised)
        if is_final:
            fates[txid] = {"fate": "finalised", "instance": finalised.get(txid)}
            continue
        if not cand.witnesses:
            fates[txid] = {"fate": "vacuous", "instance": None}
            continue
        if not (cand.witnesses - cand.invalid_to):
            fates[txid] = {"fate": "invalidated", "instance": None}
            continue
        if all(r in cand.delivered for r in replay.correct_replicas):
            last_recv = max(cand.delivered[r] for r in replay.correct_replicas)
            post = [d for d in decide_indices if d > last_recv]
            if len(post) >= grace:
                fates[txid] = {"fate": "starved", "instance": None}
                if violation is None:
                    witness = (cand.issue_idx,
                               *sorted(cand.delivered[r] for r in replay.correct_replicas),
                               *post[:grace])
                    violation = Verdict(prop, VIOLATION, witness,
                                        f"transaction {txid} stayed valid and pending "
                                        f"through {len(post)} decided instances after "
                                        f"universal receipt")
                continue
        fates[txid] = {"fate": "pending", "instance": None}
        if inconclusive is None:
            inconclusive = Verdict(prop, INCONCLUSIVE, (cand.issue_idx,),
                                   f"transaction {txid} is pending; the horizon ended "
                                   f"within its grace budget")
    if violation is not None:
        return violation, fates
    if inconclusive is not None:
        return inconclusive, fates
    return Verdict(prop, PASS), fates


def transaction_fates(scenario: Scenario, events, grace: Optional[int] = None) -> dict:
    """Per-transaction outcome table (used by comparison reports)."""
    replay = Replay(scenario, events)
    _, fates = _fairness_scan(replay, grace or scenario.grace, log_level=False)
    return fates


# ---------------------------------------------------------------------------
# Interaction properties.
# ---------------------------------------------------------------------------

def _check_valid_request(replay: Replay) -> Verdict:
    model = replay.model
    blocks: dict[int, dict[int, str]] = {r: {} for r in replay.correct_replicas}
    chain_len: dict[int, int] = {r: 0 for r in replay.correct_replicas}
    block_at: dict[tuple, object] = {}
    lcp_len = 0
    lcp_state = model.initial_state()
    lcp_ok = True

    def advance_lcp():
        nonlocal lcp_len, lcp_ok
        while True:
            nxt = lcp_len
            hashes = set()
            for r in replay.correct_replicas:
                if chain_len[r] <= nxt:
                    return
                hashes.add(blocks[r][nxt])
            if len(hashes) != 1:
                return  # disagreement: the common prefix stops growing
            block = block_at[(nxt, next(iter(hashes)))]
            if nxt > 0:
                for tx in block.txs:
                    if lcp_ok and model.accepts(lcp_state, tx):
                        model.apply(lcp_state, tx)
                    else:
                        lcp_ok = False
            lcp_len = nxt + 1

    for e in replay.stream:
        if e[0] == "out":
            _, idx, rid, instance, block = e
            if rid not in blocks:
                continue
            h = hash_block(block)
            blocks[rid][instance] = h
            block_at[(instance, h)] = block
            while chain_len[rid] in blocks[rid]:
                chain_len[rid] += 1
            advance_lcp()
        elif e[0] == "req":
            _, idx, client, tx, suppressed = e
            if client in replay.corrupt_clients or suppressed:
                continue
            ok = lcp_ok and model.accepts(model.copy_state(lcp_state), tx)
            if not ok:
                return Verdict("valid-request", VIOLATION, (idx,),
                               f"correct client {client} broadcast {tx.txid}, invalid "
                               f"against the current chain")
    return Verdict("valid-request", PASS)


def _check_valid_input(replay: Replay) -> Verdict:
    delivered: dict[int, set] = {r: set() for r in replay.correct_replicas}
    for e in replay.stream:
        tag = e[0]
        if tag == "dlv":
            _, idx, rid, _, tx = e
            if rid in delivered:
                delivered[rid].add(tx.txid)
        elif tag == "inp" and not replay.fused:
            _, idx, rid, _, block = e
            if rid not in delivered:
                continue
            for tx in block.txs:
                if tx.txid not in delivered[rid]:
                    return Verdict("valid-input", VIOLATION, (idx,),
                                   f"replica {rid} input {tx.txid} without a matching "
                                   f"request delivery")
        elif tag == "sps" and replay.fused:
            _, idx, rid, _, _, txs = e
            if rid not in delivered:
                continue
            for tx in txs:
                if tx.txid not in delivered[rid]:
                    return Verdict("valid-input", VIOLATION, (idx,),
                                   f"replica {rid} sub-proposed {tx.txid} without a "
                                   f"matching request delivery")
    return Verdict("valid-input", PASS)


def _check_request_agreement(replay: Replay) -> Verdict:
    delivered: dict[tuple, set] = {}
    requests: list[tuple[int, tuple]] = []
    for e in replay.stream:
        if e[0] == "dlv":
            _, idx, rid, _, tx = e
            if rid in replay.correct_replicas:
                delivered.setdefault(tx.txid, set()).add(rid)
        elif e[0] == "req":
            _, idx, client, tx, suppressed = e
            if client not in replay.corrupt_clients and not suppressed:
                requests.append((idx, tx.txid))
    needed = set(replay.correct_replicas)
    for idx, txid in requests:
        if not needed <= delivered.get(txid, set()):
            return Verdict("request-agreement", INCONCLUSIVE, (idx,),
                           f"request {txid} not yet delivered to every correct replica "
                           f"within the horizon")
    return Verdict("request-agreement", PASS)


def _check_stubborn_input(replay: Replay, grace: int) -> Verdict:
    if not replay.fused:
        return Verdict("stubborn-input", NOT_APPLICABLE, (),
                       "plain-consensus replicas make no stubbornness promise")
    model = replay.model
    finalised = replay.finalised()
    worst: Optional[Verdict] = None

    for rid in replay.correct_replicas:
        inputs = replay.own_inputs.get(rid, {})
        if not inputs:
            continue
        out_blocks = {inst: block for _, _, r, inst, block in replay.outputs()
                      if r == rid}
        # Receipts paired with the replica's next-input instance at delivery time.
        receipts: list[tuple[tuple, object, int, int]] = []
        seen_receipt: set = set()
        last_out = -1
        for e in replay.stream:
            if e[0] == "out" and e[2] == rid:
                last_out = max(last_out, e[3])
            elif e[0] == "dlv" and e[2] == rid:
                tx = e[4]
                if tx.txid not in seen_receipt:
                    seen_receipt.add(tx.txid)
                    receipts.append((tx.txid, tx, last_out + 1, e[1]))

        input_instances = sorted(inputs)
        state = model.initial_state()
        state_before: dict[int, object] = {}
        applied = 0
        for inst in input_instances:
            while applied + 1 < inst and (applied + 1) in out_blocks:
                for tx in out_blocks[applied + 1].txs:
                    if model.accepts(state, tx):
                        model.apply(state, tx)
                applied += 1
            state_before[inst] = model.copy_state(state)

        for txid, tx, floor, recv_idx in receipts:
            if txid in finalised:
                continue  # disjunct (i): finalised
            relevant = [i for i in input_instances if i >= floor]
            witnessed = False
            misses = 0
            for inst in relevant:
                _, txs_in = inputs[inst]
                if any(t.txid == txid for t in txs_in):
                    continue
                # disjunct (ii): some insertion position breaks validity
                scratch = model.copy_state(state_before[inst])
                position_witness = not model.accepts(scratch, tx)
                if not position_witness:
                    for t in txs_in:
                        if not model.accepts(scratch, t):
                            position_witness = True
                            break
                        model.apply(scratch, t)
                        if not model.accepts(model.copy_state(scratch), tx):
                            position_witness = True
                            break
                if position_witness:
                    witnessed = True
                    break
                misses += 1
            if witnessed:
                continue
            if relevant and any(t.txid == txid for t in inputs[relevant[-1]][1]):
                continue  # disjunct (iii), confirmed up to the horizon
            verdict_idx = inputs[relevant[-1]][0] if relevant else recv_idx
            if misses >= grace:
                return Verdict("stubborn-input", VIOLATION, (recv_idx, verdict_idx),
                               f"replica {rid} omitted pending valid {txid} from "
                               f"{misses} inputs without an invalidity witness")
            if worst is None:
                worst = Verdict("stubborn-input", INCONCLUSIVE, (recv_idx,),
                                f"replica {rid}: {txid} pending; the horizon ended "
                                f"within its grace budget")
    return worst or Verdict("stubborn-input", PASS)


# ---------------------------------------------------------------------------
# Log-level checks (the replicated-log view of output chains).
# ---------------------------------------------------------------------------

def _log_scan(replay: Replay):
    model = replay.model
    per_sizes: dict[int, dict[int, int]] = {r: {} for r in replay.correct_replicas}
    per_committed: dict[int, dict[int, tuple]] = {r: {} for r in replay.correct_replicas}
    global_committed: dict[int, tuple[tuple, int]] = {}
    log_state = {r: model.initial_state() for r in replay.correct_replicas}
    log_ok = {r: True for r in replay.correct_replicas}
    safety = finality = validity = None

    for _, idx, rid, instance, block in replay.outputs():
        if rid not in per_sizes or instance < 1:
            continue
        sizes = per_sizes[rid]
        offset = sum(sz for inst, sz in sizes.items() if inst < instance)
        sizes.setdefault(instance, len(block.txs))
        for k, tx in enumerate(block.txs):
            pos = offset + k
            prior = per_committed[rid].get(pos)
            if prior is not None and prior[0] != tx.txid and finality is None:
                finality = Verdict("log-finality", VIOLATION, (prior[1], idx),
                                   f"replica {rid} committed two transactions at log "
                                   f"position {pos}")
            per_committed[rid].setdefault(pos, (tx.txid, idx))
            gprior = global_committed.get(pos)
            if gprior is not None and gprior[0] != tx.txid and safety is None:
                safety = Verdict("safety-log", VIOLATION, (gprior[1], idx),
                                 f"two correct replicas committed different "
                                 f"transactions at log position {pos}")
            global_committed.setdefault(pos, (tx.txid, idx))
            if log_ok[rid] and model.accepts(log_state[rid], tx):
                model.apply(log_state[rid], tx)
            elif log_ok[rid]:
                log_ok[rid] = False
                if validity is None:
                    validity = Verdict("log-validity", VIOLATION, (idx,),
                                       f"replica {rid}'s committed log becomes invalid "
                                       f"at position {pos}")
    return (safety or Verdict("safety-log", PASS),
            validity or Verdict("log-validity", PASS),
            finality or Verdict("log-finality", PASS))


# ---------------------------------------------------------------------------
# Public entry points.
# ---------------------------------------------------------------------------

def check_trace(scenario: Scenario, events, grace: Optional[int] = None) -> list[Verdict]:
    """Run every property check on one trace; verdict order follows PROPERTIES."""
    replay = Replay(scenario, events)
    g = grace if grace is not None else scenario.grace
    safety_log, log_validity, log_finality = _log_scan(replay)
    fairness, _ = _fairness_scan(replay, g, log_level=False)
    fairness_log, _ = _fairness_scan(replay, g, log_level=True)
    return [
        _check_agreement(replay),
        _check_chain_validity(replay),
        _check_chain_finality(replay),
        fairness,
        _check_fusion_validity(replay),
        _check_stubborn_input(replay, g),
        _check_valid_input(replay),
        _check_valid_request(replay),
        _check_request_agreement(replay),
        safety_log,
        log_validity,
        log_finality,
        fairness_log,
    ]


def check_agreement(scenario, events) -> Verdict:
    return _check_agreement(Replay(scenario, events))


def check_chain_validity(scenario, events) -> Verdict:
    return _check_chain_validity(Replay(scenario, events))


def check_chain_finality(scenario, events) -> Verdict:
    return _check_chain_finality(Replay(scenario, events))


def check_user_fairness(scenario, events, grace: Optional[int] = None) -> Verdict:
    replay = Replay(scenario, events)
    verdict, _ = _fairness_scan(replay, grace if grace is not None else scenario.grace,
                                log_level=False)
    return verdict


def check_fusion_validity(scenario, events) -> Verdict:
    return _check_fusion_validity(Replay(scenario, events))


def check_stubborn_input(scenario, events, grace: Optional[int] = None) -> Verdict:
    replay = Replay(scenario, events)
    return _check_stubborn_input(replay, grace if grace is not None else scenario.grace)


def check_valid_input(scenario, events) -> Verdict:
    return _check_valid_input(Replay(scenario, events))


def check_valid_request(scenario, events) -> Verdict:
    return _check_valid_request(Replay(scenario, events))


def check_request_agreement(scenario, events) -> Verdict:
    return _check_request_agreement(Replay(scenario, events))


def check_safety_log(scenario, events) -> Verdict:
    return _log_scan(Replay(scenario, events))[0]


def check_log_validity(scenario, events) -> Verdict:
    return _log_scan(Replay(scenario, events))[1]


def check_log_finality(scenario, events) -> Verdict:
    return _log_scan(Replay(scenario, events))[2]
