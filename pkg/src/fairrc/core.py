"""Ledger vocabulary shared by every layer.

Transactions, blocks, chains and logs are immutable values; the chain<->log
correspondence (one transaction per block) and the simulated signature scheme
live here too.  Every type has a canonical record form (a tagged dict with
fixed key order) used for hashing, signing, trace files and configs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, TypeAlias, Union

ProcessId: TypeAlias = int
ReplicaId: TypeAlias = int
ClientId: TypeAlias = int
TxId: TypeAlias = tuple[int, int]
BlockHash: TypeAlias = str

#: Pseudo-process that delivers decision notifications to replicas.
CONSENSUS_SERVICE: ProcessId = -1


class MalformedChainError(ValueError):
    """Structural defect in a chain (as opposed to application invalidity)."""


class ForgeryError(RuntimeError):
    """A process attempted to sign on behalf of somebody else."""


@dataclass(frozen=True)
class Transfer:
    """Account-model payload: move ``amount`` from ``src`` to ``dst``.

    ``nonce`` must be the next unused nonce of the ``src`` account when the
    transfer is applied.  The source account is named in the payload and is
    deliberately not tied to the issuing client, so two clients can race on
    the same account.
    """

    src: str
    dst: str
    amount: int
    nonce: int


# Set-model payloads are opaque strings.
Payload: TypeAlias = Union[Transfer, str]


@dataclass(frozen=True)
class Signature:
    """Simulated signature: a keyed digest of the signed payload."""

    signer: ProcessId
    digest: str


@dataclass(frozen=True)
class Transaction:
    client: ClientId
    seq: int
    payload: Payload
    signature: Signature

    @property
    def txid(self) -> TxId:
        # (client, seq) uniquely identifies a transaction.
        return (self.client, self.seq)


@dataclass(frozen=True)
class CertificateEntry:
    """One signed sub-proposal aggregated into a fused block."""

    sender: ReplicaId
    txs: tuple[Transaction, ...]
    signature: Signature


@dataclass(frozen=True)
class Certificate:
    """Proof that a fused block aggregates sub-proposals from f+1 or more replicas."""

    instance: int
    entries: tuple[CertificateEntry, ...]

    def senders(self) -> tuple[ReplicaId, ...]:
        return tuple(e.sender for e in self.entries)


@dataclass(frozen=True)
class Block:
    parent: Optional[BlockHash]
    txs: tuple[Transaction, ...]
    proposer_sig: Optional[Signature] = None
    certificate: Optional[Certificate] = None


GENESIS = Block(parent=None, txs=())

Chain: TypeAlias = tuple[Block, ...]
Log: TypeAlias = tuple[Transaction, ...]


# ---------------------------------------------------------------------------
# Canonical records.
#
# Key order is fixed; serialisation is byte-stable so hashes, signatures and
# trace files are reproducible across runs.
# ---------------------------------------------------------------------------

def canonical_bytes(record) -> bytes:
    return json.dumps(record, separators=(",", ":"), ensure_ascii=True).encode()


def payload_record(p: Payload):
    if isinstance(p, Transfer):
        return {"record": "transfer", "src": p.src, "dst": p.dst,
                "amount": p.amount, "nonce": p.nonce}
    return p


def parse_payload(rec) -> Payload:
    if isinstance(rec, dict):
        if rec.get("record") != "transfer":
            raise ValueError(f"unknown payload record: {rec!r}")
        return Transfer(rec["src"], rec["dst"], rec["amount"], rec["nonce"])
    return rec


def sig_record(s: Signature):
    return {"record": "sig", "signer": s.signer, "digest": s.digest}


def parse_sig(rec) -> Signature:
    return Signature(rec["signer"], rec["digest"])


def tx_record(tx: Transaction):
    return {"record": "tx", "client": tx.client, "seq": tx.seq,
            "payload": payload_record(tx.payload), "sig": sig_record(tx.signature)}


def parse_tx(rec) -> Transaction:
    return Transaction(rec["client"], rec["seq"], parse_payload(rec["payload"]),
                       parse_sig(rec["sig"]))


def cert_record(c: Certificate):
    return {"record": "cert", "instance": c.instance,
            "entries": [{"sender": e.sender,
                         "txs": [tx_record(t) for t in e.txs],
                         "sig": sig_record(e.signature)} for e in c.entries]}


def parse_cert(rec) -> Certificate:
    entries = tuple(CertificateEntry(e["sender"],
                                     tuple(parse_tx(t) for t in e["txs"]),
                                     parse_sig(e["sig"]))
                    for e in rec["entries"])
    return Certificate(rec["instance"], entries)


def block_record(b: Block):
    return {"record": "block", "parent": b.parent,
            "txs": [tx_record(t) for t in b.txs],
            "sig": sig_record(b.proposer_sig) if b.proposer_sig else None,
            "cert": cert_record(b.certificate) if b.certificate else None}


def parse_block(rec) -> Block:
    return Block(rec["parent"],
                 tuple(parse_tx(t) for t in rec["txs"]),
                 parse_sig(rec["sig"]) if rec["sig"] else None,
                 parse_cert(rec["cert"]) if rec["cert"] else None)


# ---------------------------------------------------------------------------
# Hashing and simulated signatures.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def hash_block(b: Block) -> BlockHash:
    """Content hash of a block's canonical record (the chain pointer target)."""
    return hashlib.sha256(canonical_bytes(block_record(b))).hexdigest()[:16]


def _keyed_digest(signer: ProcessId, payload: bytes) -> str:
    return hashlib.sha256(b"%d|" % signer + payload).hexdigest()[:32]


def sign(signer: ProcessId, payload: bytes) -> Signature:
    """Produce a signature of ``payload`` by ``signer``.

    Soundness is enforced by the simulation engine, which only lets the
    currently executing process (or an adversary controlling a corrupt
    process) reach this call for its own id.
    """
    return Signature(signer, _keyed_digest(signer, payload))


def verify(sig: Signature, payload: bytes, signer: ProcessId) -> bool:
    return sig.signer == signer and sig.digest == _keyed_digest(signer, payload)


def tx_signing_bytes(client: ClientId, seq: int, payload: Payload) -> bytes:
    return canonical_bytes(["tx", client, seq, payload_record(payload)])


def block_signing_bytes(parent: Optional[BlockHash], txs: Iterable[Transaction]) -> bytes:
    return canonical_bytes(["block", parent, [tx_record(t) for t in txs]])


def subprop_signing_bytes(sender: ReplicaId, instance: int,
                          txs: Iterable[Transaction]) -> bytes:
    return canonical_bytes(["sub-prop", sender, instance, [tx_record(t) for t in txs]])


def make_transaction(client: ClientId, seq: int, payload: Payload) -> Transaction:
    return Transaction(client, seq, payload,
                       sign(client, tx_signing_bytes(client, seq, payload)))


def verify_transaction(tx: Transaction) -> bool:
    return verify(tx.signature, tx_signing_bytes(tx.client, tx.seq, tx.payload), tx.client)


# ---------------------------------------------------------------------------
# Chains and logs.
# ---------------------------------------------------------------------------

def check_chain_structure(chain: Chain) -> None:
    """Raise :class:`MalformedChainError` unless ``chain`` is well-formed.

    Well-formed: starts at the genesis block and every later block's parent
    pointer is the hash of its predecessor.
    """
    if len(chain) == 0 or chain[0] != GENESIS:
        raise MalformedChainError("chain does not start at the genesis block")
    for i in range(1, len(chain)):
        if chain[i].parent != hash_block(chain[i - 1]):
            raise MalformedChainError(f"broken parent link at block {i}")


def extend_chain(chain: Chain, txs: tuple[Transaction, ...],
                 proposer_sig: Optional[Signature] = None,
                 certificate: Optional[Certificate] = None) -> Chain:
    block = Block(hash_block(chain[-1]), txs, proposer_sig, certificate)
    return chain + (block,)


def flatten_chain_to_log(chain: Chain) -> Log:
    """Concatenate block transaction sequences in chain order (genesis adds nothing)."""
    check_chain_structure(chain)
    out: list[Transaction] = []
    for block in chain[1:]:
        out.extend(block.txs)
    return tuple(out)


def log_to_chain(log: Log) -> Chain:
    """The chain whose block i holds exactly the log's transaction i-1."""
    chain: Chain = (GENESIS,)
    for tx in log:
        chain = extend_chain(chain, (tx,))
    return chain


def is_prefix(shorter: Chain, longer: Chain) -> bool:
    return len(shorter) <= len(longer) and all(
        hash_block(shorter[i]) == hash_block(longer[i]) for i in range(len(shorter)))


def prefix_related(a: Chain, b: Chain) -> bool:
    return is_prefix(a, b) if len(a) <= len(b) else is_prefix(b, a)
