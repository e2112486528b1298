"""Fusion layer: turns plain repeated consensus into fair repeated consensus.

Each replica broadcasts its input block's transactions as a signed
sub-proposal.  Once it holds sub-proposals from f+1 distinct senders for the
next instance (and has output the previous one), it fuses all of them into a
single certified block and hands that to the consensus oracle.  The
certificate carries the aggregated signed sub-proposals, so any replica can
re-check that a decided block really is the fusion of f+1 or more
contributions.

The layer uses only consensus input/output and asynchronous sends; no timing
assumptions appear here.
"""

from __future__ import annotations

from .core import (
    Block,
    Certificate,
    CertificateEntry,
    Chain,
    Signature,
    Transaction,
    block_signing_bytes,
    check_chain_structure,
    hash_block,
    sig_record,
    subprop_signing_bytes,
    tx_record,
    verify,
)
from .validity import FusionModel, state_after, valid_extension


def certificate_ok(cert: Certificate, instance: int, f: int) -> bool:
    """Structural certificate check: f+1 distinct senders, all signatures verify."""
    if cert.instance != instance:
        return False
    senders = {e.sender for e in cert.entries}
    if len(senders) != len(cert.entries) or len(senders) < f + 1:
        return False
    return all(
        verify(e.signature, subprop_signing_bytes(e.sender, cert.instance, e.txs), e.sender)
        for e in cert.entries)


def certified_extension_valid(fusion: FusionModel, f: int, prefix_state,
                              instance: int, block: Block) -> bool:
    """Certified validity of appending ``block`` after a prefix with ``prefix_state``.

    True iff the base application validity holds, the certificate carries f+1
    or more verified distinct sub-proposals for this instance, and the block's
    transactions equal an independent local recomputation of the fusion of the
    certified sub-proposals.
    """
    if block.certificate is None:
        return False
    if not certificate_ok(block.certificate, instance, f):
        return False
    if not valid_extension(fusion.validity, prefix_state, block.txs):
        return False
    contributions = {e.sender: e.txs for e in block.certificate.entries}
    fused, _ = fusion.fuse_from_state(prefix_state, contributions)
    return fused == block.txs


def certified_valid_chain(fusion: FusionModel, f: int, chain: Chain) -> bool:
    """Whole-chain variant: base validity plus the certificate check on the tip."""
    check_chain_structure(chain)
    if len(chain) < 2:
        return False
    prefix_state = state_after(fusion.validity, chain[:-1])
    if prefix_state is None:
        return False
    return certified_extension_valid(fusion, f, prefix_state, len(chain) - 1, chain[-1])


class FusionLayer:
    """Per-replica sub-proposal aggregation state machine.

    ``owner`` is the replica object; it provides the local chain (``chain``,
    ``chain_state``, ``last_output``) and may customise per-recipient
    sub-proposal content (equivocating strategies override that hook).
    """

    def __init__(self, sim, owner):
        self.sim = sim
        self.owner = owner
        self.done = 0
        # instance -> sender -> (txs, signature); first version received wins.
        self.subprops: dict[int, dict[int, tuple[tuple[Transaction, ...], Signature]]] = {}

    def input(self, instance: int, block: Block) -> None:
        """Broadcast the block's transactions as a signed sub-proposal."""
        rid = self.owner.rid
        for to in self.sim.replica_ids:
            txs = self.owner.subprop_content(to, block.txs)
            if txs is None:
                continue  # silent strategies withhold
            sig = self.sim.sign(rid, subprop_signing_bytes(rid, instance, txs))
            self.sim.emit("sub-prop-sent", rid,
                          {"to": to, "instance": instance,
                           "txs": [tx_record(t) for t in txs], "sig": sig_record(sig)})
            self.sim.network.send(rid, to, ("sub-prop", rid, instance, txs, sig))

    def on_subprop(self, sender: int, instance: int,
                   txs: tuple[Transaction, ...], sig: Signature) -> None:
        self.sim.emit("sub-prop-delivered", self.owner.rid,
                      {"from": sender, "instance": instance,
                       "txs": [tx_record(t) for t in txs], "sig": sig_record(sig)})
        if not verify(sig, subprop_signing_bytes(sender, instance, txs), sender):
            return
        if instance <= self.done:
            return  # already aggregated past this instance; unusable
        self.subprops.setdefault(instance, {}).setdefault(sender, (txs, sig))
        self.maybe_aggregate()

    def maybe_aggregate(self) -> None:
        """Fire the aggregation trigger if its guard holds.

        Guard: f+1 or more distinct senders for the next instance, the
        previous instance aggregated, and the local chain already holds the
        previous block (the fusion prefix and the consensus-input
        precondition both need it).
        """
        instance = self.done + 1
        if self.owner.last_output < instance - 1:
            return
        received = self.subprops.get(instance, {})
        if len(received) < self.sim.f + 1:
            return
        contributions = {s: txs for s, (txs, sig) in received.items()}
        fused, dropped = self.sim.fusion.fuse_from_state(self.owner.chain_state,
                                                         contributions)
        entries = tuple(CertificateEntry(s, received[s][0], received[s][1])
                        for s in sorted(received))
        cert = Certificate(instance, entries)
        parent = hash_block(self.owner.chain[-1])
        rid = self.owner.rid
        sig = self.sim.sign(rid, block_signing_bytes(parent, fused))
        block = Block(parent, fused, sig, cert)
        self.done = instance
        self.sim.rc.input(rid, instance, block,
                          dropped=[[list(tx.txid), k] for tx, k in dropped])
