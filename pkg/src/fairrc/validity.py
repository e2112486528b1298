"""Application validity predicates and the sub-proposal fusion procedure.

Two concrete models span the order-fairness spectrum:

* ``account`` -- balance/nonce transfers, order-dependent: a transaction can
  become invalid when a conflicting one lands first.
* ``set`` -- unique-id membership, commutative: a transaction is valid
  anywhere as long as it has not been included before.

Both are deterministic functions of the chain alone.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from .core import (
    Chain,
    Log,
    Transaction,
    Transfer,
    check_chain_structure,
    extend_chain,
    log_to_chain,
)


class ValidityModel:
    """Deterministic chain validity as an incremental state machine.

    ``valid_chain`` folds ``accepts``/``apply`` over the chain's transactions
    in order; subclasses define what the state is.
    """

    name: str

    def initial_state(self):
        raise NotImplementedError

    def copy_state(self, state):
        raise NotImplementedError

    def accepts(self, state, tx: Transaction) -> bool:
        raise NotImplementedError

    def apply(self, state, tx: Transaction) -> None:
        """Mutate ``state`` by applying ``tx``.  Pre: ``accepts(state, tx)``."""
        raise NotImplementedError


class AccountModel(ValidityModel):
    """Transfers keep every balance non-negative and per-account nonces sequential.

    Nonces start at 1.  An unknown account has balance 0.
    """

    name = "account"

    def __init__(self, balances: Mapping[str, int]):
        self.genesis_balances = dict(balances)

    def initial_state(self):
        return (dict(self.genesis_balances), {})

    def copy_state(self, state):
        balances, nonces = state
        return (dict(balances), dict(nonces))

    def accepts(self, state, tx: Transaction) -> bool:
        balances, nonces = state
        p = tx.payload
        if not isinstance(p, Transfer):
            return False
        if p.nonce != nonces.get(p.src, 0) + 1:
            return False
        return balances.get(p.src, 0) >= p.amount >= 0

    def apply(self, state, tx: Transaction) -> None:
        balances, nonces = state
        p = tx.payload
        balances[p.src] = balances.get(p.src, 0) - p.amount
        balances[p.dst] = balances.get(p.dst, 0) + p.amount
        nonces[p.src] = p.nonce


class SetModel(ValidityModel):
    """A chain is valid iff no transaction id appears twice."""

    name = "set"

    def initial_state(self):
        return set()

    def copy_state(self, state):
        return set(state)

    def accepts(self, state, tx: Transaction) -> bool:
        return tx.txid not in state

    def apply(self, state, tx: Transaction) -> None:
        state.add(tx.txid)


def make_model(spec: Mapping) -> ValidityModel:
    """Build a validity model from its config record ({"model": ..., "genesis": ...})."""
    name = spec.get("model")
    if name == "account":
        return AccountModel(spec.get("genesis", {}).get("balances", {}))
    if name == "set":
        return SetModel()
    raise ValueError(f"unknown validity model: {name!r}")


def model_config(model: ValidityModel) -> dict:
    if isinstance(model, AccountModel):
        return {"model": "account", "genesis": {"balances": dict(model.genesis_balances)}}
    return {"model": "set", "genesis": {}}


# ---------------------------------------------------------------------------
# Chain / log predicates.
# ---------------------------------------------------------------------------

def state_after(model: ValidityModel, chain: Chain):
    """State after applying a chain's transactions, or None if some tx is invalid."""
    state = model.initial_state()
    for block in chain[1:]:
        for tx in block.txs:
            if not model.accepts(state, tx):
                return None
            model.apply(state, tx)
    return state


def valid_chain(model: ValidityModel, chain: Chain) -> bool:
    """Deterministic application validity of a structurally well-formed chain.

    Raises :class:`MalformedChainError` on structural defects; returns False
    only for application-level invalidity.
    """
    check_chain_structure(chain)
    return state_after(model, chain) is not None


def valid_log(model: ValidityModel, log: Log) -> bool:
    """Log validity, defined through the one-transaction-per-block chain view."""
    return valid_chain(model, log_to_chain(log))


def valid_extension(model: ValidityModel, state, txs: Sequence[Transaction]) -> bool:
    """Would appending a block with ``txs`` keep the chain behind ``state`` valid?"""
    scratch = model.copy_state(state)
    for tx in txs:
        if not model.accepts(scratch, tx):
            return False
        model.apply(scratch, tx)
    return True


# ---------------------------------------------------------------------------
# Fusion.
# ---------------------------------------------------------------------------

Contributions = Mapping[int, Sequence[Transaction]]


class FusionModel:
    """Deterministic merge of several transaction sequences into one valid sequence.

    Procedure: order contributions by ascending contributor id, concatenate,
    deduplicate by transaction id keeping the first occurrence, then scan left
    to right keeping each transaction only if appending it keeps the chain
    valid.  A transaction is therefore dropped only with a witness position:
    the kept prefix at the moment of the drop.
    """

    def __init__(self, validity: ValidityModel):
        self.validity = validity
        self.name = f"greedy-{validity.name}"

    def fuse(self, prefix: Chain, contributions: Contributions) -> tuple[Transaction, ...]:
        kept, _ = self.fuse_explain(prefix, contributions)
        return kept

    def fuse_explain(self, prefix: Chain, contributions: Contributions):
        """Fuse and also report the dropped transactions with witness positions.

        Returns ``(kept, dropped)`` where ``dropped`` is a list of
        ``(tx, position)`` pairs: appending ``tx`` after ``kept[:position]``
        made the chain invalid.
        """
        state = state_after(self.validity, prefix)
        if state is None:
            raise ValueError("fusion prefix must be a valid chain")
        return self.fuse_from_state(state, contributions)

    def fuse_from_state(self, prefix_state, contributions: Contributions):
        """Same as :meth:`fuse_explain` but starting from a prefix state."""
        if not contributions:
            raise ValueError("fusion requires a non-empty collection of contributions")
        model = self.validity
        state = model.copy_state(prefix_state)
        seen: set = set()
        kept: list[Transaction] = []
        dropped: list[tuple[Transaction, int]] = []
        for contributor in sorted(contributions):
            for tx in contributions[contributor]:
                if tx.txid in seen:
                    continue
                seen.add(tx.txid)
                if model.accepts(state, tx):
                    model.apply(state, tx)
                    kept.append(tx)
                else:
                    dropped.append((tx, len(kept)))
        return tuple(kept), dropped


def check_fair_fusion(fusion: FusionModel, prefix: Chain, contributions: Contributions,
                      result: Sequence[Transaction]) -> Optional[Transaction]:
    """Independent audit of a claimed fusion result.

    For every contributed transaction absent from ``result``, scan every
    position k (by rebuilding the chain from scratch) for one where inserting
    the transaction after ``result[:k]`` breaks chain validity.  Returns None
    if every dropped transaction has such a witness, otherwise the first
    transaction that is valid at every position (a fairness violation).

    This is a deliberate brute force, independent of the fusion procedure.
    """
    model = fusion.validity
    result_ids = {tx.txid for tx in result}
    for contributor in sorted(contributions):
        for tx in contributions[contributor]:
            if tx.txid in result_ids:
                continue
            witnessed = False
            for k in range(len(result) + 1):
                candidate = extend_chain(prefix, tuple(result[:k]) + (tx,))
                if not valid_chain(model, candidate):
                    witnessed = True
                    break
            if not witnessed:
                return tx
    return None
