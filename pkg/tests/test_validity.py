"""Validity models and the fusion procedure."""

import random

import pytest

from fairrc.core import GENESIS, Transfer, extend_chain, log_to_chain, make_transaction
from fairrc.validity import (
    AccountModel,
    FusionModel,
    SetModel,
    check_fair_fusion,
    make_model,
    state_after,
    valid_chain,
    valid_log,
)


def transfer(client, seq, src, dst, amount, nonce):
    return make_transaction(client, seq, Transfer(src, dst, amount, nonce))


def token(client, seq, value=None):
    return make_transaction(client, seq, value or f"t{client}-{seq}")


ACCOUNTS = AccountModel({"A": 10, "B": 5})


# -- account model ------------------------------------------------------------

def test_account_transfer_within_balance_is_valid():
    chain = extend_chain((GENESIS,), (transfer(100, 1, "A", "B", 4, 1),))
    assert valid_chain(ACCOUNTS, chain)


def test_account_overdraft_is_invalid():
    chain = extend_chain((GENESIS,), (transfer(100, 1, "A", "B", 20, 1),))
    assert not valid_chain(ACCOUNTS, chain)


def test_account_balance_exhaustion_mid_log():
    log = (transfer(100, 1, "A", "B", 4, 1),
           transfer(100, 2, "A", "B", 4, 2),
           transfer(100, 3, "A", "B", 4, 3))
    assert not valid_log(ACCOUNTS, log)
    assert valid_log(ACCOUNTS, log[:2])


def test_account_nonces_must_be_sequential():
    assert not valid_log(ACCOUNTS, (transfer(100, 1, "A", "B", 1, 2),))
    assert not valid_log(ACCOUNTS, (transfer(100, 1, "A", "B", 1, 1),
                                    transfer(100, 2, "A", "B", 1, 1)))


def test_account_nonce_once_consumed_stays_consumed():
    # Once a nonce is used, the conflicting transaction is invalid against
    # every longer prefix.
    winner = transfer(199, 1, "A", "C", 4, 1)
    loser = transfer(100, 1, "A", "B", 4, 1)
    chain = extend_chain((GENESIS,), (winner,))
    for extra in [(), (transfer(100, 2, "A", "B", 1, 2),)]:
        longer = extend_chain(chain, extra) if extra else chain
        assert not valid_chain(ACCOUNTS, extend_chain(longer, (loser,)))


# -- set model ----------------------------------------------------------------

def test_set_model_rejects_duplicates():
    t = token(100, 1)
    assert not valid_log(SetModel(), (t, t))
    assert valid_log(SetModel(), (t, token(100, 2)))


def test_empty_log_is_valid():
    assert valid_log(SetModel(), ())
    assert valid_log(ACCOUNTS, ())


def test_make_model_dispatch():
    assert isinstance(make_model({"model": "set"}), SetModel)
    m = make_model({"model": "account", "genesis": {"balances": {"A": 3}}})
    assert isinstance(m, AccountModel) and m.genesis_balances == {"A": 3}
    with pytest.raises(ValueError):
        make_model({"model": "nope"})


# -- valid_log == valid_chain over the correspondence -------------------------

def _direct_log_validity(model_name, log):
    """Independent fold over the log, written directly from the model rules."""
    if model_name == "set":
        seen = set()
        for tx in log:
            if tx.txid in seen:
                return False
            seen.add(tx.txid)
        return True
    balances = {"A": 10, "B": 5}
    nonces = {}
    for tx in log:
        p = tx.payload
        if p.nonce != nonces.get(p.src, 0) + 1 or balances.get(p.src, 0) < p.amount:
            return False
        balances[p.src] = balances.get(p.src, 0) - p.amount
        balances[p.dst] = balances.get(p.dst, 0) + p.amount
        nonces[p.src] = p.nonce
    return True


def test_valid_log_matches_chain_view_on_random_logs():
    rng = random.Random(42)
    for _ in range(1000):
        if rng.random() < 0.5:
            log = tuple(token(100 + rng.randint(0, 2), rng.randint(1, 6))
                        for _ in range(rng.randint(0, 6)))
            model, name = SetModel(), "set"
        else:
            log = tuple(transfer(100, i + 1, rng.choice("AB"), rng.choice("ABC"),
                                 rng.randint(0, 6), rng.randint(1, 3))
                        for i in range(rng.randint(0, 5)))
            model, name = ACCOUNTS, "account"
        via_chain = valid_chain(model, log_to_chain(log))
        assert valid_log(model, log) == via_chain == _direct_log_validity(name, log)


# -- fusion --------------------------------------------------------------------

def test_fuse_single_contributor_passthrough():
    fusion = FusionModel(SetModel())
    txs = (token(100, 1), token(100, 2))
    assert fusion.fuse((GENESIS,), {0: txs}) == txs


def test_fuse_deduplicates_identical_contributions():
    fusion = FusionModel(SetModel())
    txs = (token(100, 1), token(100, 2))
    assert fusion.fuse((GENESIS,), {0: txs, 1: txs}) == txs


def test_fuse_conflict_drops_second_with_witness():
    fusion = FusionModel(AccountModel({"A": 10}))
    a = transfer(100, 1, "A", "B", 6, 1)
    b = transfer(101, 1, "A", "C", 6, 1)
    kept, dropped = fusion.fuse_explain((GENESIS,), {1: (a,), 2: (b,)})
    assert kept == (a,)
    assert [(tx.txid, k) for tx, k in dropped] == [(b.txid, 1)]
    # Brute force: appending the dropped tx at its witness position breaks
    # validity, verified by rebuilding the chain from scratch.
    tx, k = dropped[0]
    candidate = extend_chain((GENESIS,), tuple(kept[:k]) + (tx,))
    assert not valid_chain(fusion.validity, candidate)


def test_fuse_orders_contributions_by_contributor_id():
    fusion = FusionModel(SetModel())
    t1, t2 = token(100, 1), token(100, 2)
    out = fusion.fuse((GENESIS,), {5: (t2,), 1: (t1,)})
    assert out == (t1, t2)


def test_fuse_requires_contributions():
    with pytest.raises(ValueError):
        FusionModel(SetModel()).fuse((GENESIS,), {})


def test_fuse_requires_valid_prefix():
    bad = log_to_chain((token(1, 1), token(1, 1)))
    with pytest.raises(ValueError):
        FusionModel(SetModel()).fuse(bad, {0: ()})


def test_fuse_deterministic():
    rng = random.Random(9)
    fusion = FusionModel(AccountModel({"A": 20}))
    coll = {i: tuple(transfer(100 + i, j + 1, "A", "B", rng.randint(0, 4),
                              rng.randint(1, 3)) for j in range(3))
            for i in range(3)}
    assert fusion.fuse((GENESIS,), coll) == fusion.fuse((GENESIS,), coll)


def test_set_model_fuse_insensitive_to_collection_order():
    fusion = FusionModel(SetModel())
    txs = {0: (token(100, 1), token(100, 2)), 2: (token(101, 1),),
           5: (token(100, 2), token(102, 4))}
    base = set(t.txid for t in fusion.fuse((GENESIS,), txs))
    shuffled = {k: txs[k] for k in (5, 0, 2)}
    assert set(t.txid for t in fusion.fuse((GENESIS,), shuffled)) == base


# -- fair-fusion audit ----------------------------------------------------------

def random_inputs(rng, model_name):
    # Transaction ids stay unique (one payload per (client, seq)): that is a
    # type invariant the rest of the system relies on.
    if model_name == "set":
        model = SetModel()
        prefix_log = tuple(token(103, s + 1) for s in range(rng.randint(0, 3)))
        pool = [token(100 + i % 3, 10 + i) for i in range(8)]
    else:
        model = AccountModel({"A": 12, "S": 6})
        prefix_log = ()
        pool = [transfer(100 + i % 3, 10 + i, rng.choice("AS"), rng.choice("ABC"),
                         rng.randint(0, 5), rng.randint(1, 3)) for i in range(8)]
    prefix = log_to_chain(prefix_log)
    coll = {c: tuple(rng.choice(pool) for _ in range(rng.randint(0, 4)))
            for c in range(rng.randint(1, 4))}
    return FusionModel(model), prefix, coll


@pytest.mark.parametrize("model_name", ["set", "account"])
def test_fair_fusion_holds_on_random_inputs(model_name):
    rng = random.Random(1234)
    for _ in range(200):
        fusion, prefix, coll = random_inputs(rng, model_name)
        result = fusion.fuse(prefix, coll)
        assert check_fair_fusion(fusion, prefix, coll, result) is None


def test_fair_fusion_flags_deleted_valid_tx():
    fusion = FusionModel(SetModel())
    coll = {0: (token(100, 1), token(100, 2)), 1: (token(101, 1),)}
    result = fusion.fuse((GENESIS,), coll)
    mutated = result[:-1]  # drop a unique tx: valid at every position
    offender = check_fair_fusion(fusion, (GENESIS,), coll, mutated)
    assert offender is not None and offender.txid == result[-1].txid


def test_fair_fusion_flags_empty_result_for_valid_singleton():
    fusion = FusionModel(SetModel())
    t = token(100, 1)
    assert check_fair_fusion(fusion, (GENESIS,), {0: (t,)}, ()) == t


def test_state_after_invalid_chain_is_none():
    chain = log_to_chain((token(1, 1), token(1, 1)))
    assert state_after(SetModel(), chain) is None
