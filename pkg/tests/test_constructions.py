"""Clients, pools, FIFO block assembly, the read() primitive, the log view."""

from fairrc import Scenario, Simulation, run_scenario
from fairrc.constructions import fifo_pick, replica_log
from fairrc.core import (
    GENESIS,
    Transfer,
    flatten_chain_to_log,
    make_transaction,
    parse_block,
    parse_tx,
)
from fairrc.validity import AccountModel, SetModel
from conftest import honest_scenario


def token(client, seq):
    return make_transaction(client, seq, f"t{client}-{seq}")


# -- fifo_pick ------------------------------------------------------------------

def test_fifo_pick_keeps_all_valid_under_cap():
    model = SetModel()
    pool = [token(100, 1), token(100, 2)]
    assert fifo_pick(model, model.initial_state(), pool, 2) == pool


def test_fifo_pick_respects_block_size():
    model = SetModel()
    pool = [token(100, s) for s in (1, 2, 3)]
    assert fifo_pick(model, model.initial_state(), pool, 2) == pool[:2]


def test_fifo_pick_skips_invalid_at_position_but_scans_on():
    model = AccountModel({"A": 5})
    bad = make_transaction(100, 1, Transfer("A", "B", 50, 1))
    good = make_transaction(100, 2, Transfer("A", "B", 1, 1))
    assert fifo_pick(model, model.initial_state(), [bad, good], 4) == [good]


# -- client request path ----------------------------------------------------------

def test_valid_request_broadcasts_to_every_replica():
    scn = honest_scenario("bcrc", txs=1, name="one")
    _, result = run_scenario(scn)
    issued = [ev for ev in result.events if ev.kind == "request-issued"]
    assert len(issued) == 1 and not issued[0].payload["suppressed"]
    delivered = [ev for ev in result.events if ev.kind == "req-delivered"]
    assert sorted(ev.process for ev in delivered) == [0, 1, 2, 3]


def test_invalid_request_is_suppressed_with_trace_note():
    # Account model; the scripted transfer overdraws, so the guard drops it.
    scn = Scenario(n=4, f=1, seed=0, construction="bcrc", horizon_instances=5,
                   validity={"model": "account", "genesis": {"balances": {"A": 1}}},
                   workload=[(1, 100, {"src": "A", "dst": "B", "amount": 5, "nonce": 1})],
                   name="suppressed")
    _, result = run_scenario(scn)
    issued = [ev for ev in result.events if ev.kind == "request-issued"]
    assert len(issued) == 1 and issued[0].payload["suppressed"]
    assert not any(ev.kind == "req-delivered" for ev in result.events)
    # a read-snapshot precedes the issue decision
    kinds = [ev.kind for ev in result.events]
    assert kinds.index("read-snapshot") < kinds.index("request-issued")


def test_read_returns_the_shortest_correct_chain():
    scn = honest_scenario("bcrc", txs=4, name="read")
    sim = Simulation(scn)
    result = sim.run()
    # After the run, read() equals the least advanced correct replica's chain.
    chain, _ = sim.read_chain()
    lengths = [len(sim.replicas[r].chain) for r in sim.correct_replicas]
    assert len(chain) == min(lengths)
    for r in sim.correct_replicas:
        assert list(chain) == sim.replicas[r].chain[: len(chain)]


def test_read_snapshots_are_prefixes_of_every_correct_chain():
    scn = honest_scenario("bcrc", seed=2, txs=8, name="snap")
    _, result = run_scenario(scn)
    # Reconstruct each replica's chain length as the trace replays; every
    # read-snapshot must not exceed any correct replica's length at that point.
    lengths = {r: 1 for r in range(4)}  # genesis
    for ev in result.events:
        if ev.kind == "output" and ev.payload["instance"] >= 1:
            lengths[ev.process] += 1
        elif ev.kind == "read-snapshot":
            assert ev.payload["length"] <= min(lengths.values()) + 1
            assert ev.payload["length"] >= 1


# -- pool discipline ---------------------------------------------------------------

def test_finalised_transactions_cleared_before_selection():
    scn = honest_scenario("bcrc", txs=6, name="clear")
    _, result = run_scenario(scn)
    cleared = [ev for ev in result.events if ev.kind == "pool-cleared"
               and ev.payload["removed"]]
    assert cleared  # something was finalised and removed
    # after clearing, no subsequent input by that replica repeats a cleared tx
    seen_cleared = {}
    for ev in result.events:
        if ev.kind == "pool-cleared":
            seen_cleared.setdefault(ev.process, set()).update(
                tuple(t) for t in ev.payload["removed"])
        elif ev.kind == "rc-input":
            block = parse_block(ev.payload["block"])
            for tx in block.txs:
                assert tx.txid not in seen_cleared.get(ev.process, set())


def test_duplicate_req_deliveries_idempotent_on_pool():
    scn = honest_scenario("bcrc", txs=0, name="dup")
    scn.workload = []
    sim = Simulation(scn)
    replica = sim.replicas[0]
    t = token(100, 1)
    replica.on_request(100, t)
    replica.on_request(100, t)
    assert replica.pool == [t]


def test_block_size_cap_carries_overflow_to_next_instance():
    scn = honest_scenario("bcrc", txs=6, name="cap", max_block_size=2)
    _, result = run_scenario(scn)
    inputs = [parse_block(ev.payload["block"]) for ev in result.events
              if ev.kind == "rc-input"]
    assert inputs and all(len(b.txs) <= 2 for b in inputs)
    # all six transactions still finalise eventually
    finalised = set()
    for ev in result.events:
        if ev.kind == "rc-decided" and ev.payload["instance"] >= 1:
            finalised.update(parse_tx(t).txid for t in ev.payload["block"]["txs"])
    assert len(finalised) == 6


# -- the replicated-log adapter -------------------------------------------------------

def test_replica_log_is_the_flattened_chain():
    scn = honest_scenario("bcfrc", txs=5, name="logview")
    sim = Simulation(scn)
    sim.run()
    for r in sim.correct_replicas:
        chain = tuple(sim.replicas[r].chain)
        assert replica_log(chain) == flatten_chain_to_log(chain)


def test_correct_replica_logs_are_prefix_related():
    scn = honest_scenario("bcfrc", seed=7, txs=9, name="logsafety")
    sim = Simulation(scn)
    sim.run()
    logs = [replica_log(tuple(sim.replicas[r].chain)) for r in sim.correct_replicas]
    logs.sort(key=len)
    for a, b in zip(logs, logs[1:]):
        assert b[: len(a)] == a


def test_dlsmr_adapter_construction_runs_as_fused():
    scn = honest_scenario("dlsmr-over-bcfrc", txs=5, name="adapter")
    _, result = run_scenario(scn)
    from fairrc import check_trace
    statuses = {v.prop: v.status for v in check_trace(scn, result.events)}
    assert statuses["fusion-validity"] == "pass"
    for prop in ("safety-log", "log-validity", "log-finality", "user-fairness-log"):
        assert statuses[prop] == "pass"
