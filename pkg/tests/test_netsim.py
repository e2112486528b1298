"""Deterministic network: delay bounds, reliability, determinism, authentication."""

import random

import pytest

from fairrc import run_scenario
from fairrc.netsim import (
    Network,
    SimClock,
    SimulationError,
    make_pre_gst_policy,
)
from fairrc.trace import dump_trace
from fairrc import check_trace
from conftest import honest_scenario


def fresh_net(gst=0, delta=5, policy=None):
    clock = SimClock(0, gst, delta)
    return Network(clock, random.Random(1),
                   make_pre_gst_policy(policy or {"name": "uniform"})), clock


def test_post_gst_delay_within_bound():
    net, clock = fresh_net(gst=0, delta=5)
    net.current_process = 1
    for _ in range(200):
        net.send(1, 2, ("ping",))
    while True:
        env = net.pop()
        if env is None:
            break
        assert env.sent_at + 1 <= env.deliver_at <= env.sent_at + 5


def test_pre_gst_fixed_delay_still_delivers():
    net, clock = fresh_net(gst=10_000, delta=5, policy={"name": "fixed", "ticks": 1000})
    net.current_process = 1
    net.send(1, 2, ("ping",))
    env = net.pop()
    assert env.deliver_at == env.sent_at + 1000


def test_pre_gst_stall_policy_holds_until_stabilisation():
    net, clock = fresh_net(gst=50, delta=3, policy={"name": "stall"})
    net.current_process = 1
    net.send(1, 2, ("ping",))
    env = net.pop()
    assert 50 < env.deliver_at <= 50 + 3


def test_spoofing_aborts():
    net, _ = fresh_net()
    net.current_process = 1
    with pytest.raises(SimulationError):
        net.send(2, 3, ("forged",))


def test_identical_payloads_deliver_twice():
    net, _ = fresh_net()
    net.current_process = 1
    net.send(1, 2, ("same",))
    net.send(1, 2, ("same",))
    assert net.pop() is not None and net.pop() is not None
    assert net.pop() is None


def test_broadcast_enqueues_one_envelope_per_replica():
    net, _ = fresh_net()
    net.current_process = 0
    net.broadcast(0, range(4), ("hello",))
    recipients = []
    while (env := net.pop()) is not None:
        recipients.append(env.to)
    assert sorted(recipients) == [0, 1, 2, 3]  # self-delivery included


def test_unknown_policy_rejected():
    with pytest.raises(ValueError):
        make_pre_gst_policy({"name": "wormhole"})


# -- run-level properties -----------------------------------------------------

def test_empty_workload_trace_is_genesis_bookkeeping_only():
    scn = honest_scenario("bcrc", txs=0, name="empty")
    scn.workload = []
    _, result = run_scenario(scn)
    assert result.decided == 0
    kinds = {ev.kind for ev in result.events}
    assert kinds <= {"rc-decided", "output", "pool-cleared"}
    assert all(ev.payload.get("instance") == 0 for ev in result.events
               if ev.kind in ("output", "pool-cleared"))


def test_same_seed_reproduces_byte_identical_trace():
    scn = honest_scenario("bcfrc", seed=5, txs=6, name="det")
    a = dump_trace(scn.record(), run_scenario(scn)[1].events)
    b = dump_trace(scn.record(), run_scenario(scn)[1].events)
    assert a == b


def test_different_seeds_agree_on_verdicts():
    base = honest_scenario("bcfrc", seed=0, txs=6, name="seeds")
    verdict_sets = []
    for seed in (0, 1):
        scn = honest_scenario("bcfrc", seed=seed, txs=6, name="seeds")
        _, result = run_scenario(scn)
        verdict_sets.append(tuple((v.prop, v.status)
                                  for v in check_trace(scn, result.events)))
    assert verdict_sets[0] == verdict_sets[1]


def test_reliability_every_send_delivered_when_quiescent():
    for seed in range(10):
        scn = honest_scenario("bcfrc", seed=seed, txs=5, name="rel")
        _, result = run_scenario(scn)
        assert result.stop_reason == "quiescent"
        assert result.undelivered == 0
        assert result.sent == result.delivered
        issued = sum(1 for ev in result.events if ev.kind == "request-issued"
                     and not ev.payload["suppressed"])
        delivered = sum(1 for ev in result.events if ev.kind == "req-delivered")
        assert delivered == 4 * issued


def test_post_gst_broadcast_delivered_within_delta():
    scn = honest_scenario("bcrc", seed=3, txs=4, name="bound")
    _, result = run_scenario(scn)
    issued_at = {}
    for ev in result.events:
        if ev.kind == "request-issued" and not ev.payload["suppressed"]:
            tx = ev.payload["tx"]
            issued_at[(tx["client"], tx["seq"])] = ev.tick
    deliveries = 0
    for ev in result.events:
        if ev.kind == "req-delivered":
            tx = ev.payload["tx"]
            t = issued_at[(tx["client"], tx["seq"])]
            assert t + 1 <= ev.tick <= t + scn.delta
            deliveries += 1
    assert deliveries == 4 * len(issued_at)
