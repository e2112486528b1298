"""Adversary strategies: censorship, equivocation, spam, structural limits."""

import pytest

from fairrc import (
    AdversarySpec,
    Scenario,
    Simulation,
    check_trace,
    run_scenario,
    transaction_fates,
)
from fairrc.core import ForgeryError
from conftest import censor_scenario, honest_scenario, spam_scenario


def statuses_of(scn):
    _, result = run_scenario(scn)
    return {v.prop: v.status for v in check_trace(scn, result.events)}


def test_censorship_starves_target_under_plain_consensus():
    s = statuses_of(censor_scenario("bcrc", seed=1, horizon=15, background_until=60))
    assert s["user-fairness"] == "violation"
    assert s["agreement"] == s["chain-validity"] == s["chain-finality"] == "pass"


def test_fusion_layer_defeats_the_same_adversary():
    s = statuses_of(censor_scenario("bcfrc", seed=1, horizon=15, background_until=60))
    assert s["user-fairness"] == "pass"
    assert s["fusion-validity"] == "pass"


def test_target_transactions_finalise_under_fusion():
    scn = censor_scenario("bcfrc", seed=9, horizon=15, background_until=60)
    _, result = run_scenario(scn)
    fates = transaction_fates(scn, result.events)
    target = {t: f for t, f in fates.items() if t[0] == 100}
    assert target and all(f["fate"] == "finalised" for f in target.values())


def test_censor_matching_nothing_is_verdict_equal_to_honest():
    base = honest_scenario("bcfrc", seed=4, txs=10, name="honest-ref")
    adv = AdversarySpec(corrupt_replicas=(3,),
                        replica_strategy={"name": "censor", "clients": [999]},
                        rc_policy="byzantine-first")
    noop = Scenario(n=4, f=1, seed=4, construction="bcfrc", horizon_instances=20,
                    adversary=adv, workload=base.workload, name="censor-noop")
    assert statuses_of(base) == statuses_of(noop)


def test_spam_invalidation_yields_no_false_violations():
    for seed in range(8):
        s = statuses_of(spam_scenario(seed=seed))
        assert s["user-fairness"] == "pass"


def test_spam_race_exercises_both_branches():
    invalidated = finalised = 0
    for seed in range(12):
        scn = spam_scenario(seed=seed)
        _, result = run_scenario(scn)
        for t, f in transaction_fates(scn, result.events).items():
            if t[0] == 100:
                invalidated += f["fate"] == "invalidated"
                finalised += f["fate"] == "finalised"
    assert invalidated > 0 and finalised > 0


def test_spammer_alone_keeps_chain_growing():
    adv = AdversarySpec(corrupt_clients=(199,),
                        client_strategy={"name": "spam-invalidator", "target": 100})
    workload = [(t, 199, {"src": "S", "dst": "B", "amount": 1, "nonce": t})
                for t in range(1, 15)]
    scn = Scenario(n=4, f=1, seed=0, construction="bcfrc", horizon_instances=10,
                   validity={"model": "account", "genesis": {"balances": {"S": 50}}},
                   adversary=adv, workload=workload, name="spam-alone")
    _, result = run_scenario(scn)
    assert result.decided >= 2  # termination unaffected by who issues


def test_adversary_cannot_sign_for_correct_processes():
    scn = honest_scenario("bcrc", txs=1, name="forge")
    sim = Simulation(scn)
    with pytest.raises(ForgeryError):
        with sim.as_process(2):  # replica 2 is correct
            pass
    sim.network.current_process = 1
    with pytest.raises(ForgeryError):
        sim.sign(2, b"payload")  # current process is 1, not 2


def test_corruption_budget_is_enforced():
    adv = AdversarySpec(corrupt_replicas=(2, 3))
    with pytest.raises(Exception) as err:
        Scenario(n=4, f=1, construction="bcrc", adversary=adv).validate()
    assert "corrupt" in str(err.value)


def test_adversary_spec_roundtrip():
    adv = AdversarySpec(corrupt_replicas=(3,), corrupt_clients=(9,),
                        replica_strategy={"name": "censor", "clients": [1]},
                        client_strategy=None, rc_policy="byzantine-first",
                        pre_gst_delay_policy={"name": "fixed", "ticks": 7})
    assert AdversarySpec.from_record(adv.record()) == adv
