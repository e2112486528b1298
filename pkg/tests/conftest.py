"""Shared scenario builders for the test suite."""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from fairrc import AdversarySpec, Scenario


def honest_scenario(construction="bcfrc", seed=0, n=4, f=1, txs=12,
                    horizon=20, model=None, name="honest", **kw):
    workload = [(t, 100, None) for t in range(1, txs + 1)]
    return Scenario(n=n, f=f, seed=seed, construction=construction,
                    horizon_instances=horizon,
                    validity=model or {"model": "set", "genesis": {}},
                    workload=workload, name=name, **kw)


def censor_scenario(construction, seed=0, n=4, f=1, horizon=50,
                    target_ticks=(2, 4, 6), background_until=120, grace=3):
    corrupt = tuple(range(n - f, n))
    adv = AdversarySpec(corrupt_replicas=corrupt,
                        replica_strategy={"name": "censor", "clients": [100]},
                        rc_policy="byzantine-first")
    workload = [(t, 100, None) for t in target_ticks]
    workload += [(t, 101, None) for t in range(1, background_until)]
    workload.sort(key=lambda e: (e[0], e[1]))
    return Scenario(n=n, f=f, seed=seed, construction=construction,
                    horizon_instances=horizon, adversary=adv, workload=workload,
                    grace=grace, name=f"censor-{construction}")


def spam_scenario(seed=0, construction="bcfrc"):
    adv = AdversarySpec(corrupt_clients=(199,),
                        client_strategy={"name": "spam-invalidator",
                                         "target": 100, "dst": "C"})
    workload = [(2, 100, {"src": "A", "dst": "B", "amount": 2, "nonce": 1}),
                (40, 100, {"src": "A", "dst": "B", "amount": 2, "nonce": 2}),
                (80, 100, {"src": "A", "dst": "B", "amount": 2, "nonce": 3})]
    workload += [(t, 101, {"src": "S", "dst": "B", "amount": 1, "nonce": None})
                 for t in range(1, 110)]
    workload.sort(key=lambda e: (e[0], e[1]))
    return Scenario(n=4, f=1, seed=seed, construction=construction,
                    horizon_instances=40,
                    validity={"model": "account",
                              "genesis": {"balances": {"A": 10, "S": 200}}},
                    adversary=adv, workload=workload, grace=3, name="spam")


def equivocate_scenario(seed=0, mode="split", txs=40, horizon=12):
    adv = AdversarySpec(corrupt_replicas=(3,),
                        replica_strategy={"name": "equivocate", "mode": mode},
                        rc_policy="round-robin")
    workload = [(t, 100, None) for t in range(1, txs + 1)]
    return Scenario(n=4, f=1, seed=seed, construction="bcfrc",
                    horizon_instances=horizon, adversary=adv, workload=workload,
                    name=f"equivocate-{mode}")
