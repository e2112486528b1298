"""Experiment descriptions: topology, adversary, workload, validity, horizon.

A scenario is a JSON document; parse -> serialize -> parse is the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .adversary import AdversarySpec
from .core import canonical_bytes

CONSTRUCTIONS = ("bcrc", "bcfrc", "dlsmr-over-bcfrc")


class ConfigError(ValueError):
    """Invalid scenario configuration; the message names the offending field."""


@dataclass
class Scenario:
    n: int
    f: int
    seed: int = 0
    gst: int = 0
    delta: int = 5
    horizon_instances: int = 10
    max_ticks: Optional[int] = None
    max_block_size: int = 8
    construction: Optional[str] = "bcfrc"
    validity: dict = field(default_factory=lambda: {"model": "set", "genesis": {}})
    adversary: AdversarySpec = field(default_factory=AdversarySpec)
    workload: list = field(default_factory=list)
    grace: int = 3
    name: str = "scenario"

    def record(self) -> dict:
        return {"record": "scenario", "name": self.name, "n": self.n, "f": self.f,
                "seed": self.seed, "gst": self.gst, "delta": self.delta,
                "horizon_instances": self.horizon_instances,
                "max_ticks": self.max_ticks,
                "max_block_size": self.max_block_size,
                "construction": self.construction,
                "validity": self.validity,
                "adversary": self.adversary.record(),
                "workload": [[t, c, p] for t, c, p in self.workload],
                "grace": self.grace}

    @classmethod
    def from_record(cls, rec: dict) -> "Scenario":
        if rec.get("record") not in (None, "scenario"):
            raise ConfigError(f"record: expected a scenario document, got {rec.get('record')!r}")
        try:
            s = cls(n=rec["n"], f=rec["f"], seed=rec.get("seed", 0),
                    gst=rec.get("gst", 0), delta=rec.get("delta", 5),
                    horizon_instances=rec.get("horizon_instances", 10),
                    max_ticks=rec.get("max_ticks"),
                    max_block_size=rec.get("max_block_size", 8),
                    construction=rec.get("construction"),
                    validity=rec.get("validity", {"model": "set", "genesis": {}}),
                    adversary=AdversarySpec.from_record(rec.get("adversary")),
                    workload=[(e[0], e[1], e[2]) for e in rec.get("workload", [])],
                    grace=rec.get("grace", 3),
                    name=rec.get("name", "scenario"))
        except KeyError as exc:
            raise ConfigError(f"missing required field: {exc.args[0]}") from None
        s.validate()
        return s

    def validate(self) -> None:
        if self.n < 1:
            raise ConfigError(f"n: need at least one replica, got {self.n}")
        if self.f < 0:
            raise ConfigError(f"f: must be non-negative, got {self.f}")
        if 3 * self.f >= self.n:
            raise ConfigError(
                f"f: fault threshold must satisfy f < n/3, got f={self.f}, n={self.n}")
        if self.delta < 1:
            raise ConfigError(f"delta: post-stabilisation bound must be >= 1, got {self.delta}")
        if self.gst < 0:
            raise ConfigError(f"gst: must be non-negative, got {self.gst}")
        if self.horizon_instances < 1:
            raise ConfigError(f"horizon_instances: must be >= 1, got {self.horizon_instances}")
        if self.max_block_size < 1:
            raise ConfigError(f"max_block_size: must be >= 1, got {self.max_block_size}")
        if self.grace < 1:
            raise ConfigError(f"grace: must be >= 1, got {self.grace}")
        if self.construction is not None and self.construction not in CONSTRUCTIONS:
            raise ConfigError(
                f"construction: expected one of {CONSTRUCTIONS}, got {self.construction!r}")
        if self.validity.get("model") not in ("account", "set"):
            raise ConfigError(
                f"validity.model: expected 'account' or 'set', got "
                f"{self.validity.get('model')!r}")
        adv = self.adversary
        replica_range = range(self.n)
        if any(r not in replica_range for r in adv.corrupt_replicas):
            raise ConfigError("adversary.corrupt_replicas: ids must lie in 0..n-1")
        if len(set(adv.corrupt_replicas)) > self.f:
            raise ConfigError(
                f"adversary.corrupt_replicas: at most f={self.f} replicas may be corrupt")
        if any(c in replica_range for c in adv.corrupt_clients):
            raise ConfigError("adversary.corrupt_clients: client ids must not collide "
                              "with replica ids")
        for entry in self.workload:
            tick, client, _ = entry
            if not isinstance(tick, int) or tick < 0:
                raise ConfigError(f"workload: bad tick {tick!r}")
            if client in replica_range:
                raise ConfigError(f"workload: client id {client} collides with a replica id")
            if self.max_ticks is not None and tick > self.max_ticks:
                raise ConfigError(f"workload: tick {tick} exceeds max_ticks {self.max_ticks}")

    def with_overrides(self, **kw) -> "Scenario":
        rec = self.record()
        rec.update({k: v for k, v in kw.items()})
        return Scenario.from_record(rec)


def load_scenario(path) -> Scenario:
    with open(path, "rb") as fh:
        try:
            rec = json.loads(fh.read())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"not valid JSON: {exc}") from None
    return Scenario.from_record(rec)


def save_scenario(path, scenario: Scenario) -> None:
    with open(path, "wb") as fh:
        fh.write(canonical_bytes(scenario.record()) + b"\n")
