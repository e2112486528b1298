"""Run wiring: one scenario -> one deterministic trace.

The engine is strictly single-threaded and event-serial: handlers run to
completion one at a time, and (scenario, seed) fully determines the trace.
"""

from __future__ import annotations

import random
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional

from .adversary import make_corrupt_client, make_corrupt_replica
from .constructions import CorrectClient, CorrectReplica
from .core import Chain, ForgeryError, Signature, sign as core_sign
from .frc import certified_extension_valid
from .netsim import Network, SimClock, SimulationError, make_pre_gst_policy
from .rc import RcOracle, make_policy
from .scenario import ConfigError, Scenario
from .trace import TraceEvent
from .validity import FusionModel, make_model, valid_extension


@dataclass
class RunResult:
    events: list
    decided: int
    stop_reason: str
    sent: int
    delivered: int
    undelivered: int
    final_tick: int


class Simulation:
    def __init__(self, scenario: Scenario):
        if scenario.construction is None:
            raise ConfigError("construction: required to run (omit it only for compare)")
        scenario.validate()
        self.scenario = scenario
        self.fused = scenario.construction in ("bcfrc", "dlsmr-over-bcfrc")
        self.f = scenario.f
        self.rng = random.Random(scenario.seed)
        self.clock = SimClock(0, scenario.gst, scenario.delta)
        self.network = Network(
            self.clock, self.rng,
            make_pre_gst_policy(scenario.adversary.pre_gst_delay_policy))
        self.model = make_model(scenario.validity)
        self.fusion = FusionModel(self.model)
        self.events: list[TraceEvent] = []
        self.observers = []

        adv = scenario.adversary
        self.corrupt_replicas = frozenset(adv.corrupt_replicas)
        self.corrupt_clients = frozenset(adv.corrupt_clients)
        self.replica_ids = tuple(range(scenario.n))
        self.correct_replicas = tuple(r for r in self.replica_ids
                                      if r not in self.corrupt_replicas)

        if self.fused:
            validator = lambda state, i, b: certified_extension_valid(
                self.fusion, self.f, state, i, b)
        else:
            validator = lambda state, i, b: valid_extension(self.model, state, b.txs)

        def advance(state, block):
            for tx in block.txs:
                self.model.apply(state, tx)

        self.rc = RcOracle(self, make_policy(adv.rc_policy, scenario.n,
                                             self.corrupt_replicas),
                           validator, advance, self.model.initial_state())

        self.replicas = {}
        for rid in self.replica_ids:
            if rid in self.corrupt_replicas:
                self.replicas[rid] = make_corrupt_replica(self, rid, adv.replica_strategy)
            else:
                self.replicas[rid] = CorrectReplica(self, rid)

        client_ids = sorted({c for _, c, _ in scenario.workload} | self.corrupt_clients)
        self.clients = {}
        for cid in client_ids:
            if cid in self.corrupt_clients:
                self.clients[cid] = make_corrupt_client(self, cid, adv.client_strategy)
            else:
                self.clients[cid] = CorrectClient(self, cid)

        # Adversary processes observe every trace event (omniscient adversary).
        for proc in list(self.replicas.values()) + list(self.clients.values()):
            hook = getattr(proc, "on_trace_event", None)
            if hook is not None:
                self.observers.append(hook)

        self._impersonating: Optional[int] = None

    # -- engine services used by processes ---------------------------------

    def emit(self, kind: str, process: int, payload: dict) -> None:
        ev = TraceEvent(self.clock.now, kind, process, payload)
        self.events.append(ev)
        for obs in self.observers:
            obs(ev)

    def sign(self, pid: int, payload: bytes) -> Signature:
        if pid != self.network.current_process:
            raise ForgeryError(
                f"process {self.network.current_process} attempted to sign as {pid}")
        return core_sign(pid, payload)

    @contextmanager
    def as_process(self, pid: int):
        """Run adversary code in the context of a corrupt process it controls."""
        if pid not in self.corrupt_replicas and pid not in self.corrupt_clients:
            raise ForgeryError(f"adversary cannot act as correct process {pid}")
        prev = self.network.current_process
        self.network.current_process = pid
        try:
            yield
        finally:
            self.network.current_process = prev

    def last_output(self, rid: int) -> int:
        return self.replicas[rid].last_output

    def read_chain(self) -> tuple[Chain, object]:
        """The current chain: longest common prefix of correct replicas' chains.

        Returns the chain and the validity state after it.  Correct chains are
        always pairwise prefix-related here, so the prefix is simply the
        shortest of them.
        """
        shortest = min((self.replicas[r] for r in self.correct_replicas),
                       key=lambda rep: len(rep.chain))
        return tuple(shortest.chain), shortest.chain_state

    def rc_decided_txids(self) -> set:
        out = set()
        for block in self.rc.decided[1:]:
            out.update(tx.txid for tx in block.txs)
        return out

    # -- main loop ----------------------------------------------------------

    def run(self) -> RunResult:
        scenario = self.scenario
        self.rc.start()
        for tick, cid, payload in scenario.workload:
            self.network.post(cid, cid, ("issue", payload), at=tick)

        stop_reason = "quiescent"
        while True:
            if self.rc.decided_count >= scenario.horizon_instances:
                stop_reason = "horizon-instances"
                break
            next_tick = self.network.peek_tick()
            if next_tick is None:
                break
            if scenario.max_ticks is not None and next_tick > scenario.max_ticks:
                stop_reason = "tick-cap"
                break
            self.dispatch(self.network.pop())
        return RunResult(self.events, self.rc.decided_count, stop_reason,
                         self.network.sent, self.network.delivered,
                         self.network.pending(), self.clock.now)

    def dispatch(self, env) -> None:
        if env.to in self.replicas:
            target = self.replicas[env.to]
        elif env.to in self.clients:
            target = self.clients[env.to]
        else:
            raise SimulationError(f"envelope addressed to unknown process {env.to}")
        self.network.current_process = env.to
        try:
            target.on_envelope(env)
        finally:
            self.network.current_process = None


def run_scenario(scenario: Scenario) -> tuple[Simulation, RunResult]:
    sim = Simulation(scenario)
    return sim, sim.run()
