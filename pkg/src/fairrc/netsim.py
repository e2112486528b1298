"""Deterministic discrete-event network with reliable authenticated links.

Time is logical integer ticks.  Message delays are adversary-chosen (but
finite) before the global stabilisation tick and uniform in [1, delta] after
it, drawn from the run's seeded generator.  Given a seed, the delivery order
is a total deterministic order: the queue breaks ties by a global sequence
number.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Callable, Optional


class SimulationError(RuntimeError):
    """Protocol misuse detected by the engine (spoofing, forged input, ...)."""


@dataclass
class SimClock:
    now: int = 0
    gst: int = 0
    delta: int = 5


@dataclass(frozen=True)
class Envelope:
    sender: int
    to: int
    payload: tuple
    sent_at: int
    deliver_at: int


# A pre-GST delay policy maps (rng, clock) to a finite delay in ticks.
DelayPolicy = Callable[[random.Random, SimClock], int]


def uniform_delay(rng: random.Random, clock: SimClock) -> int:
    return rng.randint(1, clock.delta)


def make_pre_gst_policy(spec: Optional[dict]) -> DelayPolicy:
    """Pre-GST delay policy by name.

    * ``uniform`` (default): same distribution as after stabilisation.
    * ``fixed``: constant ``ticks`` delay.
    * ``stall``: hold every message until just after the stabilisation tick.
    """
    name = (spec or {}).get("name", "uniform")
    if name == "uniform":
        return uniform_delay
    if name == "fixed":
        ticks = int((spec or {}).get("ticks", 1))
        if ticks < 1:
            raise ValueError("fixed delay must be at least 1 tick")
        return lambda rng, clock: ticks
    if name == "stall":
        return lambda rng, clock: (clock.gst - clock.now) + rng.randint(1, clock.delta)
    raise ValueError(f"unknown pre-GST delay policy: {name!r}")


@dataclass
class Network:
    """Event queue plus the authenticated perfect-link sending rules."""

    clock: SimClock
    rng: random.Random
    pre_gst_policy: DelayPolicy = uniform_delay
    current_process: Optional[int] = None
    sent: int = 0
    delivered: int = 0
    _heap: list = field(default_factory=list)
    _seq: int = 0

    def _push(self, env: Envelope) -> None:
        heapq.heappush(self._heap, (env.deliver_at, self._seq, env))
        self._seq += 1

    def draw_delay(self) -> int:
        if self.clock.now >= self.clock.gst:
            return uniform_delay(self.rng, self.clock)
        return self.pre_gst_policy(self.rng, self.clock)

    def send(self, sender: int, to: int, payload: tuple) -> None:
        """Send over the link; only the currently executing process may send as itself."""
        if sender != self.current_process:
            raise SimulationError(
                f"process {self.current_process} attempted to send as {sender}")
        delay = self.draw_delay()
        if delay < 1:
            raise SimulationError("link delay must be at least 1 tick")
        self._push(Envelope(sender, to, payload, self.clock.now,
                            self.clock.now + delay))
        self.sent += 1

    def broadcast(self, sender: int, recipients, payload: tuple) -> None:
        # n independent sends; delays drawn independently per recipient.
        for to in recipients:
            self.send(sender, to, payload)

    def post(self, sender: int, to: int, payload: tuple, at: Optional[int] = None) -> None:
        """Engine-internal enqueue (decision notifications, scripted client wake-ups).

        Bypasses the spoof guard; ``at`` schedules an exact tick, otherwise a
        normal link delay is drawn.
        """
        deliver_at = at if at is not None else self.clock.now + self.draw_delay()
        if deliver_at < self.clock.now:
            raise SimulationError("cannot schedule an event in the past")
        self._push(Envelope(sender, to, payload, self.clock.now, deliver_at))
        self.sent += 1

    def peek_tick(self) -> Optional[int]:
        return self._heap[0][0] if self._heap else None

    def pop(self) -> Optional[Envelope]:
        if not self._heap:
            return None
        deliver_at, _, env = heapq.heappop(self._heap)
        self.clock.now = max(self.clock.now, deliver_at)
        self.delivered += 1
        return env

    def pending(self) -> int:
        return len(self._heap)
