"""Trace events and the line-delimited trace file format.

A trace file is one scenario header record followed by one event record per
line.  Events are self-contained: blocks, transactions and signatures are
embedded in canonical record form, so the offline checker needs no simulator
state to interpret them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .core import canonical_bytes

EVENT_KINDS = (
    "request-issued",
    "req-delivered",
    "sub-prop-sent",
    "sub-prop-delivered",
    "rc-input",
    "rc-decided",
    "output",
    "pool-cleared",
    "read-snapshot",
)


@dataclass(frozen=True)
class TraceEvent:
    tick: int
    kind: str
    process: int
    payload: dict

    def record(self) -> dict:
        return {"record": "event", "tick": self.tick, "kind": self.kind,
                "process": self.process, "payload": self.payload}


def parse_event(rec: dict) -> TraceEvent:
    if rec.get("record") != "event":
        raise ValueError(f"not an event record: {rec.get('record')!r}")
    return TraceEvent(rec["tick"], rec["kind"], rec["process"], rec["payload"])


def dump_trace(scenario_record: dict, events: Iterable[TraceEvent]) -> bytes:
    lines = [canonical_bytes(scenario_record)]
    lines.extend(canonical_bytes(ev.record()) for ev in events)
    return b"\n".join(lines) + b"\n"


def write_trace(path, scenario_record: dict, events: Iterable[TraceEvent]) -> None:
    with open(path, "wb") as fh:
        fh.write(dump_trace(scenario_record, events))


def read_trace(path) -> tuple[dict, list[TraceEvent]]:
    """Read a trace file back as (scenario record, events)."""
    with open(path, "rb") as fh:
        lines = [ln for ln in fh.read().split(b"\n") if ln.strip()]
    if not lines:
        raise ValueError("empty trace file")
    header = json.loads(lines[0])
    if header.get("record") != "scenario":
        raise ValueError("trace file does not start with a scenario header")
    events = [parse_event(json.loads(ln)) for ln in lines[1:]]
    return header, events
