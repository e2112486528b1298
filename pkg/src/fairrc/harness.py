"""Command-line front end: run scenarios, write traces, check them, compare.

Exit codes: 0 every property passes, 1 some property is violated,
2 inconclusive results only, 3 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import checker
from .core import canonical_bytes
from .scenario import ConfigError, Scenario, load_scenario
from .simulation import run_scenario
from .trace import dump_trace, read_trace

USAGE_ERROR = 3


def run_and_check(scenario: Scenario, grace: Optional[int] = None):
    """One seeded run plus a full property check of its trace."""
    sim, result = run_scenario(scenario)
    verdicts = checker.check_trace(scenario, result.events, grace)
    return sim, result, verdicts


def build_report(scenario: Scenario, result, verdicts) -> dict:
    return {
        "record": "report",
        "scenario": scenario.record(),
        "stop_reason": result.stop_reason,
        "decided_instances": result.decided,
        "final_tick": result.final_tick,
        "messages": {"sent": result.sent, "delivered": result.delivered,
                     "undelivered": result.undelivered},
        "verdicts": [v.record() for v in verdicts],
        "exit_code": checker.exit_code(verdicts),
    }


def _write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)


def _print_verdicts(verdicts, prefix: str = "") -> None:
    for v in verdicts:
        line = f"{prefix}[{v.prop}] {v.status}"
        if v.detail and v.status != checker.PASS:
            line += f"  ({v.detail})"
        print(line)


def cmd_run(args) -> int:
    scenario = load_scenario(args.config)
    if args.grace is not None:
        scenario = scenario.with_overrides(grace=args.grace)
    _, result, verdicts = run_and_check(scenario)
    out = Path(args.out)
    _write(out / f"{scenario.name}.trace.jsonl",
           dump_trace(scenario.record(), result.events))
    report = build_report(scenario, result, verdicts)
    _write(out / f"{scenario.name}.report.json", canonical_bytes(report) + b"\n")
    print(f"run: {scenario.name} seed={scenario.seed} decided={result.decided} "
          f"stop={result.stop_reason}")
    _print_verdicts(verdicts)
    return report["exit_code"]


def cmd_compare(args) -> int:
    scenario = load_scenario(args.config)
    if scenario.construction is not None:
        raise ConfigError("construction: omit this field for compare; both "
                          "constructions run on the identical scenario")
    if args.grace is not None:
        scenario = scenario.with_overrides(grace=args.grace)
    rows: dict[str, dict] = {}
    reports = {}
    worst = 0
    for construction in ("bcrc", "bcfrc"):
        variant = scenario.with_overrides(construction=construction,
                                          name=f"{scenario.name}-{construction}")
        _, result, verdicts = run_and_check(variant)
        fates = checker.transaction_fates(variant, result.events)
        reports[construction] = build_report(variant, result, verdicts)
        worst = max(worst, reports[construction]["exit_code"])
        for txid, fate in fates.items():
            rows.setdefault(str(list(txid)), {})[construction] = fate
    comparison = {"record": "comparison", "scenario": scenario.record(),
                  "fates": rows, "reports": reports}
    out = Path(args.out)
    _write(out / f"{scenario.name}.comparison.json",
           canonical_bytes(comparison) + b"\n")
    print(f"compare: {scenario.name} seed={scenario.seed}")
    header = f"{'transaction':>16}  {'bcrc':<22} {'bcfrc':<22}"
    print(header)
    for txid in sorted(rows):
        def fmt(c):
            fate = rows[txid].get(c, {})
            label = fate.get("fate", "-")
            if fate.get("instance") is not None:
                label += f"@{fate['instance']}"
            return label
        print(f"{txid:>16}  {fmt('bcrc'):<22} {fmt('bcfrc'):<22}")
    return worst


def _parse_seeds(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(s) for s in spec.split(",") if s.strip()]


def cmd_sweep(args) -> int:
    scenario = load_scenario(args.config)
    if args.grace is not None:
        scenario = scenario.with_overrides(grace=args.grace)
    seeds = _parse_seeds(args.seeds)
    if not seeds:
        raise ConfigError("seeds: empty seed list")
    counts: dict[str, dict[str, int]] = {}
    worst = 0
    for seed in seeds:
        variant = scenario.with_overrides(seed=seed)
        _, _, verdicts = run_and_check(variant)
        worst = max(worst, checker.exit_code(verdicts))
        for v in verdicts:
            slot = counts.setdefault(v.prop, {})
            slot[v.status] = slot.get(v.status, 0) + 1
    aggregate = {"record": "sweep", "scenario": scenario.record(),
                 "seeds": seeds, "counts": counts, "exit_code": worst}
    out = Path(args.out)
    _write(out / f"{scenario.name}.sweep.json", canonical_bytes(aggregate) + b"\n")
    print(f"sweep: {scenario.name} seeds={seeds[0]}..{seeds[-1]} ({len(seeds)} runs)")
    for prop in checker.PROPERTIES:
        print(f"[{prop}] " + " ".join(f"{k}={v}" for k, v in
                                      sorted(counts.get(prop, {}).items())))
    return worst


def cmd_check(args) -> int:
    header, events = read_trace(args.trace)
    scenario = Scenario.from_record(header)
    verdicts = checker.check_trace(scenario, events, args.grace)
    _print_verdicts(verdicts)
    return checker.exit_code(verdicts)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fairrc",
                description="deterministic ledger-construction simulator and checker")
    sub = p.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario, write trace + report")
    run_p.add_argument("config")
    run_p.add_argument("--out", default="out")
    run_p.add_argument("--grace", type=int, default=None)
    run_p.set_defaults(fn=cmd_run)

    cmp_p = sub.add_parser("compare",
                           help="run the same workload over both constructions")
    cmp_p.add_argument("config")
    cmp_p.add_argument("--out", default="out")
    cmp_p.add_argument("--grace", type=int, default=None)
    cmp_p.set_defaults(fn=cmd_compare)

    sweep_p = sub.add_parser("sweep", help="run one scenario across many seeds")
    sweep_p.add_argument("config")
    sweep_p.add_argument("--seeds", required=True, help="range a..b or comma list")
    sweep_p.add_argument("--out", default="out")
    sweep_p.add_argument("--grace", type=int, default=None)
    sweep_p.set_defaults(fn=cmd_sweep)

    check_p = sub.add_parser("check", help="re-check a recorded trace file")
    check_p.add_argument("trace")
    check_p.add_argument("--grace", type=int, default=None)
    check_p.set_defaults(fn=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
