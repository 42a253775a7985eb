"""Command-line front end.

Subcommands: `factor` (one instance end to end), `order` (period query),
`campaign` (seeded Monte Carlo batch writing JSONL), `report` (aggregate
one or more JSONL result files), and `verify-paper` (replay the embedded
reference failure cases).

Exit codes are uniform across subcommands: 0 success, 1 method failure or
verification mismatch, 2 invalid input, 3 I/O or internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .campaign import (
    BASE_MODES,
    BOUND_CLASSES,
    STRATEGIES,
    CampaignConfig,
    CampaignStats,
    RandomStream,
    TrialRecord,
    case_seed,
    compute_metrics,
    run_campaign,
    sample_base,
)
from .fixtures import REFERENCE_FAILURE_CASES
from .numtheory import is_probable_prime
from .period_oracle import multiplicative_order
from .strategies import FactorOutcome, all_z, dong2023, traditional_shor

EXIT_OK = 0
EXIT_METHOD_FAILURE = 1
EXIT_INVALID_INPUT = 2
EXIT_IO_ERROR = 3

_BOUND_CLASS_LABELS = {
    "1": "z <= 9",
    "2": "z <= 99",
    "3": "z <= 999",
    "4": "z <= 9999",
    "inf": "unbounded",
}


def _fixed6(value: Fraction) -> str:
    """Exact 6-decimal fixed-point rendering (round half up)."""
    scaled = (value.numerator * 2_000_000 + value.denominator) // (2 * value.denominator)
    return f"{scaled // 1_000_000}.{scaled % 1_000_000:06d}"


def _rate(numerator: int, denominator: int) -> str:
    if denominator == 0:
        return "0/0 (0.000000)"
    return f"{numerator}/{denominator} ({_fixed6(Fraction(numerator, denominator))})"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="allz",
        description="Factor semiprimes from a known multiplicative order via "
        "generalized period decomposition, and benchmark the strategies at scale.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_factor = sub.add_parser("factor", help="factor one composite from its order")
    p_factor.add_argument("n", type=int, help="composite modulus, >= 6")
    group = p_factor.add_mutually_exclusive_group()
    group.add_argument("--base", type=int, help="explicit base a with 2 <= a < n")
    group.add_argument(
        "--auto-base",
        choices=BASE_MODES,
        dest="auto_base",
        help="sample the base instead of giving one (default: random)",
    )
    p_factor.add_argument("--strategy", choices=STRATEGIES, default="allz")
    p_factor.add_argument("--bound", type=int, help="divisor bound for the allz strategy")
    p_factor.add_argument("--seed", type=int, default=0, help="seed for --auto-base sampling")

    p_order = sub.add_parser("order", help="multiplicative order of a mod n")
    p_order.add_argument("n", type=int)
    p_order.add_argument("a", type=int)

    p_camp = sub.add_parser("campaign", help="run a seeded Monte Carlo campaign")
    p_camp.add_argument("--config", help="JSON file with CampaignConfig fields")
    p_camp.add_argument("--digits", type=int)
    p_camp.add_argument("--trials", type=int)
    p_camp.add_argument("--base-mode", choices=BASE_MODES, dest="base_mode")
    p_camp.add_argument("--strategy", choices=STRATEGIES)
    p_camp.add_argument("--bound", type=int)
    p_camp.add_argument("--seed", type=int, dest="master_seed")
    p_camp.add_argument("--workers", type=int)
    p_camp.add_argument("--retries", type=int, dest="retry_limit")
    p_camp.add_argument("--out", help="JSONL output path for the trial records")

    p_report = sub.add_parser("report", help="aggregate JSONL result files")
    p_report.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE")
    p_report.add_argument("--format", choices=("csv", "json"), default="json")
    p_report.add_argument("--out", help="artifact output path (stdout summary always prints)")

    sub.add_parser("verify-paper", help="replay the embedded reference failure cases")
    return parser


def _strategy_outcome(
    strategy: str, n: int, a: int, bound: int | None
) -> tuple[FactorOutcome, int | None, dict[str, int] | None]:
    """Run one CLI instance; returns (outcome, order, order factorization)."""
    period = None
    if math.gcd(a, n) == 1:
        period = multiplicative_order(a, n)
    if strategy == "allz":
        outcome = all_z(n, a, period, bound)
    elif strategy == "traditional":
        outcome = traditional_shor(n, a, period)
    else:
        outcome = dong2023(n, a, period)
    if period is None:
        return outcome, None, None
    factors = {str(p): e for p, e in period.factors}
    return outcome, period.order, factors


def _attempt_dict(att) -> dict[str, Any]:
    return {
        "kind": att.kind,
        "divisor_z": att.divisor_z,
        "gcd_value": att.gcd_value,
        "outcome": att.outcome,
    }


def _cmd_factor(args: argparse.Namespace) -> int:
    n = args.n
    if n < 6:
        print(f"error: {n} is below the smallest supported modulus 6", file=sys.stderr)
        return EXIT_INVALID_INPUT
    if is_probable_prime(n):
        print(f"error: {n} is prime; nothing to factor", file=sys.stderr)
        return EXIT_INVALID_INPUT
    if args.base is not None:
        a = args.base
        if not 2 <= a < n:
            print(f"error: base must satisfy 2 <= a < n, got {a}", file=sys.stderr)
            return EXIT_INVALID_INPUT
    else:
        mode = args.auto_base or "random"
        a = sample_base(n, mode, RandomStream(case_seed(args.seed, 0)))
    outcome, order, order_factors = _strategy_outcome(args.strategy, n, a, args.bound)
    payload = {
        "status": outcome.status,
        "n": n,
        "a": a,
        "strategy": args.strategy,
        "bound": args.bound,
        "r": order,
        "r_factors": order_factors,
        "factor": outcome.factor,
        "cofactor": n // outcome.factor if outcome.factor else None,
        "witness": _attempt_dict(outcome.witness) if outcome.witness else None,
        "attempts": [_attempt_dict(att) for att in outcome.attempts],
        "gcd_count": outcome.gcd_count,
    }
    print(json.dumps(payload))
    return EXIT_OK if outcome.status == "success" else EXIT_METHOD_FAILURE


def _cmd_order(args: argparse.Namespace) -> int:
    n, a = args.n, args.a
    if n < 2 or not 1 <= a < n:
        print(f"error: need n >= 2 and 1 <= a < n, got n={n}, a={a}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    shared = math.gcd(a, n)
    if shared > 1:
        print(f"error: a and n share the factor {shared}; no order exists", file=sys.stderr)
        return EXIT_INVALID_INPUT
    record = multiplicative_order(a, n)
    print(
        json.dumps(
            {"n": n, "a": a, "r": record.order, "factors": {str(p): e for p, e in record.factors}}
        )
    )
    return EXIT_OK


_CONFIG_KEYS = (
    "digits",
    "trials",
    "base_mode",
    "strategy",
    "bound",
    "master_seed",
    "workers",
    "retry_limit",
)


def _load_campaign_config(args: argparse.Namespace) -> CampaignConfig:
    values: dict[str, Any] = {}
    if args.config:
        with open(args.config, encoding="utf-8") as handle:
            data = json.load(handle)
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        unknown = set(data) - set(_CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    for required in ("digits", "trials"):
        if required not in values:
            raise ValueError(f"missing required campaign setting {required!r}")
    config = CampaignConfig(**values)
    config.validate()
    return config


def record_json_line(record: TrialRecord) -> str:
    return json.dumps(record.to_json_dict(), separators=(",", ":"))


def _stats_summary_lines(stats: CampaignStats, header: str) -> list[str]:
    lines = [header]
    lines.append(f"  trials: {stats.trials}")
    lines.append(f"  successes: {stats.successes}")
    lines.append(f"  failures: {stats.failures}")
    lines.append(f"  success rate: {_rate(stats.successes, stats.trials)}")
    if stats.failures_by_reason:
        parts = [f"{k}={v}" for k, v in sorted(stats.failures_by_reason.items())]
        lines.append(f"  failures by reason: {' '.join(parts)}")
    lines.append(f"  mean gcd count: {_fixed6(stats.mean_gcd_count)}")
    lines.append(f"  mean r digits: {_fixed6(stats.mean_r_digits)}")
    lines.append(f"  mean distinct primes of r: {_fixed6(stats.mean_r_distinct_primes)}")
    lines.append(f"  fallback successes: {stats.fallback_success_count}")
    lines.append("  cumulative success by divisor bound class:")
    for cls_name in BOUND_CLASSES:
        count = stats.cumulative_success_by_bound.get(cls_name, 0)
        lines.append(
            f"    {_BOUND_CLASS_LABELS[cls_name]}: {_rate(count, stats.trials)}"
        )
    if stats.attempts_per_success_histogram:
        parts = [f"{k}:{v}" for k, v in sorted(stats.attempts_per_success_histogram.items())]
        lines.append(f"  attempts per success (with retries): {' '.join(parts)}")
    return lines


def _cmd_campaign(args: argparse.Namespace) -> int:
    try:
        config = _load_campaign_config(args)
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: invalid campaign configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    try:
        result = run_campaign(config)
    except RuntimeError as exc:
        print(f"error: internal sampling failure: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
                for record in result.records:
                    handle.write(record_json_line(record))
                    handle.write("\n")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO_ERROR
    header = (
        f"campaign: digits={config.digits} trials={config.trials} "
        f"strategy={config.strategy} base_mode={config.base_mode} "
        f"bound={config.bound} seed={config.master_seed}"
    )
    for line in _stats_summary_lines(result.stats, header):
        print(line)
    return EXIT_OK


def _load_records(paths: Iterable[str]) -> list[TrialRecord]:
    records = []
    for path in paths:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                stripped = line.strip()
                if not stripped:
                    raise _MalformedLine(path, lineno)
                try:
                    records.append(TrialRecord.from_json_dict(json.loads(stripped)))
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise _MalformedLine(path, lineno) from exc
    return records


class _MalformedLine(Exception):
    def __init__(self, path: str, lineno: int) -> None:
        super().__init__(f"{path}:{lineno}: malformed record line")
        self.path = path
        self.lineno = lineno


def _per_digit_table(records: list[TrialRecord]) -> dict[str, dict[str, dict[str, Any]]]:
    cells: dict[tuple[int, str], list[int]] = {}
    for record in records:
        key = (record.digits, record.strategy)
        cell = cells.setdefault(key, [0, 0])
        cell[0] += 1
        cell[1] += record.status == "success"
    table: dict[str, dict[str, dict[str, Any]]] = {}
    for (digits, strategy), (trials, successes) in sorted(cells.items()):
        table.setdefault(str(digits), {})[strategy] = {
            "trials": trials,
            "successes": successes,
            "rate": _fixed6(Fraction(successes, trials)) if trials else "0.000000",
        }
    return table


def _failure_rows(records: list[TrialRecord]) -> list[TrialRecord]:
    failures = [r for r in records if r.status == "failure"]
    failures.sort(key=lambda r: (r.digits, r.n, r.a, r.case_id))
    return failures


def _json_report(records: list[TrialRecord], stats: CampaignStats) -> dict[str, Any]:
    even = stats.even_r_count
    report = {
        "totals": {
            "trials": stats.trials,
            "successes": stats.successes,
            "failures": stats.failures,
            "success_rate": _fixed6(stats.success_rate),
        },
        "success_by_digits": _per_digit_table(records),
        "cumulative_success_by_bound": {
            cls_name: stats.cumulative_success_by_bound.get(cls_name, 0)
            for cls_name in BOUND_CLASSES
        },
        "r_structure": {
            "mean_r_digits": _fixed6(stats.mean_r_digits),
            "mean_r_distinct_primes": _fixed6(stats.mean_r_distinct_primes),
            "even_r_count": even,
            "half_power_minus_one_count": stats.half_power_minus_one_count,
            "half_power_minus_one_given_even_r": _fixed6(
                Fraction(stats.half_power_minus_one_count, even) if even else Fraction(0)
            ),
        },
        "failures_by_reason": dict(sorted(stats.failures_by_reason.items())),
        "fallback_successes": stats.fallback_success_count,
        "failure_cases": [
            {
                "digits": r.digits,
                "n": r.n,
                "a": r.a,
                "r": r.r,
                "fail_factors": list(r.failed_z),
                "fallback_tried": r.fallback_tried,
            }
            for r in _failure_rows(records)
        ],
    }
    return report


def _write_failure_csv(records: list[TrialRecord], handle) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["digits", "n", "a", "r", "fail_factors", "fallback_tried"])
    for r in _failure_rows(records):
        writer.writerow(
            [
                r.digits,
                r.n,
                r.a,
                r.r,
                ", ".join(str(z) for z in r.failed_z),
                "true" if r.fallback_tried else "false",
            ]
        )


def _cmd_report(args: argparse.Namespace) -> int:
    try:
        records = _load_records(args.inputs)
    except _MalformedLine as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR
    stats = compute_metrics(records)
    for line in _stats_summary_lines(stats, f"report over {len(records)} records"):
        print(line)
    table = _per_digit_table(records)
    if table:
        print("  success rate by digits and strategy:")
        for digits, by_strategy in table.items():
            for strategy, cell in by_strategy.items():
                print(
                    f"    digits={digits} {strategy}: "
                    f"{_rate(cell['successes'], cell['trials'])}"
                )
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
                if args.format == "csv":
                    _write_failure_csv(records, handle)
                else:
                    json.dump(_json_report(records, stats), handle, indent=2, sort_keys=True)
                    handle.write("\n")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO_ERROR
    return EXIT_OK


def _cmd_verify_paper() -> int:
    total = len(REFERENCE_FAILURE_CASES)
    passed = 0
    for index, case in enumerate(REFERENCE_FAILURE_CASES, start=1):
        period = multiplicative_order(case.a, case.n)
        outcome = all_z(case.n, case.a, period)
        failed_primes = tuple(
            sorted(
                {
                    att.divisor_z
                    for att in outcome.attempts
                    if att.kind == "divisor" and att.outcome != "factor_found"
                }
            )
        )
        fallback_tried = any(att.kind == "fallback" for att in outcome.attempts)
        problems = []
        if period.order != case.expected_r:
            problems.append(f"order {period.order} != expected {case.expected_r}")
        if outcome.status != "failure":
            problems.append(f"status {outcome.status} != expected failure")
        if failed_primes != case.expected_fail_factors:
            problems.append(
                f"fail factors {failed_primes} != expected {case.expected_fail_factors}"
            )
        if fallback_tried != case.expects_fallback:
            problems.append(f"fallback_tried {fallback_tried} != {case.expects_fallback}")
        label = (
            f"row {index:02d}/{total} digits={case.digits} n={case.n} a={case.a} "
            f"r={case.expected_r} fail={{{', '.join(map(str, case.expected_fail_factors))}}} "
            f"fallback={'yes' if case.expects_fallback else 'no'}"
        )
        if problems:
            print(f"{label} MISMATCH: {'; '.join(problems)}")
            return EXIT_METHOD_FAILURE
        print(f"{label} ok")
        passed += 1
    print(f"{passed}/{total} rows verified")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "factor":
        return _cmd_factor(args)
    if args.command == "order":
        return _cmd_order(args)
    if args.command == "campaign":
        return _cmd_campaign(args)
    if args.command == "report":
        return _cmd_report(args)
    return _cmd_verify_paper()


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
