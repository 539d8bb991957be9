"""Command-line entry point: ``semiprime {compute,table,verify,oracle}``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from semiprime import asymptotics, identities, oracle
from semiprime.errors import CapacityError, DomainError, RangeError, ShapeError
from semiprime.master import accumulate_series, default_workers, upsilon
from semiprime.sieve import (
    DEFAULT_SEGMENT_SIZE,
    MAX_X,
    build_prime_table,
    factorize,
    prime_count,
    theta,
)

CSV_HEADER = ("x", "statistic", "actual", "main_term", "residual", "normalizer", "normalized_residual")
DEFAULT_REPORT = "verify-report.json"
LAMBDA_SAMPLES = 10_000
RELATION_LIMIT = 10**6

SERIES_NAMES = {
    "psi": "psi",
    "sum-logn": "sum_logn",
    "sum-log2n": "sum_log2n",
    "sum-recip": "sum_recip",
    "sum-logn-over-n": "sum_logn_over_n",
    "sum-upsilon-over-n": "sum_upsilon_over_n",
    "sum-upsilon-logn": "sum_upsilon_logn",
    "sum-upsilon-over-nlogn": "sum_upsilon_over_nlogn",
}
COMPUTE_CHOICES = ("upsilon", "semiprime-count", "theta", "pi", *SERIES_NAMES)


class ConfigError(ValueError):
    pass


def fmt(v: float) -> str:
    """12 significant digits; Python's formatting rounds half-to-even on the binary value."""
    return format(v, ".12g")


def rounded(v: float) -> float:
    return float(fmt(v))


@dataclass
class RunConfig:
    limit: int
    grid_start: float
    grid_stop: float
    grid_ratio: float
    segment_size: int = DEFAULT_SEGMENT_SIZE
    workers: int = 1
    tolerance: float = identities.DEFAULT_TOLERANCE
    bound: float = asymptotics.DEFAULT_BOUND
    output_format: str = "csv"
    output_path: Path | None = None
    grid_override: tuple[float, ...] = ()
    statistics: tuple[str, ...] = asymptotics.STATISTICS

    def __post_init__(self) -> None:
        if self.limit < 4 or self.limit > MAX_X:
            raise ConfigError(f"--limit must lie in [4, {MAX_X}], got {self.limit}")
        if self.grid_start < 4:
            raise ConfigError(f"--grid-start must be >= 4, got {self.grid_start}")
        if self.grid_stop > self.limit:
            raise ConfigError(f"--grid-stop {self.grid_stop} exceeds --limit {self.limit}")
        if self.grid_stop < self.grid_start:
            raise ConfigError("--grid-stop must be >= --grid-start")
        if not self.grid_ratio > 1:
            raise ConfigError("--grid-ratio must be > 1")
        if self.segment_size < 1 or self.workers < 1:
            raise ConfigError("--segment-size and --workers must be positive")
        # zero is accepted so a strict-equality run can be requested
        if not 0 <= self.tolerance < 1:
            raise ConfigError("--tolerance must lie in [0, 1)")
        if not self.bound > 0:
            raise ConfigError("--bound must be positive")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("--format must be csv or json")
        for x in self.grid_override:
            if x < 4:
                raise ConfigError(f"grid value {x} is below 4")
            if x > self.limit:
                raise ConfigError(f"grid value {x} exceeds --limit {self.limit}")
        if list(self.grid_override) != sorted(set(self.grid_override)):
            raise ConfigError("--grid values must be strictly ascending")
        unknown = set(self.statistics) - set(asymptotics.STATISTICS)
        if unknown:
            raise ConfigError(f"unknown statistics: {sorted(unknown)}")

    def grid(self) -> list[float]:
        if self.grid_override:
            return list(self.grid_override)
        return geometric_grid(self.grid_start, self.grid_stop, self.grid_ratio)


def geometric_grid(start: float, stop: float, ratio: float) -> list[float]:
    """start * ratio**k up to stop, each rounded to 12 significant digits."""
    out = []
    k = 0
    while True:
        x = rounded(start * ratio**k)
        if x > stop * (1 + 1e-12):
            break
        out.append(min(x, stop))
        k += 1
    return out


def _table_for(x: float, need_half: bool = False):
    top = math.floor(x)
    return build_prime_table(max(2, top // 2 if need_half else math.isqrt(top)))


def _series(cfg: RunConfig):
    grid = cfg.grid()
    table = _table_for(grid[-1])
    return accumulate_series(grid, table, cfg.segment_size, cfg.workers)


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8", newline="\n")


def render_rows(rows: list[asymptotics.ResidualRow], output_format: str) -> str:
    if output_format == "json":
        objs = []
        for r in rows:
            d = r.as_dict()
            objs.append({k: (v if k == "statistic" else rounded(v)) for k, v in d.items()})
        return json.dumps(objs, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        d = r.as_dict()
        writer.writerow([d[k] if k == "statistic" else fmt(d[k]) for k in CSV_HEADER])
    return buf.getvalue()


def cmd_compute(which: str, value: str) -> str:
    try:
        num = float(value)
    except ValueError as exc:
        raise ConfigError(f"not a number: {value!r}") from exc
    if which == "upsilon":
        if num != int(num) or num < 1:
            raise ConfigError("upsilon needs a positive integer")
        n = int(num)
        if n > MAX_X:
            raise CapacityError(f"n={n} exceeds the supported maximum {MAX_X}")
        return f"{upsilon(factorize(n, _table_for(n))):.12f}"
    if which in ("theta", "pi"):
        if num < 0:
            raise ConfigError("argument must be >= 0")
        table = build_prime_table(max(2, math.floor(num)))
        if which == "pi":
            return str(prime_count(table, num))
        return f"{theta(table, num):.12f}"
    if num < 4:
        raise ConfigError("x must be >= 4")
    series = accumulate_series([num], _table_for(num))
    if which == "semiprime-count":
        return str(int(series.semiprime_count[0]))
    return f"{float(series.column(SERIES_NAMES[which])[0]):.12f}"


def cmd_table(cfg: RunConfig) -> int:
    rows = asymptotics.residual_report(_series(cfg), tuple(cfg.statistics))
    _emit(render_rows(rows, cfg.output_format), cfg.output_path)
    return 0


def _lambda_reports(cfg: RunConfig, rng_seed: int = 0) -> list[identities.IdentityReport]:
    top = min(cfg.limit, RELATION_LIMIT)
    table = build_prime_table(max(2, math.isqrt(top)))
    rng = np.random.default_rng(rng_seed)
    sample = np.unique(rng.integers(1, top + 1, size=min(LAMBDA_SAMPLES, top)))
    reports = []
    for n in sample.tolist():
        f = factorize(n, table)
        reports.append(
            identities.compare(
                "mangoldt_log", n, identities.mangoldt_divisor_sum(f), math.log(n), cfg.tolerance
            )
        )
    return reports


def _relation_reports(cfg: RunConfig) -> list[identities.IdentityReport]:
    top = min(cfg.limit, RELATION_LIMIT)
    table = build_prime_table(max(2, math.isqrt(top)))
    checks = (
        (identities.prime_powers, identities.check_relation_i),
        (identities.relation_ii_numbers, identities.check_relation_ii),
        (identities.relation_iii_numbers, identities.check_relation_iii),
    )
    reports = []
    for numbers, check in checks:
        for n in numbers(top):
            reports.append(check(factorize(n, table), tolerance=cfg.tolerance))
    return reports


def cmd_verify(cfg: RunConfig) -> int:
    grid = cfg.grid()
    table = _table_for(grid[-1], need_half=True)
    series = accumulate_series(grid, table, cfg.segment_size, cfg.workers)
    groups: dict[str, list[identities.IdentityReport]] = {
        "decompositions": identities.check_decompositions(series, table, cfg.tolerance),
        "psi_prime_sum": [identities.check_psi_prime_sum(x, series, table, cfg.tolerance) for x in grid],
        "pi_sum_inequality": [identities.check_pi_sum_inequality(x, table, cfg.tolerance) for x in grid],
        "mangoldt": _lambda_reports(cfg),
        "relations": _relation_reports(cfg),
    }
    rows = asymptotics.residual_report(series)
    bounded = asymptotics.boundedness_check(rows, cfg.bound)

    ok = True
    summary = {}
    for name, reports in groups.items():
        failed = [r for r in reports if not r.passed]
        ok &= not failed
        worst = max((r.rel_diff for r in reports), default=0.0)
        print(f"{'PASS' if not failed else 'FAIL'} {name}: {len(reports)} checks, max rel_diff {worst:.3e}")
        for r in failed[:10]:
            print(f"  failing: {json.dumps(r.as_dict())}")
        summary[name] = {
            "checks": len(reports),
            "failed": len(failed),
            "max_rel_diff": worst,
            "failures": [r.as_dict() for r in failed],
        }
    for name, res in bounded.items():
        ok &= res.passed
        print(
            f"{'PASS' if res.passed else 'FAIL'} bounded {name}: "
            f"max |normalized residual| {res.max_abs_normalized:.4f} <= {res.bound}"
        )
    summary["boundedness"] = {
        name: {"bound": res.bound, "max_abs_normalized": res.max_abs_normalized, "passed": res.passed}
        for name, res in bounded.items()
    }
    summary["passed"] = bool(ok)
    report_path = cfg.output_path or Path(DEFAULT_REPORT)
    report_path.write_text(json.dumps(summary, indent=1) + "\n", encoding="utf-8")
    print(f"{'OK' if ok else 'FAILED'}; report written to {report_path}")
    return 0 if ok else 1


def cmd_oracle(cfg: RunConfig) -> int:
    if cfg.limit > oracle.MAX_ORACLE_LIMIT:
        raise ConfigError(f"oracle limit must be <= {oracle.MAX_ORACLE_LIMIT}, got {cfg.limit}")
    marks = [10**k for k in range(1, 7) if 10**k <= cfg.limit]
    if cfg.limit not in marks:
        marks.append(cfg.limit)
    expected = oracle.oracle_sums(cfg.limit, marks)
    series = accumulate_series(marks, _table_for(cfg.limit), cfg.segment_size, cfg.workers)
    worst = oracle.compare_series(series, expected)
    overall = max(worst.values())
    for name, dev in worst.items():
        print(f"{name}: max relative deviation {dev:.3e}")
    ok = overall <= cfg.tolerance
    print(f"{'OK' if ok else 'FAILED'}: max relative deviation {overall:.3e} (tolerance {cfg.tolerance:g})")
    return 0 if ok else 1


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid list {text!r}") from exc


def _number(text: str) -> int:
    """Integers written plainly or as 1e8."""
    v = float(text)
    if v != int(v):
        raise argparse.ArgumentTypeError(f"not an integer: {text}")
    return int(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--limit", type=_number, help="largest x considered")
    common.add_argument("--grid-start", type=float)
    common.add_argument("--grid-stop", type=float)
    common.add_argument("--grid-ratio", type=float, default=math.sqrt(10))
    common.add_argument("--grid", type=_float_list, default=(), help="explicit comma-separated grid")
    common.add_argument("--segment-size", type=_number, default=DEFAULT_SEGMENT_SIZE)
    common.add_argument("--workers", type=int, help="defaults to $SEMIPRIME_WORKERS or 1")
    common.add_argument("--tolerance", type=float)
    common.add_argument("--bound", type=float, default=asymptotics.DEFAULT_BOUND)
    common.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", type=Path)

    parser = argparse.ArgumentParser(
        prog="semiprime", description="Master-function sums over integers with two prime factors."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="print a single value")
    p.add_argument("which", choices=COMPUTE_CHOICES)
    p.add_argument("value")

    p = sub.add_parser("table", parents=[common], help="residual table as CSV or JSON")
    p.add_argument("--statistic", action="append", choices=asymptotics.STATISTICS)
    p.set_defaults(limit=10**8, tolerance=identities.DEFAULT_TOLERANCE)

    p = sub.add_parser("verify", parents=[common], help="run every identity and bound check")
    p.set_defaults(limit=10**6, tolerance=identities.DEFAULT_TOLERANCE)

    p = sub.add_parser("oracle", parents=[common], help="compare against trial division")
    p.set_defaults(limit=10**5, tolerance=1e-10)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    limit = args.limit
    stop = args.grid_stop if args.grid_stop is not None else float(limit)
    start = args.grid_start if args.grid_start is not None else min(1e4, stop)
    workers = args.workers if args.workers is not None else default_workers()
    return RunConfig(
        limit=limit,
        grid_start=start,
        grid_stop=stop,
        grid_ratio=args.grid_ratio,
        segment_size=args.segment_size,
        workers=workers,
        tolerance=args.tolerance,
        bound=args.bound,
        output_format=args.output_format,
        output_path=args.out,
        grid_override=tuple(args.grid),
        statistics=tuple(getattr(args, "statistic", None) or asymptotics.STATISTICS),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "compute":
            print(cmd_compute(args.which, args.value))
            return 0
        cfg = config_from_args(args)
        if args.command == "table":
            return cmd_table(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        return cmd_oracle(cfg)
    except (ConfigError, DomainError, CapacityError, RangeError, ShapeError, ValueError) as exc:
        print(f"semiprime: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"semiprime: I/O error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, FileNotFoundError) else 1


if __name__ == "__main__":
    sys.exit(main())
