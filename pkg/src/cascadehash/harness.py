"""Fill-until-crisis experiments and crisis-rate arithmetic.

This module drives cascades over streams of random 8-byte keys until the
first crisis and reports the load factor and per-level occupancies at
that instant, one row per level count M. Everything is deterministic
given the seeds: the key stream is a splitmix sequence and all hashing
is bit-exact, so identical invocations produce identical reports.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
import struct
import time
from dataclasses import dataclass
from typing import Sequence

from . import _kernel, hashing
from .core import CascadeConfig, CascadeTable, Growth, Inserted, Updated
from .sizing import ConfigError

DEFAULT_M_VALUES = (1, 2, 3, 4, 6, 12)
DEFAULT_TRIALS = 5

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class FillReport:
    """State of one cascade at its first crisis: one row of a results table."""

    levels: int
    total_capacity: int
    items_at_crisis: int
    level_stats: tuple[tuple[int, int], ...]  # (occupied, capacity) per level
    seed: int
    key_stream_seed: int
    elapsed: float

    @property
    def load_factor(self) -> float:
        return self.items_at_crisis / self.total_capacity

    @property
    def occupancies(self) -> tuple[float, ...]:
        return tuple(n / cap for n, cap in self.level_stats)


@dataclass(frozen=True)
class SweepRow:
    """Aggregate of several fill trials at one level count M."""

    levels: int
    reports: tuple[FillReport, ...]

    @property
    def load_factors(self) -> tuple[float, ...]:
        return tuple(r.load_factor for r in self.reports)

    @property
    def mean_load(self) -> float:
        return statistics.fmean(self.load_factors)

    @property
    def min_load(self) -> float:
        return min(self.load_factors)

    @property
    def max_load(self) -> float:
        return max(self.load_factors)

    @property
    def std_load(self) -> float:
        return statistics.pstdev(self.load_factors)


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]
    errors: tuple[tuple[int, str], ...]  # (m, message) for rows that failed
    base_exponent: int
    probe_budget: int
    trials: int
    seed: int


def _key_stream(seed: int):
    """Splitmix sequence of 64-bit keys; mirror of the kernel's stream."""
    state = seed & _MASK64
    while True:
        yield hashing.mix64(state)
        state = (state + hashing.GOLDEN_GAMMA) & _MASK64


def fill_until_crisis(
    config: CascadeConfig, key_stream_seed: int, *, accelerated: bool = True
) -> FillReport:
    """Insert distinct random 8-byte keys until the first crisis.

    Deterministic given (config.seed, key_stream_seed). Keys that the
    stream repeats are skipped (they would merely update) and are not
    counted toward the items-at-crisis total. ``accelerated=False`` runs
    the same experiment through the CascadeTable object directly; the
    two paths are interchangeable and tested for exact agreement.
    """
    if config.growth is not Growth.REPORT_CRISIS:
        raise ConfigError("fill experiments require growth=REPORT_CRISIS")
    start = time.perf_counter()
    if accelerated:
        sizes = config.level_sizes()
        seed_pairs = [
            hashing.level_seeds(config.seed, i + 1, 0) for i in range(config.levels)
        ]
        n_star, counts = _kernel.fill_until_crisis_counts(
            sizes, seed_pairs, config.probes_per_level, key_stream_seed
        )
        level_stats = tuple(zip(counts, sizes))
    else:
        table = CascadeTable(config)
        stream = _key_stream(key_stream_seed)
        while True:
            key = struct.pack("<Q", next(stream))
            outcome = table.insert(key, b"")
            if isinstance(outcome, (Inserted, Updated)):
                continue
            break
        st = table.stats()
        n_star = st.item_count
        level_stats = tuple((ls.occupied, ls.capacity) for ls in st.levels)
    elapsed = time.perf_counter() - start
    return FillReport(
        levels=config.levels,
        total_capacity=sum(cap for _, cap in level_stats),
        items_at_crisis=n_star,
        level_stats=level_stats,
        seed=config.seed,
        key_stream_seed=key_stream_seed,
        elapsed=elapsed,
    )


def trial_seeds(root_seed: int, m: int, trial: int) -> tuple[int, int]:
    """Derived (table seed, key-stream seed) for one sweep trial."""
    t_seed = hashing.mix64(hashing.mix64(root_seed ^ (m << 32)) ^ trial)
    return t_seed, hashing.mix64(t_seed)


def sweep(
    base_exponent: int = 18,
    probe_budget: int = 12,
    m_values: Sequence[int] = DEFAULT_M_VALUES,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> SweepReport:
    """Fill-until-crisis for each M, ``trials`` times each, with derived seeds.

    A configuration error for one M (budget not divisible, exponent too
    small) is recorded in ``errors`` and does not abort the other rows.
    """
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    rows = []
    errors = []
    for m in m_values:
        try:
            reports = []
            for t in range(trials):
                t_seed, ks_seed = trial_seeds(seed, m, t)
                config = CascadeConfig(
                    levels=m,
                    base_exponent=base_exponent,
                    seed=t_seed,
                    probe_budget=probe_budget,
                    growth=Growth.REPORT_CRISIS,
                )
                reports.append(fill_until_crisis(config, ks_seed))
            rows.append(SweepRow(levels=m, reports=tuple(reports)))
        except ConfigError as exc:
            errors.append((m, str(exc)))
    return SweepReport(
        rows=tuple(rows),
        errors=tuple(errors),
        base_exponent=base_exponent,
        probe_budget=probe_budget,
        trials=trials,
        seed=seed,
    )


def crisis_rate_estimate(
    occupancies: Sequence[float], probes_per_level: int
) -> float:
    """Upper-bound crisis probability: product of occupancy^p over levels.

    Models each probe as independently hitting an occupied slot, so a
    fresh key fails level i with probability occupancy_i^p.
    """
    if probes_per_level < 1:
        raise ValueError("probes_per_level must be >= 1")
    rate = 1.0
    for occ in occupancies:
        if not 0.0 <= occ <= 1.0:
            raise ValueError(f"occupancy {occ} outside [0, 1]")
        rate *= occ**probes_per_level
    return rate


def equivalent_single_table_probes(load: float, target_crisis_rate: float) -> int:
    """Probes a single table at ``load`` needs to match a target crisis rate.

    Ceiling of log(target) / log(load): the smallest probe count whose
    failure probability load^probes drops to the target.
    """
    if not 0.0 < load < 1.0:
        raise ValueError("load must be in (0, 1)")
    if not 0.0 < target_crisis_rate < 1.0:
        raise ValueError("target_crisis_rate must be in (0, 1)")
    return math.ceil(math.log(target_crisis_rate) / math.log(load))


CSV_HEADER = [
    "m",
    "trial",
    "seed",
    "total_capacity",
    "items_at_crisis",
    "load_factor",
    "level_occupancies",
]

REPORT_JSON_SCHEMA = {
    "type": "object",
    "required": ["rows"],
    "properties": {
        "base_exponent": {"type": "integer"},
        "probe_budget": {"type": "integer"},
        "trials": {"type": "integer"},
        "seed": {"type": "integer"},
        "errors": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["m", "error"],
                "properties": {"m": {"type": "integer"}, "error": {"type": "string"}},
            },
        },
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["m", "trials"],
                "properties": {
                    "m": {"type": "integer"},
                    "mean_load_factor": {"type": "number"},
                    "min_load_factor": {"type": "number"},
                    "max_load_factor": {"type": "number"},
                    "std_load_factor": {"type": "number"},
                    "trials": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": [
                                "trial",
                                "seed",
                                "total_capacity",
                                "items_at_crisis",
                                "load_factor",
                                "levels",
                            ],
                            "properties": {
                                "trial": {"type": "integer"},
                                "seed": {"type": "integer"},
                                "key_stream_seed": {"type": "integer"},
                                "total_capacity": {"type": "integer"},
                                "items_at_crisis": {"type": "integer"},
                                "load_factor": {"type": "number"},
                                "elapsed_seconds": {"type": "number"},
                                "levels": {
                                    "type": "array",
                                    "items": {
                                        "type": "object",
                                        "required": ["level", "occupied", "capacity"],
                                        "properties": {
                                            "level": {"type": "integer"},
                                            "occupied": {"type": "integer"},
                                            "capacity": {"type": "integer"},
                                            "occupancy": {"type": "number"},
                                        },
                                    },
                                },
                            },
                        },
                    },
                },
            },
        },
    },
}


def _as_sweep(report) -> SweepReport:
    if isinstance(report, FillReport):
        return SweepReport(
            rows=(SweepRow(levels=report.levels, reports=(report,)),),
            errors=(),
            base_exponent=0,
            probe_budget=0,
            trials=1,
            seed=report.seed,
        )
    return report


def _occupancy_field(report: FillReport) -> str:
    return " ".join(f"{n}/{cap}" for n, cap in report.level_stats)


def emit_report(report, fmt: str = "table") -> str:
    """Render a FillReport or SweepReport as 'table', 'csv', or 'json' text."""
    sweep_report = _as_sweep(report)
    if fmt == "table":
        return _emit_table(sweep_report)
    if fmt == "csv":
        return _emit_csv(sweep_report)
    if fmt == "json":
        return _emit_json(sweep_report)
    raise ValueError(f"unknown format {fmt!r}")


def _emit_table(report: SweepReport) -> str:
    lines = [f"{'M':>3} | {'N':>10} | {'n*':>10} | {'L':>7} | n_i/N_i"]
    for row in report.rows:
        for r in row.reports:
            lines.append(
                f"{r.levels:>3} | {r.total_capacity:>10} | {r.items_at_crisis:>10} | "
                f"{r.load_factor * 100:6.2f}% | {_occupancy_field(r)}"
            )
        if len(row.reports) > 1:
            lines.append(
                f"{row.levels:>3} | {'':>10} | {'mean':>10} | "
                f"{row.mean_load * 100:6.2f}% | "
                f"min {row.min_load * 100:.2f}% max {row.max_load * 100:.2f}% "
                f"std {row.std_load * 100:.2f}pp"
            )
    for m, msg in report.errors:
        lines.append(f"{m:>3} | error: {msg}")
    return "\n".join(lines) + "\n"


def _emit_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in report.rows:
        for trial, r in enumerate(row.reports):
            writer.writerow(
                [
                    r.levels,
                    trial,
                    r.seed,
                    r.total_capacity,
                    r.items_at_crisis,
                    repr(r.load_factor),
                    _occupancy_field(r),
                ]
            )
    return buf.getvalue()


def _emit_json(report: SweepReport) -> str:
    doc = {
        "base_exponent": report.base_exponent,
        "probe_budget": report.probe_budget,
        "trials": report.trials,
        "seed": report.seed,
        "errors": [{"m": m, "error": msg} for m, msg in report.errors],
        "rows": [
            {
                "m": row.levels,
                "mean_load_factor": row.mean_load,
                "min_load_factor": row.min_load,
                "max_load_factor": row.max_load,
                "std_load_factor": row.std_load,
                "trials": [
                    {
                        "trial": trial,
                        "seed": r.seed,
                        "key_stream_seed": r.key_stream_seed,
                        "total_capacity": r.total_capacity,
                        "items_at_crisis": r.items_at_crisis,
                        "load_factor": r.load_factor,
                        "elapsed_seconds": r.elapsed,
                        "levels": [
                            {
                                "level": i + 1,
                                "occupied": n,
                                "capacity": cap,
                                "occupancy": n / cap,
                            }
                            for i, (n, cap) in enumerate(r.level_stats)
                        ],
                    }
                    for trial, r in enumerate(row.reports)
                ],
            }
            for row in report.rows
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_csv(text: str) -> list[dict]:
    """Parse emit_report(..., 'csv') output back into typed row dicts."""
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(
            {
                "m": int(rec["m"]),
                "trial": int(rec["trial"]),
                "seed": int(rec["seed"]),
                "total_capacity": int(rec["total_capacity"]),
                "items_at_crisis": int(rec["items_at_crisis"]),
                "load_factor": float(rec["load_factor"]),
                "level_occupancies": [
                    tuple(int(x) for x in frac.split("/"))
                    for frac in rec["level_occupancies"].split()
                ],
            }
        )
    return rows
