"""Cascade hash tables: stacked double-hashing levels with a shared probe budget.

An M-level cascade keeps M open-addressing tables of halving prime
sizes and splits a fixed probe budget (12 by default) evenly across
them, so every insert and lookup touches at most 12 slots. Deeper
levels act as fail-safes for the levels above, which pushes the load
factor reachable before the first unplaceable key ("crisis") into the
70-85% range while keeping the worst-case probe count constant.
"""

from .core import (
    CRISIS,
    CascadeConfig,
    CascadeTable,
    Crisis,
    Growth,
    Inserted,
    InsertOutcome,
    LevelStats,
    TableStats,
    Updated,
    new,
)
from .harness import (
    FillReport,
    SweepReport,
    crisis_rate_estimate,
    equivalent_single_table_probes,
    emit_report,
    fill_until_crisis,
    sweep,
)
from .hashing import HashPair, derive_pair, hash_bytes, level_seeds, mix64
from .sizing import ConfigError, is_prime, ladder_sizes, smallest_prime_at_least

__all__ = [
    "CRISIS",
    "CascadeConfig",
    "CascadeTable",
    "ConfigError",
    "Crisis",
    "FillReport",
    "Growth",
    "HashPair",
    "Inserted",
    "InsertOutcome",
    "LevelStats",
    "SweepReport",
    "TableStats",
    "Updated",
    "crisis_rate_estimate",
    "derive_pair",
    "emit_report",
    "equivalent_single_table_probes",
    "fill_until_crisis",
    "hash_bytes",
    "is_prime",
    "ladder_sizes",
    "level_seeds",
    "mix64",
    "new",
    "smallest_prime_at_least",
    "sweep",
]

__version__ = "0.1.0"
