"""The M-level cascade hash table.

A cascade table stacks M open-addressing tables of halving prime sizes
and shares a single probe budget B across them: each level is allowed
p = B / M double-hashing probes, walked level-major (all of level 1's
probes before level 2's). An insertion that finds no empty slot within
the budget is a *crisis*; depending on configuration this is either
surfaced as an outcome or resolved by enlarging and rehashing.

Keys and values are opaque byte strings. There is no deletion: an empty
slot therefore proves a key was never placed at or after it in its probe
sequence, which lets lookups short-circuit on the first empty slot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

from . import hashing, sizing
from .sizing import ConfigError


class Growth(enum.Enum):
    """What an insert does when it runs out of probes."""

    REPORT_CRISIS = "report-crisis"
    GROW_ON_CRISIS = "grow-on-crisis"


@dataclass(frozen=True)
class CascadeConfig:
    """Shape of a cascade table.

    ``size_override`` bypasses the prime ladder with an explicit capacity
    list (still all prime); it exists so tests can build tiny cascades
    like [7, 3] and enumerate every slot. Production tables use the ladder.
    """

    levels: int
    base_exponent: int
    seed: int
    probe_budget: int = 12
    growth: Growth = Growth.REPORT_CRISIS
    size_override: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.levels < 1:
            raise ConfigError("levels must be >= 1")
        if self.probe_budget < 1 or self.probe_budget % self.levels != 0:
            raise ConfigError(
                f"probe_budget {self.probe_budget} is not a positive multiple "
                f"of levels {self.levels}"
            )
        if self.size_override is not None:
            if len(self.size_override) != self.levels:
                raise ConfigError("size_override length must equal levels")
            for n in self.size_override:
                if n < 2 or not sizing.is_prime(n):
                    raise ConfigError(f"size_override entry {n} is not a prime >= 2")
                if self.probes_per_level > n:
                    raise ConfigError(
                        f"probes per level {self.probes_per_level} exceeds level size {n}"
                    )
        else:
            # raises ConfigError when the exponent is too small for M levels
            sizing.ladder_sizes(self.base_exponent, self.levels)

    @property
    def probes_per_level(self) -> int:
        return self.probe_budget // self.levels

    def level_sizes(self, base_exponent: Optional[int] = None) -> list[int]:
        if self.size_override is not None:
            return list(self.size_override)
        k = self.base_exponent if base_exponent is None else base_exponent
        return sizing.ladder_sizes(k, self.levels)


@dataclass(frozen=True)
class Inserted:
    level: int
    probes_used: int


@dataclass(frozen=True)
class Updated:
    level: int
    probes_used: int


@dataclass(frozen=True)
class Crisis:
    pass


InsertOutcome = Union[Inserted, Updated, Crisis]

CRISIS = Crisis()


@dataclass(frozen=True)
class LevelStats:
    level: int
    occupied: int
    capacity: int

    @property
    def occupancy(self) -> Fraction:
        return Fraction(self.occupied, self.capacity)


@dataclass(frozen=True)
class TableStats:
    levels: tuple[LevelStats, ...]
    item_count: int
    total_capacity: int

    @property
    def load_factor(self) -> Fraction:
        return Fraction(self.item_count, self.total_capacity)


@dataclass
class Level:
    """One prime-sized slot array. ``slots[i]`` is None or a (key, value) pair."""

    index: int
    size: int
    seed_pair: tuple[int, int]
    slots: list[Optional[tuple[bytes, bytes]]] = field(default_factory=list)
    count: int = 0

    def __post_init__(self) -> None:
        if not self.slots:
            self.slots = [None] * self.size


class CascadeTable:
    """M stacked double-hashing tables sharing one probe budget.

    Single-writer: one mutating call at a time; concurrent readers are
    fine while no writer is active.
    """

    def __init__(self, config: CascadeConfig):
        self.config = config
        self.generation = 0
        self.levels = self._build_levels(config.base_exponent, 0)
        self.item_count = 0
        self.last_probe_count = 0

    def _build_levels(self, base_exponent: int, generation: int) -> list[Level]:
        sizes = self.config.level_sizes(base_exponent)
        return [
            Level(
                index=i + 1,
                size=n,
                seed_pair=hashing.level_seeds(self.config.seed, i + 1, generation),
            )
            for i, n in enumerate(sizes)
        ]

    @property
    def total_capacity(self) -> int:
        return sum(lvl.size for lvl in self.levels)

    def probe_sequence(self, level_index: int, key: bytes) -> list[int]:
        """The p slot indices probed for ``key`` in level ``level_index`` (1-based)."""
        if not 1 <= level_index <= len(self.levels):
            raise ValueError(f"level_index {level_index} out of range")
        lvl = self.levels[level_index - 1]
        h1, h2 = hashing.derive_pair(key, lvl.size, *lvl.seed_pair)
        p = self.config.probes_per_level
        return [(h1 + j * h2) % lvl.size for j in range(p)]

    def insert(self, key: bytes, value: bytes) -> InsertOutcome:
        """Place (key, value), walking levels in order within the probe budget.

        Returns Updated when the key was already stored (value overwritten,
        no count change), Inserted on success, and Crisis when every probed
        slot holds a different key. Under GROW_ON_CRISIS the table enlarges
        and the insert is retried instead of returning Crisis; the table is
        left untouched by a reported crisis.
        """
        if not key:
            raise ValueError("key must be non-empty")
        while True:
            outcome = self._insert_once(key, value)
            if not isinstance(outcome, Crisis):
                return outcome
            if self.config.growth is Growth.REPORT_CRISIS:
                return outcome
            self.grow()

    def _insert_once(self, key: bytes, value: bytes) -> InsertOutcome:
        p = self.config.probes_per_level
        probes = 0
        for lvl in self.levels:
            h1, h2 = hashing.derive_pair(key, lvl.size, *lvl.seed_pair)
            for j in range(p):
                idx = (h1 + j * h2) % lvl.size
                probes += 1
                slot = lvl.slots[idx]
                if slot is None:
                    lvl.slots[idx] = (key, value)
                    lvl.count += 1
                    self.item_count += 1
                    self.last_probe_count = probes
                    return Inserted(level=lvl.index, probes_used=probes)
                if slot[0] == key:
                    lvl.slots[idx] = (key, value)
                    self.last_probe_count = probes
                    return Updated(level=lvl.index, probes_used=probes)
        self.last_probe_count = probes
        return CRISIS

    def lookup(self, key: bytes) -> Optional[bytes]:
        """Return the stored value, or None. Probes the same order as insert.

        An empty slot ends the search: with no deletions the key could not
        have been placed later in its own sequence.
        """
        if not key:
            return None
        p = self.config.probes_per_level
        probes = 0
        for lvl in self.levels:
            h1, h2 = hashing.derive_pair(key, lvl.size, *lvl.seed_pair)
            for j in range(p):
                idx = (h1 + j * h2) % lvl.size
                probes += 1
                slot = lvl.slots[idx]
                if slot is None:
                    self.last_probe_count = probes
                    return None
                if slot[0] == key:
                    self.last_probe_count = probes
                    return slot[1]
        self.last_probe_count = probes
        return None

    def contains(self, key: bytes) -> bool:
        return self.lookup(key) is not None

    __contains__ = contains

    def __len__(self) -> int:
        return self.item_count

    def items(self) -> Iterator[tuple[bytes, bytes]]:
        for lvl in self.levels:
            for slot in lvl.slots:
                if slot is not None:
                    yield slot

    def grow(self) -> "CascadeTable":
        """Enlarge and rehash: bump the base exponent, reseed, reinsert.

        If reinsertion itself hits a crisis the exponent is bumped again;
        this terminates because capacity doubles while the item set is
        fixed. Returns self (rebuilt in place) for convenience.
        """
        if self.config.size_override is not None:
            raise ConfigError("cannot grow a table with an explicit size override")
        pairs = list(self.items())
        k = self.config.base_exponent + (self.generation + 1)
        gen = self.generation + 1
        p = self.config.probes_per_level
        while True:
            if 3 * 2**k > 1 << 62:
                raise OverflowError("table capacity limit reached")
            sizes = sizing.ladder_sizes(k, self.config.levels)
            levels = [
                Level(
                    index=i + 1,
                    size=n,
                    seed_pair=hashing.level_seeds(self.config.seed, i + 1, gen),
                )
                for i, n in enumerate(sizes)
            ]
            if self._reinsert_all(levels, pairs, p):
                self.levels = levels
                self.generation = gen
                return self
            k += 1
            gen += 1

    @staticmethod
    def _reinsert_all(
        levels: list[Level], pairs: list[tuple[bytes, bytes]], p: int
    ) -> bool:
        for key, value in pairs:
            placed = False
            for lvl in levels:
                h1, h2 = hashing.derive_pair(key, lvl.size, *lvl.seed_pair)
                for j in range(p):
                    idx = (h1 + j * h2) % lvl.size
                    if lvl.slots[idx] is None:
                        lvl.slots[idx] = (key, value)
                        lvl.count += 1
                        placed = True
                        break
                if placed:
                    break
            if not placed:
                return False
        return True

    def stats(self) -> TableStats:
        return TableStats(
            levels=tuple(
                LevelStats(level=lvl.index, occupied=lvl.count, capacity=lvl.size)
                for lvl in self.levels
            ),
            item_count=self.item_count,
            total_capacity=self.total_capacity,
        )


def new(config: CascadeConfig) -> CascadeTable:
    """Build an empty cascade table for ``config``."""
    return CascadeTable(config)
