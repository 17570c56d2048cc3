import random
import struct

import pytest

from cascadehash.core import CascadeConfig, CascadeTable, Crisis

from oracle import (
    ReferenceMap,
    differential_run,
    exhaustive_crisis_check,
    predicted_crisis,
    random_op_sequence,
)


def make_table(levels=3, base_exponent=14, seed=1):
    return CascadeTable(CascadeConfig(levels=levels, base_exponent=base_exponent, seed=seed))


def toy_table(seed=9, budget=4):
    cfg = CascadeConfig(
        levels=2, base_exponent=18, seed=seed, probe_budget=budget,
        size_override=(7, 3),
    )
    return CascadeTable(cfg)


def test_empty_sequence():
    assert differential_run(make_table(), [])


def test_single_insert_mismatched_lookup():
    ops = [("insert", b"k", b"v"), ("lookup", b"other"), ("contains", b"other")]
    assert differential_run(make_table(), ops)


def test_differential_100k_ops():
    # ~30% fill of an M=3, k=14 cascade (capacity 86039)
    rng = random.Random(20260823)
    ops = random_op_sequence(rng, 100_000, max_inserts=25_000)
    assert differential_run(make_table(), ops)


def test_reference_map_semantics():
    ref = ReferenceMap()
    assert not ref.contains(b"x")
    ref.insert(b"x", b"1")
    ref.insert(b"x", b"2")
    assert ref.lookup(b"x") == b"2"
    assert len(ref) == 1


def test_exhaustive_check_empty_table():
    t = toy_table()
    assert exhaustive_crisis_check(t, b"anything")


def test_exhaustive_check_saturated_table():
    t = toy_table(budget=2)
    rng = random.Random(3)
    while t.item_count < t.total_capacity:
        t.insert(struct.pack("<Q", rng.getrandbits(40)), b"v")
    fresh = b"not-yet-stored"
    assert predicted_crisis(t, fresh)
    assert exhaustive_crisis_check(t, fresh)


def test_exhaustive_check_randomized_fills():
    # 10^4 keys over randomly partially-filled (7, 3) cascades
    rng = random.Random(77)
    checked = 0
    while checked < 10_000:
        t = toy_table(seed=rng.getrandbits(32))
        target = rng.randrange(0, t.total_capacity + 1)
        attempts = 0
        while t.item_count < target and attempts < 200:
            outcome = t.insert(struct.pack("<Q", rng.getrandbits(40)), b"v")
            attempts += 1
            if isinstance(outcome, Crisis):
                break
        for _ in range(50):
            key = struct.pack("<Q", rng.getrandbits(40))
            snapshot = [list(lvl.slots) for lvl in t.levels]
            assert exhaustive_crisis_check(t, key)
            # roll back so the partial-fill level stays as sampled
            for lvl, slots in zip(t.levels, snapshot):
                restored = sum(1 for s in slots if s is not None)
                lvl.count = restored
                lvl.slots[:] = slots
            t.item_count = sum(lvl.count for lvl in t.levels)
            checked += 1
