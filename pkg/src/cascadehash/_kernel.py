"""Numba fill loop for the load-factor experiments.

Driving a cascade to its first crisis means ~10^6 inserts of 8-byte
keys; the pure-Python table is far too slow for sweeps, so this kernel
replays exactly the same arithmetic (mixer, per-level seeds, level-major
double hashing, duplicate skipping) over flat numpy arrays. Bit-for-bit
agreement with the CascadeTable path is asserted in the test suite.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

_GOLDEN = uint64(0x9E3779B97F4A7C15)
_C1 = uint64(0xBF58476D1CE4E5B9)
_C2 = uint64(0x94D049BB133111EB)
_ONE = uint64(1)
_EIGHT = uint64(8)


@njit(uint64(uint64), cache=True, inline="always")
def _mix64(x):
    z = x + _GOLDEN
    z = (z ^ (z >> uint64(30))) * _C1
    z = (z ^ (z >> uint64(27))) * _C2
    return z ^ (z >> uint64(31))


@njit(uint64(uint64, uint64), cache=True, inline="always")
def _hash_u64_key(key, seed):
    # hash_bytes() on the 8-byte little-endian encoding of `key`
    return _mix64(_mix64(seed ^ key) ^ _EIGHT)


@njit(cache=True)
def _fill_kernel(sizes, seeds1, seeds2, p, stream_seed):
    """Insert splitmix-stream keys until the first crisis.

    Returns (items inserted, per-level occupied counts). Keys already
    present are skipped without counting, mirroring the harness contract.
    """
    m = sizes.shape[0]
    offsets = np.zeros(m, dtype=np.int64)
    total = 0
    for i in range(m):
        offsets[i] = total
        total += sizes[i]
    occupied = np.zeros(total, dtype=np.uint8)
    keys = np.zeros(total, dtype=np.uint64)
    counts = np.zeros(m, dtype=np.int64)

    state = uint64(stream_seed)
    inserted = 0
    while True:
        key = _mix64(state)
        state = state + _GOLDEN
        placed = False
        duplicate = False
        for li in range(m):
            n = uint64(sizes[li])
            h1 = _hash_u64_key(key, seeds1[li]) % n
            h2 = _ONE + _hash_u64_key(key, seeds2[li]) % (n - _ONE)
            for j in range(p):
                idx = offsets[li] + np.int64((h1 + uint64(j) * h2) % n)
                if occupied[idx] == 0:
                    occupied[idx] = 1
                    keys[idx] = key
                    counts[li] += 1
                    inserted += 1
                    placed = True
                    break
                if keys[idx] == key:
                    duplicate = True
                    break
            if placed or duplicate:
                break
        if not placed and not duplicate:
            return inserted, counts


def fill_until_crisis_counts(
    sizes: list[int],
    seed_pairs: list[tuple[int, int]],
    probes_per_level: int,
    key_stream_seed: int,
) -> tuple[int, list[int]]:
    """Run the jitted fill and return (items at crisis, per-level counts)."""
    sizes_arr = np.asarray(sizes, dtype=np.int64)
    s1 = np.asarray([sp[0] for sp in seed_pairs], dtype=np.uint64)
    s2 = np.asarray([sp[1] for sp in seed_pairs], dtype=np.uint64)
    n_star, counts = _fill_kernel(
        sizes_arr, s1, s2, np.int64(probes_per_level), np.uint64(key_stream_seed)
    )
    return int(n_star), [int(c) for c in counts]
