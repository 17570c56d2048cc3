"""Seeded 64-bit hashing and derivation of double-hashing (start, stride) pairs.

Everything here is bit-exact and platform independent: the same inputs
produce the same outputs on every run, which is what makes the fill
experiments reproducible. The mixer is a splitmix-style avalanche
finalizer; see tests/data/hash_vectors.txt for frozen golden outputs.
"""

from __future__ import annotations

from typing import NamedTuple

_MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_C1 = 0xBF58476D1CE4E5B9
_MIX_C2 = 0x94D049BB133111EB


class HashPair(NamedTuple):
    """Double-hashing pair: initial index ``h1`` and stride ``h2``.

    ``h1`` is in [0, size-1]; ``h2`` is in [1, size-1], so for a prime
    table size the stride is always coprime to the size and the probe
    sequence cycles through every slot.
    """

    h1: int
    h2: int


def mix64(x: int) -> int:
    """Avalanche-finalize a 64-bit value. All arithmetic is mod 2^64."""
    z = (x + GOLDEN_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX_C1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_C2) & _MASK64
    return z ^ (z >> 31)


def hash_bytes(key: bytes, seed: int) -> int:
    """Hash a non-empty byte string to a 64-bit value under ``seed``.

    The key is consumed in 8-byte little-endian chunks (last chunk
    zero-padded), then the byte length is folded in with a final mix so
    that zero-padded keys of different lengths hash differently.
    """
    if not key:
        raise ValueError("key must be non-empty")
    state = seed & _MASK64
    for off in range(0, len(key), 8):
        chunk = key[off : off + 8]
        if len(chunk) < 8:
            chunk = chunk.ljust(8, b"\x00")
        state = mix64(state ^ int.from_bytes(chunk, "little"))
    return mix64(state ^ len(key))


def derive_pair(key: bytes, size: int, seed1: int, seed2: int) -> HashPair:
    """Derive the (h1, h2) probe pair for ``key`` in a table of ``size`` slots."""
    if size < 2:
        raise ValueError("table size must be at least 2")
    h1 = hash_bytes(key, seed1) % size
    h2 = 1 + hash_bytes(key, seed2) % (size - 1)
    return HashPair(h1, h2)


def level_seeds(root_seed: int, level_index: int, generation: int = 0) -> tuple[int, int]:
    """Derive the per-level (h1-seed, h2-seed) pair from the root seed.

    Each (level, generation) combination gets its own pair so that a
    rebuilt table after growth probes along fresh sequences.
    """
    if level_index < 1:
        raise ValueError("level_index must be >= 1")
    if generation < 0:
        raise ValueError("generation must be >= 0")
    base = 2 * level_index + 131 * generation
    return (
        mix64((root_seed & _MASK64) ^ base),
        mix64((root_seed & _MASK64) ^ (base + 1)),
    )
