"""Prime capacities for cascade levels.

Level 1 holds the smallest prime >= 3 * 2^k slots and each deeper level
halves the exponent, giving the ladder 389, 769, 1543, ... 12582917 for
k = 7..22. Keeping every capacity prime guarantees that any stride in
[1, N-1] is coprime to the table size, so double hashing never revisits
a slot within a level.
"""

from __future__ import annotations


class ConfigError(ValueError):
    """An invalid cascade configuration (level count, budget, or exponent)."""


# Deterministic Miller-Rabin witnesses, sufficient for all n < 3.3e24.
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Exact deterministic primality test for 0 <= n < 2^63."""
    if n < 0 or n >= 1 << 63:
        raise ValueError("n out of supported range")
    if n < 2:
        return False
    for w in _WITNESSES:
        if n == w:
            return True
        if n % w == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _WITNESSES:
        x = pow(w, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def smallest_prime_at_least(n: int) -> int:
    """The least prime p >= n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if n > 1 << 62:
        raise OverflowError("capacity request too large")
    p = n
    while not is_prime(p):
        p += 1
    return p


def ladder_sizes(base_exponent: int, levels: int) -> list[int]:
    """Capacities for an M-level cascade rooted at exponent ``base_exponent``.

    Level i gets the smallest prime >= 3 * 2^(k - i + 1); each level is
    roughly half the size of the one above it.
    """
    if levels < 1:
        raise ConfigError("levels must be >= 1")
    if base_exponent - levels + 1 < 1:
        raise ConfigError(
            f"base_exponent {base_exponent} too small for {levels} levels "
            f"(need base_exponent - levels + 1 >= 1)"
        )
    return [
        smallest_prime_at_least(3 * 2 ** (base_exponent - i))
        for i in range(levels)
    ]
