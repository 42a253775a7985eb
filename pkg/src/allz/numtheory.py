"""Exact integer arithmetic primitives.

Everything here is deterministic and exact: modular exponentiation, gcd,
primality (deterministic Miller-Rabin below 2**64), integer square roots,
and complete factorization of small-to-medium integers (trial division
plus Brent's cycle-finding variant of the rho method).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache


def _sieve(limit: int) -> list[int]:
    """All primes <= limit by a plain sieve of Eratosthenes."""
    if limit < 2:
        return []
    table = bytearray([1]) * (limit + 1)
    table[0] = table[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if table[i]:
            table[i * i :: i] = bytearray(len(table[i * i :: i]))
    return [i for i in range(limit + 1) if table[i]]


_TRIAL_DIVISION_LIMIT = 10_000
_SMALL_PRIMES: tuple[int, ...] = tuple(_sieve(_TRIAL_DIVISION_LIMIT))

# Deterministic Miller-Rabin witness sets with their validity thresholds
# (standard published bounds; the last row covers everything below 2**64).
_MR_WITNESS_TABLE: tuple[tuple[int, tuple[int, ...]], ...] = (
    (2_047, (2,)),
    (1_373_653, (2, 3)),
    (9_080_191, (31, 73)),
    (25_326_001, (2, 3, 5)),
    (3_215_031_751, (2, 3, 5, 7)),
    (4_759_123_141, (2, 7, 61)),
    (1_122_004_669_633, (2, 13, 23, 1_662_803)),
    (2_152_302_898_747, (2, 3, 5, 7, 11)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (3_825_123_056_546_413_051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (1 << 64, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)


@dataclass(frozen=True)
class Factorization:
    """A complete prime factorization as (prime, multiplicity) pairs.

    Entries are strictly ascending in the prime and every multiplicity is
    positive; the empty factorization represents 1.
    """

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        last = 1
        for prime, mult in self.entries:
            if prime <= last:
                raise ValueError("factor entries must be strictly ascending primes")
            if mult < 1:
                raise ValueError("multiplicities must be positive")
            last = prime

    @property
    def value(self) -> int:
        """The integer this factorization reconstructs."""
        out = 1
        for prime, mult in self.entries:
            out *= prime**mult
        return out

    @property
    def distinct_primes(self) -> tuple[int, ...]:
        return tuple(prime for prime, _ in self.entries)

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """base**exponent mod modulus, exact, in O(log exponent) multiplications."""
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    if base < 0 or exponent < 0:
        raise ValueError("base and exponent must be non-negative")
    return pow(base, exponent, modulus)


def gcd(x: int, y: int) -> int:
    """Greatest common divisor; gcd(0, y) == y."""
    if x < 0 or y < 0:
        raise ValueError("arguments must be non-negative")
    return math.gcd(x, y)


def is_probable_prime(x: int) -> bool:
    """Deterministic primality test, correct for every x below 2**64.

    Uses Miller-Rabin with fixed witness sets chosen by input size (see
    the table above); despite the traditional name there is nothing
    probabilistic in this range.
    """
    if x < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if x % p == 0:
            return x == p
    if x >= 1 << 64:
        raise ValueError("deterministic witnesses only cover x < 2**64")
    d = x - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for threshold, witnesses in _MR_WITNESS_TABLE:
        if x < threshold:
            break
    for a in witnesses:
        t = pow(a, d, x)
        if t == 1 or t == x - 1:
            continue
        for _ in range(s - 1):
            t = t * t % x
            if t == x - 1:
                break
        else:
            return False
    return True


def integer_sqrt(x: int) -> int:
    """floor(sqrt(x)) for x >= 0."""
    if x < 0:
        raise ValueError("argument must be non-negative")
    return math.isqrt(x)


def perfect_square_root(x: int) -> int | None:
    """The integer b with b*b == x, or None when x is not a perfect square."""
    if x < 0:
        raise ValueError("argument must be non-negative")
    b = math.isqrt(x)
    return b if b * b == x else None


def _brent_rho(n: int) -> int:
    """A non-trivial factor of odd composite n with no factor <= 10**4.

    Brent's variant of Pollard's rho with a fixed, deterministic parameter
    schedule (x0 = 2, polynomial offsets c = 1, 2, ...), so repeated runs
    factor identically.
    """
    for c in range(1, 1000):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho parameter schedule exhausted for {n}")


def _factor_into(x: int, out: dict[int, int]) -> None:
    """Accumulate the factorization of x (no factor <= 10**4) into out."""
    if x == 1:
        return
    if is_probable_prime(x):
        out[x] = out.get(x, 0) + 1
        return
    d = _brent_rho(x)
    _factor_into(d, out)
    _factor_into(x // d, out)


def factorize(x: int) -> Factorization:
    """Complete prime factorization of x >= 1; factorize(1) is empty.

    Trial division by all primes up to 10**4, then Brent rho on whatever
    composite cofactor remains.
    """
    if x < 1:
        raise ValueError(f"cannot factor {x}; argument must be >= 1")
    out: dict[int, int] = {}
    rem = x
    for p in _SMALL_PRIMES:
        if p * p > rem:
            break
        if rem % p == 0:
            e = 1
            rem //= p
            while rem % p == 0:
                e += 1
                rem //= p
            out[p] = e
    if rem > 1:
        if rem <= _TRIAL_DIVISION_LIMIT * _TRIAL_DIVISION_LIMIT or is_probable_prime(rem):
            # below the squared trial bound the cofactor is necessarily prime
            out[rem] = out.get(rem, 0) + 1
        else:
            _factor_into(rem, out)
    return Factorization(tuple(sorted(out.items())))


@lru_cache(maxsize=64)
def _primes_up_to(limit: int) -> tuple[int, ...]:
    if limit <= _TRIAL_DIVISION_LIMIT:
        return _SMALL_PRIMES[: bisect_right(_SMALL_PRIMES, limit)]
    return tuple(_sieve(limit))


def distinct_primes_bounded(x: int, bound: int) -> list[int]:
    """All distinct primes p <= bound dividing x, by trial division alone.

    The cofactor is never factored, so this stays cheap even when x has
    huge prime factors beyond the bound.
    """
    if x < 1:
        raise ValueError(f"argument must be >= 1, got {x}")
    if bound < 2:
        raise ValueError(f"bound must be >= 2, got {bound}")
    return [p for p in _primes_up_to(min(bound, x)) if x % p == 0]
