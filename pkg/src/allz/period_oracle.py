"""Exact multiplicative-order computation.

This is the classical stand-in for the quantum period-finding stage: given
a base a and modulus n with gcd(a, n) = 1 it returns the least r >= 1 with
a**r = 1 (mod n), together with the complete factorization of r. The
oracle may factor n internally (it plays the role of an idealized quantum
subroutine); callers downstream only ever see (n, a, r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numtheory import Factorization, factorize, is_probable_prime

#: Largest modulus order_brute_force accepts; successive multiplication
#: beyond this is pathologically slow.
BRUTE_FORCE_LIMIT = 10**6


@dataclass(frozen=True)
class PeriodRecord:
    """The multiplicative order r plus knowledge of its prime divisors.

    Exactly one of `factors` (complete factorization of r) or
    `bounded_primes` (ascending primes <= `bound` dividing r, found by
    bounded trial division) is present.
    """

    order: int
    factors: Factorization | None = None
    bounded_primes: tuple[int, ...] | None = None
    bound: int | None = None

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if (self.factors is None) == (self.bounded_primes is None):
            raise ValueError("exactly one of factors / bounded_primes is required")
        if self.bounded_primes is not None:
            if self.bound is None:
                raise ValueError("bounded_primes requires the bound that produced it")
            if list(self.bounded_primes) != sorted(set(self.bounded_primes)):
                raise ValueError("bounded_primes must be strictly ascending")
            for p in self.bounded_primes:
                if p > self.bound or self.order % p:
                    raise ValueError(f"{p} is not a divisor of the order within bound")
        elif self.factors is not None and self.factors.value != self.order:
            raise ValueError("factorization does not reconstruct the order")

    @property
    def bounded(self) -> bool:
        return self.factors is None

    def distinct_primes(self) -> tuple[int, ...]:
        """Known distinct prime divisors of the order, ascending."""
        if self.factors is not None:
            return self.factors.distinct_primes
        return self.bounded_primes  # type: ignore[return-value]


def carmichael_exponent(p: int, q: int) -> int:
    """lcm(p - 1, q - 1) for distinct primes p, q.

    Every unit a modulo p*q satisfies a**lcm(p-1, q-1) = 1, so the value
    is a universal exponent that the order of any base divides.
    """
    if p == q:
        raise ValueError("primes must be distinct")
    for v in (p, q):
        if not is_probable_prime(v):
            raise ValueError(f"{v} is not prime")
    return math.lcm(p - 1, q - 1)


def _carmichael_of(factors: Factorization) -> int:
    """The Carmichael function from a prime factorization."""
    lam = 1
    for prime, mult in factors:
        if prime == 2:
            block = 1 if mult == 1 else (2 if mult == 2 else 1 << (mult - 2))
        else:
            block = prime ** (mult - 1) * (prime - 1)
        lam = math.lcm(lam, block)
    return lam


def multiplicative_order(
    a: int, n: int, exponent_hint: Factorization | None = None
) -> PeriodRecord:
    """Least r >= 1 with a**r = 1 (mod n), with r fully factored.

    Starts from a universal exponent E (the factored `exponent_hint` when
    provided, otherwise the Carmichael function of n computed by factoring
    n) and divides out each prime of E while the power still collapses to
    1. The hint lets a caller that already knows the factorization of n
    skip refactoring it.
    """
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    if not 1 <= a < n:
        raise ValueError(f"base must satisfy 1 <= a < n, got a={a}, n={n}")
    if math.gcd(a, n) != 1:
        raise ValueError(f"base {a} shares a factor with modulus {n}")
    if exponent_hint is None:
        exponent_hint = factorize(_carmichael_of(factorize(n)))
    exponent = exponent_hint.value
    if pow(a, exponent, n) != 1:
        raise ValueError("exponent hint does not annihilate the base")
    r = exponent
    remaining: list[tuple[int, int]] = []
    for z, mult in exponent_hint:
        while mult and pow(a, r // z, n) == 1:
            r //= z
            mult -= 1
        if mult:
            remaining.append((z, mult))
    return PeriodRecord(order=r, factors=Factorization(tuple(remaining)))


def order_brute_force(a: int, n: int) -> int:
    """Order of a mod n by successive multiplication; independent check path.

    Guarded to n <= 10**6 because the walk takes order-of-r steps.
    """
    if n < 2 or n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"modulus must be in [2, {BRUTE_FORCE_LIMIT}], got {n}")
    if not 1 <= a < n:
        raise ValueError(f"base must satisfy 1 <= a < n, got a={a}, n={n}")
    if math.gcd(a, n) != 1:
        raise ValueError(f"base {a} shares a factor with modulus {n}")
    r = 1
    cur = a % n
    while cur != 1:
        cur = cur * a % n
        r += 1
    return r
