"""Unit and property tests for the integer arithmetic primitives."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from allz.numtheory import (
    Factorization,
    _SMALL_PRIMES,
    distinct_primes_bounded,
    factorize,
    gcd,
    integer_sqrt,
    is_probable_prime,
    mod_pow,
    perfect_square_root,
)


def naive_sieve(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, limit + 1):
        if flags[i]:
            for j in range(i * i, limit + 1, i):
                flags[j] = 0
    return flags


class TestModPow:
    def test_examples(self):
        assert mod_pow(2, 10, 1000) == 24
        assert mod_pow(3, 0, 7) == 1
        assert mod_pow(1316667, 27, 2540107) == 1

    def test_rejects_small_modulus(self):
        with pytest.raises(ValueError):
            mod_pow(2, 3, 1)
        with pytest.raises(ValueError):
            mod_pow(2, 3, 0)

    def test_rejects_negative_operands(self):
        with pytest.raises(ValueError):
            mod_pow(-1, 3, 5)
        with pytest.raises(ValueError):
            mod_pow(2, -1, 5)

    def test_matches_repeated_multiplication_exhaustively(self):
        for m in range(2, 101):
            for a in range(64):
                acc = 1 % m
                for e in range(64):
                    assert mod_pow(a, e, m) == acc
                    acc = acc * a % m


class TestGcd:
    def test_examples(self):
        assert gcd(0, 15) == 15
        assert gcd(124, 21) == 1
        assert gcd(7, 21) == 7

    def test_exhaustive_divisor_properties(self):
        divisors = [[] for _ in range(500)]
        for d in range(1, 500):
            for multiple in range(d, 500, d):
                divisors[multiple].append(d)
        for x in range(500):
            for y in range(500):
                g = gcd(x, y)
                if x or y:
                    assert x % g == 0 or x == 0
                    assert y % g == 0 or y == 0
                if x and y:
                    for d in divisors[x]:
                        if y % d == 0:
                            assert g % d == 0


class TestIsProbablePrime:
    def test_examples(self):
        assert is_probable_prime(2)
        assert not is_probable_prime(3622301)
        assert is_probable_prime(9999991)

    def test_9999991_by_trial_division(self):
        n = 9999991
        assert all(n % d for d in range(2, math.isqrt(n) + 1))

    def test_matches_sieve_below_100k(self):
        flags = naive_sieve(100_000)
        for x in range(100_001):
            assert is_probable_prime(x) == bool(flags[x])

    def test_known_large_values(self):
        assert is_probable_prime((1 << 61) - 1)
        assert not is_probable_prime((1 << 61) + 1)
        assert not is_probable_prime(3215031751)  # strong pseudoprime to 2,3,5,7
        assert not is_probable_prime(561)  # Carmichael

    def test_rejects_values_beyond_witness_range(self):
        with pytest.raises(ValueError):
            is_probable_prime((1 << 64) + 1)


class TestIntegerSqrt:
    def test_examples(self):
        assert integer_sqrt(0) == 0
        assert integer_sqrt(48) == 6
        assert integer_sqrt(49729) == 223

    def test_bracketing_on_random_values(self):
        rng = random.Random(0xA11E)
        for _ in range(1_000_000):
            x = rng.randrange(0, 1 << 62)
            s = integer_sqrt(x)
            assert s * s <= x < (s + 1) * (s + 1)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            integer_sqrt(-1)


class TestPerfectSquareRoot:
    def test_examples(self):
        assert perfect_square_root(36) == 6
        assert perfect_square_root(48) is None
        assert perfect_square_root(1296) == 36

    @given(st.integers(min_value=0, max_value=10**9))
    def test_square_inputs_round_trip(self, b):
        assert perfect_square_root(b * b) == b


class TestFactorize:
    def test_examples(self):
        assert factorize(108).as_dict() == {2: 2, 3: 3}
        assert factorize(46).as_dict() == {2: 1, 23: 1}
        assert factorize(1).entries == ()

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            factorize(0)

    def test_reconstruction_below_100k(self):
        seen_primes = set()
        for x in range(1, 100_000):
            f = factorize(x)
            assert f.value == x
            seen_primes.update(f.distinct_primes)
        assert all(is_probable_prime(p) for p in seen_primes)

    def test_rho_path_on_semiprime_beyond_trial_division(self):
        f = factorize(10007 * 10009)
        assert f.as_dict() == {10007: 1, 10009: 1}

    def test_rho_path_on_prime_power(self):
        f = factorize(10007**2 * 3)
        assert f.as_dict() == {3: 1, 10007: 2}

    def test_large_prime(self):
        m61 = (1 << 61) - 1
        assert factorize(m61).as_dict() == {m61: 1}

    @settings(max_examples=300, deadline=None)
    @given(st.integers(min_value=1, max_value=10**12))
    def test_reconstruction_property(self, x):
        f = factorize(x)
        assert f.value == x
        assert all(is_probable_prime(p) for p in f.distinct_primes)
        assert list(f.distinct_primes) == sorted(f.distinct_primes)

    def test_entries_validation(self):
        with pytest.raises(ValueError):
            Factorization(((3, 1), (2, 1)))
        with pytest.raises(ValueError):
            Factorization(((2, 0),))


class TestDistinctPrimesBounded:
    def test_examples(self):
        assert distinct_primes_bounded(108, 1000) == [2, 3]
        assert distinct_primes_bounded(46, 10) == [2]
        assert distinct_primes_bounded(1, 1000) == []

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            distinct_primes_bounded(0, 10)
        with pytest.raises(ValueError):
            distinct_primes_bounded(10, 1)

    def test_never_reports_cofactor_primes(self):
        # 2 * 10007: 10007 is beyond the bound and must not appear
        assert distinct_primes_bounded(2 * 10007, 100) == [2]

    @pytest.mark.parametrize("bound", [2, 10, 100, 1000])
    def test_matches_full_factorization_filter(self, bound):
        for x in range(1, 10_000):
            expected = [p for p in factorize(x).distinct_primes if p <= bound]
            assert distinct_primes_bounded(x, bound) == expected


def test_small_prime_table_is_complete():
    flags = naive_sieve(10_000)
    assert list(_SMALL_PRIMES) == [i for i in range(10_001) if flags[i]]
