"""Shared test helpers."""


def semiprimes_below(limit):
    """All (n, p, q) with n = p*q < limit, p < q both prime, ascending in n."""
    sieve_limit = limit // 2
    flags = bytearray([1]) * (sieve_limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, int(sieve_limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    primes = [i for i in range(sieve_limit + 1) if flags[i]]
    out = []
    for i, p in enumerate(primes):
        for q in primes[i + 1 :]:
            if p * q >= limit:
                break
            out.append((p * q, p, q))
    return sorted(out)
