"""Generalized period decomposition (all-z) factoring toolkit.

A library and CLI that, given the multiplicative order r of a base a
modulo a semiprime n, recover a factor of n by trying every distinct
prime divisor z of r via gcd(a**(r/z) - 1, n), with a perfect-square
fallback, plus the machinery to benchmark that method against baselines
over seeded Monte Carlo campaigns.
"""

from .campaign import (
    BOUND_CLASSES,
    CampaignConfig,
    CampaignResult,
    CampaignStats,
    RandomStream,
    Semiprime,
    TrialCase,
    TrialRecord,
    case_seed,
    cochran_sample_size,
    compute_metrics,
    failure_reason,
    merge_stats,
    mix64,
    random_prime,
    run_campaign,
    run_trial,
    sample_base,
    sample_semiprime,
)
from .numtheory import (
    Factorization,
    distinct_primes_bounded,
    factorize,
    gcd,
    integer_sqrt,
    is_probable_prime,
    mod_pow,
    perfect_square_root,
)
from .period_oracle import (
    PeriodRecord,
    carmichael_exponent,
    multiplicative_order,
    order_brute_force,
)
from .strategies import (
    AttemptResult,
    FactorOutcome,
    all_z,
    attempt_divisor,
    dong2023,
    fallback_square,
    traditional_shor,
)

__version__ = "0.1.0"

__all__ = [
    "AttemptResult",
    "BOUND_CLASSES",
    "CampaignConfig",
    "CampaignResult",
    "CampaignStats",
    "FactorOutcome",
    "Factorization",
    "PeriodRecord",
    "RandomStream",
    "Semiprime",
    "TrialCase",
    "TrialRecord",
    "all_z",
    "attempt_divisor",
    "carmichael_exponent",
    "case_seed",
    "cochran_sample_size",
    "compute_metrics",
    "distinct_primes_bounded",
    "dong2023",
    "factorize",
    "failure_reason",
    "fallback_square",
    "gcd",
    "integer_sqrt",
    "is_probable_prime",
    "merge_stats",
    "mix64",
    "mod_pow",
    "multiplicative_order",
    "order_brute_force",
    "perfect_square_root",
    "random_prime",
    "run_campaign",
    "run_trial",
    "sample_base",
    "sample_semiprime",
    "traditional_shor",
]
