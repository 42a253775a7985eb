"""Monte Carlo campaign harness.

Generates RSA-style semiprimes and bases, runs strategy trials at scale,
and aggregates statistics. Determinism is the load-bearing property:

* every trial derives its own 64-bit seed from the campaign master seed
  and the trial's case id through the splitmix64 stream
  (seed_i = mix64(master + (i + 1) * GOLDEN)), so records are pure
  functions of (config, case_id);
* workers only change scheduling, never values, and records are always
  emitted in case_id order;
* statistics are plain sums and count maps, so partial aggregates merge
  associatively and commutatively with the empty stats as identity.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterable, Literal

from .numtheory import factorize, integer_sqrt, is_probable_prime
from .period_oracle import PeriodRecord, carmichael_exponent, multiplicative_order
from .strategies import FactorOutcome, all_z, dong2023, traditional_shor

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_RETRY_SALT = 0x5DEECE66D
_SAMPLING_CAP = 1_000_000

BaseMode = Literal["random", "perfect_square"]
StrategyName = Literal["traditional", "dong2023", "allz"]

BASE_MODES = ("random", "perfect_square")
STRATEGIES = ("traditional", "dong2023", "allz")

#: Divisor-bound digit classes used for cumulative success curves.
BOUND_CLASSES = ("1", "2", "3", "4", "inf")

FAILURE_REASONS = (
    "odd_period_unusable",
    "all_divisors_trivial",
    "half_power_minus_one",
    "fallback_trivial",
    "precondition_error",
)


def mix64(x: int) -> int:
    """splitmix64 finalizer: a documented, platform-independent 64-bit mix."""
    x &= MASK64
    x ^= x >> 30
    x = x * 0xBF58476D1CE4E5B9 & MASK64
    x ^= x >> 27
    x = x * 0x94D049BB133111EB & MASK64
    x ^= x >> 31
    return x


def case_seed(master_seed: int, case_id: int) -> int:
    """Per-case seed: element case_id of the splitmix64 stream of the master seed."""
    return mix64((master_seed + (case_id + 1) * GOLDEN) & MASK64)


class RandomStream:
    """Deterministic uniform integer stream over splitmix64.

    Unbiased bounded draws via rejection; identical across platforms and
    Python versions, unlike the stdlib Mersenne layer.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & MASK64

    def next_raw(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (MASK64 + 1) - (MASK64 + 1) % bound
        while True:
            v = self.next_raw()
            if v < limit:
                return v % bound

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends included."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.below(hi - lo + 1)


@dataclass(frozen=True)
class Semiprime:
    """A test modulus with its ground-truth prime factors."""

    n: int
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p * self.q != self.n or self.p == self.q:
            raise ValueError("n must be the product of two distinct primes")


@dataclass(frozen=True)
class TrialCase:
    """One fully-specified trial input."""

    case_id: int
    semiprime: Semiprime
    a: int
    base_mode: BaseMode
    seed: int


@dataclass(frozen=True)
class TrialRecord:
    """Everything one trial produced, flat and JSON-ready.

    `status`/`factor` describe the first attempt only; `attempts_used` and
    `resolved` additionally describe what happened once same-n retries
    with fresh bases were allowed. A precondition violation poisons the
    record via `error` instead of being dropped.
    """

    case_id: int
    digits: int
    n: int
    p: int
    q: int
    a: int
    base_mode: str
    seed: int
    strategy: str
    bound: int | None
    status: str
    factor: int | None
    r: int
    r_digits: int
    r_distinct_primes: int
    succeeded_z: int | str | None
    failed_z: tuple[int, ...]
    fallback_tried: bool
    fallback_succeeded: bool
    gcd_count: int
    r_even: bool
    half_power_is_minus_one: bool | None
    attempts_used: int
    resolved: bool
    error: str | None

    def to_json_dict(self) -> dict[str, Any]:
        out = {name: getattr(self, name) for name in _RECORD_FIELDS}
        out["failed_z"] = list(self.failed_z)
        return out

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "TrialRecord":
        values = {name: data[name] for name in _RECORD_FIELDS}
        values["failed_z"] = tuple(values["failed_z"])
        return cls(**values)


_RECORD_FIELDS = tuple(TrialRecord.__dataclass_fields__)


@dataclass(frozen=True)
class CampaignConfig:
    digits: int
    trials: int
    base_mode: BaseMode = "random"
    strategy: StrategyName = "allz"
    bound: int | None = None
    master_seed: int = 0
    workers: int = 1
    retry_limit: int = 0

    def validate(self) -> None:
        for name in ("digits", "trials", "master_seed", "workers", "retry_limit"):
            if not isinstance(getattr(self, name), int):
                raise ValueError(f"{name} must be an integer")
        if self.bound is not None and not isinstance(self.bound, int):
            raise ValueError("bound must be an integer or omitted")
        if not 2 <= self.digits <= 12:
            raise ValueError(f"digits must be in [2, 12], got {self.digits}")
        if self.trials < 0:
            raise ValueError(f"trials must be >= 0, got {self.trials}")
        if self.base_mode not in BASE_MODES:
            raise ValueError(f"unknown base mode {self.base_mode!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.bound is not None and self.bound < 2:
            raise ValueError(f"bound must be >= 2, got {self.bound}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.retry_limit < 0:
            raise ValueError(f"retry limit must be >= 0, got {self.retry_limit}")


def _digit_count(x: int) -> int:
    return len(str(x))


def random_prime(digit_count: int, rng: RandomStream) -> int:
    """A uniformly drawn prime with exactly digit_count decimal digits."""
    if digit_count < 1:
        raise ValueError("digit count must be >= 1")
    lo = 10 ** (digit_count - 1)
    hi = 10**digit_count - 1
    for _ in range(_SAMPLING_CAP):
        v = rng.randint(lo, hi)
        if is_probable_prime(v):
            return v
    raise RuntimeError(f"no {digit_count}-digit prime found within the draw budget")


def sample_semiprime(digits: int, rng: RandomStream) -> Semiprime:
    """A semiprime with exactly `digits` decimal digits.

    Both primes are drawn with ceil(digits / 2) digits and the pair is
    rejected until the factors differ and the product lands in the digit
    class; that balanced split is what the reference failure cases at 7
    and 8 digits exhibit.
    """
    if digits < 2:
        raise ValueError("digits must be >= 2")
    prime_digits = (digits + 1) // 2
    for _ in range(_SAMPLING_CAP):
        p = random_prime(prime_digits, rng)
        q = random_prime(prime_digits, rng)
        if p != q and _digit_count(p * q) == digits:
            return Semiprime(n=p * q, p=p, q=q)
    raise RuntimeError(f"no {digits}-digit semiprime found within the draw budget")


def sample_base(n: int, mode: BaseMode, rng: RandomStream) -> int:
    """A base coprime to n: uniform in [2, n-1], or a uniform square b*b."""
    if n < 6:
        raise ValueError(f"modulus must be >= 6, got {n}")
    if mode == "random":
        while True:
            a = rng.randint(2, n - 1)
            if math.gcd(a, n) == 1:
                return a
    if mode == "perfect_square":
        hi = integer_sqrt(n - 1)
        while True:
            b = rng.randint(2, hi)
            a = b * b
            if math.gcd(a, n) == 1:
                return a
    raise ValueError(f"unknown base mode {mode!r}")


def _run_strategy(
    strategy: StrategyName, n: int, a: int, period: PeriodRecord | None, bound: int | None
) -> FactorOutcome:
    if strategy == "allz":
        return all_z(n, a, period, bound)
    if strategy == "traditional":
        return traditional_shor(n, a, period)
    if strategy == "dong2023":
        return dong2023(n, a, period)
    raise ValueError(f"unknown strategy {strategy!r}")


def run_trial(case: TrialCase, strategy: StrategyName, bound: int | None = None) -> TrialRecord:
    """Run one strategy attempt and fill every diagnostic field.

    Deterministic function of the case. Precondition violations come back
    as a poisoned record carrying the error message.
    """
    sp = case.semiprime
    n, a = sp.n, case.a
    base = dict(
        case_id=case.case_id,
        digits=_digit_count(n),
        n=n,
        p=sp.p,
        q=sp.q,
        a=a,
        base_mode=case.base_mode,
        seed=case.seed,
        strategy=strategy,
        bound=bound,
    )
    try:
        if math.gcd(a, n) > 1:
            period = None
        else:
            hint = factorize(carmichael_exponent(sp.p, sp.q))
            period = multiplicative_order(a, n, exponent_hint=hint)
        outcome = _run_strategy(strategy, n, a, period, bound)
    except ValueError as exc:
        return TrialRecord(
            **base,
            status="failure",
            factor=None,
            r=0,
            r_digits=0,
            r_distinct_primes=0,
            succeeded_z=None,
            failed_z=(),
            fallback_tried=False,
            fallback_succeeded=False,
            gcd_count=0,
            r_even=False,
            half_power_is_minus_one=None,
            attempts_used=1,
            resolved=False,
            error=str(exc),
        )

    if period is not None:
        r = period.order
        r_digits = _digit_count(r)
        r_distinct = len(period.distinct_primes())
        r_even = r % 2 == 0
        half_minus_one = pow(a, r // 2, n) == n - 1 if r_even else None
    else:
        r, r_digits, r_distinct, r_even, half_minus_one = 0, 0, 0, False, None

    succeeded_z: int | str | None = None
    if outcome.witness is not None:
        if outcome.witness.kind == "divisor":
            succeeded_z = outcome.witness.divisor_z
        elif outcome.witness.kind == "fallback":
            succeeded_z = "fallback"
        else:
            succeeded_z = "shortcut"
    failed_z = tuple(
        dict.fromkeys(
            att.divisor_z
            for att in outcome.attempts
            if att.kind == "divisor" and att.outcome != "factor_found"
        )
    )
    fallback_tried = any(att.kind == "fallback" for att in outcome.attempts)
    success = outcome.status == "success"
    return TrialRecord(
        **base,
        status=outcome.status,
        factor=outcome.factor,
        r=r,
        r_digits=r_digits,
        r_distinct_primes=r_distinct,
        succeeded_z=succeeded_z,
        failed_z=failed_z,
        fallback_tried=fallback_tried,
        fallback_succeeded=succeeded_z == "fallback",
        gcd_count=outcome.gcd_count,
        r_even=r_even,
        half_power_is_minus_one=half_minus_one,
        attempts_used=1,
        resolved=success,
        error=None,
    )


def failure_reason(record: TrialRecord) -> str | None:
    """Bucket a failed record; None for successes.

    The bucket is the last failure mode the strategy hit: a trivial
    fallback beats trivial divisors beats the even/odd period conditions.
    """
    if record.status != "failure":
        return None
    if record.error is not None:
        return "precondition_error"
    if record.fallback_tried:
        return "fallback_trivial"
    if record.failed_z:
        return "all_divisors_trivial"
    if record.strategy == "allz":
        return "all_divisors_trivial"
    if not record.r_even:
        return "odd_period_unusable"
    return "half_power_minus_one"


def _credited_bound_classes(succeeded_z: int | str | None) -> tuple[str, ...]:
    """Bound digit classes a success counts under (the curve's x axis)."""
    if succeeded_z is None:
        return ()
    if isinstance(succeeded_z, str):
        return BOUND_CLASSES
    z_digits = _digit_count(succeeded_z)
    finite = tuple(c for c in BOUND_CLASSES[:-1] if int(c) >= z_digits)
    return finite + ("inf",)


@dataclass
class CampaignStats:
    """Mergeable aggregate over trial records; every field is a sum or count."""

    trials: int = 0
    successes: int = 0
    failures: int = 0
    failures_by_reason: dict[str, int] = field(default_factory=dict)
    gcd_count_histogram: dict[int, int] = field(default_factory=dict)
    attempts_per_success_histogram: dict[int, int] = field(default_factory=dict)
    r_count: int = 0
    r_digits_sum: int = 0
    r_distinct_primes_sum: int = 0
    even_r_count: int = 0
    half_power_minus_one_count: int = 0
    cumulative_success_by_bound: dict[str, int] = field(default_factory=dict)
    fallback_success_count: int = 0

    @classmethod
    def empty(cls) -> "CampaignStats":
        return cls()

    @property
    def success_rate(self) -> Fraction:
        if self.trials == 0:
            return Fraction(0)
        return Fraction(self.successes, self.trials)

    @property
    def mean_gcd_count(self) -> Fraction:
        if self.trials == 0:
            return Fraction(0)
        total = sum(k * v for k, v in self.gcd_count_histogram.items())
        return Fraction(total, self.trials)

    @property
    def mean_r_digits(self) -> Fraction:
        if self.r_count == 0:
            return Fraction(0)
        return Fraction(self.r_digits_sum, self.r_count)

    @property
    def mean_r_distinct_primes(self) -> Fraction:
        if self.r_count == 0:
            return Fraction(0)
        return Fraction(self.r_distinct_primes_sum, self.r_count)

    def absorb(self, record: TrialRecord) -> None:
        """Fold one record in; shared by streaming and recomputation paths."""
        self.trials += 1
        if record.status == "success":
            self.successes += 1
        else:
            self.failures += 1
            reason = failure_reason(record)
            assert reason is not None
            self.failures_by_reason[reason] = self.failures_by_reason.get(reason, 0) + 1
        hist = self.gcd_count_histogram
        hist[record.gcd_count] = hist.get(record.gcd_count, 0) + 1
        if record.resolved:
            aps = self.attempts_per_success_histogram
            aps[record.attempts_used] = aps.get(record.attempts_used, 0) + 1
        if record.error is None and record.r > 0:
            self.r_count += 1
            self.r_digits_sum += record.r_digits
            self.r_distinct_primes_sum += record.r_distinct_primes
            if record.r_even:
                self.even_r_count += 1
            if record.half_power_is_minus_one:
                self.half_power_minus_one_count += 1
        if record.status == "success":
            curve = self.cumulative_success_by_bound
            for cls_name in _credited_bound_classes(record.succeeded_z):
                curve[cls_name] = curve.get(cls_name, 0) + 1
            if record.fallback_succeeded:
                self.fallback_success_count += 1


def _merge_counts(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return out


def merge_stats(s1: CampaignStats, s2: CampaignStats) -> CampaignStats:
    """Field-wise sum; associative and commutative with empty() as identity."""
    return CampaignStats(
        trials=s1.trials + s2.trials,
        successes=s1.successes + s2.successes,
        failures=s1.failures + s2.failures,
        failures_by_reason=_merge_counts(s1.failures_by_reason, s2.failures_by_reason),
        gcd_count_histogram=_merge_counts(s1.gcd_count_histogram, s2.gcd_count_histogram),
        attempts_per_success_histogram=_merge_counts(
            s1.attempts_per_success_histogram, s2.attempts_per_success_histogram
        ),
        r_count=s1.r_count + s2.r_count,
        r_digits_sum=s1.r_digits_sum + s2.r_digits_sum,
        r_distinct_primes_sum=s1.r_distinct_primes_sum + s2.r_distinct_primes_sum,
        even_r_count=s1.even_r_count + s2.even_r_count,
        half_power_minus_one_count=s1.half_power_minus_one_count + s2.half_power_minus_one_count,
        cumulative_success_by_bound=_merge_counts(
            s1.cumulative_success_by_bound, s2.cumulative_success_by_bound
        ),
        fallback_success_count=s1.fallback_success_count + s2.fallback_success_count,
    )


def compute_metrics(records: Iterable[TrialRecord]) -> CampaignStats:
    """Recompute aggregate stats from raw records."""
    stats = CampaignStats.empty()
    for record in records:
        stats.absorb(record)
    return stats


def _build_case(config: CampaignConfig, case_id: int) -> TrialCase:
    seed = case_seed(config.master_seed, case_id)
    rng = RandomStream(seed)
    sp = sample_semiprime(config.digits, rng)
    a = sample_base(sp.n, config.base_mode, rng)
    return TrialCase(case_id=case_id, semiprime=sp, a=a, base_mode=config.base_mode, seed=seed)


def _execute_case(config: CampaignConfig, case_id: int) -> TrialRecord:
    case = _build_case(config, case_id)
    record = run_trial(case, config.strategy, config.bound)
    if record.status == "success" or record.error is not None or config.retry_limit == 0:
        return record
    # Retries draw fresh bases for the same modulus from a sub-stream of
    # the case seed, so they never perturb the primary sampling sequence.
    retry_rng = RandomStream(mix64(case.seed ^ _RETRY_SALT))
    tried = {case.a}
    attempts_used = 1
    resolved = False
    for _ in range(config.retry_limit):
        a_next = None
        for _ in range(64):
            candidate = sample_base(case.semiprime.n, config.base_mode, retry_rng)
            if candidate not in tried:
                a_next = candidate
                break
        if a_next is None:
            break  # tiny modulus: no unused base left to try
        tried.add(a_next)
        attempts_used += 1
        retry_case = replace(case, a=a_next)
        retry_record = run_trial(retry_case, config.strategy, config.bound)
        if retry_record.status == "success":
            resolved = True
            break
    return replace(record, attempts_used=attempts_used, resolved=resolved)


def _run_block(args: tuple[CampaignConfig, int, int]) -> list[TrialRecord]:
    config, lo, hi = args
    return [_execute_case(config, cid) for cid in range(lo, hi)]


@dataclass(frozen=True)
class CampaignResult:
    """Records in case_id order plus their aggregate statistics."""

    records: list[TrialRecord]
    stats: CampaignStats


_BLOCK_SIZE = 256


def run_campaign(config: CampaignConfig) -> CampaignResult:
    """Run `config.trials` independent seeded trials, in parallel if asked.

    Records come back in case_id order no matter how workers schedule the
    blocks, and rerunning the same config reproduces them exactly.
    """
    config.validate()
    if config.workers == 1 or config.trials <= _BLOCK_SIZE:
        records = [_execute_case(config, cid) for cid in range(config.trials)]
    else:
        blocks = [
            (config, lo, min(lo + _BLOCK_SIZE, config.trials))
            for lo in range(0, config.trials, _BLOCK_SIZE)
        ]
        with multiprocessing.Pool(processes=config.workers) as pool:
            chunks = pool.map(_run_block, blocks)
        records = [record for chunk in chunks for record in chunk]
    stats = compute_metrics(records)
    return CampaignResult(records=records, stats=stats)


def cochran_sample_size(p_expected, margin, z_alpha) -> int:
    """ceil(z**2 * p * (1 - p) / margin**2), evaluated exactly.

    Arguments are interpreted at decimal face value (1.96 means exactly
    196/100), so results never depend on binary float rounding.
    """
    p = _as_fraction(p_expected)
    e = _as_fraction(margin)
    z = _as_fraction(z_alpha)
    if not 0 <= p <= 1:
        raise ValueError(f"expected proportion must be in [0, 1], got {p_expected}")
    if e <= 0:
        raise ValueError(f"margin must be positive, got {margin}")
    if z <= 0:
        raise ValueError(f"z value must be positive, got {z_alpha}")
    return math.ceil(z * z * p * (1 - p) / (e * e))


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)
