"""Moment estimation, exact moment oracles, and distributional tests.

The analytic oracles are computed in exact rational arithmetic
(``fractions.Fraction``) from the base marginal's moments
E U**k = 3**(k/2) / (k+1), so the Monte Carlo harness always checks
against independently derived numbers rather than against itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import stats as sps

from .config import DEFAULT_CONFIG, SQRT3, ConfigError, ProcessConfig

__all__ = [
    "MomentEstimate",
    "MomentAccumulator",
    "estimate_moment",
    "gaussian_moment",
    "iid_uniform_sum_moment",
    "mu1_sum_moment",
    "two_block_sum_moment",
    "ks_statistic",
    "sign_pattern_chisq",
    "abs_pair_chisq",
    "GapReport",
    "clt_gap_check",
]

_SUPPORTED_POWERS = (2, 4, 6, 8)

# Frozen pilot estimate of E(S_12/sqrt(12))^6 for the stationary process.
# No closed form exists: the value mixes window alignments over the
# random offsets.  Pinned by a dedicated 2e7-replicate run (seed 101,
# window [1, 12]); used as a regression target by the clt suite.
# The matching iid value is 13.547619..., a 13.5-sigma gap at pilot scale.
_PILOT_VALUE = 13.334239997076224
_PILOT_SE = 0.015766970288735624
_PILOT_COUNT = 20_000_000


# ---------------------------------------------------------------------------
# moment estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentEstimate:
    """Point estimate of a raw moment with its standard error."""

    value: float
    std_error: float
    count: int

    def z_against(self, reference: float) -> float:
        """Signed distance from a reference value in standard errors."""
        if self.std_error == 0.0:
            return math.inf if self.value != reference else 0.0
        return (self.value - reference) / self.std_error


STATIONARY_PILOT = MomentEstimate(_PILOT_VALUE, _PILOT_SE, _PILOT_COUNT)


class MomentAccumulator:
    """Mergeable accumulator for E[x**power].

    Keeps the running count and the first two power sums of x**power, so
    merging is exact (count-additive, commutative, associative up to
    float reassociation) and the standard error is the plug-in sample
    standard deviation of the transformed observations over sqrt(n).
    """

    __slots__ = ("power", "n", "s1", "s2")

    def __init__(self, power: int):
        if power < 1:
            raise ConfigError(f"power must be >= 1, got {power}")
        self.power = int(power)
        self.n = 0
        self.s1 = 0.0
        self.s2 = 0.0

    def add(self, samples) -> "MomentAccumulator":
        x = np.asarray(samples, dtype=np.float64).reshape(-1)
        w = x if self.power == 1 else x**self.power
        self.n += x.size
        self.s1 += float(w.sum())
        self.s2 += float((w * w).sum())
        return self

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        if other.power != self.power:
            raise ConfigError(f"cannot merge power {other.power} into {self.power}")
        self.n += other.n
        self.s1 += other.s1
        self.s2 += other.s2
        return self

    def estimate(self) -> MomentEstimate:
        if self.n < 2:
            raise ConfigError("need at least 2 samples for a standard error")
        mean = self.s1 / self.n
        var = max(self.s2 / self.n - mean * mean, 0.0) * self.n / (self.n - 1)
        return MomentEstimate(mean, math.sqrt(var / self.n), self.n)


def estimate_moment(samples, power: int) -> MomentEstimate:
    """Sample mean of x**power with the standard error of that mean."""
    return MomentAccumulator(power).add(samples).estimate()


# ---------------------------------------------------------------------------
# exact oracles
# ---------------------------------------------------------------------------


def gaussian_moment(M: int) -> float:
    """E Z**M for standard normal Z: (M-1)!! for even M, 0 for odd."""
    if M < 0:
        raise ConfigError(f"moment order must be >= 0, got {M}")
    if M % 2 == 1:
        return 0.0
    out = 1
    for k in range(M - 1, 0, -2):
        out *= k
    return float(out)


def _base_abs_moment(k: int) -> Fraction:
    # E|U|**k = 3**(k/2)/(k+1); only products with even total order are
    # ever formed, so the half powers of 3 always pair up.  Callers pass
    # the 3**(total/2) factor separately; this returns 1/(k+1).
    return Fraction(1, k + 1)


def _even_partitions(M: int):
    """Partitions of M into even parts >= 2, descending."""

    def rec(rem, maxp):
        if rem == 0:
            yield ()
            return
        p = min(rem, maxp)
        while p >= 2:
            for tail in rec(rem - p, p):
                yield (p,) + tail
            p -= 2
        return

    yield from rec(M, M)


def _odd_partitions_exact(M: int, parts: int):
    """Partitions of M into exactly `parts` odd parts >= 1, descending."""

    def rec(rem, k, maxp):
        if k == 0:
            if rem == 0:
                yield ()
            return
        if rem < k:
            return
        p = min(maxp, rem - (k - 1))
        if p % 2 == 0:
            p -= 1
        while p >= 1:
            for tail in rec(rem - p, k - 1, p):
                yield (p,) + tail
            p -= 2

    yield from rec(M, parts, M)


def _assignment_count(M: int, parts: tuple[int, ...], p: int) -> int:
    """Number of ways a partition of exponents lands on p variables.

    multinomial(M; parts) arrangements of the factors, times the falling
    factorial p(p-1)...(p-r+1) choices of which variable takes which
    part, divided by the multiplicity factorials (equal parts are
    interchangeable).
    """
    count = math.factorial(M)
    for part in parts:
        count //= math.factorial(part)
    ff = 1
    for i in range(len(parts)):
        ff *= p - i
    mults: dict[int, int] = {}
    for part in parts:
        mults[part] = mults.get(part, 0) + 1
    denom = math.prod(math.factorial(v) for v in mults.values())
    return count * ff // denom


def _check_power(M: int) -> int:
    M = int(M)
    if M not in _SUPPORTED_POWERS:
        raise ConfigError(f"moment order {M} unsupported; choose from {_SUPPORTED_POWERS}")
    return M


def _iid_sum_moment_fraction(p: int, M: int) -> Fraction:
    total = Fraction(0)
    for parts in _even_partitions(M):
        if len(parts) > p:
            continue
        term = Fraction(_assignment_count(M, parts, p))
        for part in parts:
            term *= Fraction(3 ** (part // 2)) * _base_abs_moment(part)
        total += term
    return total


def iid_uniform_sum_moment(p: int, M: int) -> float:
    """Exact E(U_1 + ... + U_p)**M for iid uniforms on [-sqrt3, sqrt3].

    Even M up to 8; odd moments vanish by symmetry.
    """
    if p < 1:
        raise ConfigError(f"need p >= 1 summands, got {p}")
    return float(_iid_sum_moment_fraction(p, _check_power(M)))


def _block_parity_correction(M: int, L: int) -> Fraction:
    """The all-odd-exponent term of the level-1 block sum moment.

    A level-1 block is (V_0|U_0|, ..., V_{L-1}|U_{L-1}|) with the signs
    drawn from the parity-constrained law: a mixed moment carries a sign
    factor of -1 exactly when every exponent is odd (else 0 or +1), so
    the block moment is the iid value minus twice... no - minus this
    correction, which collects multinomial(M; a) * prod E|U|**a_i over
    exponent vectors with all L entries odd.
    """
    total = Fraction(0)
    for parts in _odd_partitions_exact(M, L):
        term = Fraction(_assignment_count(M, parts, L))
        scale = Fraction(3 ** (M // 2))
        for part in parts:
            term *= _base_abs_moment(part)
        total += term * scale
    return total


def mu1_sum_moment(M: int, L: int = DEFAULT_CONFIG.L) -> float:
    """Exact E(sum of one level-1 block)**M.

    Equals the iid value for even M < L (any L-1 coordinates are iid
    uniforms) and sits strictly below it from M = L on, where the sign
    parity of the block shows up: for M = L the deficit is exactly
    L! * (sqrt(3)/2)**L.
    """
    M = _check_power(M)
    base = _iid_sum_moment_fraction(L, M)
    return float(base - _block_parity_correction(M, L))


def two_block_sum_moment(M: int, L: int = DEFAULT_CONFIG.L) -> float:
    """Exact E(B1 + B2)**M for independent level-1 block sums B1, B2."""
    M = int(M)
    if M not in (2, 4, 6):
        raise ConfigError(f"moment order {M} unsupported; choose from (2, 4, 6)")

    def block_moment(k: int) -> Fraction:
        if k == 0:
            return Fraction(1)
        if k % 2 == 1:
            return Fraction(0)
        return _iid_sum_moment_fraction(L, k) - _block_parity_correction(k, L)

    total = Fraction(0)
    for k in range(0, M + 1, 2):
        total += math.comb(M, k) * block_moment(k) * block_moment(M - k)
    return float(total)


# ---------------------------------------------------------------------------
# distributional tests
# ---------------------------------------------------------------------------


def _cdf_uniform_unps3(x: np.ndarray) -> np.ndarray:
    return np.clip((x + SQRT3) / (2.0 * SQRT3), 0.0, 1.0)


_REFERENCE_CDFS = {"uniform_unps3": _cdf_uniform_unps3}


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float


def ks_statistic(samples, cdf: str = "uniform_unps3") -> TestResult:
    """One-sample Kolmogorov-Smirnov test with asymptotic p-value."""
    try:
        ref = _REFERENCE_CDFS[cdf]
    except KeyError:
        raise ConfigError(
            f"unknown reference cdf {cdf!r}; known: {sorted(_REFERENCE_CDFS)}"
        ) from None
    x = np.asarray(samples, dtype=np.float64).reshape(-1)
    if x.size < 100:
        raise ConfigError(f"KS test needs >= 100 samples, got {x.size}")
    res = sps.kstest(x, ref, method="asymp")
    return TestResult(float(res.statistic), float(res.pvalue))


def sign_pattern_chisq(values: np.ndarray, tuple_idx, L: int = DEFAULT_CONFIG.L) -> TestResult:
    """Chi-square uniformity test over the 2**t sign patterns of t columns.

    values: (replicates, window) array; tuple_idx: distinct column
    indexes, at most L-1 of them.
    """
    values = np.asarray(values, dtype=np.float64)
    idx = [int(i) for i in tuple_idx]
    if len(set(idx)) != len(idx):
        raise ConfigError(f"tuple indexes must be distinct, got {idx}")
    if len(idx) > L - 1:
        raise ConfigError(f"tuple of size {len(idx)} exceeds L-1 = {L - 1}")
    if any(i < 0 or i >= values.shape[1] for i in idx):
        raise ConfigError(f"tuple {idx} outside window of width {values.shape[1]}")
    bits = (values[:, idx] > 0.0).astype(np.int64)
    codes = bits @ (1 << np.arange(len(idx), dtype=np.int64))
    counts = np.bincount(codes, minlength=2 ** len(idx))
    res = sps.chisquare(counts)
    return TestResult(float(res.statistic), float(res.pvalue))


def abs_pair_chisq(x, y, bins: int = 4) -> TestResult:
    """Independence check for a pair of magnitude columns.

    Magnitudes of the process are uniform on [0, sqrt3], so the joint
    counts over a bins x bins grid of equiprobable cells are compared to
    the flat expectation (goodness of fit with known marginals).
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    edges = SQRT3 * np.arange(1, bins) / bins
    cx = np.digitize(np.abs(x), edges)
    cy = np.digitize(np.abs(y), edges)
    counts = np.bincount(cx * bins + cy, minlength=bins * bins)
    res = sps.chisquare(counts)
    return TestResult(float(res.statistic), float(res.pvalue))


# ---------------------------------------------------------------------------
# partial-sum moment reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GapReport:
    """Verdict on the high-moment deficit of normalized partial sums.

    estimate: the L-th moment of S_n/sqrt(n); reference: the matching
    iid-uniform value; bound: the universal deficit constant
    2**(-3L/2) * L! * L**-L, recorded for context - it is orders of
    magnitude below Monte Carlo resolution at desk scale, so the verdict
    comes from the one-sided significance test against the reference,
    not from resolving the constant.
    """

    estimate: MomentEstimate
    reference: float
    bound: float
    z_score: float
    significance: float
    passed: bool
    side_checks: dict = field(default_factory=dict)


def universal_gap_bound(L: int = DEFAULT_CONFIG.L) -> float:
    return 2.0 ** (-1.5 * L) * math.factorial(L) * float(L) ** (-L)


def clt_gap_check(
    seeds: int,
    n: int,
    significance: float = 0.001,
    seed: int = 0,
    cfg: ProcessConfig = DEFAULT_CONFIG,
    chunk: int = 1 << 16,
    threads: int = 1,
) -> GapReport:
    """Estimate moments of S_n/sqrt(n) over stationary window replicates.

    Checks mean 0, variance 1 and fourth moment <= 3 within 4 standard
    errors, then runs the one-sided z-test that the L-th moment sits
    below the iid-uniform reference at the given significance.
    """
    from .stationary import sample_window_batch  # local import to avoid cycle

    L = cfg.L
    if n < 2 * L:
        raise ConfigError(f"window length n={n} must be >= 2L = {2 * L}")
    if seeds < 1000:
        raise ConfigError(f"need >= 1000 replicates for the z-test, got {seeds}")
    powers = (1, 2, 4, L)
    accs = {p: MomentAccumulator(p) for p in powers}

    def run_chunk(start: int, count: int):
        x = sample_window_batch(1, n, seed, count, rep_start=start, cfg=cfg)
        s = x.sum(axis=1) / math.sqrt(n)
        return {p: MomentAccumulator(p).add(s) for p in powers}

    for part in _parallel_chunks(seeds, chunk, run_chunk, threads):
        for p in powers:
            accs[p].merge(part[p])

    est = {p: accs[p].estimate() for p in powers}
    reference = iid_uniform_sum_moment(n, L) / float(n) ** (L / 2.0)
    z = (reference - est[L].value) / est[L].std_error
    z_alpha = float(sps.norm.isf(significance))
    side = {
        "mean": est[1],
        "second_moment": est[2],
        "fourth_moment": est[4],
        "mean_ok": abs(est[1].z_against(0.0)) <= 4.0,
        "second_ok": abs(est[2].z_against(1.0)) <= 4.0,
        "fourth_ok": est[4].value <= 3.0 + 4.0 * est[4].std_error,
        "z_required": z_alpha,
    }
    passed = bool(
        side["mean_ok"] and side["second_ok"] and side["fourth_ok"] and z >= z_alpha
    )
    return GapReport(
        estimate=est[L],
        reference=reference,
        bound=universal_gap_bound(L),
        z_score=float(z),
        significance=significance,
        passed=passed,
        side_checks=side,
    )


def _parallel_chunks(total: int, chunk: int, fn, threads: int):
    """Run fn(start, count) over chunk ranges; yields results in order."""
    ranges = [(s, min(chunk, total - s)) for s in range(0, total, chunk)]
    if threads <= 1:
        for s, c in ranges:
            yield fn(s, c)
        return
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, s, c) for s, c in ranges]
        for fut in futures:
            yield fut.result()
