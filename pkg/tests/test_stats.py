"""Moment oracles (two independent derivation routes plus Monte Carlo),
accumulator algebra, and calibration of the hypothesis tests.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from cltlab.config import ConfigError
from cltlab.stats import (
    MomentAccumulator,
    MomentEstimate,
    estimate_moment,
    gaussian_moment,
    iid_uniform_sum_moment,
    ks_statistic,
    mu1_sum_moment,
    sign_pattern_chisq,
    abs_pair_chisq,
    two_block_sum_moment,
    universal_gap_bound,
)


# -- independent oracle route ------------------------------------------------


def iid_sum_moment_by_compositions(p: int, M: int) -> Fraction:
    """Brute-force multinomial expansion over exponent compositions.

    Completely independent of the partition-counting route used by the
    library: enumerates every composition of M into p nonnegative even
    exponents and sums multinomial(M; a) * prod 3**(a_i/2)/(a_i+1).
    """
    total = Fraction(0)

    def rec(slots, rem, denom, prod):
        nonlocal total
        if slots == 0:
            if rem == 0:
                total += Fraction(math.factorial(M), denom) * prod
            return
        for a in range(0, rem + 1, 2):
            rec(slots - 1, rem - a, denom * math.factorial(a), prod * Fraction(3 ** (a // 2), a + 1))

    rec(p, M, 1, Fraction(1))
    return total


def mu1_sum_moment_by_enumeration(M: int, L: int = 6) -> Fraction:
    """Composition route for the level-1 block moment.

    E(sum V_l |U_l|)**M = sum over exponent vectors of
    multinomial * chi(odd set) * prod E|U|**a_l, where chi is +1 when no
    exponent is odd, -1 when all L are odd, 0 otherwise.
    """
    total = Fraction(0)

    def rec(slots, rem, denom, prod, n_odd):
        nonlocal total
        if slots == 0:
            if rem == 0:
                if n_odd == 0:
                    chi = 1
                elif n_odd == L:
                    chi = -1
                else:
                    chi = 0
                if chi:
                    total += chi * Fraction(math.factorial(M), denom) * prod
            return
        for a in range(0, rem + 1):
            rec(
                slots - 1,
                rem - a,
                denom * math.factorial(a),
                prod * Fraction(1, a + 1),
                n_odd + (a % 2),
            )

    rec(L, M, 1, Fraction(1), 0)
    return total * Fraction(3 ** (M // 2))


class TestOracles:
    def test_gaussian_moments(self):
        assert [gaussian_moment(m) for m in range(1, 9)] == [0, 1, 0, 3, 0, 15, 0, 105]

    def test_gaussian_dominates_base(self):
        # E Z^M >= E U^M >= 0 with equality at M = 2
        for M in (2, 4, 6, 8):
            base = iid_uniform_sum_moment(1, M)
            assert gaussian_moment(M) >= base >= 0
        assert iid_uniform_sum_moment(1, 2) == gaussian_moment(2) == 1.0

    def test_iid_known_values(self):
        assert iid_uniform_sum_moment(1, 2) == 1.0
        assert iid_uniform_sum_moment(1, 4) == pytest.approx(9 / 5, abs=0)
        assert iid_uniform_sum_moment(6, 2) == 6.0
        assert iid_uniform_sum_moment(6, 4) == pytest.approx(100.8, rel=1e-15)
        assert iid_uniform_sum_moment(6, 6) == pytest.approx(18432 / 7, rel=1e-15)
        assert iid_uniform_sum_moment(12, 6) == pytest.approx(163872 / 7, rel=1e-15)

    @pytest.mark.parametrize("p,M", [(1, 2), (2, 4), (3, 6), (6, 6), (4, 8), (6, 8), (12, 6), (9, 4)])
    def test_iid_matches_composition_route(self, p, M):
        assert iid_uniform_sum_moment(p, M) == pytest.approx(
            float(iid_sum_moment_by_compositions(p, M)), rel=1e-14
        )

    def test_iid_matches_monte_carlo(self):
        gen = np.random.default_rng(19)
        u = gen.uniform(-math.sqrt(3), math.sqrt(3), size=(400000, 6))
        s = u.sum(axis=1)
        for M in (2, 4, 6):
            est = estimate_moment(s, M)
            assert abs(est.z_against(iid_uniform_sum_moment(6, M))) <= 4

    def test_mu1_known_values(self):
        assert mu1_sum_moment(2) == 6.0
        assert mu1_sum_moment(4) == pytest.approx(100.8, rel=1e-15)
        assert mu1_sum_moment(6) == pytest.approx(18432 / 7 - 303.75, rel=1e-14)
        assert mu1_sum_moment(6) == pytest.approx(65223 / 28, rel=1e-14)

    @pytest.mark.parametrize("M", [2, 4, 6, 8])
    def test_mu1_matches_enumeration_route(self, M):
        assert mu1_sum_moment(M) == pytest.approx(
            float(mu1_sum_moment_by_enumeration(M)), rel=1e-14
        )

    def test_mu1_equals_iid_below_order_L(self):
        for M in (2, 4):
            assert mu1_sum_moment(M) == iid_uniform_sum_moment(6, M)
        for L in (6, 8):
            for M in (2, 4, 6, 8):
                if M < L:
                    assert mu1_sum_moment(M, L) == iid_uniform_sum_moment(L, M)

    def test_mu1_deficit_at_order_L(self):
        # exactly L! * (sqrt3/2)^L at order L, and at least 2^-L * L!
        for L in (6, 8):
            deficit = iid_uniform_sum_moment(L, L) - mu1_sum_moment(L, L)
            assert deficit == pytest.approx(
                math.factorial(L) * (math.sqrt(3) / 2) ** L, rel=1e-12
            )
            assert deficit >= 2.0**-L * math.factorial(L)

    def test_two_block_values(self):
        assert two_block_sum_moment(2) == 12.0
        m2, m4, m6 = mu1_sum_moment(2), mu1_sum_moment(4), mu1_sum_moment(6)
        assert two_block_sum_moment(6) == pytest.approx(2 * m6 + 30 * m4 * m2, rel=1e-14)
        assert two_block_sum_moment(6) / 12**3 == pytest.approx(13.196057, abs=5e-7)
        assert two_block_sum_moment(4) == pytest.approx(
            2 * m4 + 6 * m2 * m2, rel=1e-14
        )

    def test_unsupported_orders_rejected(self):
        for M in (3, 5, 10):
            with pytest.raises(ConfigError):
                iid_uniform_sum_moment(6, M)
            with pytest.raises(ConfigError):
                mu1_sum_moment(M)
        with pytest.raises(ConfigError):
            two_block_sum_moment(8)

    def test_universal_bound_magnitude(self):
        assert universal_gap_bound(6) == pytest.approx(3.014e-5, rel=1e-3)


class TestAccumulator:
    def test_constant_stream(self):
        est = estimate_moment(np.full(10, 3.0), 2)
        assert est.value == 9.0 and est.std_error == 0.0 and est.count == 10

    def test_merge_equals_whole(self):
        gen = np.random.default_rng(2)
        x = gen.normal(size=10001)
        whole = estimate_moment(x, 4)
        acc = MomentAccumulator(4).add(x[:3000])
        acc.merge(MomentAccumulator(4).add(x[3000:8000]))
        acc.merge(MomentAccumulator(4).add(x[8000:]))
        merged = acc.estimate()
        assert merged.count == whole.count
        assert merged.value == pytest.approx(whole.value, rel=1e-10)
        assert merged.std_error == pytest.approx(whole.std_error, rel=1e-10)

    def test_merge_commutes(self):
        gen = np.random.default_rng(3)
        a = MomentAccumulator(2).add(gen.normal(size=100))
        b = MomentAccumulator(2).add(gen.normal(size=200))
        ab = MomentAccumulator(2).merge(a).merge(b).estimate()
        ba = MomentAccumulator(2).merge(b).merge(a).estimate()
        assert ab.value == pytest.approx(ba.value, rel=1e-12)
        assert ab.count == ba.count

    def test_mismatched_powers_rejected(self):
        with pytest.raises(ConfigError):
            MomentAccumulator(2).merge(MomentAccumulator(4))

    def test_too_few_samples_rejected(self):
        with pytest.raises(ConfigError):
            estimate_moment([1.0], 2)

    def test_uniform_fourth_moment(self):
        gen = np.random.default_rng(4)
        u = gen.uniform(-math.sqrt(3), math.sqrt(3), size=10**6)
        est = estimate_moment(u, 4)
        assert abs(est.z_against(9 / 5)) <= 4

    def test_z_against(self):
        est = MomentEstimate(1.5, 0.1, 100)
        assert est.z_against(1.0) == pytest.approx(5.0)


class TestKS:
    def test_null_calibration(self):
        # under the null the rejection rate at alpha matches alpha
        gen = np.random.default_rng(7)
        alpha = 0.01
        reps = 1000
        rejects = 0
        for _ in range(reps):
            u = gen.uniform(-math.sqrt(3), math.sqrt(3), size=1000)
            if ks_statistic(u).p_value < alpha:
                rejects += 1
        se = math.sqrt(alpha * (1 - alpha) * reps)
        assert abs(rejects - alpha * reps) <= 4 * se

    def test_power_against_shift(self):
        gen = np.random.default_rng(8)
        u = gen.uniform(-math.sqrt(3), math.sqrt(3), size=100000) + 0.5
        assert ks_statistic(u).p_value < 0.001

    def test_power_against_normal(self):
        gen = np.random.default_rng(9)
        assert ks_statistic(gen.normal(size=100000)).p_value < 0.001

    def test_unknown_reference_rejected(self):
        with pytest.raises(ConfigError):
            ks_statistic(np.zeros(1000), cdf="nope")

    def test_too_few_samples_rejected(self):
        with pytest.raises(ConfigError):
            ks_statistic(np.zeros(10))


class TestSignPatternChisq:
    def test_null_calibration(self):
        gen = np.random.default_rng(10)
        alpha = 0.01
        reps = 1000
        rejects = 0
        for _ in range(reps):
            v = gen.choice([-1.0, 1.0], size=(2000, 5))
            if sign_pattern_chisq(v, [0, 1, 2, 3]).p_value < alpha:
                rejects += 1
        se = math.sqrt(alpha * (1 - alpha) * reps)
        assert abs(rejects - alpha * reps) <= 4 * se

    def test_power_against_correlated(self):
        gen = np.random.default_rng(11)
        col = gen.choice([-1.0, 1.0], size=(100000, 1))
        v = np.repeat(col, 4, axis=1)
        assert sign_pattern_chisq(v, [0, 1]).p_value < 1e-10

    def test_contract_errors(self):
        v = np.ones((100, 8))
        with pytest.raises(ConfigError):
            sign_pattern_chisq(v, [0, 0])
        with pytest.raises(ConfigError):
            sign_pattern_chisq(v, [0, 1, 2, 3, 4, 5])  # exceeds L-1
        with pytest.raises(ConfigError):
            sign_pattern_chisq(v, [0, 99])


class TestGapCheck:
    def test_report_contract_and_thread_invariance(self):
        from cltlab.stats import clt_gap_check

        a = clt_gap_check(4096, 12, seed=5, chunk=1024, threads=1)
        b = clt_gap_check(4096, 12, seed=5, chunk=1024, threads=2)
        # fixed merge order makes the reduction identical across thread counts
        assert a.estimate.value == b.estimate.value
        assert a.estimate.count == 4096
        assert a.reference == pytest.approx(13.547619047619047)
        assert a.bound == pytest.approx(universal_gap_bound(6))
        assert a.side_checks["mean_ok"] and a.side_checks["second_ok"]

    def test_contract_errors(self):
        from cltlab.stats import clt_gap_check

        with pytest.raises(ConfigError):
            clt_gap_check(4096, 10)  # n < 2L
        with pytest.raises(ConfigError):
            clt_gap_check(10, 12)  # too few replicates


class TestAbsPairChisq:
    def test_null_calibration(self):
        gen = np.random.default_rng(14)
        alpha = 0.01
        reps = 1000
        rejects = 0
        for _ in range(reps):
            x = gen.uniform(-math.sqrt(3), math.sqrt(3), size=2000)
            y = gen.uniform(-math.sqrt(3), math.sqrt(3), size=2000)
            if abs_pair_chisq(x, y).p_value < alpha:
                rejects += 1
        se = math.sqrt(alpha * (1 - alpha) * reps)
        assert abs(rejects - alpha * reps) <= 4 * se

    def test_independent_pair_passes(self):
        gen = np.random.default_rng(12)
        x = gen.uniform(-math.sqrt(3), math.sqrt(3), size=100000)
        y = gen.uniform(-math.sqrt(3), math.sqrt(3), size=100000)
        assert abs_pair_chisq(x, y).p_value >= 0.001

    def test_dependent_pair_rejected(self):
        gen = np.random.default_rng(13)
        x = gen.uniform(-math.sqrt(3), math.sqrt(3), size=100000)
        assert abs_pair_chisq(x, x).p_value < 1e-10
