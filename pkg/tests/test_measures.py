"""Measure samplers against exact moment oracles and invariance checks.

Expected values here are either closed-form (frozen from the exact
rational oracles in cltlab.stats) or checked as two-route agreement;
Monte Carlo assertions use pinned standard-error multiples.
"""

import numpy as np
import pytest

from cltlab.config import SQRT3, ConfigError, ProcessConfig
from cltlab.measures import sample_base, sample_block_sequence, sample_mu, sample_mu_via_flip
from cltlab.rng import RandomSource
from cltlab.stats import estimate_moment, iid_uniform_sum_moment, ks_statistic, mu1_sum_moment

N = 200_000


@pytest.fixture(scope="module")
def rng():
    return RandomSource(90210, "test-measures")


@pytest.fixture(scope="module")
def mu1(rng):
    return sample_mu(1, rng, size=N)


class TestBase:
    def test_range_and_moments(self, rng):
        x = sample_base(rng, size=N)
        assert np.abs(x).max() <= SQRT3
        assert abs(estimate_moment(x, 1).z_against(0.0)) <= 4
        assert abs(estimate_moment(x, 2).z_against(1.0)) <= 4
        assert abs(estimate_moment(x, 6).z_against(27.0 / 7.0)) <= 4
        assert ks_statistic(x[:100000]).p_value >= 0.001

    def test_scalar_draw(self):
        r = RandomSource(1, "scalar")
        a = sample_base(r)
        b = sample_base(r)
        assert isinstance(a, float) and -SQRT3 <= a <= SQRT3
        assert a != b


class TestMuLevels:
    def test_level0_is_base(self):
        r1 = RandomSource(7, "same")
        r2 = RandomSource(7, "same")
        y = sample_mu(0, r1, size=50)
        assert y.shape == (50, 1)
        assert np.abs(y).max() <= SQRT3
        again = sample_mu(0, r2, size=50)
        assert np.array_equal(y, again)

    def test_widths(self, rng):
        assert sample_mu(1, rng).shape == (6,)
        assert sample_mu(2, rng, size=3).shape == (3, 36)

    def test_depth_cap(self, rng):
        with pytest.raises(ConfigError):
            sample_mu(9, rng)

    def test_level1_matches_hand_construction(self):
        # level-1 coordinates are V_l * |U_l|: magnitudes match the raw
        # uniforms, and the parity of negative signs is odd.
        r = RandomSource(33, "hand")
        y = sample_mu(1, r, size=2000)
        assert np.all(np.abs(y) <= SQRT3)
        neg_parity = (y < 0).sum(axis=1) % 2
        zero_rows = (y == 0).any(axis=1)
        assert np.all(neg_parity[~zero_rows] == 1)

    def test_marginals_uniform(self, mu1):
        for k in range(6):
            assert ks_statistic(mu1[:100000, k]).p_value >= 0.001

    def test_sum_moments_match_oracles(self, mu1):
        s = mu1.sum(axis=1)
        assert abs(estimate_moment(s, 2).z_against(mu1_sum_moment(2))) <= 4
        assert abs(estimate_moment(s, 4).z_against(mu1_sum_moment(4))) <= 4
        assert abs(estimate_moment(s, 6).z_against(mu1_sum_moment(6))) <= 4

    def test_full_product_negative(self, mu1):
        est = estimate_moment(mu1.prod(axis=1), 1)
        assert abs(est.z_against(-((SQRT3 / 2) ** 6))) <= 4
        assert est.value + 3.1 * est.std_error < 0

    def test_sign_symmetry(self, mu1):
        w = np.linspace(0.5, 1.5, 6)
        lin = mu1 @ w
        assert abs(estimate_moment(lin, 1).z_against(0.0)) <= 4
        assert abs(estimate_moment(lin, 3).z_against(0.0)) <= 4

    def test_abs_values_independent(self, mu1):
        a = np.abs(mu1)
        cors = np.corrcoef(a, rowvar=False)
        off = cors[np.triu_indices(6, 1)]
        assert np.abs(off).max() <= 4 / np.sqrt(mu1.shape[0])

    def test_tuplewise_product_moments(self, mu1):
        gen = np.random.default_rng(6)
        for _ in range(8):
            t = gen.choice(6, size=5, replace=False)
            prod = np.prod(mu1[:, t], axis=1)
            assert abs(estimate_moment(prod, 1).z_against(0.0)) <= 4

    def test_level2_sum_variance(self, rng):
        y = sample_mu(2, rng, size=20000)
        s = y.sum(axis=1)
        # coordinates are unit-variance and pairwise independent
        assert abs(estimate_moment(s, 2).z_against(36.0)) <= 4
        # orders below L keep the iid value
        assert abs(estimate_moment(s, 4).z_against(iid_uniform_sum_moment(36, 4))) <= 4

    def test_level2_marginals_uniform(self, rng):
        y = sample_mu(2, rng, size=30000)
        for k in (0, 7, 35):
            assert ks_statistic(y[:, k]).p_value >= 0.001


class TestFlipRoute:
    @pytest.mark.parametrize("j", [0, 1])
    def test_moments_match_direct(self, mu1, j):
        r = RandomSource(4242 + j, "flip")
        t = sample_mu_via_flip(1, j, r, size=N)
        s_direct = mu1.sum(axis=1)
        s_flip = t.sum(axis=1)
        for p in (1, 2, 3, 4, 5, 6):
            a = estimate_moment(s_flip, p)
            b = estimate_moment(s_direct, p)
            z = abs(a.value - b.value) / np.hypot(a.std_error, b.std_error)
            assert z <= 4, (p, j, z)
            if p % 2 == 1:  # both routes are sign-symmetric
                assert abs(a.z_against(0.0)) <= 4

    def test_values_in_range(self):
        r = RandomSource(5, "flip")
        t = sample_mu_via_flip(1, 0, r, size=5000)
        assert np.abs(t).max() <= SQRT3

    def test_sixth_moment_matches_oracle(self):
        r = RandomSource(6, "flip")
        t = sample_mu_via_flip(1, 0, r, size=N)
        est = estimate_moment(t.sum(axis=1), 6)
        assert abs(est.z_against(mu1_sum_moment(6))) <= 4

    def test_bad_j_rejected(self, rng):
        with pytest.raises(ConfigError):
            sample_mu_via_flip(1, 6, rng)
        with pytest.raises(ConfigError):
            sample_mu_via_flip(0, 0, rng)


class TestBlockSequence:
    def test_blocks_independent(self):
        r = RandomSource(88, "blocks")
        b = sample_block_sequence(1, 3, r, size=100000)
        assert b.shape == (100000, 18)
        sums = b.reshape(-1, 3, 6).sum(axis=2)
        c01 = np.corrcoef(sums[:, 0], sums[:, 1])[0, 1]
        c12 = np.corrcoef(sums[:, 1], sums[:, 2])[0, 1]
        assert max(abs(c01), abs(c12)) <= 4 / np.sqrt(sums.shape[0])

    def test_level0_blocks_are_iid_uniforms(self):
        r = RandomSource(89, "blocks")
        b = sample_block_sequence(0, 12, r, size=50000)
        assert b.shape == (50000, 12)
        s = b.sum(axis=1)
        assert abs(estimate_moment(s, 2).z_against(12.0)) <= 4
        assert abs(estimate_moment(s, 6).z_against(iid_uniform_sum_moment(12, 6))) <= 4

    def test_reproducible(self):
        a = sample_block_sequence(1, 2, RandomSource(3, "b"), size=10)
        b = sample_block_sequence(1, 2, RandomSource(3, "b"), size=10)
        assert np.array_equal(a, b)


def test_custom_block_factor():
    cfg = ProcessConfig(L=8, max_depth=4)
    r = RandomSource(17, "L8")
    y = sample_mu(1, r, size=50000, cfg=cfg)
    assert y.shape == (50000, 8)
    s = y.sum(axis=1)
    assert abs(estimate_moment(s, 2).z_against(8.0)) <= 4
    # below order L the iid moments survive
    assert abs(estimate_moment(s, 6).z_against(iid_uniform_sum_moment(8, 6))) <= 4
    prod = y.prod(axis=1)
    est = estimate_moment(prod, 1)
    assert abs(est.z_against(-((SQRT3 / 2) ** 8))) <= 4
