"""Stationary window sampler: offset process, stabilization, the two
block-construction routes, window consistency, and the law basics.
"""

import numpy as np
import pytest

from cltlab.config import SQRT3, ConfigError, ProcessConfig, StabilizationCapError
from cltlab.rng import RandomSource
from cltlab.stationary import (
    OffsetProcess,
    base_layer_values,
    build_block,
    compute_offset,
    sample_digit,
    sample_window,
    sample_window_batch,
    stabilization_level,
)
from cltlab.stats import estimate_moment, ks_statistic

SEED = 424242


class StubOffsets(OffsetProcess):
    """Offset process with preset digits, for hand-checkable cases."""

    def __init__(self, digits, L=6):
        self._kappa = list(digits)
        self.L = L
        self.replicate = 0
        J = [0]
        for i, k in enumerate(self._kappa):
            J.append(L**i * k + J[-1])
        self._J = J

    def digit(self, u):
        return self._kappa[u - 1]


class StubBase:
    """Base layer with preset values, for hand-checkable cases."""

    def __init__(self, mapping):
        self.mapping = mapping

    def substream(self, name):
        return self

    def uniform_span_grid(self, starts, count, reps, scale=1.0, offset=0.0):
        s = int(np.asarray(starts, dtype=np.int64)[0])
        return np.array([[self.mapping[p] for p in range(s, s + count)]])


class TestOffsets:
    def test_offset_recursion(self):
        p = StubOffsets([0, 2])
        assert p.offset(0) == 0
        assert p.offset(1) == 0
        assert p.offset(2) == 12  # 6*2 + 0
        assert compute_offset(p, 2) == 12

    def test_offset_range_and_monotonicity(self):
        root = RandomSource(SEED)
        for rep in range(50):
            p = OffsetProcess(root, replicate=rep)
            prev = 0
            for n in range(6):
                J = p.offset(n)
                assert 0 <= J <= 6**n - 1
                assert J >= prev
                # nested covering intervals
                assert -J <= -prev <= 0 <= -prev + 6 ** max(n - 1, 0) - 1 <= -J + 6**n - 1
                prev = J

    def test_digit_is_pure_in_seed_and_index(self):
        root = RandomSource(SEED)
        a = sample_digit(root, 3, replicate=5)
        b = sample_digit(RandomSource(SEED), 3, replicate=5)
        assert a == b
        assert 0 <= a <= 5
        p = OffsetProcess(root, replicate=5)
        assert p.digit(3) == a

    def test_digit_marginal_uniform(self):
        root = RandomSource(SEED)
        vals = root.substream("x-digits").digits(1, 6, np.arange(10**6))
        counts = np.bincount(vals, minlength=6)
        se = np.sqrt(10**6 * (1 / 6) * (5 / 6))
        assert np.all(np.abs(counts - 10**6 / 6) <= 4 * se)

    def test_bad_index_rejected(self):
        with pytest.raises(ConfigError):
            sample_digit(RandomSource(0), 0)


class TestStabilization:
    def test_origin_window_is_level_zero(self):
        assert stabilization_level(StubOffsets([1, 2, 3]), 0, 0) == 0

    def test_hand_case(self):
        # digits (0, 2): level-1 interval [0, 5] misses [-3, 10];
        # level-2 interval [-12, 23] covers it.
        p = StubOffsets([0, 2])
        assert stabilization_level(p, -3, 10) == 2

    def test_containment_postcondition(self):
        root = RandomSource(SEED)
        for rep in range(40):
            p = OffsetProcess(root, replicate=rep)
            m = stabilization_level(p, -5, 17)
            J = p.offset(m)
            assert -J <= -5 and 17 <= -J + 6**m - 1
            if m > 0:  # minimality
                Jp = p.offset(m - 1)
                assert not (-Jp <= -5 and 17 <= -Jp + 6 ** (m - 1) - 1)

    def test_cap_exceeded_raises(self):
        p = StubOffsets([0] * 10)  # offsets never move; window below 0 unreachable
        with pytest.raises(StabilizationCapError):
            stabilization_level(p, -1, 0, cap=10)

    def test_bad_window_rejected(self):
        with pytest.raises(ConfigError):
            stabilization_level(StubOffsets([0]), 3, 2)


class TestBuildBlock:
    def test_level1_origin_block_flips_second_piece(self):
        # digit 0 at level 1: the origin block conditionally flips piece 1
        base = StubBase({i: 1.0 for i in range(6)})
        y = build_block(1, 0, StubOffsets([0]), base)
        assert np.array_equal(y, [1, -1, 1, 1, 1, 1])

    def test_level1_origin_block_flips_first_piece_when_shifted(self):
        base = StubBase({i: 1.0 for i in range(-3, 3)})
        y = build_block(1, 0, StubOffsets([3]), base)
        assert np.array_equal(y, [-1, 1, 1, 1, 1, 1])

    def test_level1_nonorigin_block_unchanged_when_product_negative(self):
        vals = [1.0, -1.0, 1.0, 1.0, 1.0, 1.0]
        for kap in range(6):
            start = -kap + 5 * 6
            base = StubBase({start + i: vals[i] for i in range(6)})
            y = build_block(1, 5, StubOffsets([kap]), base)
            assert np.array_equal(y, vals)

    def test_index_arithmetic_level_starts(self):
        # the level-n block at index K starts where its first level-(n-1)
        # sub-block starts: -J(n) + K*L**n == -J(n-1) + (K*L - kappa_n)*L**(n-1)
        gen = np.random.default_rng(3)
        for _ in range(100):
            digits = gen.integers(0, 6, size=5)
            p = StubOffsets(list(digits))
            n = int(gen.integers(1, 6))
            K = int(gen.integers(-10, 11))
            lhs = -p.offset(n) + K * 6**n
            rhs = -p.offset(n - 1) + (K * 6 - digits[n - 1]) * 6 ** (n - 1)
            assert lhs == rhs


class TestWindowSampling:
    def test_matches_recursive_construction(self):
        for rep in range(25):
            root = RandomSource(SEED)
            proc = OffsetProcess(root, replicate=rep)
            m = stabilization_level(proc, -7, 13)
            blk = build_block(m, 0, proc, root)
            J = proc.offset(m)
            want = blk[-7 + J : 14 + J]
            got = sample_window_batch(-7, 13, SEED, 1, rep_start=rep)[0]
            assert np.array_equal(want, got)

    def test_window_sample_metadata(self):
        w = sample_window(-3, 10, SEED, replicate=2)
        assert w.lo == -3 and w.hi == 10 and w.seed == SEED and w.replicate == 2
        assert w.values.shape == (14,)
        assert np.abs(w.values).max() <= SQRT3
        J, m = w.offset_at_level, w.stabilization_level
        assert -J <= -3 and 10 <= -J + 6**m - 1

    def test_overlapping_windows_agree(self):
        a = sample_window_batch(0, 20, SEED, 60)
        b = sample_window_batch(5, 30, SEED, 60)
        assert np.array_equal(a[:, 5:], b[:, :16])
        c = sample_window_batch(-10, 3, SEED, 60)
        assert np.array_equal(a[:, :4], c[:, 10:])

    def test_value_at_origin_is_base_draw(self):
        w = sample_window_batch(0, 0, SEED, 100)
        root = RandomSource(SEED)
        for rep in range(100):
            assert w[rep, 0] == base_layer_values(root, [0], rep)[0]
        # and across distinct master seeds
        for seed in range(100, 110):
            got = sample_window_batch(0, 0, seed, 1)[0, 0]
            assert got == base_layer_values(RandomSource(seed), [0])[0]

    def test_chunked_equals_full(self):
        full = sample_window_batch(-11, 40, SEED, 30)
        chunked = sample_window_batch(-11, 40, SEED, 30, max_cells=30)
        assert np.array_equal(full, chunked)
        chunked2 = sample_window_batch(-11, 40, SEED, 30, max_cells=7)
        assert np.array_equal(full, chunked2)

    def test_batch_partition_invariance(self):
        whole = sample_window_batch(1, 12, SEED, 64)
        parts = np.vstack(
            [sample_window_batch(1, 12, SEED, 16, rep_start=s) for s in (0, 16, 32, 48)]
        )
        assert np.array_equal(whole, parts)

    def test_values_within_range(self):
        x = sample_window_batch(-20, 20, SEED, 2000)
        assert np.abs(x).max() <= SQRT3

    def test_marginal_and_moments(self):
        x0 = sample_window_batch(0, 0, SEED, 100000)[:, 0]
        assert ks_statistic(x0).p_value >= 0.001
        assert abs(estimate_moment(x0, 1).z_against(0.0)) <= 4
        assert abs(estimate_moment(x0, 2).z_against(1.0)) <= 4
        assert abs(estimate_moment(x0, 4).z_against(1.8)) <= 4

    def test_work_scales_with_window_extent(self):
        # the realized level-m block has L**m cells; its typical size is
        # within a small factor of the window extent
        _, levels_small, _ = sample_window_batch(1, 6, SEED, 4000, return_meta=True)
        _, levels_big, _ = sample_window_batch(1, 200, SEED, 4000, return_meta=True)
        med_small = np.median(6.0 ** levels_small)
        med_big = np.median(6.0 ** levels_big)
        assert med_small <= 36 * 6
        assert med_big <= 36 * 200
        assert med_big > med_small

    def test_bad_window_rejected(self):
        with pytest.raises(ConfigError):
            sample_window_batch(5, 4, SEED, 1)

    def test_custom_block_factor(self):
        # modest count: the stabilized-block tail is heavy (a rare
        # replicate needing level m costs L**m cells), and 2000 draws
        # already pin the variance check well inside 4 SE
        cfg = ProcessConfig(L=8)
        x, levels, _ = sample_window_batch(1, 16, SEED, 2000, cfg=cfg, return_meta=True)
        assert np.abs(x).max() <= SQRT3
        s = x.sum(axis=1)
        assert abs(estimate_moment(s, 2).z_against(16.0)) <= 4
        # dual route for L=8 too, on a replicate whose block stays small
        rep = int(np.nonzero(levels <= 3)[0][0])
        root = RandomSource(SEED)
        proc = OffsetProcess(root, replicate=rep, L=8)
        m = stabilization_level(proc, 1, 16)
        blk = build_block(m, 0, proc, root, cfg)
        J = proc.offset(m)
        assert np.array_equal(blk[1 + J : 17 + J], x[rep])
