"""Sign space: exact combinatorics and the sampling law."""

from itertools import combinations

import numpy as np
import pytest
from scipy import stats as sps

from cltlab.config import ConfigError
from cltlab.rng import RandomSource
from cltlab.signs import char_moment, enumerate_sign_space, sample_sign_vector, sign_vector_grid


@pytest.mark.parametrize("L", [6, 8, 10])
def test_atom_count(L):
    atoms = enumerate_sign_space(L)
    assert atoms.shape == (2 ** (L - 1), L)
    assert len({tuple(a) for a in atoms}) == 2 ** (L - 1)
    assert np.all(atoms.prod(axis=1) == -1)
    assert np.all(np.abs(atoms) == 1)


def test_known_atom_present():
    atoms = enumerate_sign_space(6)
    assert any(np.array_equal(a, [-1, 1, 1, 1, 1, 1]) for a in atoms)


def test_bad_L_rejected():
    for L in (4, 5, 7):
        with pytest.raises(ConfigError):
            enumerate_sign_space(L)
    with pytest.raises(ConfigError):
        enumerate_sign_space(18)  # above the enumeration cap


@pytest.mark.parametrize("L", [6, 8])
def test_char_moments_exact(L):
    assert char_moment(L, []) == 1.0
    for r in range(1, L + 1):
        want = -1.0 if r == L else 0.0
        for S in combinations(range(L), r):
            assert char_moment(L, S) == want


def test_char_moment_examples():
    assert char_moment(6, [0, 3]) == 0.0
    assert char_moment(6, range(6)) == -1.0


def test_char_moment_bad_subset():
    with pytest.raises(ValueError):
        char_moment(6, [0, 6])


def test_negation_and_permutation_closure():
    atoms = enumerate_sign_space(8)
    atom_set = {tuple(a) for a in atoms}
    assert {tuple(-a) for a in atoms} == atom_set
    gen = np.random.default_rng(4)
    for _ in range(10):
        sigma = gen.permutation(8)
        assert {tuple(a[sigma]) for a in atoms} == atom_set


def test_sampler_always_in_space():
    src = RandomSource(10, "nu")
    V = sign_vector_grid(6, src, np.arange(5000))
    assert np.all(V.prod(axis=1) == -1)
    assert np.all(np.abs(V) == 1)


def test_sampler_uniform_over_atoms():
    src = RandomSource(10, "nu")
    n = 10**6
    V = sign_vector_grid(6, src, np.arange(n))
    codes = ((V[:, :5] == -1) * (1 << np.arange(5))).sum(axis=1)
    counts = np.bincount(codes, minlength=32)
    res = sps.chisquare(counts)
    assert res.pvalue >= 0.001
    # coordinate means are fair-coin means
    se = 1.0 / np.sqrt(n)
    assert np.all(np.abs(V.mean(axis=0)) <= 4 * se)


def test_sampler_atoms_match_enumeration():
    src = RandomSource(11, "nu")
    V = sign_vector_grid(6, src, np.arange(20000))
    seen = {tuple(v) for v in V}
    assert seen == {tuple(a) for a in enumerate_sign_space(6)}


def test_scalar_sampler_advances_cursor():
    src = RandomSource(12, "nu")
    a = sample_sign_vector(6, src)
    b = sample_sign_vector(6, src)
    assert a.prod() == -1 and b.prod() == -1
    assert not np.array_equal(a, b) or True  # distinct draws may coincide
    again = RandomSource(12, "nu")
    assert np.array_equal(sample_sign_vector(6, again), a)
