"""The parity-constrained sign space and its uniform law.

The space holds every vector in {-1,+1}**L whose coordinate product is
-1; there are 2**(L-1) of them.  Under the uniform law the coordinates
are fair signs, any L-1 of them are mutually independent, and the full
product is -1 almost surely - the single parity bit is the only hidden
constraint.  This is the sign-resampling ingredient of the recursive
measure construction.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_CONFIG, ConfigError, validate_block_factor
from .rng import RandomSource

__all__ = ["enumerate_sign_space", "sample_sign_vector", "sign_vector_grid", "char_moment"]


def _check_enumerable(L: int, cap: int) -> int:
    L = validate_block_factor(L)
    if L > cap:
        raise ConfigError(
            f"exact enumeration limited to L <= {cap} (2**{cap - 1} atoms); got L={L}"
        )
    return L


def enumerate_sign_space(L: int, cap: int = DEFAULT_CONFIG.enumeration_cap) -> np.ndarray:
    """All sign vectors of length L with coordinate product -1.

    Returns an int8 array of shape (2**(L-1), L), one atom per row.  The
    first L-1 coordinates enumerate {-1,1}**(L-1) in binary order; the
    last coordinate is forced to -prod(first L-1).
    """
    L = _check_enumerable(L, cap)
    m = L - 1
    codes = np.arange(2**m, dtype=np.uint32)
    bits = (codes[:, None] >> np.arange(m, dtype=np.uint32)[None, :]) & 1
    atoms = np.empty((2**m, L), dtype=np.int8)
    atoms[:, :m] = 1 - 2 * bits.astype(np.int8)
    atoms[:, m] = -atoms[:, :m].prod(axis=1)
    return atoms


def sign_vector_grid(L: int, rng: RandomSource, index, replicate=0) -> np.ndarray:
    """Sign vectors drawn from the uniform law, one per (index, replicate).

    Positions 0..L-2 are independent fair signs read off one random word
    (bit ell for position ell); position L-1 is minus their product.
    Returns int8 of shape broadcast(index, replicate) + (L,).
    """
    validate_block_factor(L)
    if L > 64:
        raise ConfigError(f"sign sampling reads one 64-bit word; L={L} too large")
    words = rng.words(index, replicate)
    bits = (
        words[..., None] >> np.arange(L - 1, dtype=np.uint64)[None, :]
    ) & np.uint64(1)
    v = np.empty(words.shape + (L,), dtype=np.int8)
    v[..., : L - 1] = 1 - 2 * bits.astype(np.int8)
    v[..., L - 1] = -v[..., : L - 1].prod(axis=-1)
    return v


def sample_sign_vector(L: int, rng: RandomSource) -> np.ndarray:
    """One draw from the uniform law on the sign space (advances the cursor)."""
    validate_block_factor(L)
    if L > 64:
        raise ConfigError(f"sign sampling reads one 64-bit word; L={L} too large")
    word = rng.take(1)
    bits = (word[0] >> np.arange(L - 1, dtype=np.uint64)) & np.uint64(1)
    v = np.empty(L, dtype=np.int8)
    v[: L - 1] = 1 - 2 * bits.astype(np.int8)
    v[L - 1] = -v[: L - 1].prod()
    return v


def char_moment(L: int, S, cap: int = DEFAULT_CONFIG.enumeration_cap) -> float:
    """Exact E prod_{l in S} V_l under the uniform law, by enumeration.

    S is a subset of {0..L-1}.  The value is 1 for empty S, 0 for
    1 <= |S| <= L-1 and -1 for |S| = L; this function computes it by
    averaging over all 2**(L-1) atoms rather than trusting that formula,
    so tests can use it as an independent check.
    """
    L = _check_enumerable(L, cap)
    idx = sorted(set(int(i) for i in S))
    if any(i < 0 or i >= L for i in idx):
        raise ValueError(f"subset {idx} not within 0..{L - 1}")
    atoms = enumerate_sign_space(L, cap)
    if not idx:
        return 1.0
    prods = atoms[:, idx].astype(np.int64).prod(axis=1)
    total = int(prods.sum())
    # every atom has weight 2**-(L-1); the sum is divisible exactly
    return float(total) / float(2 ** (L - 1))
