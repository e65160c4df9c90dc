"""Samplers for the recursive block measures.

The family starts from the uniform law on [-sqrt(3), sqrt(3)] (mean 0,
variance 1) and climbs one level at a time: a level-n sample is built
from L independent level-(n-1) samples by sign-normalizing each piece,
multiplying the pieces by a parity-constrained sign vector, and
concatenating.  Every coordinate keeps the base marginal, any L-1
coordinates stay independent, magnitudes stay independent - but the
full construction suppresses the L-th moment of partial sums, which is
what the statistical harness in :mod:`cltlab.stats` measures.

Two routes are provided for the level step: the direct one described
above (:func:`sample_mu`) and an alternate one that concatenates L raw
level-(n-1) samples and applies the conditional piece flip
(:func:`sample_mu_via_flip`).  The two routes produce the same law; the test
suite compares their moments as a distributional check.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_CONFIG, SQRT3, ConfigError, ProcessConfig
from .rng import RandomSource
from .signs import sign_vector_grid

__all__ = [
    "sample_base",
    "sample_mu",
    "sample_block_sequence",
    "sample_mu_via_flip",
]

_UNIF_STREAM = "mu-unif"
_SIGN_STREAM = "mu-signs"


def sample_base(rng: RandomSource, size: int | None = None):
    """Draw from the uniform law on [-sqrt(3), sqrt(3)] (advances the cursor)."""
    u = rng.take_uniform(1 if size is None else int(size))
    x = u * (2.0 * SQRT3) - SQRT3
    return float(x[0]) if size is None else x


def _check_depth(n: int, cfg: ProcessConfig) -> int:
    n = int(n)
    if n < 0:
        raise ConfigError(f"recursion depth must be >= 0, got {n}")
    if n > cfg.max_depth:
        raise ConfigError(
            f"depth {n} exceeds max_depth={cfg.max_depth} "
            f"({cfg.L}**{n} coordinates per sample)"
        )
    return n


def _mu_leaves(rng: RandomSource, rep_start: int, count: int, width: int) -> np.ndarray:
    """Base-layer draws: (count, width) iid uniforms on [-sqrt3, sqrt3]."""
    unif = rng.substream(_UNIF_STREAM)
    reps = np.arange(rep_start, rep_start + count, dtype=np.int64)
    return unif.uniform_span_grid(
        np.zeros(count, dtype=np.int64), width, reps, scale=2.0 * SQRT3, offset=-SQRT3
    )


def _mu_cascade(
    vals: np.ndarray,
    n: int,
    rng: RandomSource,
    rep_start: int,
    cfg: ProcessConfig,
) -> np.ndarray:
    """Apply level steps 1..n in place over rows of (count, L**n) leaves."""
    L = cfg.L
    count, width = vals.shape
    reps = np.arange(rep_start, rep_start + count, dtype=np.int64)
    for u in range(1, n + 1):
        plen = L ** (u - 1)
        nodes = width // (plen * L)
        pieces = vals.reshape(count, nodes, L, plen)
        s = pieces.sum(axis=3)
        # sign-normalize each piece: flip negative-sum pieces, zero the
        # (probability-zero) zero-sum ones
        pieces *= np.sign(s)[:, :, :, None]
        signs = rng.substream(f"{_SIGN_STREAM}{u}")
        v = sign_vector_grid(L, signs, np.arange(nodes)[None, :], reps[:, None])
        pieces *= v[:, :, :, None].astype(np.float64)
    return vals


def sample_mu(
    n: int,
    rng: RandomSource,
    size: int | None = None,
    cfg: ProcessConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Draw from the level-n measure: a vector of L**n coordinates.

    With ``size`` set, returns (size, L**n) independent rows.  Each call
    consumes replicate slots from the source's cursor, so repeated calls
    give independent samples.
    """
    n = _check_depth(n, cfg)
    count = 1 if size is None else int(size)
    width = cfg.L**n
    rep_start = rng.take_index_block(count)
    vals = _mu_leaves(rng, rep_start, count, width)
    _mu_cascade(vals, n, rng, rep_start, cfg)
    return vals[0] if size is None else vals


def sample_block_sequence(
    h: int,
    num_blocks: int,
    rng: RandomSource,
    size: int | None = None,
    cfg: ProcessConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Concatenation of num_blocks independent level-h samples.

    The law is a block-aligned window of the block-iid sequence built
    from the level-h measure; length num_blocks * L**h per row.
    """
    h = _check_depth(h, cfg)
    if num_blocks < 1:
        raise ConfigError(f"num_blocks must be >= 1, got {num_blocks}")
    count = 1 if size is None else int(size)
    rows = sample_mu(h, rng, size=count * num_blocks, cfg=cfg)
    out = rows.reshape(count, num_blocks * cfg.L**h)
    return out[0] if size is None else out


def sample_mu_via_flip(
    n: int,
    j: int,
    rng: RandomSource,
    size: int | None = None,
    cfg: ProcessConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Level-n sample via the flip route: splice L raw level-(n-1) samples,
    then conditionally negate piece j.

    Distributionally equal to :func:`sample_mu` (n >= 1) for every j;
    the harness exercises that equality.
    """
    n = _check_depth(n, cfg)
    if n < 1:
        raise ConfigError("the flip route needs n >= 1")
    L = cfg.L
    if not 0 <= int(j) < L:
        raise ConfigError(f"piece index {j} out of range for {L} pieces")
    count = 1 if size is None else int(size)
    plen = L ** (n - 1)
    rows = sample_mu(n - 1, rng, size=count * L, cfg=cfg).reshape(count, L, plen)
    s = rows.sum(axis=2)
    flip = (s != 0.0).all(axis=1) & ((s < 0.0).sum(axis=1) % 2 == 0)
    rows[flip, int(j), :] *= -1.0
    out = rows.reshape(count, L * plen)
    return out[0] if size is None else out
