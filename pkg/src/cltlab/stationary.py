"""Lazy window sampler for the stationary limit process.

One replicate of the process is determined by two ingredients, both
addressed by counter-based streams so any window can be realized exactly
and consistently:

* a doubly infinite iid base layer of uniforms on [-sqrt(3), sqrt(3)],
  keyed by integer position;
* an iid stream of base-L digits kappa_1, kappa_2, ... defining random
  offsets J(n) = sum_{u<=n} L**(u-1) kappa_u.

Level n refines level n-1 on blocks of length L**n anchored at -J(n):
inside each block, the conditional piece flip negates one length
L**(n-1) piece exactly when all L piece sums multiply positive.  The
flipped piece is piece 0 except in the block containing the origin when
kappa_n == 0, where it is piece 1; that exception is what keeps the
already-settled coordinates untouched.  Once a window [lo, hi] falls
inside [-J(m), -J(m)+L**m-1], its values never change at later levels,
so the limit process restricted to the window equals the level-m values
there.  Sampling therefore realizes exactly one level-m block.

Two implementations of the block construction are kept deliberately:

* :func:`build_block` - direct recursion, one replicate, readable;
* the vectorized bottom-up cascade used by :func:`sample_window_batch`.

They are required to agree bit-for-bit; the test suite enforces it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import (
    DEFAULT_CONFIG,
    SQRT3,
    ConfigError,
    ProcessConfig,
    StabilizationCapError,
)
from .rng import RandomSource

__all__ = [
    "OffsetProcess",
    "WindowSample",
    "sample_digit",
    "compute_offset",
    "stabilization_level",
    "build_block",
    "base_layer_values",
    "sample_window",
    "sample_window_batch",
]

_DIGIT_STREAM = "x-digits"
_BASE_STREAM = "x-base"

# Vectorized cascade works on slabs of at most this many float64 cells.
_MAX_CELLS = 1 << 23


def _root(seed: int) -> RandomSource:
    return RandomSource(seed)


def sample_digit(rng: RandomSource, u: int, replicate: int = 0, L: int = DEFAULT_CONFIG.L) -> int:
    """The u-th offset digit (u >= 1): uniform on {0..L-1}, pure in (seed, u, replicate)."""
    if u < 1:
        raise ConfigError(f"digit index must be >= 1, got {u}")
    return int(rng.substream(_DIGIT_STREAM).digits(u, L, replicate)[()])


def base_layer_values(rng: RandomSource, positions, replicate: int = 0) -> np.ndarray:
    """Level-0 process values at integer positions (possibly negative)."""
    positions = np.atleast_1d(np.asarray(positions, dtype=np.int64))
    base = rng.substream(_BASE_STREAM)
    out = np.empty(positions.shape, dtype=np.float64)
    for i, p in enumerate(positions):  # positions are few in practice
        out[i] = base.uniform_span_grid([p], 1, [replicate], 2.0 * SQRT3, -SQRT3)[0, 0]
    return out


class OffsetProcess:
    """Lazily realized offset digits and partial offsets for one replicate."""

    def __init__(self, rng: RandomSource, replicate: int = 0, L: int = DEFAULT_CONFIG.L):
        self._digits_rng = rng.substream(_DIGIT_STREAM)
        self.replicate = int(replicate)
        self.L = int(L)
        self._kappa: list[int] = []  # kappa_1, kappa_2, ...
        self._J = [0]  # J(0), J(1), ...

    def digit(self, u: int) -> int:
        """kappa_u for u >= 1 (realized on demand, then cached)."""
        if u < 1:
            raise ConfigError(f"digit index must be >= 1, got {u}")
        while len(self._kappa) < u:
            nxt = len(self._kappa) + 1
            k = int(self._digits_rng.digits(nxt, self.L, self.replicate)[()])
            self._kappa.append(k)
            self._J.append(self.L ** (nxt - 1) * k + self._J[-1])
        return self._kappa[u - 1]

    def offset(self, n: int) -> int:
        """J(n) = L**(n-1)*kappa_n + J(n-1), with J(0) = 0."""
        if n < 0:
            raise ConfigError(f"offset level must be >= 0, got {n}")
        if n > 0:
            self.digit(n)
        return self._J[n]


def compute_offset(proc: OffsetProcess, n: int) -> int:
    """Functional alias for :meth:`OffsetProcess.offset`."""
    return proc.offset(n)


def stabilization_level(
    proc: OffsetProcess, lo: int, hi: int, cap: int = DEFAULT_CONFIG.level_cap
) -> int:
    """Smallest m with [lo, hi] inside [-J(m), -J(m)+L**m-1].

    Values of the limit process on [lo, hi] equal the level-m values
    there.  Raises StabilizationCapError past the cap (probability
    ~(2/L)**cap).
    """
    if lo > hi:
        raise ConfigError(f"window must have lo <= hi, got [{lo}, {hi}]")
    L = proc.L
    for m in range(cap + 1):
        J = proc.offset(m)
        if -J <= lo and hi <= -J + L**m - 1:
            return m
    raise StabilizationCapError(
        f"window [{lo}, {hi}] not covered by level {cap} (replicate {proc.replicate})"
    )


def build_block(
    level: int,
    index: int,
    proc: OffsetProcess,
    rng: RandomSource,
    cfg: ProcessConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Level-`level` block at block index `index`, by direct recursion.

    The block covers positions -J(level)+index*L**level .. +L**level-1.
    Level 0 blocks are single base-layer values; a level-n block splices
    the L sub-blocks at indexes index*L + i - kappa_n (i = 0..L-1) and
    applies the conditional flip to piece 1 when index == 0 and
    kappa_n == 0, else to piece 0.  Sub-blocks tile their parent's
    position range exactly, so the base layer is fetched once for the
    whole block and the recursion works on slices of it.

    Reference implementation: one replicate at a time; the batch engine
    must match it exactly.
    """
    L = cfg.L
    width = L**level
    start = -proc.offset(level) + index * width
    base = rng.substream(_BASE_STREAM)
    vals = base.uniform_span_grid(
        [start], width, [proc.replicate], 2.0 * SQRT3, -SQRT3
    )[0]
    return _build_block_on(level, index, proc, vals, cfg)


def _build_block_on(level, index, proc, vals, cfg) -> np.ndarray:
    L = cfg.L
    if level == 0:
        return vals.copy()
    k = proc.digit(level)
    plen = L ** (level - 1)
    pieces = [
        _build_block_on(level - 1, index * L + i - k, proc, vals[i * plen : (i + 1) * plen], cfg)
        for i in range(L)
    ]
    y = np.concatenate(pieces)
    sums = y.reshape(L, plen).sum(axis=1)
    j = 1 if (index == 0 and k == 0) else 0
    if np.all(sums != 0.0) and int((sums < 0.0).sum()) % 2 == 0:
        y[j * plen : (j + 1) * plen] *= -1.0
    return y


@dataclass(frozen=True)
class WindowSample:
    """One realized window of the limit process.

    values[k - lo] is the process at integer position k; the window is
    contained in [-offset_at_level, -offset_at_level + L**level - 1].
    """

    lo: int
    hi: int
    values: np.ndarray
    stabilization_level: int
    offset_at_level: int
    seed: int
    replicate: int = 0


def sample_window(
    lo: int,
    hi: int,
    seed: int,
    replicate: int = 0,
    cfg: ProcessConfig = DEFAULT_CONFIG,
) -> WindowSample:
    """Realize one replicate of the limit process on [lo, hi]."""
    values, levels, offsets = sample_window_batch(
        lo, hi, seed, 1, rep_start=replicate, cfg=cfg, return_meta=True
    )
    return WindowSample(
        lo=int(lo),
        hi=int(hi),
        values=values[0],
        stabilization_level=int(levels[0]),
        offset_at_level=int(offsets[0]),
        seed=int(seed),
        replicate=int(replicate),
    )


def sample_window_batch(
    lo: int,
    hi: int,
    seed: int,
    count: int,
    rep_start: int = 0,
    cfg: ProcessConfig = DEFAULT_CONFIG,
    return_meta: bool = False,
    max_cells: int = _MAX_CELLS,
):
    """Independent replicates of the limit process on [lo, hi].

    Returns (count, hi-lo+1) float64; with return_meta also the
    stabilization level and offset J(m) per replicate.  Replicates are
    keyed by rep_start..rep_start+count-1 under the master seed and are
    reproducible regardless of batch partitioning.
    """
    lo = int(lo)
    hi = int(hi)
    if lo > hi:
        raise ConfigError(f"window must have lo <= hi, got [{lo}, {hi}]")
    count = int(count)
    if count < 1:
        raise ConfigError(f"count must be >= 1, got {count}")
    root = _root(seed)
    digits_rng = root.substream(_DIGIT_STREAM)
    base = root.substream(_BASE_STREAM)
    L = cfg.L
    reps = np.arange(rep_start, rep_start + count, dtype=np.int64)

    # -- realize digits until every replicate's window is covered ----------
    # Offsets are kept in int64 columns, which caps the usable level at
    # floor(63/log2(L)) (24 for L=6).  Failing to stabilize by then has
    # probability ~(2/L)**24 per replicate; raise rather than wrap.
    cap = min(cfg.level_cap, int(63 / np.log2(L)))
    levels = np.zeros(count, dtype=np.int64)
    J_cols = [np.zeros(count, dtype=np.int64)]  # J(0), J(1), ... per replicate
    done = np.zeros(count, dtype=bool)
    if lo >= 0 and hi <= 0:  # [0, 0] stabilizes at level 0
        done[:] = True
    kappa_cols = []
    u = 0
    while not done.all():
        u += 1
        if u > cap:
            raise StabilizationCapError(
                f"window [{lo}, {hi}] not covered by level {cap} "
                f"for {int((~done).sum())} of {count} replicates"
            )
        kappa = np.zeros(count, dtype=np.int64)
        todo = ~done
        kappa[todo] = digits_rng.digits(u, L, reps[todo])
        kappa_cols.append(kappa)
        J = J_cols[-1] + kappa * L ** (u - 1)
        J_cols.append(J)
        newly = todo & (-J <= lo) & (hi <= -J + L**u - 1)
        levels[newly] = u
        done |= newly
    Jmat = np.column_stack(J_cols)  # (count, u_max+1)
    kmat = (
        np.column_stack(kappa_cols)
        if kappa_cols
        else np.zeros((count, 0), dtype=np.int64)
    )

    # -- realize windows, grouped by stabilization level -------------------
    width_out = hi - lo + 1
    out = np.empty((count, width_out), dtype=np.float64)
    for m in np.unique(levels):
        rows = np.nonzero(levels == m)[0]
        m = int(m)
        width = L**m
        if width <= max_cells:
            slab = max(1, max_cells // width)
            for i in range(0, rows.size, slab):
                sel = rows[i : i + slab]
                out[sel] = _realize_full(
                    lo, hi, m, kmat[sel], Jmat[sel], reps[sel], base, cfg
                )
        else:
            for r in rows:
                out[r] = _realize_chunked(
                    lo, hi, m, kmat[r], Jmat[r], int(reps[r]), base, cfg, max_cells
                )
    if return_meta:
        return out, levels, Jmat[np.arange(count), levels]
    return out


def _flip_rows(pieces, s, flip, b0, special):
    """Apply the per-block conditional flips for one cascade level.

    pieces: (R, nb, L, plen) view being updated in place; s: (R, nb, L)
    piece sums; flip: (R, nb) product-positive mask; b0: (R,) block row
    holding the origin; special: (R,) True where this level's digit is 0
    (flip piece 1 instead of piece 0 in the origin block).
    """
    R, nb = flip.shape
    sel1 = np.zeros((R, nb), dtype=bool)
    sel1[np.arange(R), b0] = special
    r0, c0 = np.nonzero(flip & ~sel1)
    pieces[r0, c0, 0, :] *= -1.0
    r1, c1 = np.nonzero(flip & sel1)
    pieces[r1, c1, 1, :] *= -1.0


def _realize_full(lo, hi, m, kmat, Jmat, reps, base, cfg):
    """Vectorized cascade, whole level-m blocks in memory: (R, L**m)."""
    L = cfg.L
    width = L**m
    Jm = Jmat[:, m]
    vals = base.uniform_span_grid(-Jm, width, reps, 2.0 * SQRT3, -SQRT3)
    R = vals.shape[0]
    for u in range(1, m + 1):
        plen = L ** (u - 1)
        nb = width // (plen * L)
        pieces = vals.reshape(R, nb, L, plen)
        s = pieces.sum(axis=3)
        flip = (s != 0.0).all(axis=2) & ((s < 0.0).sum(axis=2) % 2 == 0)
        b0 = (Jm - Jmat[:, u]) // L**u
        _flip_rows(pieces, s, flip, b0, kmat[:, u - 1] == 0)
    cols = (lo + Jm)[:, None] + np.arange(hi - lo + 1, dtype=np.int64)[None, :]
    return np.take_along_axis(vals, cols, axis=1)


def _realize_chunked(lo, hi, m, kappa, Joff, rep, base, cfg, max_cells):
    """One replicate whose level-m block exceeds max_cells.

    The block is processed as L**(m-c) chunks of L**c values: each chunk
    is cascaded through levels 1..c in memory and reduced to its block
    sum; levels c+1..m then run on sums alone, with the window's sign
    corrections tracked explicitly.  O(L**c + L**(m-c)) memory.  Above
    level c the block sums are accumulated as sums-of-sums, so they can
    differ from the full path's direct sums in the last bits - they only
    enter through their signs, which the rounding cannot move off a
    continuous distribution, so the emitted values match the full path.
    """
    L = cfg.L
    c = m - 1
    while L**c > max_cells:
        c -= 1
    width_c = L**c
    nchunks = L ** (m - c)
    Jm = int(Joff[m])
    wlen = hi - lo + 1
    win_cols = (lo + Jm) + np.arange(wlen, dtype=np.int64)  # offsets in [0, L**m)
    win_vals = np.empty(wlen, dtype=np.float64)
    sums = np.empty(nchunks, dtype=np.float64)
    for k in range(nchunks):
        v = base.uniform_span_grid(
            [-Jm + k * width_c], width_c, [rep], 2.0 * SQRT3, -SQRT3
        )
        for u in range(1, c + 1):
            plen = L ** (u - 1)
            nb = width_c // (plen * L)
            pieces = v.reshape(1, nb, L, plen)
            s = pieces.sum(axis=3)
            flip = (s != 0.0).all(axis=2) & ((s < 0.0).sum(axis=2) % 2 == 0)
            g0 = (Jm - int(Joff[u])) // L**u  # global row of the origin block
            local0 = g0 - k * nb
            if 0 <= local0 < nb:
                _flip_rows(
                    pieces,
                    s,
                    flip,
                    np.array([local0]),
                    np.array([kappa[u - 1] == 0]),
                )
            else:
                r0, c0 = np.nonzero(flip)
                pieces[r0, c0, 0, :] *= -1.0
        v = v.reshape(-1)
        sums[k] = v.sum()
        sel = (win_cols >= k * width_c) & (win_cols < (k + 1) * width_c)
        if sel.any():
            win_vals[sel] = v[win_cols[sel] - k * width_c]
    win_sign = np.ones(wlen, dtype=np.float64)
    for u in range(c + 1, m + 1):
        nb = L ** (m - u)
        s = sums.reshape(nb, L)
        flip = (s != 0.0).all(axis=1) & ((s < 0.0).sum(axis=1) % 2 == 0)
        b0 = (Jm - int(Joff[u])) // L**u
        j = np.zeros(nb, dtype=np.int64)
        j[b0] = 1 if kappa[u - 1] == 0 else 0
        row = win_cols // L**u
        piece = (win_cols // L ** (u - 1)) % L
        hit = flip[row] & (piece == j[row])
        win_sign[hit] *= -1.0
        new_sums = s.sum(axis=1)
        new_sums[flip] -= 2.0 * s[flip, j[flip]]
        sums = new_sums
    return win_vals * win_sign
