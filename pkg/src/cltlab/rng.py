"""Counter-based random streams.

Every draw made through :class:`RandomSource` is a pure function of
``(master_seed, stream_label, counter)``.  Nothing here keeps hidden
generator state between draws, so replicates can be produced out of
order, in parallel, or re-generated from scratch and always come out
identical.  That is the property the samplers and the determinism
checks in this package are built on.

The word function is Philox4x64-10, the keyed block function behind
``numpy.random.Philox``, evaluated here directly on arrays of counters
so that millions of addressed draws cost a few vectorized passes
instead of millions of generator calls.  A numba kernel does the heavy
lifting when numba is importable; a pure-numpy implementation of the
same cipher is kept both as fallback and as an in-tree cross-check.
The test suite pins both paths bit-for-bit against
``numpy.random.Philox``.

Counter layout (c0, c1, c2, c3) with key (k0, k1):

* k0 = master seed, k1 = hash of the stream label.  Distinct labels
  give unrelated streams under the same seed.
* c0 = the caller's index (or packed block index for spans).
* c1 = replicate index.  One replicate of a Monte Carlo experiment is
  one value of c1 within its streams.
* c2 = addressing tag, separating the access paths below so their
  counters can never collide.

Access paths:

* :meth:`RandomSource.words` - one word per (index, replicate) pair.
* :meth:`RandomSource.word_span_grid` - a contiguous run of words per
  replicate, packed four per cipher block.
* :meth:`RandomSource.take` - a sequential cursor for plain
  draw-after-draw sampling.
"""

from __future__ import annotations

import hashlib
import os

import numpy as np

__all__ = ["RandomSource", "philox_blocks", "uniform01"]

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)

_MASK32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)

# c2 tags: direct word addressing, packed spans, sequential cursor draws.
_TAG_WORD = 0
_TAG_SPAN = 1
_TAG_SEQ = 2

_U53_INV = float(2.0**-53)


def _label_hash(label: str) -> int:
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def _mulhilo(a: np.uint64, b):
    """Full 128-bit product of scalar a and array b as (hi, lo) uint64."""
    lo = a * b
    a_lo = a & _MASK32
    a_hi = a >> _S32
    b_lo = b & _MASK32
    b_hi = b >> _S32
    x1 = a_lo * b_hi
    x2 = a_hi * b_lo
    carry = (((a_lo * b_lo) >> _S32) + (x1 & _MASK32) + (x2 & _MASK32)) >> _S32
    hi = a_hi * b_hi + (x1 >> _S32) + (x2 >> _S32) + carry
    return hi, lo


def philox_blocks_numpy(c0, c1, c2, c3, k0, k1):
    """Philox4x64-10 block function on numpy arrays of counters.

    Counters broadcast against each other; returns the block's four
    output words (out0, out1, out2, out3), each with the broadcast shape.
    """
    c0 = np.asarray(c0, dtype=np.uint64)
    c1 = np.asarray(c1, dtype=np.uint64)
    c2 = np.asarray(c2, dtype=np.uint64)
    c3 = np.asarray(c3, dtype=np.uint64)
    c0, c1, c2, c3 = np.broadcast_arrays(c0, c1, c2, c3)
    c0, c1, c2, c3 = c0.copy(), c1.copy(), c2.copy(), c3.copy()
    k0 = np.uint64(k0)
    k1 = np.uint64(k1)
    with np.errstate(over="ignore"):
        for _ in range(10):
            hi0, lo0 = _mulhilo(_M0, c0)
            hi1, lo1 = _mulhilo(_M1, c2)
            c0 = hi1 ^ c1 ^ k0
            c1 = lo1
            c2 = hi0 ^ c3 ^ k1
            c3 = lo0
            k0 = k0 + _W0
            k1 = k1 + _W1
    return c0, c1, c2, c3


def _build_numba_kernels():
    from numba import njit

    u64 = np.uint64
    M0 = _M0
    M1 = _M1
    W0 = _W0
    W1 = _W1
    MASK = _MASK32
    S = _S32

    @njit(cache=True, nogil=True)
    def blocks_kernel(c0, c1, c2, c3, k0base, k1base, out):
        n = c0.shape[0]
        for i in range(n):
            x0 = c0[i]
            x1 = c1[i]
            x2 = c2[i]
            x3 = c3[i]
            k0 = k0base
            k1 = k1base
            for _ in range(10):
                b_lo = x0 & MASK
                b_hi = x0 >> S
                t1 = (M0 & MASK) * b_hi
                t2 = (M0 >> S) * b_lo
                carry = ((((M0 & MASK) * b_lo) >> S) + (t1 & MASK) + (t2 & MASK)) >> S
                hi0 = (M0 >> S) * b_hi + (t1 >> S) + (t2 >> S) + carry
                lo0 = M0 * x0
                b_lo = x2 & MASK
                b_hi = x2 >> S
                t1 = (M1 & MASK) * b_hi
                t2 = (M1 >> S) * b_lo
                carry = ((((M1 & MASK) * b_lo) >> S) + (t1 & MASK) + (t2 & MASK)) >> S
                hi1 = (M1 >> S) * b_hi + (t1 >> S) + (t2 >> S) + carry
                lo1 = M1 * x2
                y0 = hi1 ^ x1 ^ k0
                y2 = hi0 ^ x3 ^ k1
                x0 = y0
                x1 = lo1
                x2 = y2
                x3 = lo0
                k0 += W0
                k1 += W1
            out[i, 0] = x0
            out[i, 1] = x1
            out[i, 2] = x2
            out[i, 3] = x3

    one = u64(1)

    @njit(cache=True, nogil=True, inline="always")
    def _block(q, rep, tag, k0, k1):
        x0 = q
        x1 = rep
        x2 = tag
        x3 = u64(0)
        for _ in range(10):
            b_lo = x0 & MASK
            b_hi = x0 >> S
            t1 = (M0 & MASK) * b_hi
            t2 = (M0 >> S) * b_lo
            carry = ((((M0 & MASK) * b_lo) >> S) + (t1 & MASK) + (t2 & MASK)) >> S
            hi0 = (M0 >> S) * b_hi + (t1 >> S) + (t2 >> S) + carry
            lo0 = M0 * x0
            b_lo = x2 & MASK
            b_hi = x2 >> S
            t1 = (M1 & MASK) * b_hi
            t2 = (M1 >> S) * b_lo
            carry = ((((M1 & MASK) * b_lo) >> S) + (t1 & MASK) + (t2 & MASK)) >> S
            hi1 = (M1 >> S) * b_hi + (t1 >> S) + (t2 >> S) + carry
            lo1 = M1 * x2
            y0 = hi1 ^ x1 ^ k0
            y2 = hi0 ^ x3 ^ k1
            x0 = y0
            x1 = lo1
            x2 = y2
            x3 = lo0
            k0 += W0
            k1 += W1
        return x0, x1, x2, x3

    @njit(cache=True, nogil=True)
    def span_kernel(starts, count, reps, tag, k0, k1, out):
        # Row r holds words at indexes starts[r] .. starts[r]+count-1 of
        # replicate reps[r]; words are packed four per block at counter
        # (index >> 2, rep, tag, 0) with lane = index & 3.
        nrow = starts.shape[0]
        for r in range(nrow):
            w = starts[r]
            rep = reps[r]
            q = w >> u64(2)
            lane = np.int64(w & u64(3))
            pos = 0
            if lane != 0:  # leading partial block
                x0, x1, x2, x3 = _block(q, rep, tag, k0, k1)
                if lane <= 1 and pos < count:
                    out[r, pos] = x1
                    pos += 1
                if lane <= 2 and pos < count:
                    out[r, pos] = x2
                    pos += 1
                if pos < count:
                    out[r, pos] = x3
                    pos += 1
                q += one
            nfull = (count - pos) >> 2
            for _ in range(nfull):
                x0, x1, x2, x3 = _block(q, rep, tag, k0, k1)
                out[r, pos] = x0
                out[r, pos + 1] = x1
                out[r, pos + 2] = x2
                out[r, pos + 3] = x3
                pos += 4
                q += one
            if pos < count:  # trailing partial block
                x0, x1, x2, x3 = _block(q, rep, tag, k0, k1)
                out[r, pos] = x0
                pos += 1
                if pos < count:
                    out[r, pos] = x1
                    pos += 1
                if pos < count:
                    out[r, pos] = x2
                    pos += 1

    @njit(cache=True, nogil=True)
    def pairs_kernel(idx, reps, tag, k0, k1, out):
        # Lane-0 word per (index, replicate) pair.
        for i in range(idx.shape[0]):
            x0, _, _, _ = _block(idx[i], reps[i], tag, k0, k1)
            out[i] = x0

    inv53 = 2.0**-53

    @njit(cache=True, nogil=True)
    def span_affine_kernel(starts, count, reps, tag, k0base, k1base, scale, offset, out):
        # Same addressing as span_kernel but emits scale*u + offset for
        # u in [0,1), float64.  The cipher rounds are spelled out inline:
        # routing them through a helper that returns a tuple costs 4x in
        # throughput, and this kernel is the sampler's hot path.
        M0lo = M0 & MASK
        M0hi = M0 >> S
        M1lo = M1 & MASK
        M1hi = M1 >> S
        nrow = starts.shape[0]
        for r in range(nrow):
            w = starts[r]
            rep = reps[r]
            q = w >> u64(2)
            lane = np.int64(w & u64(3))
            pos = 0
            while pos < count:
                x0 = q
                x1 = rep
                x2 = tag
                x3 = u64(0)
                k0 = k0base
                k1 = k1base
                for _ in range(10):
                    b_lo = x0 & MASK
                    b_hi = x0 >> S
                    t1 = M0lo * b_hi
                    t2 = M0hi * b_lo
                    carry = (((M0lo * b_lo) >> S) + (t1 & MASK) + (t2 & MASK)) >> S
                    hi0 = M0hi * b_hi + (t1 >> S) + (t2 >> S) + carry
                    lo0 = M0 * x0
                    b_lo = x2 & MASK
                    b_hi = x2 >> S
                    t1 = M1lo * b_hi
                    t2 = M1hi * b_lo
                    carry = (((M1lo * b_lo) >> S) + (t1 & MASK) + (t2 & MASK)) >> S
                    hi1 = M1hi * b_hi + (t1 >> S) + (t2 >> S) + carry
                    lo1 = M1 * x2
                    y0 = hi1 ^ x1 ^ k0
                    y2 = hi0 ^ x3 ^ k1
                    x0 = y0
                    x1 = lo1
                    x2 = y2
                    x3 = lo0
                    k0 += W0
                    k1 += W1
                if lane == 0 and pos + 4 <= count:
                    out[r, pos] = (np.float64(x0 >> u64(11)) * inv53) * scale + offset
                    out[r, pos + 1] = (np.float64(x1 >> u64(11)) * inv53) * scale + offset
                    out[r, pos + 2] = (np.float64(x2 >> u64(11)) * inv53) * scale + offset
                    out[r, pos + 3] = (np.float64(x3 >> u64(11)) * inv53) * scale + offset
                    pos += 4
                else:
                    if lane <= 0 and pos < count:
                        out[r, pos] = (np.float64(x0 >> u64(11)) * inv53) * scale + offset
                        pos += 1
                    if lane <= 1 and pos < count:
                        out[r, pos] = (np.float64(x1 >> u64(11)) * inv53) * scale + offset
                        pos += 1
                    if lane <= 2 and pos < count:
                        out[r, pos] = (np.float64(x2 >> u64(11)) * inv53) * scale + offset
                        pos += 1
                    if pos < count:
                        out[r, pos] = (np.float64(x3 >> u64(11)) * inv53) * scale + offset
                        pos += 1
                    lane = 0
                q += one

    return blocks_kernel, span_kernel, pairs_kernel, span_affine_kernel


_BLOCKS_KERNEL = None
_SPAN_KERNEL = None
_PAIRS_KERNEL = None
_SPAN_AFFINE_KERNEL = None
if os.environ.get("CLTLAB_NO_NUMBA", "") != "1":
    try:
        (
            _BLOCKS_KERNEL,
            _SPAN_KERNEL,
            _PAIRS_KERNEL,
            _SPAN_AFFINE_KERNEL,
        ) = _build_numba_kernels()
    except ImportError:  # pragma: no cover - numba is an optional accelerator
        pass


def philox_blocks(c0, c1, c2, c3, k0, k1):
    """Philox4x64-10 blocks; numba-compiled when available."""
    if _BLOCKS_KERNEL is None:
        return philox_blocks_numpy(c0, c1, c2, c3, k0, k1)
    a0 = np.asarray(c0, dtype=np.uint64)
    a1 = np.asarray(c1, dtype=np.uint64)
    a2 = np.asarray(c2, dtype=np.uint64)
    a3 = np.asarray(c3, dtype=np.uint64)
    a0, a1, a2, a3 = np.broadcast_arrays(a0, a1, a2, a3)
    shape = a0.shape
    flat = [np.ascontiguousarray(a.reshape(-1)) for a in (a0, a1, a2, a3)]
    out = np.empty((flat[0].size, 4), dtype=np.uint64)
    _BLOCKS_KERNEL(flat[0], flat[1], flat[2], flat[3], np.uint64(k0), np.uint64(k1), out)
    return tuple(out[:, i].reshape(shape) for i in range(4))


def uniform01(words: np.ndarray) -> np.ndarray:
    """Map 64-bit words to float64 uniforms in [0, 1)."""
    return (words >> np.uint64(11)).astype(np.float64) * _U53_INV


def _as_u64(x) -> np.ndarray:
    """Coerce nonnegative ints to uint64 (replicate ids, cursor values)."""
    arr = np.asarray(x)
    if arr.dtype == np.uint64:
        return arr
    return arr.astype(np.int64).view(np.uint64)


_SIGN_BIAS = np.uint64(1 << 63)


def _as_u64_index(x) -> np.ndarray:
    """Map signed indexes to uint64 order-preservingly (i -> i + 2**63).

    Unlike a two's-complement wrap, this keeps any realistic index span
    contiguous in counter space: a run crossing 0 must not wrap modulo
    2**64, because the four-per-block packing (index >> 2) would not
    wrap with it.
    """
    arr = np.asarray(x)
    if arr.dtype != np.int64:
        arr = arr.astype(np.int64)
    return arr.view(np.uint64) ^ _SIGN_BIAS


class RandomSource:
    """A named, counter-addressed stream of 64-bit random words.

    ``master_seed`` and ``stream_label`` select the stream; each draw is
    addressed by ``(index, replicate)``.  Distinct (label, index,
    replicate) triples give statistically independent words.
    """

    __slots__ = ("master_seed", "stream_label", "index", "_k0", "_k1")

    def __init__(self, master_seed: int, stream_label: str = "root", index: int = 0):
        self.master_seed = int(master_seed) & 0xFFFFFFFFFFFFFFFF
        self.stream_label = stream_label
        self.index = int(index)  # cursor for take()
        self._k0 = self.master_seed
        self._k1 = _label_hash(stream_label)

    def __repr__(self):
        return (
            f"RandomSource(master_seed={self.master_seed}, "
            f"stream_label={self.stream_label!r}, index={self.index})"
        )

    def substream(self, name: str) -> "RandomSource":
        """Independent child stream; same seed, derived label."""
        return RandomSource(self.master_seed, f"{self.stream_label}/{name}")

    # -- addressed access (pure; the cursor is not involved) ----------------

    def words(self, index, replicate=0) -> np.ndarray:
        """One word per (index, replicate) pair (arrays broadcast)."""
        c0 = _as_u64_index(index)
        c1 = _as_u64(replicate)
        if _PAIRS_KERNEL is not None:
            c0b, c1b = np.broadcast_arrays(c0, c1)
            shape = c0b.shape
            flat0 = np.ascontiguousarray(c0b.reshape(-1))
            flat1 = np.ascontiguousarray(c1b.reshape(-1))
            out = np.empty(flat0.size, dtype=np.uint64)
            _PAIRS_KERNEL(
                flat0,
                flat1,
                np.uint64(_TAG_WORD),
                np.uint64(self._k0),
                np.uint64(self._k1),
                out,
            )
            return out.reshape(shape)
        out0, _, _, _ = philox_blocks(c0, c1, _TAG_WORD, 0, self._k0, self._k1)
        return out0

    def word_span_grid(self, starts, count: int, replicates) -> np.ndarray:
        """Contiguous runs: row r holds words starts[r] .. starts[r]+count-1.

        Start indexes may be negative; the order-preserving index
        mapping keeps every run contiguous in counter space.
        """
        starts = np.ascontiguousarray(np.atleast_1d(_as_u64_index(starts)))
        reps = np.ascontiguousarray(
            np.broadcast_to(_as_u64(replicates), starts.shape)
        )
        out = np.empty((starts.size, count), dtype=np.uint64)
        if _SPAN_KERNEL is not None:
            _SPAN_KERNEL(
                starts,
                count,
                reps,
                np.uint64(_TAG_SPAN),
                np.uint64(self._k0),
                np.uint64(self._k1),
                out,
            )
            return out
        # numpy fallback: evaluate whole blocks, then gather the lanes
        nq = (count >> 2) + 2
        q = (starts >> np.uint64(2))[:, None] + np.arange(nq, dtype=np.uint64)[None, :]
        x0, x1, x2, x3 = philox_blocks_numpy(
            q, reps[:, None], _TAG_SPAN, 0, self._k0, self._k1
        )
        block = np.stack([x0, x1, x2, x3], axis=-1).reshape(starts.size, nq * 4)
        lane0 = (starts & np.uint64(3)).astype(np.int64)
        cols = lane0[:, None] + np.arange(count, dtype=np.int64)[None, :]
        out[:] = np.take_along_axis(block, cols, axis=1)
        return out

    def word_span(self, start, count: int, replicate=0) -> np.ndarray:
        return self.word_span_grid([start], count, [replicate])[0]

    def uniform_span_grid(
        self, starts, count: int, replicates, scale: float = 1.0, offset: float = 0.0
    ) -> np.ndarray:
        """Like :meth:`word_span_grid` but yields scale*u + offset, u in [0,1).

        Bit-identical to ``uniform01(word_span_grid(...)) * scale + offset``;
        the fused kernel just avoids materializing the words.
        """
        if _SPAN_AFFINE_KERNEL is not None:
            starts_u = np.ascontiguousarray(np.atleast_1d(_as_u64_index(starts)))
            reps_u = np.ascontiguousarray(
                np.broadcast_to(_as_u64(replicates), starts_u.shape)
            )
            out = np.empty((starts_u.size, count), dtype=np.float64)
            _SPAN_AFFINE_KERNEL(
                starts_u,
                count,
                reps_u,
                np.uint64(_TAG_SPAN),
                np.uint64(self._k0),
                np.uint64(self._k1),
                float(scale),
                float(offset),
                out,
            )
            return out
        return uniform01(self.word_span_grid(starts, count, replicates)) * scale + offset

    # -- convenience draws ---------------------------------------------------

    def uniform_grid(self, index, replicate=0) -> np.ndarray:
        return uniform01(self.words(index, replicate))

    def digits(self, index, base: int, replicate=0) -> np.ndarray:
        """Uniform integers in {0..base-1}, one per (index, replicate) pair.

        Multiply-high range reduction; the bias is base/2**64 and
        invisible at any feasible sample size.
        """
        with np.errstate(over="ignore"):
            hi, _ = _mulhilo(np.uint64(base), self.words(index, replicate))
        return hi.astype(np.int64)

    # -- sequential cursor ----------------------------------------------------

    def take(self, n: int) -> np.ndarray:
        """Next n words from the stream's cursor (advances the cursor)."""
        idx = np.arange(self.index, self.index + n, dtype=np.uint64)
        self.index += n
        out0, _, _, _ = philox_blocks(idx, 0, _TAG_SEQ, 0, self._k0, self._k1)
        return out0

    def take_uniform(self, n: int) -> np.ndarray:
        return uniform01(self.take(n))

    def take_index_block(self, n: int) -> int:
        """Reserve n replicate slots from the cursor; returns the first slot."""
        first = self.index
        self.index += n
        return first
