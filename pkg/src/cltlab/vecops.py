"""Deterministic vector transforms used by the measure constructions.

All functions are pure, operate on 1-D float arrays (with ``*_rows``
batch variants treating axis 0 as independent samples), and compare
against exact 0.0: the zero-sum branch of :func:`sign_normalize` and the
zero-product branch of :func:`conditional_flip` are probability-zero
events for continuous inputs, and adding a tolerance would perturb the
sampled laws, so the literal branch is kept bit-exact.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "sum_vec",
    "prod_vec",
    "sign_normalize",
    "sign_normalize_rows",
    "splice",
    "split_pieces",
    "conditional_flip",
    "conditional_flip_rows",
    "permute",
]


def _as_vector(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected a nonempty 1-D vector, got shape {arr.shape}")
    return arr


def sum_vec(x) -> float:
    """Sum of coordinates."""
    return float(_as_vector(x).sum())


def prod_vec(x) -> float:
    """Product of coordinates."""
    return float(np.prod(_as_vector(x)))


def sign_normalize(x) -> np.ndarray:
    """Flip the vector so its coordinate sum is nonnegative.

    Returns x when sum x > 0, -x when sum x < 0, and the zero vector when
    sum x == 0 exactly.  Consequently sum(sign_normalize(x)) == |sum x|.
    """
    x = _as_vector(x)
    s = x.sum()
    if s > 0:
        return x.copy()
    if s < 0:
        return -x
    return np.zeros_like(x)


def sign_normalize_rows(rows: np.ndarray) -> np.ndarray:
    """Row-wise :func:`sign_normalize` (rows = samples)."""
    rows = np.asarray(rows, dtype=np.float64)
    s = rows.sum(axis=-1, keepdims=True)
    return rows * np.sign(s)


def splice(pieces) -> np.ndarray:
    """Concatenate equal-length pieces into one vector.

    Raises ValueError when the pieces do not share a single length.
    """
    pieces = [_as_vector(p) for p in pieces]
    if not pieces:
        raise ValueError("splice requires at least one piece")
    n = pieces[0].size
    if any(p.size != n for p in pieces):
        raise ValueError(
            f"piece lengths differ: {[p.size for p in pieces]}"
        )
    return np.concatenate(pieces)


def split_pieces(y, piece_len: int) -> list[np.ndarray]:
    """Inverse of :func:`splice`: cut y into pieces of length piece_len."""
    y = _as_vector(y)
    if piece_len < 1 or y.size % piece_len != 0:
        raise ValueError(f"length {y.size} does not split into pieces of {piece_len}")
    k = y.size // piece_len
    return [y[i * piece_len : (i + 1) * piece_len].copy() for i in range(k)]


def conditional_flip(y, piece_len: int, j: int) -> np.ndarray:
    """Negate piece j when every piece sum has the same nonzero sign pattern
    multiplying to a positive product; otherwise return y unchanged.

    y is read as the concatenation of equal pieces of length piece_len;
    the number of pieces is y.size // piece_len.  The multiset of
    absolute coordinate values is always preserved.
    """
    y = _as_vector(y)
    if piece_len < 1 or y.size % piece_len != 0:
        raise ValueError(f"length {y.size} does not split into pieces of {piece_len}")
    k = y.size // piece_len
    if not 0 <= j < k:
        raise ValueError(f"piece index {j} out of range for {k} pieces")
    sums = y.reshape(k, piece_len).sum(axis=1)
    out = y.copy()
    if _positive_product(sums):
        out[j * piece_len : (j + 1) * piece_len] *= -1.0
    return out


def _positive_product(sums: np.ndarray) -> bool:
    # sign bookkeeping instead of np.prod: piece sums of long vectors can
    # overflow/underflow the float range without changing the sign.
    if np.any(sums == 0.0):
        return False
    return int((sums < 0.0).sum()) % 2 == 0


def conditional_flip_rows(rows: np.ndarray, piece_len: int, j) -> np.ndarray:
    """Row-wise :func:`conditional_flip`; j may be scalar or one index per row."""
    rows = np.asarray(rows, dtype=np.float64)
    nrows, width = rows.shape
    k = width // piece_len
    if width % piece_len != 0:
        raise ValueError(f"width {width} does not split into pieces of {piece_len}")
    pieces = rows.reshape(nrows, k, piece_len)
    sums = pieces.sum(axis=2)
    flip = (sums != 0.0).all(axis=1) & ((sums < 0.0).sum(axis=1) % 2 == 0)
    out = pieces.copy()
    jarr = np.broadcast_to(np.asarray(j, dtype=np.int64), (nrows,))
    rows_idx = np.nonzero(flip)[0]
    out[rows_idx, jarr[rows_idx], :] *= -1.0
    return out.reshape(nrows, width)


def permute(x, sigma) -> np.ndarray:
    """Reindex coordinates: output i is input sigma(i).

    sigma must be a permutation of 0..len(x)-1.
    """
    x = _as_vector(x)
    sigma = np.asarray(sigma, dtype=np.int64)
    if sigma.shape != (x.size,) or not np.array_equal(np.sort(sigma), np.arange(x.size)):
        raise ValueError("sigma is not a permutation of the index set")
    return x[sigma]
