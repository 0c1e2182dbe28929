"""Vectorised graph6 codec for batches of equal-order graphs.

Rows are int64 bitmask arrays of shape ``(count, n)``.  Used for the large
candidate files (hundreds of thousands to millions of lines) where decoding
one line at a time would dominate the run time.
"""

from __future__ import annotations

import numpy as np

from .graph import MAX_ORDER, _size_prefix


def _pair_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    ii, jj = [], []
    for j in range(1, n):
        for i in range(j):
            ii.append(i)
            jj.append(j)
    return np.array(ii, dtype=np.int64), np.array(jj, dtype=np.int64)


def line_length(n: int) -> int:
    """Characters per graph6 line of order ``n``, newline excluded."""
    return len(_size_prefix(n)) + (n * (n - 1) // 2 + 5) // 6


def encode_rows(rows: np.ndarray, n: int) -> bytes:
    """graph6 lines (newline-terminated) for every row of ``rows``."""
    count = rows.shape[0]
    prefix = np.frombuffer(_size_prefix(n).encode(), dtype=np.uint8)
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    width = len(prefix) + nchars + 1
    out = np.empty((count, width), dtype=np.uint8)
    out[:, :len(prefix)] = prefix
    out[:, -1] = ord("\n")
    if nchars:
        ii, jj = _pair_index(n)
        bits = ((rows[:, jj] >> ii) & 1).astype(np.uint8)
        padded = np.zeros((count, nchars * 6), dtype=np.uint8)
        padded[:, :nbits] = bits
        weights = np.array([32, 16, 8, 4, 2, 1], dtype=np.uint8)
        vals = (padded.reshape(count, nchars, 6) * weights).sum(axis=2).astype(np.uint8)
        out[:, len(prefix):len(prefix) + nchars] = vals + 63
    return out.tobytes()


def decode_lines(buf: bytes | np.ndarray, n: int) -> np.ndarray:
    """Decode newline-terminated graph6 lines, all of order ``n``.

    Raises ``ValueError`` naming the first offending line (1-based) if any
    line has the wrong length, size prefix, character range or padding.
    """
    if n > MAX_ORDER:
        raise ValueError(f"order {n} exceeds {MAX_ORDER}")
    data = np.frombuffer(buf, dtype=np.uint8) if isinstance(buf, (bytes, bytearray)) else buf
    prefix = np.frombuffer(_size_prefix(n).encode(), dtype=np.uint8)
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    width = len(prefix) + nchars + 1
    if data.size % width:
        raise ValueError(f"line 1: buffer is not a whole number of order-{n} graph6 lines")
    count = data.size // width
    table = data.reshape(count, width)
    bad = np.flatnonzero(table[:, -1] != ord("\n"))
    if bad.size:
        raise ValueError(f"line {bad[0] + 1}: wrong length for order {n}")
    bad = np.flatnonzero((table[:, :len(prefix)] != prefix).any(axis=1))
    if bad.size:
        raise ValueError(f"line {bad[0] + 1}: order differs from {n}")
    body = table[:, len(prefix):len(prefix) + nchars].astype(np.int64) - 63
    bad = np.flatnonzero(((body < 0) | (body > 63)).any(axis=1))
    if bad.size:
        raise ValueError(f"line {bad[0] + 1}: character outside range 63..126")
    rows = np.zeros((count, max(n, 1)), dtype=np.int64)[:, :n]
    if nchars:
        shifts = np.array([5, 4, 3, 2, 1, 0], dtype=np.int64)
        bits = ((body[:, :, None] >> shifts) & 1).reshape(count, nchars * 6)
        if nchars * 6 > nbits:
            bad = np.flatnonzero(bits[:, nbits:].any(axis=1))
            if bad.size:
                raise ValueError(f"line {bad[0] + 1}: padding bits set")
        ii, jj = _pair_index(n)
        bits = bits[:, :nbits]
        for col in range(nbits):
            i, j = ii[col], jj[col]
            b = bits[:, col]
            rows[:, i] |= b << j
            rows[:, j] |= b << i
    return np.ascontiguousarray(rows)
