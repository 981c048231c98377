"""Numpy fallback for the hot kernels.

Same contracts as the compiled module; used automatically when the compiled
extension is not available.  See benchmarks/bench_kernels.py for the cost of
running on this backend.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


def popcount64(a: np.ndarray) -> np.ndarray:
    """Per-element popcount of a uint64 array."""
    x = a.astype(np.uint64, copy=True)
    x -= (x >> np.uint64(1)) & _M1
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return ((x * _H01) >> np.uint64(56)).astype(np.uint8)


def select_weight_hits(
    tu: np.ndarray, gh: int, wbase: int, allowed_mask: int
) -> np.ndarray:
    """Indices i where wbase + popcount(tu[i] ^ gh) hits a bit of allowed_mask.

    allowed_mask encodes the admissible total weights as set bits (< 64).
    """
    w = popcount64(tu ^ np.uint64(gh)).astype(np.int64) + wbase
    table = np.array([(allowed_mask >> i) & 1 for i in range(64)], dtype=bool)
    hit = (w < 64) & table[np.minimum(w, 63)]
    return np.nonzero(hit)[0].astype(np.int64)


def _shift_masks(m: int):
    # mask of positions whose bit b of the point index is 0, packed per word
    npoints = 1 << m
    words = max(1, npoints >> 6)
    masks = []
    for b in range(min(m, 6)):
        step = 1 << b
        pattern = 0
        for x in range(64):
            if not (x >> b) & 1:
                pattern |= 1 << x
        if npoints < 64:
            pattern &= (1 << npoints) - 1
        masks.append((step, np.uint64(pattern & 0xFFFFFFFFFFFFFFFF)))
    return npoints, words, masks


def derivative_weights(tables: np.ndarray, m: int) -> np.ndarray:
    """Weights of p(x) + p(x+e) for every nonzero direction e.

    tables has shape (N,) for m <= 6 or (N, 2^m / 64) beyond; the result has
    shape (N, 2^m - 1), direction e at column e - 1.
    """
    npoints = 1 << m
    words = max(1, npoints >> 6)
    if tables.ndim == 1:
        tab = tables.reshape(-1, 1).astype(np.uint64)
    else:
        tab = tables.astype(np.uint64)
    if tab.shape[1] != words:
        raise ValueError("table width does not match m")
    n = tab.shape[0]
    out = np.empty((n, npoints - 1), dtype=np.uint16)
    for e in range(1, npoints):
        shifted = _shift_by(tab, e, m)
        acc = np.zeros(n, dtype=np.uint16)
        for wdx in range(words):
            acc += popcount64(tab[:, wdx] ^ shifted[:, wdx])
        out[:, e - 1] = acc
    return out


def _shift_by(tab: np.ndarray, e: int, m: int) -> np.ndarray:
    """Table of x -> p(x + e), by butterflies per set bit of e."""
    npoints = 1 << m
    cur = tab
    for b in range(m):
        if not (e >> b) & 1:
            continue
        step = 1 << b
        if step < 64:
            sh = np.uint64(step)
            pattern = 0
            for x in range(min(64, npoints)):
                if not (x >> b) & 1:
                    pattern |= 1 << x
            mask = np.uint64(pattern & 0xFFFFFFFFFFFFFFFF)
            cur = ((cur & mask) << sh) | ((cur >> sh) & mask)
        else:
            wstep = step >> 6
            words = cur.shape[1]
            idx = np.arange(words)
            swap = idx ^ wstep
            cur = cur[:, swap]
    return cur


def masked_min_support_weight(rows0, rows1, c: int, excluded: int, cap: int) -> int:
    """min_support_weight over the coordinates of [0, c) not in excluded."""
    s0 = []
    s1 = []
    for q in range(c):
        if (excluded >> q) & 1:
            continue
        a = 0
        for i, bits in enumerate(rows0):
            a |= ((bits >> q) & 1) << i
        b = 0
        for i, bits in enumerate(rows1):
            b |= ((bits >> q) & 1) << i
        s0.append(a)
        s1.append(b)
    return min_support_weight(s0, s1, cap)


def _half_subsets(s0, s1, lo, hi, cap):
    """Subsets of coordinates [lo, hi) of size <= cap, as (weight, x0, x1)."""
    out = [(0, 0, 0)]
    for i in range(lo, hi):
        grown = [(w + 1, x0 ^ s0[i], x1 ^ s1[i]) for w, x0, x1 in out if w < cap]
        out.extend(grown)
    return out


def min_support_weight(s0: list[int], s1: list[int], cap: int) -> int:
    """Smallest support size w <= cap with XOR(s0) = 0 and XOR(s1) != 0.

    s0[i] and s1[i] are the packed parity checks of coordinate i.  Returns 0
    when no support of size <= cap qualifies.  Meet in the middle: for each
    left syndrome keep the two lightest entries with distinct s1 values, which
    is enough to beat any s1 clash on the right half.
    """
    n = len(s0)
    left = _half_subsets(s0, s1, 0, n // 2, cap)
    # map x0 -> two lightest (weight, x1) with distinct x1
    best: dict[int, list[tuple[int, int]]] = {}
    for w, x0, x1 in left:
        slot = best.setdefault(x0, [])
        for idx, (bw, bx1) in enumerate(slot):
            if bx1 == x1:
                if w < bw:
                    slot[idx] = (w, x1)
                break
        else:
            slot.append((w, x1))
            slot.sort()
            del slot[2:]
    found = 0
    for w, x0, x1 in _half_subsets(s0, s1, n // 2, n, cap):
        for lw, lx1 in best.get(x0, ()):
            if lx1 != x1 and 0 < w + lw <= cap:
                if found == 0 or w + lw < found:
                    found = w + lw
    return found
