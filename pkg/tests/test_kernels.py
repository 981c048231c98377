"""Backend parity: the compiled kernels must match numpy and brute force."""

import itertools
import random

import numpy as np
import pytest

import triortho._kernels as kernels
from triortho._kernels import _pykernels as pyk

cyk = pytest.importorskip("triortho._kernels._ckernels")


def brute_min_support(s0, s1, cap):
    c = len(s0)
    for w in range(1, cap + 1):
        for combo in itertools.combinations(range(c), w):
            x0 = x1 = 0
            for i in combo:
                x0 ^= s0[i]
                x1 ^= s1[i]
            if x0 == 0 and x1 != 0:
                return w
    return 0


def columns_of(rows, c):
    return [sum(((r >> i) & 1) << j for j, r in enumerate(rows)) for i in range(c)]


def random_checks(rng, c, bits):
    return [rng.getrandbits(bits) for _ in range(c)]


# ---------------------------------------------------------------------------
# min_support_weight

def test_min_support_weight_matches_brute_force():
    rng = random.Random(11)
    for _ in range(40):
        c = rng.randrange(6, 14)
        s0 = random_checks(rng, c, 10)
        s1 = random_checks(rng, c, 6)
        cap = rng.randrange(1, 5)
        expect = brute_min_support(s0, s1, cap)
        assert pyk.min_support_weight(s0, s1, cap) == expect
        assert cyk.min_support_weight(s0, s1, cap) == expect


def test_min_support_weight_full_word_checks():
    # parity checks using all 64 bits, including the sign bit
    rng = random.Random(12)
    for _ in range(10):
        s0 = random_checks(rng, 10, 64)
        s0[3] = s0[0] ^ s0[1]  # plant a weight-3 solution
        s1 = random_checks(rng, 10, 64)
        expect = brute_min_support(s0, s1, 4)
        assert pyk.min_support_weight(s0, s1, 4) == expect
        assert cyk.min_support_weight(s0, s1, 4) == expect


def test_min_support_weight_no_solution():
    # lone nonzero s0 checks can never cancel
    s0 = [1 << i for i in range(8)]
    s1 = [1] * 8
    assert pyk.min_support_weight(s0, s1, 4) == 0
    assert cyk.min_support_weight(s0, s1, 4) == 0


# ---------------------------------------------------------------------------
# masked_min_support_weight

def brute_masked(rows0, rows1, c, excluded, cap):
    s0 = columns_of(rows0, c)
    s1 = columns_of(rows1, c)
    allowed = [i for i in range(c) if not (excluded >> i) & 1]
    for w in range(1, cap + 1):
        for combo in itertools.combinations(allowed, w):
            x0 = x1 = 0
            for i in combo:
                x0 ^= s0[i]
                x1 ^= s1[i]
            if x0 == 0 and x1 != 0:
                return w
    return 0


def test_masked_min_support_weight_matches_brute_force():
    rng = random.Random(13)
    for _ in range(30):
        c = rng.randrange(8, 16)
        rows0 = [rng.getrandbits(c) for _ in range(rng.randrange(1, 5))]
        rows1 = [rng.getrandbits(c) for _ in range(rng.randrange(1, 3))]
        excluded = rng.getrandbits(c) & rng.getrandbits(c)
        cap = rng.randrange(1, 5)
        expect = brute_masked(rows0, rows1, c, excluded, cap)
        assert pyk.masked_min_support_weight(rows0, rows1, c, excluded, cap) == expect
        assert cyk.masked_min_support_weight(rows0, rows1, c, excluded, cap) == expect


# ---------------------------------------------------------------------------
# select_weight_hits

def test_select_weight_hits_matches_popcount_scan():
    rng = np.random.default_rng(14)
    tu = rng.integers(0, 1 << 63, size=4096, dtype=np.uint64) * np.uint64(2)
    tu ^= rng.integers(0, 2, size=4096, dtype=np.uint64)
    allowed = (1 << 32) | (1 << 34)
    for gh in (0, 0x5A5A_5A5A_5A5A_5A5A, (1 << 64) - 1, 1 << 63):
        w = np.bitwise_count(tu ^ np.uint64(gh)).astype(np.int64) + 18
        expect = np.flatnonzero((w == 32) | (w == 34))
        got_py = pyk.select_weight_hits(tu, gh, 18, allowed)
        got_cy = cyk.select_weight_hits(tu, gh, 18, allowed)
        assert np.array_equal(got_py, expect)
        assert np.array_equal(got_cy, expect)


def test_select_weight_hits_large_gh_regression():
    # gh above 2^63 once overflowed the compiled argument conversion
    tu = np.array([0, (1 << 64) - 1], dtype=np.uint64)
    gh = (1 << 64) - 1
    out = cyk.select_weight_hits(tu, gh, 0, 1)  # only weight 0 allowed
    assert np.array_equal(out, [1])


# ---------------------------------------------------------------------------
# popcount64 and derivative_weights

def test_popcount64_matches_numpy():
    rng = np.random.default_rng(15)
    a = rng.integers(0, 1 << 63, size=1000, dtype=np.uint64)
    a[0], a[1] = 0, (1 << 64) - 1
    assert np.array_equal(pyk.popcount64(a), np.bitwise_count(a))


def brute_derivative_weights(table_bits, npoints):
    out = []
    for e in range(1, npoints):
        out.append(sum(table_bits[x] ^ table_bits[x ^ e] for x in range(npoints)))
    return out


def test_derivative_weights_single_word():
    rng = random.Random(16)
    tables = np.array([rng.getrandbits(16) for _ in range(8)], dtype=np.uint64)
    got = pyk.derivative_weights(tables, 4)
    for row, t in zip(got, tables.tolist()):
        bits = [(t >> x) & 1 for x in range(16)]
        assert row.tolist() == brute_derivative_weights(bits, 16)


def test_derivative_weights_multi_word():
    rng = random.Random(17)
    tables = np.array(
        [[rng.getrandbits(64), rng.getrandbits(64)] for _ in range(5)],
        dtype=np.uint64,
    )
    got = pyk.derivative_weights(tables, 7)
    for row, (lo, hi) in zip(got, tables.tolist()):
        bits = [((lo if x < 64 else hi) >> (x % 64)) & 1 for x in range(128)]
        assert row.tolist() == brute_derivative_weights(bits, 128)


def test_derivative_weights_rejects_width_mismatch():
    with pytest.raises(ValueError):
        pyk.derivative_weights(np.zeros((2, 3), dtype=np.uint64), 7)


# ---------------------------------------------------------------------------
# backend selection

def test_compiled_backend_wins_when_present():
    assert kernels.BACKEND == "compiled"
    assert kernels.select_weight_hits is cyk.select_weight_hits
    assert kernels.popcount64 is pyk.popcount64
