"""Timing comparison of the compiled kernels against the numpy fallback.

Run as a script:

    python3 benchmarks/bench_kernels.py [--repeat N]

Workloads mirror the hot paths: syndrome meet-in-the-middle at distance-
search scale, the masked variant used inside the puncture-set search, and
the weight filter over the full 2^22 quadratic completion table.
"""

from __future__ import annotations

import argparse
import random
import timeit

import numpy as np

from triortho._kernels import _pykernels as pyk

try:
    from triortho._kernels import _ckernels as cyk
except ImportError:
    cyk = None

from triortho.classify import _rm_tables


def min_support_case():
    rng = random.Random(1)
    s0 = [rng.getrandbits(32) for _ in range(35)]
    s1 = [rng.getrandbits(3) for _ in range(35)]
    return (s0, s1, 5)


def masked_case():
    rng = random.Random(2)
    rows0 = [rng.getrandbits(30) for _ in range(9)]
    rows1 = [rng.getrandbits(30) for _ in range(3)]
    return (rows0, rows1, 30, 0b1010, 5)


def select_case():
    tu = _rm_tables(2, 6)
    allowed = (1 << 32) | (1 << 34) | (1 << 36) | (1 << 38)
    return (tu, 0x0123_4567_89AB_CDEF, 18, allowed)


CASES = [
    ("min_support_weight", "min_support_weight", min_support_case),
    ("masked_min_support_weight", "masked_min_support_weight", masked_case),
    ("select_weight_hits", "select_weight_hits", select_case),
]


def run(repeat: int) -> None:
    print(f"{'kernel':<28} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for label, attr, case in CASES:
        args = case()
        t_py = min(timeit.repeat(lambda: getattr(pyk, attr)(*args),
                                 number=1, repeat=repeat))
        if cyk is None:
            print(f"{label:<28} {t_py * 1e3:>8.2f}ms {'-':>10} {'-':>8}")
            continue
        expect = getattr(pyk, attr)(*args)
        got = getattr(cyk, attr)(*args)
        same = (np.array_equal(expect, got)
                if isinstance(expect, np.ndarray) else expect == got)
        assert same, f"backend mismatch on {label}"
        t_cy = min(timeit.repeat(lambda: getattr(cyk, attr)(*args),
                                 number=1, repeat=repeat))
        print(f"{label:<28} {t_py * 1e3:>8.2f}ms {t_cy * 1e3:>8.2f}ms "
              f"{t_py / t_cy:>7.1f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions per kernel (default 5)")
    run(parser.parse_args().repeat)


if __name__ == "__main__":
    main()
