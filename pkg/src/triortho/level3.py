"""Level-3 divisibility of triorthogonal spaces.

A space H in F_2^c is divisible at level 3 when some vector t in Z_8^c
with all entries odd satisfies h . t = 0 mod 8 for every h in H.  Every
such space is triorthogonal; the converse fails, and the fast test here
decides which side a given space falls on.

The decision reduces to the tail of a reduced-echelon basis: with the
pivot block brought to the identity, only the pairwise products of basis
rows on the non-pivot columns matter, and an integer row reduction of
that product matrix settles solvability mod 4.  The remaining entries of
a witness are then forced one basis row at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .f2 import rref
from .spaces import TriorthogonalSpace, is_triorthogonal_space

# Exhausting v over F_2^{c-r} is the oracle's whole job; past this width
# it stops being a test fixture and starts being a space heater.
BRUTE_FORCE_TAIL_LIMIT = 24


@dataclass(frozen=True)
class DivisibilityVerdict:
    """Outcome of a level-3 divisibility test.

    witness, when present, is an all-odd vector over Z_8 of length c in
    the original column order with h . t = 0 mod 8 for every basis row.
    obstruction, when present, is a row (mod 4, indexed by the non-pivot
    columns in ascending order) of the reduced pair-product matrix whose
    entries are all even but whose sum is not 0 mod 4.  The brute-force
    oracle never produces an obstruction.
    """

    divisible: bool
    witness: tuple[int, ...] | None
    obstruction: tuple[int, ...] | None


def _echelon_split(s: TriorthogonalSpace):
    """RREF basis plus pivot / non-pivot column lists (both ascending)."""
    res = rref(s.gen)
    if res.rank != s.r:
        raise ValueError("generator matrix is not full row rank")
    pivots = list(res.pivots)
    pivot_set = set(pivots)
    tail = [j for j in range(s.c) if j not in pivot_set]
    return res.reduced.row_vectors(), pivots, tail


def _tail_pair_products(rows, tail) -> np.ndarray:
    """Pairwise entrywise products of basis rows on the tail columns.

    For a reduced basis the product of two distinct rows vanishes on all
    pivot columns, so restricting to the tail loses nothing.  Every row
    sums to 0 mod 2: the all-one tail vector solves the system over F_2.
    """
    r = len(rows)
    out = np.zeros((r * (r - 1) // 2, len(tail)), dtype=np.int64)
    for idx, (a, b) in enumerate(combinations(range(r), 2)):
        out[idx] = rows[a].wedge(rows[b]).restrict(tail).to_ints()
    assert not np.any(out.sum(axis=1) & 1), "pair products must have even weight"
    return out


def _complete_witness(s, rows, pivots, tail, t_tail) -> tuple[int, ...]:
    """Extend odd tail entries to a full witness, one pivot row at a time.

    Each reduced basis row has a single 1 in the pivot block, so its
    mod-8 constraint fixes the corresponding entry outright.  The tail
    restriction of the row has odd weight (rows of a triorthogonal space
    have even weight), which keeps the forced entry odd.
    """
    t = [0] * s.c
    for pos, col in enumerate(tail):
        t[col] = int(t_tail[pos])
    for a, col in enumerate(pivots):
        dot = sum(w * v for w, v in zip(rows[a].restrict(tail).to_ints(), t_tail))
        t[col] = -int(dot) % 8
        assert t[col] & 1, "forced pivot entry came out even"
    witness = tuple(t)
    assert check_conditions_0_to_3(s, witness)
    return witness


def is_level3_divisible(s: TriorthogonalSpace) -> DivisibilityVerdict:
    """Decide divisibility by integer row reduction of the pair products.

    The product matrix N is lifted to {0,1} integers and row-reduced with
    the exact operations (swap, add) of its F_2 echelon reduction, keeping
    entries mod 4.  The space is divisible iff every resulting row that is
    zero over F_2 has entry sum 0 mod 4; a failing row is returned as the
    obstruction.  Otherwise a witness is assembled by solving the reduced
    system with t on the non-pivot columns set to 1 + 2v, free v entries 0.
    """
    if not is_triorthogonal_space(s.gen):
        raise ValueError("row span is not triorthogonal")
    rows, pivots, tail = _echelon_split(s)
    n4 = _tail_pair_products(rows, tail)

    lead = 0
    pivot_cols: list[int] = []
    for col in range(n4.shape[1]):
        hit = next((i for i in range(lead, n4.shape[0]) if n4[i, col] & 1), None)
        if hit is None:
            continue
        if hit != lead:
            n4[[lead, hit]] = n4[[hit, lead]]
        for i in range(n4.shape[0]):
            if i != lead and n4[i, col] & 1:
                n4[i] = (n4[i] + n4[lead]) % 4
        pivot_cols.append(col)
        lead += 1

    for i in range(lead, n4.shape[0]):
        if n4[i].sum() % 4:
            return DivisibilityVerdict(False, None, tuple(int(x) % 4 for x in n4[i]))

    # Row i constrains t|tail = 1 + 2v by 2 v[pivot] = -row.1 mod 4; the
    # row sum is even, so half of it mod 2 is the forced bit.
    v = np.zeros(len(tail), dtype=np.int64)
    for i, col in enumerate(pivot_cols):
        v[col] = (int(n4[i].sum()) // 2) % 2
    witness = _complete_witness(s, rows, pivots, tail, 1 + 2 * v)
    return DivisibilityVerdict(True, witness, None)


def brute_force_divisible(s: TriorthogonalSpace) -> DivisibilityVerdict:
    """Exhaustive oracle over all odd tail vectors t|tail = 1 + 2v mod 4.

    Checks the mod-4 product condition directly against the unreduced
    pair-product matrix, so it shares no elimination bookkeeping with
    is_level3_divisible.  The first solution in ascending v order (bit i
    of the counter is v_i) is completed to a witness.
    """
    if not is_triorthogonal_space(s.gen):
        raise ValueError("row span is not triorthogonal")
    rows, pivots, tail = _echelon_split(s)
    if len(tail) > BRUTE_FORCE_TAIL_LIMIT:
        raise ValueError(
            f"search budget: need c - r <= {BRUTE_FORCE_TAIL_LIMIT}, got {len(tail)}"
        )
    n_pairs = _tail_pair_products(rows, tail)

    width = len(tail)
    shifts = np.arange(width, dtype=np.int64)
    chunk = 1 << 17
    for start in range(0, 1 << width, chunk):
        stop = min(start + chunk, 1 << width)
        counters = np.arange(start, stop, dtype=np.int64)
        vbits = (counters[:, None] >> shifts) & 1
        bad = ((1 + 2 * vbits) @ n_pairs.T) % 4
        hits = np.nonzero(~bad.any(axis=1))[0]
        if hits.size:
            t_tail = 1 + 2 * vbits[hits[0]]
            witness = _complete_witness(s, rows, pivots, tail, t_tail)
            return DivisibilityVerdict(True, witness, None)
    return DivisibilityVerdict(False, None, None)


def check_conditions_0_to_3(s: TriorthogonalSpace, t: Sequence[int]) -> bool:
    """Verify the four divisibility conditions for t against the basis.

    0: every entry of t is odd; 1: h_a . t = 0 mod 8; 2: products of row
    pairs (a <= b) hit 0 mod 4; 3: products of row triples (a <= b <= c)
    hit 0 mod 2.  Condition 3 holds automatically when t is all odd and
    the space is triorthogonal, but is checked all the same.
    """
    if len(t) != s.c:
        raise ValueError(f"t has length {len(t)}, expected {s.c}")
    if any(x % 2 == 0 for x in t):
        return False
    ints = [list(v.to_ints()) for v in s.gen.row_vectors()]
    r = len(ints)
    for a in range(r):
        if sum(w * x for w, x in zip(ints[a], t)) % 8:
            return False
    for a in range(r):
        for b in range(a, r):
            pair = [x * y for x, y in zip(ints[a], ints[b])]
            if sum(w * x for w, x in zip(pair, t)) % 4:
                return False
    for a in range(r):
        for b in range(a, r):
            pair = [x * y for x, y in zip(ints[a], ints[b])]
            for cc in range(b, r):
                if sum(w * y * x for w, y, x in zip(pair, ints[cc], t)) % 2:
                    return False
    return True
