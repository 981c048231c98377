"""Affine classification of linear-factor-free indicator polynomials.

Three search layers feed one another.  kasami_tokura_reps instantiates the
closed-form families that are complete below twice the minimum distance of
the ambient Reed-Muller code.  classify_rm36_low_weight sweeps cubics on six
variables through their cofactor decomposition and collapses the hits into
affine classes.  classify_unital_spaces combines the closed forms with an
eight-variable cofactor sweep seeded by curated base pairs, strips linear
factors, and verifies every surviving class as a unital triorthogonal
generator.

Class collapsing is two-stage everywhere: a vectorized descent under
elementary affine moves drains the raw hits onto a few locally minimal
tables, which are then merged only after a complete pairwise equivalence
search confirms each merge.  Fingerprints gate the expensive searches but
never decide one.
"""

from __future__ import annotations

import json
import logging
import os
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from ._kernels import popcount64, select_weight_hits
from .affgroup import (
    aff_group_order,
    agl_generators,
    orbit_closure_batch,
    orbit_transversal,
    stabilizer_generators,
)
from .catalog import SIX_VARIABLE_CLASS_REPS
from .rmpoly import (
    AffineFingerprint,
    RMPolynomial,
    SearchBudgetExceeded,
    _elementary_maps,
    _mono_table,
    affine_equivalent,
    affine_fingerprint,
    derivative_weight_multiset,
    linear_factor,
    minimize_monomials,
    parse_polynomial,
    rm_weight_enumerator,
)
from .spaces import indicator_to_generator

_log = logging.getLogger(__name__)

__all__ = [
    "EquivalenceClass",
    "BasePair",
    "SweepResult",
    "kasami_tokura_reps",
    "classify_rm36_low_weight",
    "enumerate_base_pairs",
    "u_sweep",
    "strip_linear_factors",
    "classify_unital_spaces",
]


@dataclass(frozen=True)
class EquivalenceClass:
    """One affine class of polynomials.

    member_count_seen counts the raw search hits assigned to the class;
    closed-form entries contribute one each.  The fingerprint is the
    class invariant used to gate merges.
    """

    representative: RMPolynomial
    weight: int
    fingerprint: AffineFingerprint
    member_count_seen: int

    def __post_init__(self) -> None:
        if self.representative.weight() != self.weight:
            raise ValueError("weight does not match the representative")


@dataclass(frozen=True)
class BasePair:
    """Cofactor seed (g, h) for the eight-variable sweep, with |g| <= |h|."""

    g: RMPolynomial
    h: RMPolynomial
    case_id: int

    def __post_init__(self) -> None:
        if self.g.m != 6 or self.h.m != 6:
            raise ValueError("base polynomials live on six variables")
        if self.g.degree() > 3 or self.h.degree() > 3:
            raise ValueError("base polynomials must be cubic at most")
        if self.g.weight() > self.h.weight():
            raise ValueError("expected |g| <= |h|")
        if not 1 <= self.case_id <= 10:
            raise ValueError(f"unknown case {self.case_id}")


@dataclass(frozen=True)
class SweepResult:
    """Outcome of one cofactor sweep.

    hit_count is the total number of matching completions; when it exceeds
    the budget only the first budget hits were classified and exhaustive is
    False.
    """

    classes: tuple[EquivalenceClass, ...]
    hit_count: int
    exhaustive: bool

    def representatives(self) -> list[RMPolynomial]:
        return [cls.representative for cls in self.classes]


def _mask(lo: int, hi: int) -> int:
    # variable mask x_{lo+1} ... x_{hi}, half open on 0-based positions
    return ((1 << hi) - 1) ^ ((1 << lo) - 1)


def kasami_tokura_reps(s: int, m: int) -> list[RMPolynomial]:
    """Class representatives for weights below 2^(m-s+1) in RM(s, m).

    Every degree-s polynomial of weight w with 2^(m-s) <= w < 2^(m-s+1) is
    affine equivalent to exactly one entry: either a monomial prefix times
    the sum of two disjoint degree-q monomials, or a monomial prefix times a
    full-rank quadratic.  Degrees 0 and 1 degenerate to the constant and a
    single variable.

    >>> [str(p) for p in kasami_tokura_reps(2, 4)]
    ['x1*x2', 'x1*x2 + x3*x4']
    """
    if not 0 <= s <= m or m > 16:
        raise ValueError(f"no representatives for degree {s} on {m} variables")
    if s == 0:
        return [RMPolynomial.one(m)]
    if s == 1:
        return [RMPolynomial.from_monomials(m, [1])]
    reps = []
    for q in range(3, s + 1):
        # x1..x_{s-q} (x_{s-q+1}..x_s + x_{s+1}..x_{s+q}), needs m >= s+q
        if m < s + q:
            continue
        prefix = _mask(0, s - q)
        reps.append(
            RMPolynomial.from_monomials(
                m, [prefix | _mask(s - q, s), prefix | _mask(s, s + q)]
            )
        )
    for q in range(1, (m - s + 2) // 2 + 1):
        # x1..x_{s-2} (x_{s-1} x_s + ... ), q disjoint variable pairs
        prefix = _mask(0, s - 2)
        monos = [
            prefix | (1 << (s - 2 + 2 * i)) | (1 << (s - 1 + 2 * i))
            for i in range(q)
        ]
        reps.append(RMPolynomial.from_monomials(m, monos))
    lo = 1 << (m - s)
    for p in reps:
        assert lo <= p.weight() < 2 * lo
    return reps


@lru_cache(maxsize=4)
def _rm_tables(s: int, m: int) -> np.ndarray:
    """Truth tables of all of RM(s, m) as a uint64 array, m <= 6.

    Built by xor doubling over the monomial tables, so index bit i toggles
    the i-th monomial in the ascending (popcount, mask) order.
    """
    assert m <= 6
    monos = sorted(
        (mask for mask in range(1 << m) if mask.bit_count() <= s),
        key=lambda mask: (mask.bit_count(), mask),
    )
    full = (1 << (1 << m)) - 1
    tabs = np.zeros(1, dtype=np.uint64)
    for mask in monos:
        t = np.uint64(_mono_table(m, mask) & full)
        tabs = np.concatenate([tabs, tabs ^ t])
    return tabs


_SPREAD4 = np.array(
    [sum(((b >> i) & 1) << (4 * i) for i in range(8)) for b in range(256)],
    dtype=np.uint64,
)


def _spread(t: np.ndarray | np.uint64) -> np.ndarray | np.uint64:
    # 16-bit table -> bits placed every 4th position of a 64-bit word
    lo = _SPREAD4[(t & np.uint64(0xFF)).astype(np.int64) if isinstance(t, np.ndarray) else int(t & np.uint64(0xFF))]
    hi = _SPREAD4[((t >> np.uint64(8)) & np.uint64(0xFF)).astype(np.int64) if isinstance(t, np.ndarray) else int((t >> np.uint64(8)) & np.uint64(0xFF))]
    return lo | (hi << np.uint64(32))


def _interleave_quarters(g: int, h: np.ndarray, ghu: np.ndarray) -> np.ndarray:
    """Truth tables of y1 g + y2 h + y1 y2 u on six variables.

    The two new variables occupy the low two index bits, so the cofactor
    value at 4-variable point y lands at index 4y + y1 + 2 y2.  ghu is the
    table of g + h + u, the cofactor at y1 = y2 = 1.
    """
    return (
        (_spread(np.uint64(g)) << np.uint64(1))
        | (_spread(h) << np.uint64(2))
        | (_spread(ghu) << np.uint64(3))
    )


def _perm_luts(perm: tuple[int, ...]) -> np.ndarray:
    """Byte lookup tables for a point permutation on multi-word tables.

    Output bit x of a permuted table is input bit perm[x]; shape is
    (npoints // 8, 256, nwords).
    """
    npoints = len(perm)
    assert npoints % 8 == 0
    nwords = max(1, npoints >> 6)
    luts = np.zeros((npoints >> 3, 256, nwords), dtype=np.uint64)
    bytevals = np.arange(256)
    for x, src in enumerate(perm):
        j, b = divmod(src, 8)
        sel = np.nonzero((bytevals >> b) & 1)[0]
        luts[j, sel, x >> 6] |= np.uint64(1 << (x & 63))
    return luts


def _apply_perm_tables(tables: np.ndarray, luts: np.ndarray) -> np.ndarray:
    out = np.zeros_like(tables)
    for j in range(luts.shape[0]):
        byte = (tables[:, j >> 3] >> np.uint64(8 * (j & 7))) & np.uint64(0xFF)
        out |= luts[j][byte.astype(np.int64)]
    return out


def _rowwise_min(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Lexicographic row minimum of two equal-shape uint64 arrays."""
    out = a.copy()
    take_b = np.zeros(len(a), dtype=bool)
    decided = np.zeros(len(a), dtype=bool)
    for w in range(a.shape[1]):
        lt = ~decided & (b[:, w] < a[:, w])
        decided |= b[:, w] != a[:, w]
        take_b |= lt
    out[take_b] = b[take_b]
    return out


def _descend_tables(
    m: int, tables: np.ndarray, counts: np.ndarray
) -> list[tuple[int, int]]:
    """Flow a hit set to local minima under elementary affine moves.

    Each pass replaces every table by the smallest of itself and its images
    under the moves, then aggregates duplicates; values only decrease, so
    the loop terminates at tables stable under all moves and a batch of
    seeded composite walks.  Millions of hits collapse to a handful of
    minima this way without storing any edges.  Different minima can still
    represent one class; _confirm_classes merges them.  Returns (truth,
    summed count) pairs in ascending table order.
    """
    if len(tables) == 0:
        return []
    luts = [
        _perm_luts(move.point_permutation()) for move in _elementary_maps(m)
    ]
    rng = random.Random(97)

    def aggregate(cur, cnt):
        u, inv = np.unique(cur, axis=0, return_inverse=True)
        agg = np.zeros(len(u), dtype=np.int64)
        np.add.at(agg, inv.reshape(-1), cnt)
        return u, agg

    t, c = aggregate(
        np.ascontiguousarray(tables, dtype=np.uint64),
        np.asarray(counts, dtype=np.int64),
    )
    while True:
        cur, cnt = t, c
        for start in range(0, len(luts), 16):
            for lut in luts[start : start + 16]:
                cur = _rowwise_min(cur, _apply_perm_tables(cur, lut))
            if len(cur) > 4096:
                # descent is per-row, so folding duplicates early only
                # saves work; row order is irrelevant to the outcome
                cur, cnt = aggregate(cur, cnt)
        if len(cur) == len(t) and np.array_equal(cur, t):
            # stable under single moves; seeded composite walks are a cheap
            # way out of shallow basins at any size, and an exhaustive
            # two-move probe closes out small sets.  Whatever survives both
            # is handled by the confirming search.
            for _ in range(400):
                cand = cur
                for _ in range(2 + rng.randrange(2)):
                    cand = _apply_perm_tables(cand, luts[rng.randrange(len(luts))])
                cur = _rowwise_min(cur, cand)
            if np.array_equal(cur, t) and len(t) * t.shape[1] <= 4096:
                for a in luts:
                    mid = _apply_perm_tables(cur, a)
                    for b in luts:
                        cur = _rowwise_min(cur, _apply_perm_tables(mid, b))
            if np.array_equal(cur, t):
                break
        t, c = aggregate(cur, cnt)
    out = []
    for i in range(len(t)):
        truth = 0
        for w, word in enumerate(t[i].tolist()):
            truth |= int(word) << (64 * w)
        out.append((truth, int(c[i])))
    return out


class _ClassMerger:
    """Accumulates affine classes, merging only on confirmed evidence.

    Identical stripped forms merge for free.  Everything else merges only
    when the bounded equivalence search returns a map; the search runs on
    the stripped forms, where it is far cheaper, which is sound because
    ambient forms are equivalent exactly when their hulls have equal
    dimension and the hull restrictions are equivalent.  Hulls beyond six
    variables get a 25x budget (their maps routinely need millions of
    nodes), but once a key bucket has exhausted two searches the remaining
    attempts in it only get a token budget, so hard strata degrade into
    reported over-splits instead of stalls.  A fingerprint never decides
    a merge.
    """

    def __init__(self, search_budget: int = 200_000):
        self.search_budget = search_budget
        self._by_truth: dict[tuple[int, int], dict] = {}
        self._by_key: dict[tuple, list[dict]] = {}
        self.entries: list[dict] = []
        self.exhausted: dict[tuple, int] = {}

    def add(self, ambient: RMPolynomial, stripped: RMPolynomial, count: int):
        tkey = (stripped.m, stripped.truth)
        known = self._by_truth.get(tkey)
        if known is not None:
            known["count"] += count
            return
        key = (stripped.m, stripped.weight(), stripped.degree(),
               derivative_weight_multiset(stripped))
        full = self.search_budget * (25 if stripped.m >= 7 else 1)
        for entry in self._by_key.get(key, ()):
            budget = full if self.exhausted.get(key, 0) < 2 else 10_000
            try:
                found = affine_equivalent(entry["strip"], stripped,
                                          max_nodes=budget)
            except SearchBudgetExceeded:
                self.exhausted[key] = self.exhausted.get(key, 0) + 1
                continue
            if found is not None:
                entry["count"] += count
                self._by_truth[tkey] = entry
                return
        entry = {"poly": ambient, "strip": stripped, "key": key, "count": count}
        self.entries.append(entry)
        self._by_truth[tkey] = entry
        self._by_key.setdefault(key, []).append(entry)

    def log_exhaustions(self):
        for key, misses in sorted(self.exhausted.items()):
            _log.warning(
                "%d equivalence searches among weight-%d minima on %d "
                "variables hit the node budget; colliding classes stay "
                "separate", misses, key[1], key[0],
            )


def _confirm_classes(
    m: int,
    comps: list[tuple[int, int]],
    minimize_budget: int | None = None,
    search_budget: int = 200_000,
) -> list[EquivalenceClass]:
    """Merge descent minima into affine classes.

    Representatives keep the ambient register and are heuristically
    minimized; unresolved collisions stay separate and are reported.
    """
    if minimize_budget is None:
        minimize_budget = 8 if m <= 6 else 3
    merger = _ClassMerger(search_budget)
    for truth, count in comps:
        p = RMPolynomial.from_truth(m, truth)
        merger.add(p, strip_linear_factors(p), count)
    merger.log_exhaustions()
    entries = sorted(merger.entries,
                     key=lambda e: (e["poly"].weight(), e["poly"].truth))
    out = []
    for entry in entries:
        rep = minimize_monomials(entry["poly"], budget=minimize_budget)
        out.append(
            EquivalenceClass(
                representative=rep,
                weight=rep.weight(),
                fingerprint=affine_fingerprint(rep, minimize_budget=1),
                member_count_seen=entry["count"],
            )
        )
    return out


def classify_rm36_low_weight(max_weight: int = 18) -> list[EquivalenceClass]:
    """Affine classes of cubics on six variables up to the given weight.

    Sweeps the cofactor form y1 g + y2 h + y1 y2 u with g, h quadratic and u
    affine on the remaining four variables, which reaches every class in
    this weight range.  Cofactor weights are ordered |g| <= |h| <= |g+h+u|;
    the ordering is safe because coordinate maps permute the three cofactors
    while fixing u's span.

    >>> [cls.weight for cls in classify_rm36_low_weight(14)]
    [8, 12, 14]
    """
    if not 0 <= max_weight <= 18:
        raise ValueError("the cofactor sweep is tuned for weight at most 18")
    quad = _rm_tables(2, 4)
    lin = _rm_tables(1, 4)
    wq = popcount64(quad).astype(np.int64)
    strata = {
        w: quad[wq == w]
        for w in sorted(set(wq.tolist()))
        if 3 * w <= max_weight or w == 0
    }
    batches = []
    for wg, gs in sorted(strata.items()):
        for wh in sorted(set(wq.tolist())):
            if wh < wg or wg + 2 * wh > max_weight:
                continue
            hs = quad[wq == wh]
            for g in gs.tolist():
                gh = hs ^ np.uint64(g)
                for u in lin.tolist():
                    third = gh ^ np.uint64(u)
                    w3 = popcount64(third).astype(np.int64)
                    keep = (w3 >= wh) & (wg + wh + w3 <= max_weight)
                    keep &= wg + wh + w3 > 0
                    if not keep.any():
                        continue
                    batches.append(
                        _interleave_quarters(g, hs[keep], third[keep])
                    )
    if not batches:
        return []
    tables, counts = np.unique(np.concatenate(batches), return_counts=True)
    comps = _descend_tables(6, tables.reshape(-1, 1), counts)
    return _confirm_classes(6, comps)


def _reps_by_weight(weight: int) -> list[RMPolynomial]:
    return [
        parse_polynomial(text, 6)
        for w, text in SIX_VARIABLE_CLASS_REPS
        if w == weight
    ]


@lru_cache(maxsize=None)
def _cubic_weight_census() -> tuple[int, ...]:
    return rm_weight_enumerator(3, 6)


@lru_cache(maxsize=None)
def _weight_stratum(weight: int) -> np.ndarray:
    """All cubic truth tables of one weight on six variables.

    Computed as the affine closure of the canonical representative and
    certified by comparing against the weight enumerator, which doubles as a
    single-class check for this weight.
    """
    reps = _reps_by_weight(weight)
    assert len(reps) == 1, "stratum construction needs a single-class weight"
    perms = [a.point_permutation() for a in agl_generators(6)]
    closure = orbit_closure_batch(
        np.array([reps[0].truth], dtype=np.uint64), perms
    )
    expected = _cubic_weight_census()[weight]
    if len(closure) != expected:
        raise AssertionError(
            f"weight {weight} closure has {len(closure)} tables, census says {expected}"
        )
    return closure


@lru_cache(maxsize=None)
def _stabilizer_perms(weight: int) -> tuple[tuple[int, ...], ...]:
    """Point permutations generating the full stabilizer of the canonical
    weight-12 or weight-14 cubic.

    The target order is the group order divided by the stratum size, valid
    because the weight carries a single class (checked by the sweep on six
    variables); generation certifies the order was reached.
    """
    rep = _reps_by_weight(weight)
    assert len(rep) == 1
    census = _cubic_weight_census()[weight]
    order = aff_group_order(6)
    assert order % census == 0
    maps = stabilizer_generators(rep[0], order // census, seed=0)
    return tuple(a.point_permutation() for a in maps)


def _pairs_cube_cube() -> list[BasePair]:
    """Base pairs with both cofactors of weight eight.

    The first cofactor is fixed as x1*x2*x3; the partner's support is a
    translate of a 3-dimensional span meeting the fixed coordinate block in
    dimension 3 - i, shifted across the block.  Shifts along directions
    inside the span collapse, so the 4 x 8 parameter grid covers 15 distinct
    partners; duplicates are kept so the seed list matches the grid.
    """
    g = parse_polynomial("x1*x2*x3", 6)
    out = []
    for i in range(4):
        dirs = [1 << (3 + a) for a in range(i)] + [1 << b for b in range(3 - i)]
        for t in range(8):
            truth = 0
            for sub in range(8):
                x = t
                for bit in range(3):
                    if (sub >> bit) & 1:
                        x ^= dirs[bit]
                truth |= 1 << x
            out.append(BasePair(g, RMPolynomial.from_truth(6, truth), 7))
    return out


def enumerate_base_pairs(case_id: int) -> list[BasePair]:
    """Seed pairs (g, h) for the eight-variable cofactor sweep.

    Cases by cofactor weights (|g|, |h|): 1 is (0, 0); 2 through 6 pair the
    zero cofactor with the six-variable class representatives of weights 8,
    12, 14, 16 and 18; 7 is (8, 8); 8 is (8, 12) and 9 is (8, 14), one seed
    per orbit of the partner's stabilizer on the weight-8 stratum; 10 is
    (12, 12), the stabilizer acting on the weight-12 stratum.  Case 10 walks
    a 1.7M-table closure and takes minutes.
    """
    if case_id == 1:
        zero = RMPolynomial.zero(6)
        return [BasePair(zero, zero, 1)]
    if case_id in (2, 3, 4, 5, 6):
        weight = {2: 8, 3: 12, 4: 14, 5: 16, 6: 18}[case_id]
        zero = RMPolynomial.zero(6)
        return [BasePair(zero, h, case_id) for h in _reps_by_weight(weight)]
    if case_id == 7:
        return _pairs_cube_cube()
    if case_id in (8, 9):
        partner_weight = 12 if case_id == 8 else 14
        h = _reps_by_weight(partner_weight)[0]
        perms = list(_stabilizer_perms(partner_weight))
        return [
            BasePair(RMPolynomial.from_truth(6, rep), h, case_id)
            for rep, _ in orbit_transversal(_weight_stratum(8), perms)
        ]
    if case_id == 10:
        h = _reps_by_weight(12)[0]
        perms = list(_stabilizer_perms(12))
        return [
            BasePair(RMPolynomial.from_truth(6, rep), h, 10)
            for rep, _ in orbit_transversal(_weight_stratum(12), perms)
        ]
    raise ValueError(f"unknown case {case_id}")


def u_sweep(
    pair: BasePair,
    target_weights: Sequence[int],
    budget: int = 20000,
    monomial_order: Sequence[int] | None = None,
) -> SweepResult:
    """Classify p = y1 g + y2 h + y1 y2 u over all quadratic u on six
    variables, keeping the polynomials whose weight hits target_weights.

    The weight is |g| + |h| + |g + h + u|, so each of the 2^22 candidates
    costs one xor and a popcount.  At most budget hits are classified; the
    result records the true hit count and whether it was exhaustive.
    monomial_order permutes the xor-doubling order of the 22 monomials, for
    order-invariance checks; it bypasses the cached table.
    """
    targets = sorted({int(w) for w in target_weights})
    if not targets or targets[0] < 32 or targets[-1] > 38:
        raise ValueError("target weights must lie in 32..38")
    if budget < 1:
        raise ValueError("budget must be positive")
    monos = sorted(
        (mask for mask in range(64) if mask.bit_count() <= 2),
        key=lambda mask: (mask.bit_count(), mask),
    )
    if monomial_order is None:
        tu = _rm_tables(2, 6)
    else:
        if sorted(monomial_order) != list(range(len(monos))):
            raise ValueError(
                f"monomial_order must permute range({len(monos)})"
            )
        tu = np.zeros(1, dtype=np.uint64)
        for i in monomial_order:
            tu = np.concatenate([tu, tu ^ np.uint64(_mono_table(6, monos[i]))])
    wg, wh = pair.g.weight(), pair.h.weight()
    allowed = 0
    for w in targets:
        allowed |= 1 << w
    gh = pair.g.truth ^ pair.h.truth
    idx = select_weight_hits(tu, gh, wg + wh, allowed)
    hit_count = int(len(idx))
    exhaustive = hit_count <= budget
    idx = idx[:budget]
    if len(idx) == 0:
        return SweepResult((), hit_count, exhaustive)
    tables = np.zeros((len(idx), 4), dtype=np.uint64)
    tables[:, 1] = np.uint64(pair.g.truth)
    tables[:, 2] = np.uint64(pair.h.truth)
    tables[:, 3] = tu[idx] ^ np.uint64(gh)
    tables, counts = np.unique(tables, axis=0, return_counts=True)
    comps = _descend_tables(8, tables, counts)
    return SweepResult(tuple(_confirm_classes(8, comps)), hit_count, exhaustive)


def strip_linear_factors(p: RMPolynomial) -> RMPolynomial:
    """Rewrite p on the affine hull of its support.

    Peeling an affine linear factor halves the ambient space without
    touching the support, so restricting to the hull removes every such
    factor at once and preserves the weight.  Returns p itself when the hull
    is already full.
    """
    if p.truth == 0:
        raise ValueError("the zero polynomial has no factor-free form")
    pts = p.support()
    base = pts[0]
    basis: list[int] = []
    for x in pts:
        v = x ^ base
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    h = len(basis)
    if h == p.m:
        return p
    truth = 0
    for y in range(1 << h):
        x = base
        for i in range(h):
            if (y >> i) & 1:
                x ^= basis[i]
        truth |= ((p.truth >> x) & 1) << y
    out = RMPolynomial.from_truth(h, truth)
    assert out.weight() == p.weight()
    return out


def _load_checkpoint(path, args) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            saved = json.load(fh)
    except (OSError, ValueError):
        return {}
    return saved["done"] if saved.get("args") == args else {}


def _save_checkpoint(path, args, done: dict) -> None:
    if path is None:
        return
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump({"args": args, "done": done}, fh)
    os.replace(tmp, path)


def classify_unital_spaces(
    max_c: int,
    heavy: bool = False,
    budget: int = 20000,
    checkpoint_path: str | os.PathLike | None = None,
) -> list[EquivalenceClass]:
    """Affine classes of linear-factor-free indicators with at most max_c
    support columns, each verified as a unital triorthogonal generator.

    Closed-form families are complete through 30 columns.  Beyond that the
    eight-variable cofactor sweep contributes, seeded case by case; the
    heaviest seed family (case 10) only runs when heavy is set, and a capped
    sweep may miss classes, so pass a generous budget for survey runs.

    checkpoint_path, when given, records each finished base-pair sweep so
    an interrupted run resumes at the first unswept pair.  The file is
    ignored unless it was written with the same arguments.

    >>> [cls.weight for cls in classify_unital_spaces(24)]
    [16, 24]
    """
    if not 0 <= max_c <= 38:
        raise ValueError("classification is certified only up to 38 columns")
    pool: list[tuple[RMPolynomial, int]] = []
    for m in range(4, 9):
        for s in range(0, m - 3):
            for f in kasami_tokura_reps(s, m):
                if f.weight() > max_c or linear_factor(f) is not None:
                    continue
                pool.append((f, 1))
    if max_c > 30:
        targets = tuple(range(32, max_c + 1, 2))
        cases = list(range(1, 10)) + ([10] if heavy else [])
        swept = _load_checkpoint(checkpoint_path, [max_c, heavy, budget])
        for case in cases:
            npairs = swept.get(f"n:{case}")
            if npairs is not None and all(
                f"{case}:{i}" in swept for i in range(npairs)
            ):
                pairs = None  # every sweep of this case is on file
            else:
                pairs = enumerate_base_pairs(case)
                npairs = len(pairs)
                swept[f"n:{case}"] = npairs
            for idx in range(npairs):
                key = f"{case}:{idx}"
                if key not in swept:
                    result = u_sweep(pairs[idx], targets, budget=budget)
                    batch = []
                    for cls in result.classes:
                        st = strip_linear_factors(cls.representative)
                        batch.append([st.m, st.truth, cls.member_count_seen])
                    swept[key] = batch
                    _save_checkpoint(
                        checkpoint_path, [max_c, heavy, budget], swept
                    )
                for h, truth, count in swept[key]:
                    pool.append((RMPolynomial.from_truth(h, truth), count))
    entries: list[dict] = []
    for f, count in pool:
        assert linear_factor(f) is None
        space = indicator_to_generator(f)
        assert space.unital and space.c == f.weight()
        key = (f.m, f.weight(), f.degree(), derivative_weight_multiset(f))
        for entry in entries:
            if entry["key"] != key:
                continue
            try:
                found = affine_equivalent(entry["poly"], f, max_nodes=500_000)
            except SearchBudgetExceeded:
                _log.warning(
                    "equivalence search budget exhausted on %d-column "
                    "indicators; keeping the classes separate", f.weight(),
                )
                continue
            if found is not None:
                entry["count"] += count
                break
        else:
            entries.append({"poly": f, "key": key, "count": count})
    entries.sort(key=lambda e: (e["poly"].weight(), e["poly"].m, e["poly"].truth))
    out = []
    for entry in entries:
        rep = entry["poly"]
        out.append(
            EquivalenceClass(
                representative=rep,
                weight=rep.weight(),
                fingerprint=affine_fingerprint(rep, minimize_budget=2),
                member_count_seen=entry["count"],
            )
        )
    return out
