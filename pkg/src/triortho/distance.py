"""Z distance of descendant codes, and its maximum over puncture sets.

d_Z is the least weight of a vector orthogonal to every G0 row but not to
all of G1.  The maximum over puncture sets is found by a depth-first walk
over coordinate sets: extending a puncture set can only lower the distance,
so a branch whose current distance does not beat the best known value is
dead.  When the walk exhausts a level without any set reaching distance 2,
the maximum is 1, because full-rank puncture sets of every feasible size
exist (column independence is a matroid condition).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ._kernels import masked_min_support_weight, min_support_weight
from .spaces import DescendantCode, TriorthogonalSpace


@dataclass(frozen=True)
class DistanceResult:
    value: int | None
    cap: int
    exact: bool


def _syndromes(zero_rows, piv_rows, coords):
    s0 = []
    s1 = []
    for q in coords:
        a = 0
        for idx, bits in enumerate(zero_rows):
            if (bits >> q) & 1:
                a |= 1 << idx
        b = 0
        for idx, bits in enumerate(piv_rows):
            if (bits >> q) & 1:
                b |= 1 << idx
        s0.append(a)
        s1.append(b)
    return s0, s1


def z_distance(code: DescendantCode, cap: int = 5) -> DistanceResult:
    """Exact d_Z when it is at most cap, else an exceeds-cap marker."""
    if code.k == 0:
        raise ValueError("d_Z is undefined for a code with no logical qubits")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    s0, s1 = _syndromes(code.g0.rows, code.g1.rows, range(code.n))
    w = min_support_weight(s0, s1, cap)
    return DistanceResult(w if w else None, cap, w != 0)


class _MaxSearch:
    """Depth-first maximization of d_Z over puncture sets of a fixed size."""

    def __init__(self, c: int, target: int, cap: int, skip: int | None):
        self.c = c
        self.target = target
        self.cap = cap
        self.skip = skip
        self.best = 1
        self.exceeded = False

    def _node_distance(self, piv, zeros, chosen, cap):
        excluded = chosen
        if self.skip is not None:
            excluded |= 1 << self.skip
        return masked_min_support_weight(zeros, piv, self.c, excluded, cap)

    def run(self, piv, zeros, chosen, start):
        depth = len(piv)
        if depth == self.target:
            d = self._node_distance(piv, zeros, chosen, self.cap)
            if d == 0:
                self.exceeded = True
            elif d > self.best:
                self.best = d
            return
        for i in range(start, self.c):
            if i == self.skip:
                continue
            w = next((z for z in zeros if (z >> i) & 1), None)
            if w is None:
                continue  # dependent column, full-rank precondition fails
            new_zeros = [z ^ w if (z >> i) & 1 else z for z in zeros if z is not w]
            new_piv = [p ^ w if (p >> i) & 1 else p for p in piv] + [w]
            new_chosen = chosen | 1 << i
            if len(new_piv) < self.target:
                # partial distances only shrink under extension, so the
                # subtree is dead unless the partial distance beats best;
                # scanning with cap = best answers exactly that
                d = self._node_distance(new_piv, new_zeros, new_chosen, self.best)
                if d != 0:
                    continue
            self.run(new_piv, new_zeros, new_chosen, i + 1)
            if self.exceeded:
                return


@lru_cache(maxsize=4096)
def _d_max_even(rows: tuple, c: int, k: int, cap: int) -> DistanceResult:
    search = _MaxSearch(c, k, cap, None)
    search.run([], list(rows), 0, 0)
    if search.exceeded:
        return DistanceResult(None, cap, False)
    return DistanceResult(search.best, cap, True)


@lru_cache(maxsize=4096)
def _d_max_odd(rows: tuple, c: int, k: int, cap: int) -> DistanceResult:
    best = 1
    for j in range(c):
        w = next((b for b in rows if (b >> j) & 1), None)
        if w is None:
            continue
        sub = [b ^ w if (b >> j) & 1 else b for b in rows if b is not w]
        search = _MaxSearch(c, k, cap, j)
        search.best = best
        search.run([], sub, 0, 0)
        if search.exceeded:
            return DistanceResult(None, cap, False)
        best = search.best
    return DistanceResult(best, cap, True)


def d_max_even(s: TriorthogonalSpace, k: int, cap: int = 5) -> DistanceResult:
    """Maximum d_Z over all even descendants with |P| = k."""
    if not s.unital:
        raise ValueError("descendants require a unital space")
    if k < 1 or k >= s.c / 2 or k > s.r:
        raise ValueError(f"no valid puncture set of size {k}")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    return _d_max_even(s.gen.rows, s.c, k, cap)


def d_max_odd(s: TriorthogonalSpace, k: int, cap: int = 5) -> DistanceResult:
    """Maximum d_Z over all odd descendants (P, j) with |P| = k + 1.

    Rows vanishing at j form a hyperplane section of the space; the odd
    descendant for (P, j) is the even-style reduction of that section with
    puncture set P minus j, so the search reuses the even machinery per j.
    """
    if not s.unital:
        raise ValueError("descendants require a unital space")
    if k < 1 or k + 1 >= (s.c + 1) / 2 or k + 1 > s.r:
        raise ValueError(f"no valid puncture pair for k = {k}")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    return _d_max_odd(s.gen.rows, s.c, k, cap)


def feasible_k_range(s: TriorthogonalSpace, parity: str) -> range:
    """Logical qubit counts k admitting a full-rank puncture set."""
    if parity == "even":
        return range(1, min(s.r, s.c // 2 - 1) + 1)
    if parity == "odd":
        return range(1, min(s.r - 1, s.c // 2 - 1) + 1)
    raise ValueError(f"unknown parity {parity!r}")


def d_max_profile(s: TriorthogonalSpace, parity: str,
                  cap: int = 5) -> dict[int, DistanceResult]:
    """d_max for every feasible k of the given parity, ascending.

    Once some k reaches maximum 1, the remaining entries are filled in by
    the monotonicity remark: d_max never increases with k and is at least 1
    wherever a full-rank puncture set exists, which the matroid property of
    column independence guarantees across the whole feasible range.
    """
    fn = d_max_even if parity == "even" else d_max_odd
    out: dict[int, DistanceResult] = {}
    floor_hit = False
    for k in feasible_k_range(s, parity):
        if floor_hit:
            out[k] = DistanceResult(1, cap, True)
            continue
        res = fn(s, k, cap)
        out[k] = res
        if res.exact and res.value == 1:
            floor_hit = True
    return out
