"""Boolean polynomials in algebraic normal form and the affine group action.

A polynomial on m variables is stored both as a set of monomials (each an
int mask over variables, so x1*x3 on m variables is mask 0b101) and as its
truth table packed into one Python int: the value at the point
x = (x_1, ..., x_m) sits at bit x_1 + 2 x_2 + ... + 2^(m-1) x_m, i.e. x_1 is
the least significant index bit.
"""

from __future__ import annotations

import random
import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .f2 import BitMatrix, BitVector, ParseError


class SearchBudgetExceeded(RuntimeError):
    """An equivalence search hit its node budget without a verdict."""


@lru_cache(maxsize=None)
def _var_table(m: int, i: int) -> int:
    """Truth table of the coordinate function x_{i+1}."""
    out = 0
    for x in range(1 << m):
        if (x >> i) & 1:
            out |= 1 << x
    return out


@lru_cache(maxsize=None)
def _mono_table(m: int, mask: int) -> int:
    table = (1 << (1 << m)) - 1
    mm = mask
    while mm:
        i = (mm & -mm).bit_length() - 1
        table &= _var_table(m, i)
        mm &= mm - 1
    return table


@lru_cache(maxsize=None)
def _zero_bit_mask(m: int, b: int) -> int:
    """Positions of the table whose index has bit b clear."""
    out = 0
    for x in range(1 << m):
        if not (x >> b) & 1:
            out |= 1 << x
    return out


def truth_shift(truth: int, e: int, m: int) -> int:
    """Table of x -> p(x + e)."""
    t = truth
    ee = e
    while ee:
        b = (ee & -ee).bit_length() - 1
        step = 1 << b
        mask = _zero_bit_mask(m, b)
        t = ((t & mask) << step) | ((t >> step) & mask)
        ee &= ee - 1
    return t


def _mobius(table: int, m: int) -> int:
    """Binary Mobius transform; it is an involution, so it converts truth
    tables to ANF coefficient tables and back."""
    t = table
    for b in range(m):
        step = 1 << b
        mask = _zero_bit_mask(m, b)
        t ^= (t & mask) << step
    return t


@dataclass(frozen=True)
class RMPolynomial:
    m: int
    monomials: frozenset[int]
    truth: int

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValueError("negative variable count")
        for mask in self.monomials:
            if mask < 0 or mask >> self.m:
                raise ValueError(f"monomial mask {mask:#x} outside {self.m} variables")
        if self.truth < 0 or self.truth >> (1 << self.m):
            raise ValueError("truth table outside the point range")

    @classmethod
    def zero(cls, m: int) -> "RMPolynomial":
        return cls(m, frozenset(), 0)

    @classmethod
    def one(cls, m: int) -> "RMPolynomial":
        return cls(m, frozenset({0}), (1 << (1 << m)) - 1)

    @classmethod
    def from_monomials(cls, m: int, monomials: Iterable[int]) -> "RMPolynomial":
        acc: set[int] = set()
        for mask in monomials:
            acc.symmetric_difference_update({mask})
        truth = 0
        for mask in acc:
            truth ^= _mono_table(m, mask)
        return cls(m, frozenset(acc), truth)

    @classmethod
    def from_truth(cls, m: int, truth: int) -> "RMPolynomial":
        coeffs = _mobius(truth, m)
        monos = frozenset(
            mask for mask in range(1 << m) if (coeffs >> mask) & 1
        )
        return cls(m, monos, truth)

    def weight(self) -> int:
        return self.truth.bit_count()

    def degree(self) -> int:
        if not self.monomials:
            return 0
        return max(mask.bit_count() for mask in self.monomials)

    def value(self, x: int) -> int:
        return (self.truth >> x) & 1

    def support(self) -> tuple[int, ...]:
        return tuple(x for x in range(1 << self.m) if (self.truth >> x) & 1)

    def __xor__(self, other: "RMPolynomial") -> "RMPolynomial":
        if self.m != other.m:
            raise ValueError("variable count mismatch")
        return RMPolynomial(
            self.m,
            self.monomials ^ other.monomials,
            self.truth ^ other.truth,
        )

    def __str__(self) -> str:
        return format_polynomial(self)


def truth_table(p: RMPolynomial) -> int:
    return p.truth


def anf_from_truth(truth: int, m: int) -> RMPolynomial:
    return RMPolynomial.from_truth(m, truth)


def weight(p: RMPolynomial) -> int:
    return p.weight()


def degree(p: RMPolynomial) -> int:
    return p.degree()


def derivative(p: RMPolynomial, e: int) -> RMPolynomial:
    """p(x) + p(x + e)."""
    if e < 0 or e >> p.m:
        raise ValueError("direction outside the point range")
    return RMPolynomial.from_truth(p.m, p.truth ^ truth_shift(p.truth, e, p.m))


# ---------------------------------------------------------------------------
# parsing and formatting

_TOKEN = re.compile(r"x(\d+)|1|0")


def parse_polynomial(text: str, m: int | None = None) -> RMPolynomial:
    """Grammar: terms joined by '+', each term a '*'-separated product of
    x<i> (1-based) or the literal 1; '0' alone denotes the zero polynomial.
    Whitespace is insignificant.  m defaults to the largest index used."""
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty polynomial text")
    masks = []
    max_var = 0
    for term in stripped.split("+"):
        term = term.strip()
        if not term:
            raise ParseError("empty term (stray '+')")
        mask = 0
        saw_zero = False
        for factor in term.split("*"):
            factor = factor.strip()
            match = _TOKEN.fullmatch(factor)
            if match is None:
                raise ParseError(f"bad token {factor!r}")
            if factor == "0":
                saw_zero = True
            elif factor != "1":
                idx = int(match.group(1))
                if idx < 1:
                    raise ParseError(f"bad token {factor!r}: indices are 1-based")
                mask |= 1 << (idx - 1)
                max_var = max(max_var, idx)
        if not saw_zero:
            masks.append(mask)
    if m is None:
        m = max_var
    elif max_var > m:
        raise ParseError(f"token x{max_var} exceeds the declared {m} variables")
    return RMPolynomial.from_monomials(m, masks)


def format_polynomial(p: RMPolynomial) -> str:
    if not p.monomials:
        return "0"
    def term(mask: int) -> str:
        if mask == 0:
            return "1"
        return "*".join(f"x{i + 1}" for i in range(p.m) if (mask >> i) & 1)
    ordered = sorted(p.monomials, key=lambda mask: (mask.bit_count(), mask))
    return " + ".join(term(mask) for mask in ordered)


# ---------------------------------------------------------------------------
# affine maps

@dataclass(frozen=True)
class AffineMap:
    """x -> Lx + ell with L invertible."""

    linear: BitMatrix
    shift: BitVector

    def __post_init__(self) -> None:
        if self.linear.nrows != self.linear.cols:
            raise ValueError("linear part is not square")
        if self.shift.n != self.linear.cols:
            raise ValueError("shift length does not match")
        if self.linear.rank() != self.linear.cols:
            raise ValueError("linear part is singular")

    @property
    def m(self) -> int:
        return self.linear.cols

    @classmethod
    def identity(cls, m: int) -> "AffineMap":
        return cls(BitMatrix.identity(m), BitVector.zeros(m))

    @classmethod
    def translation(cls, m: int, shift_mask: int) -> "AffineMap":
        return cls(BitMatrix.identity(m), BitVector(m, shift_mask))

    def apply_point(self, x: int) -> int:
        v = BitVector(self.m, x)
        return self.linear.apply(v).bits ^ self.shift.bits

    def point_permutation(self) -> tuple[int, ...]:
        return tuple(self.apply_point(x) for x in range(1 << self.m))

    def inverse(self) -> "AffineMap":
        from .f2 import inverse as f2_inverse

        linv = f2_inverse(self.linear)
        return AffineMap(linv, linv.apply(self.shift))


def compose(a: AffineMap, b: AffineMap) -> AffineMap:
    """The map x -> a(b(x))."""
    if a.m != b.m:
        raise ValueError("variable count mismatch")
    lin = a.linear.mul(b.linear)
    shift = BitVector(a.m, a.linear.apply(b.shift).bits ^ a.shift.bits)
    return AffineMap(lin, shift)


def apply_affine(p: RMPolynomial, a: AffineMap) -> RMPolynomial:
    """The polynomial x -> p(a(x))."""
    if a.m != p.m:
        raise ValueError("variable count mismatch")
    truth = 0
    for x in range(1 << p.m):
        truth |= ((p.truth >> a.apply_point(x)) & 1) << x
    return RMPolynomial.from_truth(p.m, truth)


def random_affine_map(m: int, rng: random.Random) -> AffineMap:
    while True:
        mat = BitMatrix(m, tuple(rng.getrandbits(m) for _ in range(m)))
        if mat.rank() == m:
            return AffineMap(mat, BitVector(m, rng.getrandbits(m)))


# ---------------------------------------------------------------------------
# linear factors

def linear_factor(p: RMPolynomial) -> RMPolynomial | None:
    """An affine-linear u with support(p) inside {u = 1}, or None.

    Scans the 2(2^m - 1) nonconstant affine functionals in a fixed order, so
    ties resolve deterministically.  The zero polynomial is rejected.
    """
    if p.truth == 0:
        raise ValueError("the zero polynomial divides everything")
    full = (1 << (1 << p.m)) - 1
    for lmask in range(1, 1 << p.m):
        table = 0
        mm = lmask
        while mm:
            i = (mm & -mm).bit_length() - 1
            table ^= _var_table(p.m, i)
            mm &= mm - 1
        for c in (0, 1):
            utable = table ^ (full if c else 0)
            if p.truth & ~utable == 0:
                monos = [1 << i for i in range(p.m) if (lmask >> i) & 1]
                if c:
                    monos.append(0)
                return RMPolynomial.from_monomials(p.m, monos)
    return None


# ---------------------------------------------------------------------------
# monomial minimization and fingerprints

def _elementary_maps(m: int) -> list[AffineMap]:
    maps = []
    ident = BitMatrix.identity(m)
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            # substitute x_i <- x_i + x_j
            rows = list(ident.rows)
            rows[j] ^= 1 << i
            maps.append(AffineMap(BitMatrix(m, tuple(rows)), BitVector.zeros(m)))
    for i in range(m):
        for j in range(i + 1, m):
            rows = list(ident.rows)
            rows[i], rows[j] = rows[j], rows[i]
            maps.append(AffineMap(BitMatrix(m, tuple(rows)), BitVector.zeros(m)))
    for i in range(m):
        maps.append(AffineMap(ident, BitVector(m, 1 << i)))
    return maps


def _greedy_minimize(p: RMPolynomial, moves: Sequence[AffineMap]) -> RMPolynomial:
    best = p
    improved = True
    while improved:
        improved = False
        for mv in moves:
            cand = apply_affine(best, mv)
            if len(cand.monomials) < len(best.monomials):
                best = cand
                improved = True
                break
    return best


def minimize_monomials(
    p: RMPolynomial, budget: int = 40, seed: int = 0
) -> RMPolynomial:
    """Search the affine orbit of p for a small ANF.

    Greedy descent over elementary substitutions, restarted from random
    affine images of the best candidate; deterministic for a fixed seed.
    The result is affine equivalent to p but not guaranteed minimal.
    """
    if p.m == 0:
        return p
    moves = _elementary_maps(p.m)
    rng = random.Random(seed)
    best = _greedy_minimize(p, moves)
    for _ in range(budget):
        if len(best.monomials) <= 1:
            break
        scrambled = apply_affine(best, random_affine_map(p.m, rng))
        cand = _greedy_minimize(scrambled, moves)
        if len(cand.monomials) < len(best.monomials):
            best = cand
    return best


def derivative_weight_multiset(p: RMPolynomial) -> tuple[int, ...]:
    """Sorted weights of p(x) + p(x+e) over all nonzero directions e."""
    out = [
        (p.truth ^ truth_shift(p.truth, e, p.m)).bit_count()
        for e in range(1, 1 << p.m)
    ]
    return tuple(sorted(out))


@dataclass(frozen=True)
class AffineFingerprint:
    """Cheap affine invariants plus an advisory minimized monomial count.

    The first three fields are equal for affine-equivalent polynomials; the
    monomial count is heuristic and must never be used to merge classes.
    """

    weight: int
    degree: int
    derivative_weights: tuple[int, ...]
    minimized_monomials: int

    def key(self) -> tuple:
        return (self.weight, self.degree, self.derivative_weights)


def affine_fingerprint(
    p: RMPolynomial, minimize_budget: int = 10, seed: int = 0
) -> AffineFingerprint:
    return AffineFingerprint(
        weight=p.weight(),
        degree=p.degree(),
        derivative_weights=derivative_weight_multiset(p),
        minimized_monomials=len(
            minimize_monomials(p, budget=minimize_budget, seed=seed).monomials
        ),
    )


# ---------------------------------------------------------------------------
# affine equivalence search

def _point_labels(p: RMPolynomial, dw: Sequence[int]) -> list[tuple]:
    """Per-point invariants: the value at x and the multiset of
    (derivative weight, value at x+e) pairs over directions e."""
    n = 1 << p.m
    shifted = [truth_shift(p.truth, e, p.m) for e in range(1, n)]
    labels = []
    for x in range(n):
        pairs = sorted(
            (dw[e - 1], (shifted[e - 1] >> x) & 1) for e in range(1, n)
        )
        labels.append(((p.truth >> x) & 1, tuple(pairs)))
    return labels


def affine_equivalent(
    p: RMPolynomial,
    q: RMPolynomial,
    seed: int | None = None,
    max_nodes: int | None = None,
) -> AffineMap | None:
    """An affine map a with p(a(x)) = q(x) for all x, or None if none exists.

    The backtracking search is complete, so None is a proof of inequivalence;
    if max_nodes is hit first, SearchBudgetExceeded is raised instead.  A
    seed shuffles the branching order, which is how stabilizer elements are
    sampled; the answer map may differ across seeds but its validity is
    checked before returning.
    """
    if p.m != q.m:
        return None
    m = p.m
    if p.weight() != q.weight() or p.degree() != q.degree():
        return None
    if m == 0:
        return AffineMap.identity(0) if p.truth == q.truth else None
    dwp = [
        (p.truth ^ truth_shift(p.truth, e, m)).bit_count() for e in range(1, 1 << m)
    ]
    dwq = [
        (q.truth ^ truth_shift(q.truth, e, m)).bit_count() for e in range(1, 1 << m)
    ]
    if sorted(dwp) != sorted(dwq):
        return None
    labp = _point_labels(p, dwp)
    labq = _point_labels(q, dwq)
    if sorted(labp) != sorted(labq):
        return None

    pool: dict[tuple, list[int]] = defaultdict(list)
    for x, lab in enumerate(labp):
        pool[lab].append(x)
    rng = random.Random(seed) if seed is not None else None

    nodes = 0

    def candidates(label: tuple) -> list[int]:
        cands = list(pool.get(label, ()))
        if rng is not None:
            rng.shuffle(cands)
        return cands

    def search(depth: int, t: int, cols: list[int], span: set[int], img: list[int]):
        nonlocal nodes
        if depth == m:
            lin = BitMatrix(
                m, tuple(sum(((c >> r) & 1) << i for i, c in enumerate(cols))
                         for r in range(m))
            )
            return AffineMap(lin, BitVector(m, t))
        for y in candidates(labq[1 << depth]):
            nodes += 1
            if max_nodes is not None and nodes > max_nodes:
                raise SearchBudgetExceeded(f"equivalence search passed {max_nodes} nodes")
            c = y ^ t
            if c in span:
                continue
            ok = True
            new_img = img + [v ^ c for v in img]
            half = len(img)
            for s in range(half, 2 * half):
                v = (s - half) | (1 << depth)
                ximg = new_img[s]
                if ((q.truth >> v) & 1) != ((p.truth >> ximg) & 1):
                    ok = False
                    break
                if labq[v] != labp[ximg]:
                    ok = False
                    break
            if not ok:
                continue
            found = search(
                depth + 1, t, cols + [c], span | {v ^ c for v in span}, new_img
            )
            if found is not None:
                return found
        return None

    for t in candidates(labq[0]):
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise SearchBudgetExceeded(f"equivalence search passed {max_nodes} nodes")
        found = search(0, t, [], {0}, [t])
        if found is not None:
            check = apply_affine(p, found)
            if check.truth != q.truth:
                raise AssertionError("equivalence search returned a bad map")
            return found
    return None


# ---------------------------------------------------------------------------
# Reed-Muller weight enumerators

def _rm_monomials(s: int, m: int) -> list[int]:
    return [mask for mask in range(1 << m) if mask.bit_count() <= s]


def _enumerate_weights(s: int, m: int) -> tuple[int, ...]:
    import numpy as np

    npoints = 1 << m
    words = max(1, npoints >> 6)
    tables = np.zeros((1, words), dtype=np.uint64)
    for mask in _rm_monomials(s, m):
        t = _mono_table(m, mask)
        row = np.array(
            [(t >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(words)],
            dtype=np.uint64,
        )
        tables = np.concatenate([tables, tables ^ row])
    from ._kernels import popcount64

    weights = np.zeros(len(tables), dtype=np.int64)
    for w in range(words):
        weights += popcount64(tables[:, w]).astype(np.int64)
    counts = np.bincount(weights, minlength=npoints + 1)
    return tuple(int(c) for c in counts)


def krawtchouk(n: int, j: int, i: int) -> int:
    return sum((-1) ** t * comb(i, t) * comb(n - i, j - t) for t in range(j + 1))


def macwilliams(dist: Sequence[int], n: int) -> tuple[int, ...]:
    """Weight distribution of the dual code from a code's distribution."""
    size = sum(dist)
    out = []
    for j in range(n + 1):
        acc = sum(dist[i] * krawtchouk(n, j, i) for i in range(n + 1))
        if acc % size:
            raise ValueError("distribution is not a linear code's")
        out.append(acc // size)
    return tuple(out)


def rm_weight_enumerator(s: int, m: int) -> tuple[int, ...]:
    """Weight distribution of RM(s, m), index w = number of codewords of
    weight w.  Enumerates directly when the dimension allows, otherwise goes
    through the dual distribution."""
    npoints = 1 << m
    if s < 0:
        return tuple(1 if w == 0 else 0 for w in range(npoints + 1))
    if s >= m:
        return tuple(comb(npoints, w) for w in range(npoints + 1))
    dim = sum(comb(m, i) for i in range(s + 1))
    if dim <= 22:
        return _enumerate_weights(s, m)
    dual_dim = npoints - dim
    if dual_dim > 22:
        raise ValueError(f"RM({s},{m}) is too large to enumerate")
    dual = _enumerate_weights(m - s - 1, m)
    return macwilliams(dual, npoints)
