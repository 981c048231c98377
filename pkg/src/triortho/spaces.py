"""Triorthogonal spaces, their descendant CSS codes, and unitalization.

A triorthogonal space is a subspace of F_2^c in which every triple of
vectors (repeats allowed) has even triple overlap.  Unital spaces contain
the all-one vector.  Puncturing a coordinate set P (plus, in the odd case,
a distinguished coordinate j) yields a CSS code whose X stabilizers come
from the even-weight block G0 and whose X logicals come from the odd-weight
block G1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .f2 import BitMatrix, BitVector, format_matrix, in_rowspan, parse_matrix, rref
from .rmpoly import RMPolynomial, linear_factor


class LinearFactorError(ValueError):
    """Raised when an indicator polynomial has an affine-linear factor."""

    def __init__(self, factor: RMPolynomial):
        super().__init__(f"indicator polynomial has linear factor {factor}")
        self.factor = factor


def is_triorthogonal_space(h: BitMatrix) -> bool:
    """True iff every triple of rows (repeats allowed) has even overlap.

    By multilinearity this is equivalent to the condition over the whole
    row span, so checking basis triples a <= b <= c suffices.
    """
    rows = h.row_vectors()
    r = len(rows)
    for a in range(r):
        for b in range(a, r):
            ab = rows[a].wedge(rows[b])
            for c in range(b, r):
                if ab.wedge(rows[c]).weight() % 2:
                    return False
    return True


def verify_triorthogonal_matrix(g1: BitMatrix, g0: BitMatrix) -> bool:
    """Check pair/triple orthogonality and the weight parity of each block."""
    rows = list(g1.row_vectors()) + list(g0.row_vectors())
    k = g1.nrows
    for a, u in enumerate(rows):
        if u.weight() % 2 != (1 if a < k else 0):
            return False
    n = len(rows)
    for a in range(n):
        for b in range(a + 1, n):
            ab = rows[a].wedge(rows[b])
            if ab.weight() % 2:
                return False
            for c in range(b + 1, n):
                if ab.wedge(rows[c]).weight() % 2:
                    return False
    return True


@dataclass(frozen=True)
class TriorthogonalSpace:
    """A triorthogonal subspace given by a full-row-rank generator matrix."""

    gen: BitMatrix
    unital: bool

    @property
    def c(self) -> int:
        return self.gen.cols

    @property
    def r(self) -> int:
        return self.gen.nrows

    @staticmethod
    def from_generator(gen: BitMatrix) -> "TriorthogonalSpace":
        if gen.rank() != gen.nrows:
            raise ValueError("generator matrix is not full row rank")
        if not is_triorthogonal_space(gen):
            raise ValueError("row span is not triorthogonal")
        unital = gen.cols % 2 == 0 and in_rowspan(gen, BitVector.ones(gen.cols))
        return TriorthogonalSpace(gen, unital)


@dataclass(frozen=True)
class DescendantCode:
    """CSS code from puncturing a triorthogonal space.

    Coordinates of the code are the complement of P in ascending order.
    origin, when present, is (parent space, sorted P tuple, j or None).
    """

    g1: BitMatrix
    g0: BitMatrix
    parity: str
    origin: tuple | None = None

    @property
    def n(self) -> int:
        return self.g1.cols

    @property
    def k(self) -> int:
        return self.g1.nrows

    def stacked(self) -> BitMatrix:
        return self.g1.stack(self.g0)


def indicator_to_generator(p: RMPolynomial) -> TriorthogonalSpace:
    """Build the space whose generator columns are the lifted support of p.

    The generator is (m+1) x |p|: an all-one first row, then the coordinate
    values over supp(p) in ascending point order.  A linear factor would
    force a rank deficit, so it is rejected up front.
    """
    if p.truth == 0:
        raise ValueError("zero polynomial has no indicator matrix")
    factor = linear_factor(p)
    if factor is not None:
        raise LinearFactorError(factor)
    pts = p.support()
    c = len(pts)
    rows = [(1 << c) - 1]
    for i in range(p.m):
        bits = 0
        for col, x in enumerate(pts):
            if (x >> i) & 1:
                bits |= 1 << col
        rows.append(bits)
    gen = BitMatrix(c, tuple(rows))
    return TriorthogonalSpace.from_generator(gen)


def generator_to_indicator(h: BitMatrix) -> RMPolynomial:
    """Inverse of indicator_to_generator up to column permutation."""
    if h.nrows == 0 or h.row(0).weight() != h.cols:
        raise ValueError("first row must be all-one")
    m = h.nrows - 1
    truth = 0
    for col in range(h.cols):
        x = 0
        for i in range(m):
            if (h.rows[1 + i] >> col) & 1:
                x |= 1 << i
        if (truth >> x) & 1:
            raise ValueError(f"repeated column at index {col}")
        truth |= 1 << x
    return RMPolynomial.from_truth(m, truth)


def _split_blocks(reduced: BitMatrix, pivot_count: int, keep: list[int],
                  parity: str, origin: tuple) -> DescendantCode:
    g1 = BitMatrix(reduced.cols, reduced.rows[:pivot_count]).restrict_columns(keep)
    g0 = BitMatrix(reduced.cols, reduced.rows[pivot_count:]).restrict_columns(keep)
    code = DescendantCode(g1, g0, parity, origin)
    # cheap post-hoc guard against coordinate convention bugs
    if not verify_triorthogonal_matrix(g1, g0):
        raise AssertionError("descendant failed triorthogonality recheck")
    return code


def even_descendant(s: TriorthogonalSpace, P) -> DescendantCode:
    """Puncture the coordinate set P; k = |P|, n = c - |P|."""
    if not s.unital:
        raise ValueError("even descendant requires a unital space")
    pset = sorted(set(P))
    p = len(pset)
    if p >= s.c / 2:
        raise ValueError(f"|P| = {p} must be < c/2 = {s.c / 2}")
    rest = [i for i in range(s.c) if i not in set(pset)]
    res = rref(s.gen, column_order=pset + rest)
    if sum(1 for pv in res.pivots if pv in set(pset)) != p:
        raise ValueError("restriction of the space to P is not full rank")
    return _split_blocks(res.reduced, p, rest, "even", (s, tuple(pset), None))


def odd_descendant(s: TriorthogonalSpace, P, j: int) -> DescendantCode:
    """Puncture P with distinguished coordinate j; k = |P| - 1, n = c - |P|."""
    if not s.unital:
        raise ValueError("odd descendant requires a unital space")
    pset = sorted(set(P))
    p = len(pset)
    if j not in set(pset):
        raise ValueError(f"distinguished coordinate {j} is not in P")
    if p >= (s.c + 1) / 2:
        raise ValueError(f"|P| = {p} must be < (c+1)/2 = {(s.c + 1) / 2}")
    # basis of the subspace vanishing at j; the all-one row is dropped
    rows = list(s.gen.row_vectors())
    w = next((v for v in rows if v.get(j)), None)
    if w is None:
        raise ValueError(f"no basis vector is supported on coordinate {j}")
    sub = [v ^ w if v.get(j) else v for v in rows if v is not w]
    m = BitMatrix.from_vectors(sub) if sub else BitMatrix.zeros(0, s.c)
    inner = [i for i in pset if i != j]
    rest = [i for i in range(s.c) if i not in set(pset)]
    res = rref(m, column_order=inner + rest + [j])
    if sum(1 for pv in res.pivots if pv in set(inner)) != p - 1:
        raise ValueError("restriction of the space to P is not full rank")
    return _split_blocks(res.reduced, p - 1, rest, "odd", (s, tuple(pset), j))


def unitalize(code: DescendantCode) -> TriorthogonalSpace:
    """Reconstruct a unital parent space on n+k (+1 if that is odd) coordinates.

    Odd n+k: pad with an all-one row and a fresh leading coordinate.  Even
    n+k: adjoin 1_n + sum of G1 rows to G0 when it is not already a
    stabilizer, then prepend the identity block.
    """
    n, k = code.n, code.k
    if (n + k) % 2:
        c = n + k + 1
        rows = [(1 << c) - 1]
        for i in range(k):
            rows.append((1 << (1 + i)) | code.g1.rows[i] << (1 + k))
        for b in code.g0.rows:
            rows.append(b << (1 + k))
        return TriorthogonalSpace.from_generator(BitMatrix(c, tuple(rows)))
    v = BitVector.ones(n)
    for u in code.g1.row_vectors():
        v = v ^ u
    g0 = code.g0
    if not in_rowspan(g0, v):
        g0 = g0.stack(BitMatrix.from_vectors([v]))
    c = n + k
    rows = []
    for i in range(k):
        rows.append((1 << i) | code.g1.rows[i] << k)
    for b in g0.rows:
        rows.append(b << k)
    return TriorthogonalSpace.from_generator(BitMatrix(c, tuple(rows)))


def rank_g0_check(code: DescendantCode) -> bool:
    """Lower bound on rank(G0) implied by d_Z >= 2: 4 for even parent
    dimension, 3 for odd.  Returns True when d_Z < 2 or k = 0 (no claim)."""
    if code.k == 0:
        return True
    for i in range(code.n):
        if all((b >> i) & 1 == 0 for b in code.g0.rows):
            if any((b >> i) & 1 for b in code.g1.rows):
                return True  # weight-1 logical, lemma precondition unmet
    if code.origin is not None:
        r = code.origin[0].r
    else:
        r = unitalize(code).r
    need = 4 if r % 2 == 0 else 3
    return code.g0.rank() >= need


def columns_sorted(m: BitMatrix) -> BitMatrix:
    """Canonical form under column permutation: columns sorted ascending."""
    cols = []
    for j in range(m.cols):
        v = 0
        for a in range(m.nrows):
            if (m.rows[a] >> j) & 1:
                v |= 1 << a
        cols.append(v)
    cols.sort()
    rows = [0] * m.nrows
    for j, v in enumerate(cols):
        for a in range(m.nrows):
            if (v >> a) & 1:
                rows[a] |= 1 << j
    return BitMatrix(m.cols, tuple(rows))


def same_up_to_column_permutation(a: BitMatrix, b: BitMatrix) -> bool:
    return a.cols == b.cols and a.nrows == b.nrows and \
        columns_sorted(a) == columns_sorted(b)


def write_code_text(code: DescendantCode) -> str:
    lines = [format_matrix(code.g1)] if code.k else []
    lines.append("---")
    lines.append(format_matrix(code.g0))
    return "\n".join(lines) + "\n"


def read_code_text(text: str) -> DescendantCode:
    lines = text.splitlines()
    seps = [i for i, ln in enumerate(lines) if ln.strip() == "---"]
    if len(seps) != 1:
        raise ValueError("expected two matrix blocks separated by a '---' line")
    sep = seps[0]
    g0 = parse_matrix("\n".join(lines[sep + 1:]), first_line=sep + 2)
    if any(ln.strip() for ln in lines[:sep]):
        g1 = parse_matrix("\n".join(lines[:sep]))
    else:
        g1 = BitMatrix.zeros(0, g0.cols)
    if g1.cols != g0.cols:
        raise ValueError("G1 and G0 blocks have different widths")
    if not verify_triorthogonal_matrix(g1, g0):
        raise ValueError("blocks are not a triorthogonal matrix")
    parity = "even" if (g1.cols + g1.nrows) % 2 == 0 else "odd"
    return DescendantCode(g1, g0, parity)


def write_code_json(code: DescendantCode) -> str:
    blob = {
        "n": code.n,
        "k": code.k,
        "parity": code.parity,
        "g1": [format_matrix(BitMatrix(code.n, (b,))).strip() for b in code.g1.rows],
        "g0": [format_matrix(BitMatrix(code.n, (b,))).strip() for b in code.g0.rows],
    }
    return json.dumps(blob, sort_keys=True)


def read_code_json(text: str) -> DescendantCode:
    blob = json.loads(text)
    n = int(blob["n"])
    g1 = parse_matrix("\n".join(blob["g1"])) if blob["g1"] else BitMatrix.zeros(0, n)
    g0 = parse_matrix("\n".join(blob["g0"])) if blob["g0"] else BitMatrix.zeros(0, n)
    if g1.cols != n or g0.cols != n or g1.nrows != int(blob["k"]):
        raise ValueError("block shapes disagree with declared n, k")
    parity = "even" if (n + g1.nrows) % 2 == 0 else "odd"
    if blob["parity"] not in ("even", "odd"):
        raise ValueError(f"unknown parity {blob['parity']!r}")
    if blob["parity"] != parity:
        raise ValueError("declared parity disagrees with n + k")
    if not verify_triorthogonal_matrix(g1, g0):
        raise ValueError("blocks are not a triorthogonal matrix")
    return DescendantCode(g1, g0, parity)
