"""Dense linear algebra over GF(2) with integer-bitset rows.

A vector of length n keeps its bits in a single Python integer, coordinate i
at bit i, so row XORs and inner products are plain int operations no matter
how wide the matrix is.  All values are immutable and hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class ParseError(ValueError):
    """Malformed text input; the message carries a 1-based line number."""


def _validate_bits(n: int, bits: int) -> None:
    if n < 0:
        raise ValueError("negative length")
    if bits < 0 or bits >> n:
        raise ValueError("bits outside the declared length")


@dataclass(frozen=True)
class BitVector:
    n: int
    bits: int

    def __post_init__(self) -> None:
        _validate_bits(self.n, self.bits)

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "BitVector":
        return cls(n, (1 << n) - 1)

    @classmethod
    def unit(cls, n: int, i: int) -> "BitVector":
        return cls(n, 1 << i)

    @classmethod
    def from_ints(cls, values: Iterable[int]) -> "BitVector":
        vals = list(values)
        bits = 0
        for i, v in enumerate(vals):
            if v not in (0, 1):
                raise ValueError(f"entry {v!r} is not a bit")
            bits |= v << i
        return cls(len(vals), bits)

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        chars = [ch for ch in text if not ch.isspace()]
        bad = next((ch for ch in chars if ch not in "01"), None)
        if bad is not None:
            raise ParseError(f"invalid character {bad!r} in vector")
        return cls.from_ints(int(ch) for ch in chars)

    def get(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"coordinate {i} out of range for length {self.n}")
        return (self.bits >> i) & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def dot(self, other: "BitVector") -> int:
        self._check_len(other)
        return (self.bits & other.bits).bit_count() & 1

    def wedge(self, other: "BitVector") -> "BitVector":
        """Componentwise product."""
        self._check_len(other)
        return BitVector(self.n, self.bits & other.bits)

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check_len(other)
        return BitVector(self.n, self.bits ^ other.bits)

    def restrict(self, coords: Sequence[int]) -> "BitVector":
        """Pick out the given coordinates, in the given order."""
        bits = 0
        for pos, c in enumerate(coords):
            if not 0 <= c < self.n:
                raise IndexError(f"coordinate {c} out of range for length {self.n}")
            bits |= ((self.bits >> c) & 1) << pos
        return BitVector(len(coords), bits)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if (self.bits >> i) & 1)

    def to_ints(self) -> tuple[int, ...]:
        return tuple((self.bits >> i) & 1 for i in range(self.n))

    def __str__(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def _check_len(self, other: "BitVector") -> None:
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")


@dataclass(frozen=True)
class BitMatrix:
    cols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        for r in self.rows:
            _validate_bits(self.cols, r)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def zeros(cls, nrows: int, cols: int) -> "BitMatrix":
        return cls(cols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector]) -> "BitMatrix":
        if not vectors:
            raise ValueError("cannot infer width from an empty vector list")
        n = vectors[0].n
        for v in vectors:
            if v.n != n:
                raise ValueError("rows of unequal length")
        return cls(n, tuple(v.bits for v in vectors))

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "BitMatrix":
        vs = [BitVector.from_string(line) for line in lines]
        return cls.from_vectors(vs)

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.rows[i])

    def row_vectors(self) -> tuple[BitVector, ...]:
        return tuple(BitVector(self.cols, r) for r in self.rows)

    def transpose(self) -> "BitMatrix":
        out = []
        for j in range(self.cols):
            bits = 0
            for i, r in enumerate(self.rows):
                bits |= ((r >> j) & 1) << i
            out.append(bits)
        return BitMatrix(self.nrows, tuple(out))

    def restrict_columns(self, coords: Sequence[int]) -> "BitMatrix":
        return BitMatrix(
            len(coords),
            tuple(self.row(i).restrict(coords).bits for i in range(self.nrows)),
        )

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return BitMatrix(self.cols, self.rows + other.rows)

    def mul(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.nrows:
            raise ValueError("inner dimension mismatch")
        out = []
        for r in self.rows:
            acc = 0
            rr = r
            while rr:
                i = (rr & -rr).bit_length() - 1
                acc ^= other.rows[i]
                rr &= rr - 1
            out.append(acc)
        return BitMatrix(other.cols, tuple(out))

    def apply(self, v: BitVector) -> BitVector:
        """Matrix times column vector."""
        if v.n != self.cols:
            raise ValueError("length mismatch")
        bits = 0
        for i, r in enumerate(self.rows):
            bits |= ((r & v.bits).bit_count() & 1) << i
        return BitVector(self.nrows, bits)

    def rank(self) -> int:
        return rref(self).rank

    def kernel_basis(self) -> "BitMatrix":
        return kernel_basis(self)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __str__(self) -> str:
        return format_matrix(self)


@dataclass(frozen=True)
class RrefResult:
    reduced: BitMatrix
    rank: int
    pivots: tuple[int, ...]
    transform: BitMatrix


def rref(m: BitMatrix, column_order: Sequence[int] | None = None) -> RrefResult:
    """Reduced row echelon form with the applied row-operation matrix.

    ``reduced == transform.mul(m)`` always holds and ``transform`` is
    invertible.  ``column_order`` selects pivots scanning columns in that
    order (default left to right); the reduced matrix stays in the original
    column layout.  Pivot columns are reported in scan order.
    """
    order = range(m.cols) if column_order is None else column_order
    rows = list(m.rows)
    trans = [1 << i for i in range(m.nrows)]
    pivots = []
    rank = 0
    for col in order:
        mask = 1 << col
        pivot_row = next((i for i in range(rank, len(rows)) if rows[i] & mask), None)
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        trans[rank], trans[pivot_row] = trans[pivot_row], trans[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & mask:
                rows[i] ^= rows[rank]
                trans[i] ^= trans[rank]
        pivots.append(col)
        rank += 1
    return RrefResult(
        reduced=BitMatrix(m.cols, tuple(rows)),
        rank=rank,
        pivots=tuple(pivots),
        transform=BitMatrix(m.nrows, tuple(trans)),
    )


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Rows span {x : m x^T = 0}; row count equals cols - rank(m)."""
    res = rref(m)
    pivot_set = set(res.pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    out = []
    for f in free:
        bits = 1 << f
        for i, p in enumerate(res.pivots):
            if (res.reduced.rows[i] >> f) & 1:
                bits |= 1 << p
        out.append(bits)
    return BitMatrix(m.cols, tuple(out))


def restrict(v: BitVector, coords: Sequence[int]) -> BitVector:
    return v.restrict(coords)


def in_rowspan(m: BitMatrix, v: BitVector) -> bool:
    if v.n != m.cols:
        raise ValueError("length mismatch")
    res = rref(m)
    acc = v.bits
    for i, p in enumerate(res.pivots):
        if (acc >> p) & 1:
            acc ^= res.reduced.rows[i]
    return acc == 0


def inverse(m: BitMatrix) -> BitMatrix:
    if m.nrows != m.cols:
        raise ValueError("not square")
    res = rref(m)
    if res.rank != m.cols:
        raise ValueError("matrix is singular")
    return res.transform


def parse_matrix(text: str, first_line: int = 1) -> BitMatrix:
    """Parse the row-per-line '0'/'1' format; a blank line ends the block."""
    rows = []
    width = None
    for offset, raw in enumerate(text.splitlines()):
        lineno = first_line + offset
        line = "".join(ch for ch in raw if not ch.isspace())
        if not line:
            break
        bad = next((ch for ch in line if ch not in "01"), None)
        if bad is not None:
            raise ParseError(f"line {lineno}: invalid character {bad!r}")
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise ParseError(
                f"line {lineno}: row has {len(line)} columns, expected {width}"
            )
        rows.append(int(line[::-1], 2) if line else 0)
    if width is None:
        raise ParseError(f"line {first_line}: empty matrix")
    return BitMatrix(width, tuple(rows))


def format_matrix(m: BitMatrix) -> str:
    return "\n".join(str(m.row(i)) for i in range(m.nrows))
