"""Named spaces and codes used throughout the tests and the CLI.

Everything here is pinned data: indicator polynomials for the five
small classification classes, the punctured Reed-Muller codes, and the
[[35,3,3]] triorthogonal matrix together with its weight-38 parent.
"""

from __future__ import annotations

from .f2 import BitMatrix
from .rmpoly import RMPolynomial, parse_polynomial
from .spaces import (DescendantCode, TriorthogonalSpace, even_descendant,
                     indicator_to_generator, unitalize)

# Indicator polynomials of the five classes with at most 30 columns,
# ordered by weight.  The first lives on 4 variables, then 6, 6, 7, 8.
FIVE_CLASS_POLYNOMIALS: tuple[tuple[str, int], ...] = (
    ("1", 4),
    ("x1*x2 + x3*x4", 6),
    ("x1*x2 + x3*x4 + x5*x6", 6),
    ("x1*x2*x3 + x4*x5*x6", 7),
    ("x1*x2*x3*x4 + x5*x6*x7*x8", 8),
)

# The ten affine classes of degree-3 forms on 6 variables with weight
# at most 18, keyed by weight.  Products with complemented variables are
# written out in expanded form for the parser.
SIX_VARIABLE_CLASS_REPS: tuple[tuple[int, str], ...] = (
    (8, "x1*x2*x3"),
    (12, "x1*x2*x3 + x1*x4*x5"),
    (14, "x1*x2*x3 + x4*x5*x6"),
    (16, "x1*x2"),
    (16, "x1*x2 + x1*x3*x4"),
    (16, "x1*x2 + x1*x3*x4 + x1*x5*x6"),
    (16, "x2*x3 + x1*x2*x3 + x1*x4*x5"),
    (16, "x2*x3*x4 + x1*x3*x5 + x1*x2*x6"),
    (18, "x1*x2 + x2*x3*x5 + x1*x4*x6"),
    (18, "x1*x2*x3 + x2*x3*x4 + x1*x2*x5 + x1*x3*x6 + x4*x5*x6"),
)


def five_class_polynomials() -> list[RMPolynomial]:
    return [parse_polynomial(text, m) for text, m in FIVE_CLASS_POLYNOMIALS]


def six_variable_class_reps() -> list[RMPolynomial]:
    return [parse_polynomial(text, 6) for _, text in SIX_VARIABLE_CLASS_REPS]


def rm14_space() -> TriorthogonalSpace:
    """The 5-dimensional unital space on 16 coordinates (first-order
    Reed-Muller on 4 variables)."""
    return indicator_to_generator(RMPolynomial.one(4))


def code_15_1_3() -> DescendantCode:
    return even_descendant(rm14_space(), [0])


def code_14_2_2() -> DescendantCode:
    # first coordinate pair in colex order whose descendant has distance 2
    return even_descendant(rm14_space(), [0, 1])


# [[35,3,3]] triorthogonal matrix: three odd-weight rows then six
# even-weight rows.
CODE_35_3_3_G1 = (
    "00000000111000000111111000000111111",
    "00000000000111000000000111111111111",
    "00000000000000111111111111111111111",
)
CODE_35_3_3_G0 = (
    "10000010101000101100111011011100100",
    "01000010110000110010111101101010010",
    "00100010011000011001111110110001001",
    "00010001000101101011011111100001010",
    "00001001000110110101101111010000101",
    "00000101000011011110110111001110000",
)


def code_35_3_3() -> DescendantCode:
    g1 = BitMatrix.from_strings(list(CODE_35_3_3_G1))
    g0 = BitMatrix.from_strings(list(CODE_35_3_3_G0))
    return DescendantCode(g1, g0, "even")


def parent_space_38() -> TriorthogonalSpace:
    """Unital parent of the [[35,3,3]] code: 9-dimensional on 38 columns."""
    return unitalize(code_35_3_3())
