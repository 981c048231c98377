"""Level-3 divisibility: fast decision, brute-force oracle, conditions."""

import pytest

from triortho.catalog import five_class_polynomials, parent_space_38, rm14_space
from triortho.f2 import BitMatrix
from triortho.level3 import (BRUTE_FORCE_TAIL_LIMIT, DivisibilityVerdict,
                             brute_force_divisible, check_conditions_0_to_3,
                             is_level3_divisible)
from triortho.spaces import (TriorthogonalSpace, indicator_to_generator,
                             is_triorthogonal_space)


def code3_space():
    # third five-class polynomial: x1*x2 + x3*x4 + x5*x6 on 28 columns
    return indicator_to_generator(five_class_polynomials()[2])


def test_brute_force_rm14_divisible():
    # oracle first: exhaustive over 2^11 odd tail vectors
    verdict = brute_force_divisible(rm14_space())
    assert verdict.divisible
    assert verdict.witness == (1,) * 16
    assert verdict.obstruction is None


def test_fast_rm14_divisible_matches_brute():
    space = rm14_space()
    fast = is_level3_divisible(space)
    assert fast.divisible
    assert fast.witness is not None
    assert check_conditions_0_to_3(space, fast.witness)
    assert fast.divisible == brute_force_divisible(space).divisible


def test_span_of_all_ones_vector():
    space = TriorthogonalSpace.from_generator(BitMatrix.from_strings(["11111111"]))
    assert is_level3_divisible(space) == DivisibilityVerdict(True, (1,) * 8, None)
    assert brute_force_divisible(space).witness == (1,) * 8


def test_span_of_all_ones_pair():
    # c=2: the forced pivot entry must cancel the tail 1 mod 8
    space = TriorthogonalSpace.from_generator(BitMatrix.from_strings(["11"]))
    assert is_level3_divisible(space).witness == (7, 1)


def test_zero_dimensional_corner():
    space = TriorthogonalSpace.from_generator(BitMatrix.zeros(0, 0))
    assert is_level3_divisible(space) == DivisibilityVerdict(True, (), None)
    assert brute_force_divisible(space) == DivisibilityVerdict(True, (), None)


def test_code3_not_divisible():
    verdict = is_level3_divisible(code3_space())
    assert not verdict.divisible
    assert verdict.witness is None
    assert verdict.obstruction is not None
    assert len(verdict.obstruction) == 28 - 7
    assert all(x % 2 == 0 for x in verdict.obstruction)
    assert sum(verdict.obstruction) % 4 == 2


def test_code3_not_divisible_brute():
    verdict = brute_force_divisible(code3_space())
    assert not verdict.divisible
    assert verdict.witness is None
    assert verdict.obstruction is None


def test_differential_on_five_class_spaces():
    # classes 1, 2, 4, 5 divisible; class 3 is not
    expected = [True, True, False, True, True]
    for want, poly in zip(expected, five_class_polynomials()):
        space = indicator_to_generator(poly)
        fast = is_level3_divisible(space)
        brute = brute_force_divisible(space)
        assert fast.divisible is want
        assert brute.divisible is want
        if want:
            assert check_conditions_0_to_3(space, fast.witness)
            assert check_conditions_0_to_3(space, brute.witness)


def test_gen35_parent_not_divisible():
    verdict = is_level3_divisible(parent_space_38())
    assert not verdict.divisible
    assert all(x % 2 == 0 for x in verdict.obstruction)
    assert sum(verdict.obstruction) % 4 == 2


def test_gen35_parent_exceeds_brute_budget():
    space = parent_space_38()
    assert space.c - space.r > BRUTE_FORCE_TAIL_LIMIT
    with pytest.raises(ValueError, match="search budget"):
        brute_force_divisible(space)


def test_conditions_reject_even_entry():
    space = rm14_space()
    t = [1] * 16
    t[5] = 2
    assert not check_conditions_0_to_3(space, t)


def test_conditions_reject_all_ones_on_code3():
    assert not check_conditions_0_to_3(code3_space(), [1] * 28)


def test_conditions_reject_wrong_length():
    with pytest.raises(ValueError):
        check_conditions_0_to_3(rm14_space(), [1] * 15)


def test_witness_implies_triorthogonality():
    # any space with a verified witness must be triorthogonal
    for poly in five_class_polynomials():
        space = indicator_to_generator(poly)
        verdict = is_level3_divisible(space)
        if verdict.divisible:
            assert check_conditions_0_to_3(space, verdict.witness)
            assert is_triorthogonal_space(space.gen)


def test_non_triorthogonal_input_rejected():
    bad = TriorthogonalSpace(BitMatrix.from_strings(["10", "01"]), False)
    with pytest.raises(ValueError, match="triorthogonal"):
        is_level3_divisible(bad)
    with pytest.raises(ValueError, match="triorthogonal"):
        brute_force_divisible(bad)


def test_verdicts_are_deterministic():
    space = rm14_space()
    assert is_level3_divisible(space) == is_level3_divisible(space)
    assert brute_force_divisible(space) == brute_force_divisible(space)
