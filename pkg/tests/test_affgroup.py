import numpy as np

from triortho import affgroup
from triortho.affgroup import (
    aff_group_order,
    agl_generators,
    apply_perm_batch,
    apply_perm_to_table,
    compose_perms,
    count_orbits,
    group_order,
    invert_perm,
    orbit_closure_batch,
    orbit_of_table,
    perm_byte_luts,
    stabilizer_generators,
)
from triortho.rmpoly import parse_polynomial


def test_perm_basics():
    p = (1, 2, 0)
    q = (0, 2, 1)
    assert compose_perms(p, q) == (1, 0, 2)
    assert invert_perm(p) == (2, 0, 1)


def test_group_order_symmetric_group():
    # <(0 1), (0 1 2 3 4)> is all of S5
    swap = (1, 0, 2, 3, 4)
    cycle = (1, 2, 3, 4, 0)
    assert group_order([swap, cycle], 5) == 120
    assert group_order([], 5) == 1
    assert group_order([swap], 5) == 2


def test_agl_generators_generate_the_affine_group():
    for m in (2, 3, 4):
        perms = [a.point_permutation() for a in agl_generators(m)]
        assert group_order(perms, 1 << m) == aff_group_order(m)


def test_aff_group_order_values():
    assert aff_group_order(1) == 2
    assert aff_group_order(2) == 24
    assert aff_group_order(3) == 1344


def test_orbit_of_point_indicator():
    perms = [a.point_permutation() for a in agl_generators(3)]
    orbit = orbit_of_table(1, perms)
    # single-point supports form one orbit of size 8
    assert orbit == {1 << x for x in range(8)}


def test_orbit_stabilizer_product():
    perms = [a.point_permutation() for a in agl_generators(3)]
    p = parse_polynomial("x1*x2", 3)
    orbit = orbit_of_table(p.truth, perms)
    # supports are the 2-point subsets, all affinely equivalent
    assert len(orbit) == 28
    stab = stabilizer_generators(p, aff_group_order(3) // 28, seed=0)
    stab_perms = [a.point_permutation() for a in stab]
    assert group_order(stab_perms, 8) == 48
    for a in stab:
        table = apply_perm_to_table(p.truth, a.point_permutation())
        assert table == p.truth


def test_batch_perm_matches_scalar():
    rng = np.random.default_rng(0)
    perms = [a.point_permutation() for a in agl_generators(6)]
    tables = rng.integers(0, 2**63, size=50, dtype=np.uint64)
    for perm in perms:
        luts = perm_byte_luts(perm)
        batch = apply_perm_batch(tables, luts)
        for t, b in zip(tables.tolist(), batch.tolist()):
            assert apply_perm_to_table(t, perm) == b


def test_orbit_closure_and_count():
    perms = [a.point_permutation() for a in agl_generators(3)]
    closure = orbit_closure_batch(np.array([1], dtype=np.uint64), perms)
    assert closure.size == 8
    # pad the action to 64-bit tables: points beyond 2^3 are fixed
    assert count_orbits(closure, perms) == 1
    two = orbit_closure_batch(np.array([1, 3], dtype=np.uint64), perms)
    assert two.size == 8 + 28
    assert count_orbits(two, perms) == 2
