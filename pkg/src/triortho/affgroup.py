"""The affine group of the Boolean cube acting on truth tables.

Group elements are handled as permutations of the 2^m points so that orbit
and order computations are generic; conversion from AffineMap is one call.
Stabilizer subgroups are found by randomized self-equivalence searches and
certified complete by comparing the Schreier-Sims order against the orbit
size, which the caller supplies from an independent count.
"""

from __future__ import annotations

import random
from math import prod

import numpy as np

from .f2 import BitMatrix, BitVector
from .rmpoly import AffineMap, RMPolynomial, affine_equivalent

Perm = tuple[int, ...]


def aff_group_order(m: int) -> int:
    return (1 << m) * prod((1 << m) - (1 << i) for i in range(m))


def compose_perms(p: Perm, q: Perm) -> Perm:
    """Apply q first, then p."""
    return tuple(p[x] for x in q)


def invert_perm(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def agl_generators(m: int) -> list[AffineMap]:
    """A small generating set: a variable cycle, one shear, one translation."""
    ident = BitMatrix.identity(m)
    gens = [AffineMap(ident, BitVector(m, 1))]
    if m >= 2:
        cycle = BitMatrix(m, tuple(1 << ((i + 1) % m) for i in range(m)))
        gens.append(AffineMap(cycle, BitVector.zeros(m)))
        rows = list(ident.rows)
        rows[1] ^= 1  # x1 <- x1 + x2
        gens.append(AffineMap(BitMatrix(m, tuple(rows)), BitVector.zeros(m)))
    return gens


def group_order(generators: list[Perm], npoints: int) -> int:
    """Order of the permutation group via incremental Schreier-Sims."""
    ident = tuple(range(npoints))
    levels: list[list] = []  # [base point, {image: representative}, strong gens]

    def add_gen(perm: Perm, start: int) -> None:
        # pre: perm fixes the base points of all levels before `start`
        if perm == ident:
            return
        if start == len(levels):
            point = next(i for i in range(npoints) if perm[i] != i)
            levels.append([point, {point: ident}, []])
        _, transversal, lgens = levels[start]
        if perm in lgens:
            return
        lgens.append(perm)
        frontier = list(transversal)
        while frontier:
            x = frontier.pop()
            rep_x = transversal[x]
            for g in list(lgens):
                y = g[x]
                t = compose_perms(g, rep_x)
                known = transversal.get(y)
                if known is None:
                    transversal[y] = t
                    frontier.append(y)
                else:
                    sift_in(compose_perms(invert_perm(known), t), start + 1)

    def sift_in(perm: Perm, start: int) -> None:
        idx = start
        while idx < len(levels) and perm != ident:
            point, transversal, _ = levels[idx]
            rep = transversal.get(perm[point])
            if rep is None:
                break
            perm = compose_perms(invert_perm(rep), perm)
            idx += 1
        add_gen(perm, idx)

    for g in generators:
        add_gen(tuple(g), 0)
    return prod(len(level[1]) for level in levels)


def stabilizer_generators(
    p: RMPolynomial,
    expected_order: int,
    seed: int = 0,
    max_rounds: int = 400,
) -> list[AffineMap]:
    """Affine maps generating the full stabilizer of p, certified by order.

    expected_order must come from an independent count, typically
    aff_group_order(m) divided by the orbit size of p's class.  Raises if
    the sampled elements fail to reach it within max_rounds.
    """
    rng = random.Random(seed)
    maps: list[AffineMap] = []
    perms: list[Perm] = []
    order = 1
    for _ in range(max_rounds):
        if order == expected_order:
            return maps
        elem = affine_equivalent(p, p, seed=rng.getrandbits(32))
        if elem is None:
            raise AssertionError("a polynomial always stabilizes itself")
        perm = elem.point_permutation()
        if perm in perms:
            continue
        new_order = group_order(perms + [perm], 1 << p.m)
        if new_order > order:
            maps.append(elem)
            perms.append(perm)
            order = new_order
    if order != expected_order:
        raise RuntimeError(
            f"stabilizer generation stalled at order {order}, expected {expected_order}"
        )
    return maps


# ---------------------------------------------------------------------------
# orbits of truth tables

def apply_perm_to_table(table: int, perm: Perm) -> int:
    out = 0
    for x, src in enumerate(perm):
        out |= ((table >> src) & 1) << x
    return out


def orbit_of_table(table: int, perms: list[Perm]) -> set[int]:
    seen = {table}
    frontier = [table]
    while frontier:
        t = frontier.pop()
        for perm in perms:
            img = apply_perm_to_table(t, perm)
            if img not in seen:
                seen.add(img)
                frontier.append(img)
    return seen


def perm_byte_luts(perm: Perm) -> np.ndarray:
    """Byte-indexed spread tables so a 64-point permutation can be applied
    to a whole uint64 array of truth tables at once."""
    if len(perm) > 64:
        raise ValueError("byte LUTs only cover up to 64 points")
    luts = np.zeros((8, 256), dtype=np.uint64)
    for x, src in enumerate(perm):
        j, b = divmod(src, 8)
        hits = np.nonzero((np.arange(256) >> b) & 1)[0]
        luts[j, hits] |= np.uint64(1 << x)
    return luts


def apply_perm_batch(tables: np.ndarray, luts: np.ndarray) -> np.ndarray:
    out = np.zeros_like(tables)
    for j in range(8):
        chunk = ((tables >> np.uint64(8 * j)) & np.uint64(0xFF)).astype(np.int64)
        out |= luts[j][chunk]
    return out


def orbit_closure_batch(seeds: np.ndarray, perms: list[Perm]) -> np.ndarray:
    """Sorted closure of a set of <=64-point truth tables under the perms."""
    luts = [perm_byte_luts(p) for p in perms]
    current = np.unique(seeds.astype(np.uint64))
    while True:
        images = [apply_perm_batch(current, lut) for lut in luts]
        merged = np.unique(np.concatenate([current] + images))
        if merged.size == current.size:
            return merged
        current = merged


def count_orbits(tables: np.ndarray, perms: list[Perm]) -> int:
    """Number of orbits of the group generated by perms on the given set,
    which must already be closed under the action."""
    return len(orbit_transversal(tables, perms))


def orbit_transversal(
    tables: np.ndarray, perms: list[Perm]
) -> list[tuple[int, int]]:
    """(representative, orbit size) pairs on a set closed under the action.

    Orbits are consumed in ascending table order, so each orbit is first
    entered at its smallest element and the output is ascending by
    representative.
    """
    luts = [perm_byte_luts(p) for p in perms]
    pool = np.unique(tables.astype(np.uint64))
    remaining = dict.fromkeys(pool.tolist())
    out = []
    while remaining:
        start = next(iter(remaining))
        size = 1
        frontier = np.array([start], dtype=np.uint64)
        del remaining[start]
        while frontier.size:
            images = np.unique(
                np.concatenate([apply_perm_batch(frontier, lut) for lut in luts])
            )
            fresh = [t for t in images.tolist() if t in remaining]
            for t in fresh:
                del remaining[t]
            size += len(fresh)
            frontier = np.array(fresh, dtype=np.uint64)
        out.append((start, size))
    return out
