"""Diagonal phase algebra and the distillation protocol simulator.

Everything a triorthogonal distillation circuit does to the data register
is diagonal in the Z basis, so states stay in the form
2^{-m/2} sum_z w^{phi(z)} |z> with w = exp(i pi/4) and phi a vector of
mod-8 phase exponents.  This module provides the two phase-bookkeeping
layers (Z4-valued quadratic forms for Clifford content, mod-8 phase
polynomials one level up) and an exact small-register simulator for the
space-efficient protocol with either immediate or delayed corrections.

Phase unit convention: all exponents count multiples of pi/4, so a T
gate is 1, an S-type rotation 2, a Pauli Z is 4, and a CCZ triple
carries 4 on its cube term.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .f2 import BitMatrix, BitVector, inverse
from .spaces import DescendantCode, verify_triorthogonal_matrix

STATEVECTOR_QUBIT_BUDGET = 12


def mod8_identity_check() -> bool:
    """The two lifting identities behind the phase expansions.

    x mod 2 = (2x^3 + x^2 - 2x) mod 8 and x mod 2 = x^2 mod 4, with mod
    meaning the smallest nonnegative remainder.  Both sides are periodic
    in x with period 8 (resp. 4), so checking one period is exhaustive.
    """
    for x in range(8):
        if x % 2 != (2 * x**3 + x**2 - 2 * x) % 8:
            return False
    return all(x % 2 == x**2 % 4 for x in range(4))


# ---------------------------------------------------------------------------
# Z4-valued quadratic forms (Clifford level)


@dataclass(frozen=True, eq=False)
class QuadraticFormZ4:
    """q(z) = z mat z^T mod 4 on binary z, given a symmetric integer mat.

    Well defined on F_2^m because shifting z by 2y changes the value by a
    multiple of 4.  Adding a symmetric matrix with zero diagonal and even
    off-diagonal entries does not change q, so only the diagonal mod 4
    and the off-diagonal mod 2 matter.
    """

    m: int
    mat: np.ndarray

    def __post_init__(self) -> None:
        if self.mat.shape != (self.m, self.m):
            raise ValueError(f"matrix shape {self.mat.shape} for m={self.m}")
        if not np.array_equal(self.mat, self.mat.T):
            raise ValueError("matrix is not symmetric")
        if np.any(self.mat < 0) or np.any(self.mat > 3):
            raise ValueError("entries must be reduced mod 4")

    @classmethod
    def from_matrix(cls, mat) -> "QuadraticFormZ4":
        arr = np.asarray(mat, dtype=np.int64) % 4
        return cls(arr.shape[0], arr)

    def rank_f2(self) -> int:
        rows = tuple(
            sum((int(self.mat[i, j]) % 2) << j for j in range(self.m))
            for i in range(self.m)
        )
        return BitMatrix(self.m, rows).rank()


def eval_form(f: QuadraticFormZ4, z: BitVector) -> int:
    if z.n != f.m:
        raise ValueError(f"vector length {z.n}, form on {f.m} variables")
    zv = np.array(z.to_ints(), dtype=np.int64)
    return int(zv @ f.mat @ zv) % 4


def _form_values(f: QuadraticFormZ4) -> np.ndarray:
    """q over all 2^m binary inputs, indexed by the bit pattern."""
    zall = (np.arange(1 << f.m, dtype=np.int64)[:, None] >> np.arange(f.m)) & 1
    return np.einsum("zi,ij,zj->z", zall, f.mat, zall) % 4


def _symmetric_diagonalize(m2: list[int], m: int) -> list[int]:
    """Rows of W with W^T W = M2 over F_2, for M2 with a nonzero diagonal.

    Gram-Schmidt on the bilinear form B(u, v) = u M2 v^T: repeatedly peel
    off a vector with B(v, v) = 1.  When the remaining block turns
    alternating but nonzero, a processed vector v and a hyperbolic pair
    (x, y) are traded for {v+x, v+y, v+x+y}, which restores odd diagonal
    entries without changing the span.  Rows are returned as bitmasks.
    """

    def b(u: int, v: int) -> int:
        acc = 0
        vv = v
        while vv:
            j = (vv & -vv).bit_length() - 1
            acc ^= (u & m2[j]).bit_count()
            vv &= vv - 1
        return acc & 1

    done: list[int] = []
    rest = [1 << i for i in range(m)]
    while rest:
        vec = next((x for x in rest if b(x, x)), None)
        if vec is not None:
            rest.remove(vec)
            rest = [x ^ (vec * b(x, vec)) for x in rest]
            done.append(vec)
            continue
        pair = next(
            ((x, y) for x, y in combinations(rest, 2) if b(x, y)), None
        )
        if pair is None:
            break  # remaining block is null
        assert done, "alternating block needs a processed vector to trade"
        vec = done.pop()
        x, y = pair
        rest.remove(x)
        rest.remove(y)
        rest += [vec ^ x, vec ^ y, vec ^ x ^ y]

    # W rows are the rows of (T^-1)^T at the B-unit positions, T = basis.
    basis = BitMatrix(m, tuple(done + rest))
    dual = inverse(basis).transpose()
    return [dual.rows[i] for i in range(len(done))]


def decompose_form(f: QuadraticFormZ4):
    """Find binary W and diagonal D with q(z) = z W^T W z^T + 2 z D z^T.

    rows(W) is the F_2-rank of mat when its mod-2 reduction has a nonzero
    diagonal (or is zero), and rank + 1 in the alternating case, where
    the form is padded by one extra variable, diagonalized, and the
    padding column dropped.
    """
    m = f.m
    m2_rows = [
        sum((int(f.mat[i, j]) % 2) << j for j in range(m)) for i in range(m)
    ]
    if not any(m2_rows):
        w = BitMatrix.zeros(0, m)
    elif all((r >> j) & 1 == 0 for j, r in enumerate(m2_rows)):
        padded = [1] + [r << 1 for r in m2_rows]
        rows = _symmetric_diagonalize(padded, m + 1)
        w = BitMatrix(m, tuple(r >> 1 for r in rows))
    else:
        w = BitMatrix(m, tuple(_symmetric_diagonalize(m2_rows, m)))

    wtw = np.zeros((m, m), dtype=np.int64)
    for r in w.rows:
        vv = np.array([(r >> j) & 1 for j in range(m)], dtype=np.int64)
        wtw += np.outer(vv, vv)
    diag = [(int(f.mat[j, j] - wtw[j, j]) % 4) // 2 for j in range(m)]
    assert all((f.mat[j, j] - wtw[j, j]) % 2 == 0 for j in range(m))
    return w, BitVector.from_ints(diag)


def s_phase_from_set(v: BitMatrix) -> QuadraticFormZ4:
    """Quadratic form of the diagonal Clifford S(V): M = V^T V mod 4.

    Rows of v are the rotation support vectors; each contributes a phase
    of 2 (i.e. pi/2) times the mod-2 inner product with z.
    """
    arr = np.array(
        [[(r >> j) & 1 for j in range(v.cols)] for r in v.rows], dtype=np.int64
    ).reshape(v.nrows, v.cols)
    return QuadraticFormZ4.from_matrix(arr.T @ arr)


# ---------------------------------------------------------------------------
# Mod-8 phase polynomials (one level higher)


@dataclass(frozen=True)
class PhasePolynomial8:
    """Phase exponent mod 8 as a cubic polynomial over binary inputs.

    value(z) = 4 sum cubic z_b z_c z_d + 2 sum quadratic z_b z_c
             + sum linear z_b  (mod 8),
    so cubic coefficients live mod 2 (CCZ layer), quadratic mod 4 (CS
    layer), linear mod 8 (T layer).  Mappings are normalized: indices
    strictly increasing, zero coefficients dropped.  Treat instances as
    immutable; the dict fields are never mutated after construction.
    """

    m: int
    cubic: frozenset
    quadratic: dict
    linear: dict

    @classmethod
    def build(cls, m: int, cubic=(), quadratic=None, linear=None) -> "PhasePolynomial8":
        cub = set()
        for tri in cubic:
            b, c, d = tri
            if not 0 <= b < c < d < m:
                raise ValueError(f"bad cubic index {tri}")
            cub.add((b, c, d))
        quad = {}
        for (b, c), coeff in (quadratic or {}).items():
            if not 0 <= b < c < m:
                raise ValueError(f"bad quadratic index {(b, c)}")
            if coeff % 4:
                quad[(b, c)] = coeff % 4
        lin = {}
        for b, coeff in (linear or {}).items():
            if not 0 <= b < m:
                raise ValueError(f"bad linear index {b}")
            if coeff % 8:
                lin[b] = coeff % 8
        return cls(m, frozenset(cub), quad, lin)

    def evaluate(self, bits: int) -> int:
        val = 0
        for b, c, d in self.cubic:
            val += 4 * ((bits >> b) & (bits >> c) & (bits >> d) & 1)
        for (b, c), coeff in self.quadratic.items():
            val += 2 * coeff * ((bits >> b) & (bits >> c) & 1)
        for b, coeff in self.linear.items():
            val += coeff * ((bits >> b) & 1)
        return val % 8

    def phase_vector(self) -> np.ndarray:
        return np.array([self.evaluate(z) for z in range(1 << self.m)], dtype=np.int64)

    def add(self, other: "PhasePolynomial8") -> "PhasePolynomial8":
        if self.m != other.m:
            raise ValueError("variable count mismatch")
        quad = dict(self.quadratic)
        for key, coeff in other.quadratic.items():
            quad[key] = quad.get(key, 0) + coeff
        lin = dict(self.linear)
        for key, coeff in other.linear.items():
            lin[key] = lin.get(key, 0) + coeff
        return PhasePolynomial8.build(
            self.m, self.cubic ^ other.cubic, quad, lin
        )

    def is_zero(self) -> bool:
        return not (self.cubic or self.quadratic or self.linear)


def t_phase_from_set(v: BitMatrix) -> PhasePolynomial8:
    """Exact phase polynomial of T(V), rows of v being rotation vectors.

    Expanding each mod-2 inner product with the cubic lifting identity
    gives, per variable pattern: linear coefficient = column weight mod 8,
    quadratic = minus the column-pair overlap mod 4, cubic = column-triple
    overlap mod 2.
    """
    m = v.cols
    cols = [[(r >> j) & 1 for r in v.rows] for j in range(m)]
    linear = {b: sum(cols[b]) for b in range(m)}
    quadratic = {}
    cubic = []
    for b, c in combinations(range(m), 2):
        quadratic[(b, c)] = -sum(x * y for x, y in zip(cols[b], cols[c]))
    for b, c, d in combinations(range(m), 3):
        if sum(x * y * w for x, y, w in zip(cols[b], cols[c], cols[d])) % 2:
            cubic.append((b, c, d))
    return PhasePolynomial8.build(m, cubic, quadratic, linear)


def correction_SG(g: DescendantCode) -> PhasePolynomial8:
    """Phase of the diagonal correction for a triorthogonal matrix.

    Quadratic piece: minus the row-pair overlaps.  Linear-correction
    piece: the integer-lifted row sum minus its parity, expanded into
    coefficients: 2*floor(weight/2) per row, plus parity carries over the
    odd-weight rows (a mod-4 pair term and a mod-2 triple term).  The
    carries vanish when at most one row is odd; with more odd rows they
    act on the logical qubits only.
    """
    if not verify_triorthogonal_matrix(g.g1, g.g0):
        raise ValueError("matrix blocks are not triorthogonal")
    rows = list(g.g1.row_vectors()) + list(g.g0.row_vectors())
    m = len(rows)
    weights = [v.weight() for v in rows]
    odd = [b for b in range(m) if weights[b] % 2]
    linear = {b: 2 * (weights[b] // 2) for b in range(m)}
    quadratic = {
        (b, c): -rows[b].wedge(rows[c]).weight()
        for b, c in combinations(range(m), 2)
    }
    for b, c in combinations(odd, 2):
        quadratic[(b, c)] += 1
    cubic = list(combinations(odd, 3))
    return PhasePolynomial8.build(m, cubic, quadratic, linear)


# ---------------------------------------------------------------------------
# Protocol simulation


@dataclass(frozen=True)
class ProtocolTrace:
    """One shot of the distillation protocol.

    outcomes holds t_l per column; correction_set the 0-based columns
    whose outcome triggered a correction.  reduced is the (W, D) pair of
    the delayed variant, None for the standard one.  s_injection_count
    is rows(W) when reduced, else the number of immediate corrections.
    output_fidelity is against the noiseless reference state and is 0.0
    whenever postselection fails.
    """

    outcomes: tuple
    correction_set: tuple
    reduced: tuple | None
    s_injection_count: int
    postselect_pass: bool
    output_fidelity: float


def _register_layout(g: DescendantCode):
    """Per-column parity tables and row data for the phase pipeline."""
    m = g.k + g.g0.nrows
    rows = list(g.g1.rows) + list(g.g0.rows)
    n = g.n
    zidx = np.arange(1 << m, dtype=np.int64)
    bits = [(zidx >> b) & 1 for b in range(m)]
    col_masks = []
    parities = []
    for ell in range(n):
        mask = sum(1 << b for b in range(m) if (rows[b] >> ell) & 1)
        col_masks.append(mask)
        acc = np.zeros_like(zidx)
        for b in range(m):
            if (mask >> b) & 1:
                acc ^= bits[b]
        parities.append(acc)
    return m, rows, col_masks, parities, bits


def _whole_sum_correction(m, rows, bits) -> np.ndarray:
    """Correction phase over all z: quadratic row-overlap part plus the
    integer-lifted row sum minus its parity, in pi/4 units mod 8."""
    phi = np.zeros(1 << m, dtype=np.int64)
    for b, c in combinations(range(m), 2):
        phi -= 2 * (rows[b] & rows[c]).bit_count() * bits[b] * bits[c]
    x_int = sum(r.bit_count() * bits[b] for b, r in enumerate(rows))
    phi += x_int - (x_int & 1)
    return phi % 8


def _logical_carry(k, bits) -> np.ndarray:
    """Whole-sum correction minus its quadratic-form part: the parity
    carries over the odd-weight rows.  Zero for k <= 1."""
    p_int = sum(bits[b] for b in range(k)) if k else 0
    return (p_int - (p_int & 1)) % 8


def _sg_form_matrix(rows) -> np.ndarray:
    """Z4-form content of the correction: half row weights on the
    diagonal, half row overlaps (mod 2) off it."""
    m = len(rows)
    mat = np.zeros((m, m), dtype=np.int64)
    for b in range(m):
        mat[b, b] = (rows[b].bit_count() // 2) % 4
    for b, c in combinations(range(m), 2):
        mat[b, c] = mat[c, b] = ((rows[b] & rows[c]).bit_count() // 2) % 2
    return mat


def _final_phases(g: DescendantCode, variant, outcomes, flips, correction_outcome):
    """Deterministic phase pipeline given all injection outcomes.

    Returns (phi mod 8 over 2^m, correction set, reduced pair or None,
    s-injection count).  Both variants agree on phi for every outcome
    sequence; they differ in how the correction layer is realized.
    """
    m, rows, col_masks, parities, bits = _register_layout(g)
    phi = np.zeros(1 << m, dtype=np.int64)
    cset = []
    for ell, (t, flip) in enumerate(zip(outcomes, flips)):
        phi += parities[ell] if t == 1 else -parities[ell]
        if flip:
            phi += 4 * parities[ell]
        if t == correction_outcome:
            cset.append(ell)

    if variant == "standard":
        for ell in cset:
            phi += 2 * parities[ell]
        phi += _whole_sum_correction(m, rows, bits)
        return phi % 8, tuple(cset), None, len(cset)

    mat = _sg_form_matrix(rows)
    for ell in cset:
        vv = np.array([(col_masks[ell] >> b) & 1 for b in range(m)], dtype=np.int64)
        mat += np.outer(vv, vv)
    w, d = decompose_form(QuadraticFormZ4.from_matrix(mat))
    for r in w.rows:
        acc = np.zeros_like(phi)
        for b in range(m):
            if (r >> b) & 1:
                acc ^= bits[b]
        phi += 2 * acc
    for b in range(m):
        if d.get(b):
            phi += 4 * bits[b]
    # parity carries of the whole-sum correction sit outside the form
    # algebra; they act on the logical qubits only and are applied here
    # so that both variants produce identical states
    phi += _logical_carry(g.k, bits)
    return phi % 8, tuple(cset), (w, d), w.nrows


def _measure_x_tail(phi, m, k, sampler):
    """Collapse the last m-k qubits in the X basis, most significant
    first.  sampler(p_plus) -> bool decides each outcome; returns the
    outcome list (ascending qubit order) and the logical amplitudes."""
    amps = np.exp(1j * np.pi / 4 * phi) / np.sqrt(1 << m)
    outcomes = []
    for _ in range(m - k):
        half = amps.reshape(2, -1)
        plus = (half[0] + half[1]) / np.sqrt(2)
        minus = (half[0] - half[1]) / np.sqrt(2)
        p_plus = float(np.sum(np.abs(plus) ** 2))
        if sampler(p_plus):
            outcomes.append(1)
            amps = plus / np.sqrt(p_plus)
        else:
            outcomes.append(-1)
            amps = minus / np.sqrt(1.0 - p_plus)
    return outcomes[::-1], amps


@lru_cache(maxsize=64)
def _noiseless_reference(g: DescendantCode, variant: str, correction_outcome: int):
    """X-outcome pattern and logical state of the noiseless all-(+1) run.

    In the default convention the noiseless state is outcome independent
    and the tail measurements are deterministic; the assertion guards
    both facts numerically.
    """
    m = g.k + g.g0.nrows
    outcomes = (1,) * g.n
    phi, _, _, _ = _final_phases(g, variant, outcomes, (False,) * g.n,
                                 correction_outcome)

    recorded = []

    def deterministic(p_plus: float) -> bool:
        assert min(p_plus, 1.0 - p_plus) < 1e-9, "tail qubit not deterministic"
        recorded.append(p_plus > 0.5)
        return recorded[-1]

    pattern, logical = _measure_x_tail(phi, m, g.k, deterministic)
    return tuple(pattern), logical


def simulate_protocol(
    g: DescendantCode,
    variant: str,
    noise: float = 0.0,
    seed: int = 0,
    correction_outcome: int = -1,
) -> ProtocolTrace:
    """Run one shot of the space-efficient distillation protocol.

    Draws, per column: a fair injection outcome, then a Z flip of the
    input T state with probability noise; afterwards one draw per tail
    qubit for its X measurement.  Postselection compares the sampled
    pattern against the noiseless reference; on failure the fidelity is
    reported as 0.0.  correction_outcome selects which outcome populates
    the correction set.
    """
    if g.k == 0:
        raise ValueError("protocol needs at least one odd-weight row")
    m = g.k + g.g0.nrows
    if m > STATEVECTOR_QUBIT_BUDGET:
        raise ValueError(f"register of {m} qubits exceeds the exact budget")
    if variant not in ("standard", "delayed"):
        raise ValueError(f"unknown variant {variant!r}")
    if not 0.0 <= noise <= 1.0:
        raise ValueError("noise must be a probability")
    if correction_outcome not in (-1, 1):
        raise ValueError("correction_outcome must be +1 or -1")
    if not verify_triorthogonal_matrix(g.g1, g.g0):
        raise ValueError("matrix blocks are not triorthogonal")

    rng = random.Random(seed)
    outcomes = tuple(1 if rng.random() < 0.5 else -1 for _ in range(g.n))
    flips = tuple(rng.random() < noise for _ in range(g.n))
    phi, cset, reduced, s_count = _final_phases(
        g, variant, outcomes, flips, correction_outcome
    )
    sampled, logical = _measure_x_tail(phi, m, g.k,
                                       lambda p: rng.random() < p)
    pattern, ideal = _noiseless_reference(g, variant, correction_outcome)
    passed = tuple(sampled) == pattern
    fidelity = float(abs(np.vdot(ideal, logical)) ** 2) if passed else 0.0
    return ProtocolTrace(
        outcomes=outcomes,
        correction_set=cset,
        reduced=reduced,
        s_injection_count=s_count,
        postselect_pass=passed,
        output_fidelity=fidelity,
    )
