"""Phase algebra, form decomposition, and protocol simulation."""

import random
from itertools import combinations

import numpy as np
import pytest

from triortho.catalog import code_14_2_2, code_15_1_3, code_35_3_3
from triortho.f2 import BitMatrix, BitVector
from triortho.magic import (PhasePolynomial8, QuadraticFormZ4, correction_SG,
                            decompose_form, eval_form, mod8_identity_check,
                            s_phase_from_set, simulate_protocol,
                            t_phase_from_set, _final_phases)
from triortho.spaces import DescendantCode


def random_form(rng, m):
    a = rng.integers(0, 4, size=(m, m))
    return QuadraticFormZ4.from_matrix((a + a.T) % 4)


def form_values(f):
    if f.m == 0:
        return np.zeros(1, dtype=np.int64)
    zall = (np.arange(1 << f.m, dtype=np.int64)[:, None] >> np.arange(f.m)) & 1
    return np.einsum("zi,ij,zj->z", zall, f.mat, zall) % 4


def rebuild_values(m, w, d):
    wtw = np.zeros((m, m), dtype=np.int64)
    for r in w.rows:
        vv = np.array([(r >> j) & 1 for j in range(m)], dtype=np.int64)
        wtw += np.outer(vv, vv)
    mat = (wtw + 2 * np.diag([d.get(j) for j in range(m)])) % 4
    return form_values(QuadraticFormZ4.from_matrix(mat))


def tiny_code():
    # single odd row, no even rows: one T injection
    return DescendantCode(BitMatrix(1, (1,)), BitMatrix.zeros(0, 1), "even")


def test_mod8_identities():
    assert mod8_identity_check()
    assert 3 % 2 == (2 * 27 + 9 - 6) % 8


def test_eval_form_basics():
    zero = QuadraticFormZ4.from_matrix(np.zeros((3, 3), int))
    for z in range(8):
        assert eval_form(zero, BitVector(3, z)) == 0
    eye = QuadraticFormZ4.from_matrix(np.eye(2, dtype=int))
    assert eval_form(eye, BitVector.from_string("11")) == 2
    with pytest.raises(ValueError):
        eval_form(eye, BitVector(3, 0))


def test_form_well_defined_under_even_shifts():
    # (z + 2y) M (z + 2y)^T = z M z^T mod 4 through the integer lift
    rng = np.random.default_rng(1)
    for _ in range(50):
        m = int(rng.integers(1, 7))
        a = rng.integers(0, 4, size=(m, m))
        mat = (a + a.T) % 4
        z = rng.integers(0, 2, size=m)
        y = rng.integers(-3, 4, size=m)
        shifted = z + 2 * y
        assert int(shifted @ mat @ shifted) % 4 == int(z @ mat @ z) % 4


def test_form_validation():
    with pytest.raises(ValueError, match="symmetric"):
        QuadraticFormZ4(2, np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError, match="mod 4"):
        QuadraticFormZ4(1, np.array([[5]]))


def test_decompose_corners():
    w, d = decompose_form(QuadraticFormZ4.from_matrix(np.zeros((3, 3), int)))
    assert w.nrows == 0 and d == BitVector.zeros(3)
    w, d = decompose_form(QuadraticFormZ4.from_matrix(np.eye(4, dtype=int)))
    assert sorted(w.rows) == [1, 2, 4, 8] and d == BitVector.zeros(4)


def test_decompose_alternating_needs_extra_row():
    f = QuadraticFormZ4.from_matrix(np.array([[0, 1], [1, 0]]))
    w, d = decompose_form(f)
    assert f.rank_f2() == 2 and w.nrows == 3
    assert np.array_equal(form_values(f), rebuild_values(2, w, d))


def test_decompose_random_forms_exhaustive():
    rng = np.random.default_rng(0)
    for _ in range(200):
        f = random_form(rng, int(rng.integers(0, 9)))
        w, d = decompose_form(f)
        r0 = f.rank_f2()
        assert r0 <= w.nrows <= r0 + 1
        assert np.array_equal(form_values(f), rebuild_values(f.m, w, d))


def test_s_phase_single_row():
    v = BitMatrix.from_strings(["110"])
    f = s_phase_from_set(v)
    assert np.array_equal(f.mat, np.array([[1, 1, 0], [1, 1, 0], [0, 0, 0]]))


def test_s_phase_square_is_pauli():
    # S(V)^2 = Z over the xor of the rows: 4 q(z) = 4 (xor . z) mod 8
    rng = random.Random(2)
    for _ in range(50):
        m = rng.randrange(1, 7)
        rows = tuple(rng.randrange(0, 1 << m) for _ in range(rng.randrange(0, 5)))
        f = s_phase_from_set(BitMatrix(m, rows))
        xor = 0
        for r in rows:
            xor ^= r
        for z in range(1 << m):
            zv = BitVector(m, z)
            assert 4 * eval_form(f, zv) % 8 == 4 * ((xor & z).bit_count() & 1) % 8


def test_s_phase_reduces_to_few_rotations():
    rng = random.Random(3)
    for _ in range(20):
        m = rng.randrange(1, 8)
        rows = tuple(rng.randrange(0, 1 << m) for _ in range(20))
        w, _ = decompose_form(s_phase_from_set(BitMatrix(m, rows)))
        assert w.nrows <= m + 1


def test_t_phase_single_gate():
    poly = t_phase_from_set(BitMatrix(3, (1,)))
    assert poly == PhasePolynomial8.build(3, linear={0: 1})


def test_t_phase_exhaustive_oracle():
    rng = random.Random(7)
    for _ in range(150):
        m = rng.randrange(1, 5)
        rows = tuple(rng.randrange(0, 1 << m) for _ in range(rng.randrange(0, 6)))
        poly = t_phase_from_set(BitMatrix(m, rows))
        for z in range(1 << m):
            direct = sum((r & z).bit_count() & 1 for r in rows) % 8
            assert poly.evaluate(z) == direct


def test_t_phase_cubic_vanishes_for_triorthogonal_columns():
    for code in (code_15_1_3(), code_14_2_2(), code_35_3_3()):
        poly = t_phase_from_set(code.stacked().transpose())
        assert not poly.cubic


def whole_sum_total(code, z):
    rows = code.stacked().rows
    m = len(rows)
    x = sum(r.bit_count() * ((z >> b) & 1) for b, r in enumerate(rows))
    quad = sum(
        (rows[b] & rows[c]).bit_count() * ((z >> b) & 1) * ((z >> c) & 1)
        for b, c in combinations(range(m), 2)
    )
    return (2 * x - (x & 1) - 4 * quad) % 8


def test_correction_composition_15_1_3():
    code = code_15_1_3()
    total = t_phase_from_set(code.stacked().transpose()).add(correction_SG(code))
    assert not total.cubic and not total.quadratic
    assert set(total.linear) == {0} and total.linear[0] % 2 == 1
    for z in range(1 << 5):
        assert total.evaluate(z) == whole_sum_total(code, z)


def test_correction_composition_14_2_2():
    # two odd rows leave a parity-carry pair term on the logical qubits
    code = code_14_2_2()
    total = t_phase_from_set(code.stacked().transpose()).add(correction_SG(code))
    assert not total.cubic
    assert set(total.quadratic) <= {(0, 1)}
    assert all(b < 2 for b in total.linear)
    for z in range(1 << (code.k + code.g0.nrows)):
        assert total.evaluate(z) == whole_sum_total(code, z)


def test_correction_identity_cases():
    assert correction_SG(tiny_code()).is_zero()
    empty = DescendantCode(BitMatrix.zeros(0, 0), BitMatrix.zeros(0, 0), "even")
    assert correction_SG(empty).is_zero()


def test_correction_rejects_non_triorthogonal():
    bad = DescendantCode(BitMatrix(2, (1,)), BitMatrix(2, (3,)), "even")
    with pytest.raises(ValueError, match="triorthogonal"):
        correction_SG(bad)


def test_noiseless_shots_pass_with_unit_fidelity():
    code = code_15_1_3()
    for variant in ("standard", "delayed"):
        for seed in range(200):
            tr = simulate_protocol(code, variant, noise=0.0, seed=seed)
            assert tr.postselect_pass
            assert tr.output_fidelity == pytest.approx(1.0)
            if variant == "delayed":
                assert tr.reduced is not None
                assert tr.s_injection_count == tr.reduced[0].nrows
                assert tr.s_injection_count <= 6
            else:
                assert tr.reduced is None


def test_standard_corrections_track_outcomes():
    code = code_15_1_3()
    counts = []
    for seed in range(2000):
        tr = simulate_protocol(code, "standard", noise=0.0, seed=seed)
        assert tr.s_injection_count == sum(1 for t in tr.outcomes if t == -1)
        assert tr.correction_set == tuple(
            i for i, t in enumerate(tr.outcomes) if t == -1
        )
        counts.append(tr.s_injection_count)
    assert np.mean(counts) == pytest.approx(7.5, abs=0.5)


def test_variants_agree_per_outcome_sequence():
    rng = random.Random(3)
    for code in (code_15_1_3(), code_14_2_2()):
        for _ in range(30):
            outs = tuple(rng.choice((1, -1)) for _ in range(code.n))
            flips = tuple(rng.random() < 0.3 for _ in range(code.n))
            p1, c1, _, _ = _final_phases(code, "standard", outs, flips, -1)
            p2, c2, _, _ = _final_phases(code, "delayed", outs, flips, -1)
            assert np.array_equal(p1, p2)
            assert c1 == c2


def test_variants_agree_through_sampling():
    code = code_15_1_3()
    for seed in range(30):
        a = simulate_protocol(code, "standard", noise=0.2, seed=seed)
        b = simulate_protocol(code, "delayed", noise=0.2, seed=seed)
        assert a.outcomes == b.outcomes
        assert a.postselect_pass == b.postselect_pass
        assert a.output_fidelity == pytest.approx(b.output_fidelity)


def test_single_qubit_protocol_is_exact_t_injection():
    tr = simulate_protocol(tiny_code(), "delayed", noise=0.0, seed=11)
    assert tr.postselect_pass
    assert tr.output_fidelity == pytest.approx(1.0)
    assert tr.s_injection_count <= 2


def test_delayed_injection_bound_across_codes():
    for code in (tiny_code(), code_15_1_3(), code_14_2_2(), code_35_3_3()):
        bound = code.k + code.g0.nrows + 1
        for seed in range(20):
            tr = simulate_protocol(code, "delayed", noise=0.1, seed=seed)
            assert tr.s_injection_count <= bound


def test_noiseless_35_3_3_passes():
    tr = simulate_protocol(code_35_3_3(), "delayed", noise=0.0, seed=4)
    assert tr.postselect_pass
    assert tr.output_fidelity == pytest.approx(1.0)


def test_noise_degrades_output():
    fids = [
        simulate_protocol(code_15_1_3(), "delayed", noise=0.3, seed=s).output_fidelity
        for s in range(200)
    ]
    assert any(f < 0.99 for f in fids)
    failed = [
        simulate_protocol(code_15_1_3(), "standard", noise=0.4, seed=s)
        for s in range(200)
    ]
    assert any(not tr.postselect_pass and tr.output_fidelity == 0.0 for tr in failed)


def test_flipped_correction_flag():
    code = code_15_1_3()
    tr = simulate_protocol(code, "delayed", noise=0.0, seed=9)
    flipped = simulate_protocol(code, "delayed", noise=0.0, seed=9,
                                correction_outcome=1)
    assert tr.outcomes == flipped.outcomes
    assert set(tr.correction_set) | set(flipped.correction_set) == set(range(code.n))
    assert set(tr.correction_set) & set(flipped.correction_set) == set()
    # equivalence of the two variants is convention independent
    outs = tr.outcomes
    p1, _, _, _ = _final_phases(code, "standard", outs, (False,) * code.n, 1)
    p2, _, _, _ = _final_phases(code, "delayed", outs, (False,) * code.n, 1)
    assert np.array_equal(p1, p2)


def test_simulation_is_deterministic():
    a = simulate_protocol(code_15_1_3(), "delayed", noise=0.2, seed=42)
    b = simulate_protocol(code_15_1_3(), "delayed", noise=0.2, seed=42)
    assert a == b


def test_simulate_rejects_bad_inputs():
    code = code_15_1_3()
    with pytest.raises(ValueError, match="odd-weight row"):
        simulate_protocol(
            DescendantCode(BitMatrix.zeros(0, 8), BitMatrix(8, (255,)), "even"),
            "standard",
        )
    with pytest.raises(ValueError, match="budget"):
        simulate_protocol(
            DescendantCode(BitMatrix(1, (1,)), BitMatrix.zeros(12, 1), "even"),
            "standard",
        )
    with pytest.raises(ValueError, match="variant"):
        simulate_protocol(code, "eager")
    with pytest.raises(ValueError, match="probability"):
        simulate_protocol(code, "standard", noise=1.5)
    with pytest.raises(ValueError, match="correction_outcome"):
        simulate_protocol(code, "standard", correction_outcome=0)
