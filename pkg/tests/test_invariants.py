"""Exterior-algebra layer: wedge oracle, invariant identities, sigma forms."""

from itertools import combinations

import numpy as np
import pytest

from bures.errors import DegreeMismatch, DegreeOverflow
from bures.invariants import (
    INVARIANT_NAMES,
    MatrixForm,
    ScalarForm,
    inner,
    invariant_entries_batch,
    invariant_row,
    sigma_invariants,
    trace_form_square,
    wedge,
)

PAIRS = tuple(combinations(range(8), 2))


def _perm_sign(seq):
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _slow_wedge(a: MatrixForm, b: MatrixForm):
    """Dict-based reference wedge: explicit loop over index splits."""
    out = {}
    for key_a, mat_a in a.components.items():
        for key_b, mat_b in b.components.items():
            if set(key_a) & set(key_b):
                continue
            merged = tuple(sorted(key_a + key_b))
            sign = _perm_sign(key_a + key_b)
            out[merged] = out.get(merged, np.zeros((8, 8))) + sign * (mat_a @ mat_b)
    return out


def _random_two_form(seed, skew=False):
    rng = np.random.default_rng(seed)
    data = rng.standard_normal((28, 8, 8))
    if skew:
        data = 0.5 * (data - data.transpose(0, 2, 1))
    return MatrixForm(degree=2, data=data)


def test_wedge_two_two_matches_slow_reference():
    a = _random_two_form(1)
    b = _random_two_form(2)
    fast = wedge(a, b).components
    slow = _slow_wedge(a, b)
    assert set(slow) <= set(fast)
    for key, mat in fast.items():
        expected = slow.get(key, np.zeros((8, 8)))
        assert np.allclose(mat, expected, rtol=0.0, atol=1e-12 * max(1.0, np.abs(expected).max()))


def test_wedge_four_two_matches_slow_reference():
    a = _random_two_form(3)
    b = _random_two_form(4)
    a2 = wedge(a, a)
    fast = wedge(a2, b).components
    slow = _slow_wedge(a2, b)
    for key, mat in fast.items():
        expected = slow.get(key, np.zeros((8, 8)))
        scale = max(1.0, np.abs(expected).max())
        assert np.allclose(mat, expected, rtol=0.0, atol=1e-10 * scale)


def test_wedge_degree_overflow():
    a = _random_two_form(5)
    a4 = wedge(wedge(a, a), a)  # degree 6
    with pytest.raises(DegreeOverflow):
        wedge(a4, wedge(a, a))  # 6 + 4 = 10 > 8


def test_inner_degree_mismatch():
    a = _random_two_form(6)
    with pytest.raises(DegreeMismatch):
        inner(a, wedge(a, a))


def test_matrix_form_validation():
    with pytest.raises(DegreeMismatch):
        MatrixForm(degree=3, data=np.zeros((56, 8, 8)))
    with pytest.raises(DegreeMismatch):
        MatrixForm(degree=2, data=np.zeros((27, 8, 8)))
    with pytest.raises(ValueError):
        MatrixForm.from_components(2, {(2, 1): np.eye(8)})


def test_from_components_roundtrip():
    mat = np.arange(64, dtype=float).reshape(8, 8)
    form = MatrixForm.from_components(2, {(3, 7): mat})
    comps = form.components
    assert np.array_equal(comps[(3, 7)], mat)
    others = [v for k, v in comps.items() if k != (3, 7)]
    assert all(np.all(v == 0.0) for v in others)


def test_trace_form_square_brute_force():
    f = _random_two_form(7, skew=True)
    brute = np.zeros((8, 8))
    for c in range(28):
        brute -= 2.0 * f.data[c] @ f.data[c]
    assert np.allclose(trace_form_square(f), brute, rtol=1e-13, atol=1e-11)
    with pytest.raises(DegreeMismatch):
        trace_form_square(wedge(f, f))


def test_invariant_row_matches_direct_inner_products():
    f = _random_two_form(8, skew=True)
    row = invariant_row(f)
    f2 = wedge(f, f)
    f3 = wedge(f2, f)
    f4 = wedge(f3, f)
    assert row.ff == pytest.approx(inner(f, f), rel=1e-13)
    assert row.ff2 == pytest.approx(inner(f, f) ** 2, rel=1e-13)
    assert row.f2f2 == pytest.approx(inner(f2, f2), rel=1e-12)
    assert row.trf2 == pytest.approx(np.sum(trace_form_square(f) ** 2), rel=1e-12)
    assert row.f3f3_23 == pytest.approx(inner(f3, f3) ** (2.0 / 3.0), rel=1e-12)
    assert row.f4f4_12 == pytest.approx(np.sqrt(inner(f4, f4)), rel=1e-12)
    assert row.as_array().shape == (6,)
    assert INVARIANT_NAMES == ("ff", "ff2", "f2f2", "trf2", "f3f3_23", "f4f4_12")


def test_invariant_entries_batch_matches_rows():
    rng = np.random.default_rng(9)
    stack = rng.standard_normal((3, 28, 8, 8))
    stack = 0.5 * (stack - stack.transpose(0, 1, 3, 2))
    batch = invariant_entries_batch(stack)
    assert batch.shape == (3, 6)
    for i in range(3):
        row = invariant_row(stack[i]).as_array()
        assert np.allclose(batch[i], row, rtol=1e-13, atol=0.0)


def _rotate_all_slots(data, rot):
    """Apply one orthogonal frame change to both form and matrix slots."""
    full = np.zeros((8, 8, 8, 8))
    for pos, (a, b) in enumerate(PAIRS):
        full[a, b] = data[pos]
        full[b, a] = -data[pos]
    full = np.einsum("ap,bq,ir,js,pqrs->abij", rot, rot, rot, rot, full)
    return np.stack([full[a, b] for a, b in PAIRS])


def test_invariants_are_frame_independent():
    f = _random_two_form(10, skew=True)
    rng = np.random.default_rng(11)
    rot, _ = np.linalg.qr(rng.standard_normal((8, 8)))
    rotated = _rotate_all_slots(f.data, rot)
    before = invariant_row(f.data).as_array()
    after = invariant_row(rotated).as_array()
    assert np.allclose(after, before, rtol=1e-9, atol=0.0)


def test_sigma_diagonal_oracle():
    # M diagonal with entries c_i * e^{(2i-1)(2i)}: disjoint supports, so
    # det(I + tM) = prod(1 + t c_i e^..) and sigma_k is the elementary
    # symmetric polynomial with unit shuffle signs.
    coef = np.array([1.5, -2.0, 0.75, 3.0])
    supports = [(0, 1), (2, 3), (4, 5), (6, 7)]
    lookup2 = {idx: pos for pos, idx in enumerate(combinations(range(8), 2))}
    data = np.zeros((28, 8, 8))
    for slot, (pair, c) in enumerate(zip(supports, coef)):
        data[lookup2[pair], slot, slot] = c
    sigmas = sigma_invariants(data)
    assert len(sigmas) == 9
    assert sigmas[0].coeffs.tolist() == [1.0]
    for k, sigma in enumerate(sigmas):
        assert sigma.degree == 2 * k
        if 2 * k > 8:
            assert sigma.coeffs.size == 0

    sig1 = {idx: val for idx, val in zip(combinations(range(8), 2), sigmas[1].coeffs) if val != 0.0}
    assert sig1 == {pair: pytest.approx(c) for pair, c in zip(supports, coef)}

    lookup4 = {idx: pos for pos, idx in enumerate(combinations(range(8), 4))}
    for (i, j) in combinations(range(4), 2):
        merged = tuple(sorted(supports[i] + supports[j]))
        assert sigmas[2].coeffs[lookup4[merged]] == pytest.approx(coef[i] * coef[j], rel=1e-13)
    assert np.count_nonzero(sigmas[2].coeffs) == 6

    assert sigmas[4].coeffs.size == 1
    assert sigmas[4].coeffs[0] == pytest.approx(np.prod(coef), rel=1e-13)


def test_sigma_newton_identity_for_skew_input():
    f = _random_two_form(12, skew=True)
    sigmas = sigma_invariants(f)
    # Skew matrix slots put exact zeros on the diagonal, so sigma_1 = tr M = 0.
    assert np.all(sigmas[1].coeffs == 0.0)
    # With sigma_1 = 0 Newton's identities give sigma_2 = -p_2 / 2 where
    # p_2[c'] = sum_{i,k} (M[i,k] wedge M[k,i]); check against a direct loop.
    lookup2 = {idx: pos for pos, idx in enumerate(combinations(range(8), 2))}
    lookup4 = {idx: pos for pos, idx in enumerate(combinations(range(8), 4))}
    p2 = np.zeros(70)
    for left in combinations(range(8), 2):
        for right in combinations(range(8), 2):
            if set(left) & set(right):
                continue
            merged = tuple(sorted(left + right))
            sign = _perm_sign(left + right)
            contrib = np.einsum("ik,ki->", f.data[lookup2[left]], f.data[lookup2[right]])
            p2[lookup4[merged]] += sign * contrib
    assert np.allclose(sigmas[2].coeffs, -p2 / 2.0, rtol=1e-12, atol=1e-12)


def test_scalar_form_degree_above_dimension():
    high = ScalarForm.zero(10)
    assert high.degree == 10
    assert high.coeffs.size == 0
    const = ScalarForm.constant(4.25)
    assert const.degree == 0
    assert const.coeffs.tolist() == [4.25]


def test_sigma_rejects_wrong_shapes():
    with pytest.raises(DegreeMismatch):
        sigma_invariants(np.zeros((27, 8, 8)))
    four_form = MatrixForm.zero(4)
    with pytest.raises(DegreeMismatch):
        sigma_invariants(four_form)
