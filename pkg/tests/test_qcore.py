import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from postsel import qcore
from postsel.catalog import ghz_pre
from postsel.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NotHermitian,
    NotUnitary,
    TooLarge,
    ZeroVector,
)
from postsel.qcore import OperatorSum, apply, dense_matrix, inner, make_state

import oracle


def test_make_state_single_basis():
    s = make_state(1, [(0, 1)])
    np.testing.assert_array_equal(s.amplitudes, [1, 0])


def test_make_state_bell_normalization():
    s = make_state(2, [(0, 1), (3, 1)])
    np.testing.assert_allclose(s.amplitudes, [2**-0.5, 0, 0, 2**-0.5], atol=1e-15)


def test_make_state_sums_duplicates():
    s = make_state(1, [(0, 1), (0, 1), (1, 2)])
    np.testing.assert_allclose(s.amplitudes, [2**-0.5, 2**-0.5])


def test_make_state_ghz3():
    s = make_state(3, [(0, 1), (7, 1)])
    assert abs(s.norm - 1) < 1e-12
    nz = np.flatnonzero(np.abs(s.amplitudes) > 0)
    assert list(nz) == [0, 7]
    np.testing.assert_allclose(np.abs(s.amplitudes[nz]), 2**-0.5)


def test_make_state_errors():
    with pytest.raises(ZeroVector):
        make_state(1, [(0, 1), (0, -1)])
    with pytest.raises(IndexOutOfRange):
        make_state(2, [(4, 1)])


def test_inner_examples():
    up = make_state(1, [(0, 1)])
    assert inner(up, up) == 1
    upx = qcore.StateVector(1, qcore.UP_X)
    assert inner(upx, up) == pytest.approx(2**-0.5)


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        inner(make_state(1, [(0, 1)]), make_state(2, [(0, 1)]))


def test_hardy_overlap_magnitude():
    pre = oracle.ket({"01": 1, "10": 1, "11": 1})
    post = oracle.ket({"00": 1, "01": -1, "10": -1, "11": 1})
    expected = abs(np.vdot(post, pre))
    assert expected == pytest.approx(1 / (2 * np.sqrt(3)), abs=1e-15)
    s_pre = make_state(2, [(1, 1), (2, 1), (3, 1)])
    s_post = make_state(2, [(0, 1), (1, -1), (2, -1), (3, 1)])
    assert abs(inner(s_post, s_pre)) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("n", range(3, 11))
def test_ghz_eigen_identities(n):
    g = ghz_pre(n)
    all_x = qcore.product(qcore.sx(k) for k in range(n))
    np.testing.assert_allclose(apply(all_x, g).amplitudes, g.amplitudes, atol=1e-12)
    for k in range(n):
        for l in range(k + 1, n):
            o = qcore.product(qcore.sy(j) if j in (k, l) else qcore.sx(j) for j in range(n))
            np.testing.assert_allclose(apply(o, g).amplitudes, -g.amplitudes, atol=1e-12)


def test_apply_identity_and_bad_site():
    s = make_state(2, [(1, 1), (2, 1j)])
    assert apply(OperatorSum.identity(), s).allclose(s, 0)
    with pytest.raises(DimensionMismatch):
        apply(qcore.sx(2), s)


def test_bit_convention_site0_lsb():
    s = make_state(2, [(0, 1)])
    flipped = apply(qcore.sx(0), s)
    assert flipped[1] == 1  # site 0 flipped -> index 1


def test_site_basis_change_examples():
    up_y = qcore.StateVector(1, qcore.UP_Y)
    out = qcore.site_basis_change(up_y, 0, qcore.Y_TO_BOX)
    np.testing.assert_allclose(out.amplitudes, [1, 0], atol=1e-15)
    up = make_state(1, [(0, 1)])
    assert qcore.site_basis_change(up, 0, np.eye(2)).allclose(up, 0)
    # x map: 2x2 product oracle
    expected = np.array([[1, 1], [1, -1]]) / np.sqrt(2) @ np.array([1, 0])
    np.testing.assert_allclose(qcore.site_basis_change(up, 0, qcore.X_TO_BOX).amplitudes, expected)


def test_site_basis_change_not_unitary():
    with pytest.raises(NotUnitary):
        qcore.site_basis_change(make_state(1, [(0, 1)]), 0, [[1, 1], [0, 1]])


def test_dense_examples():
    np.testing.assert_array_equal(dense_matrix(qcore.sz(0), 1), np.diag([1, -1]))
    np.testing.assert_array_equal(dense_matrix(qcore.proj_a(0), 1), np.diag([1, 0]))
    all_x = qcore.product(qcore.sx(k) for k in range(3))
    np.testing.assert_array_equal(dense_matrix(all_x, 3), oracle.op([oracle.X] * 3))
    np.testing.assert_array_equal(dense_matrix(all_x, 3), np.fliplr(np.eye(8)))
    with pytest.raises(TooLarge):
        dense_matrix(qcore.sz(0), 13)


def test_dense_matches_oracle_on_mixed_term():
    o = qcore.sx(0) * qcore.sy(2) * 0.5 + qcore.proj_b(1)
    ref = 0.5 * oracle.op([oracle.X, oracle.I2, oracle.Y]) + oracle.single(3, 1, oracle.PB)
    np.testing.assert_allclose(dense_matrix(o, 3), ref)


def test_eigendecompose_examples():
    sp = qcore.eigendecompose(qcore.sx(0), 1)
    assert sp.eigenvalues == pytest.approx((-1, 1))
    assert sp.ranks == (1, 1)
    assert qcore.eigendecompose(qcore.proj_a(0), 1).eigenvalues == pytest.approx((0, 1))
    o = qcore.proj_a(0) * qcore.sx(1)
    sp = qcore.eigendecompose(o, 2)
    assert sp.eigenvalues == pytest.approx((-1, 0, 1))
    assert sp.ranks == (1, 2, 1)
    # characteristic polynomial cross-check: roots of det(m - t) = t^2 (t^2 - 1)
    roots = np.sort(np.roots(np.poly(dense_matrix(o, 2))).real)
    np.testing.assert_allclose(roots, [-1, 0, 0, 1], atol=1e-7)


def test_eigendecompose_not_hermitian():
    with pytest.raises(NotHermitian):
        qcore.eigendecompose(qcore.sx(0) * 1j, 1)


def test_operator_algebra_same_site_product():
    o = qcore.sx(0) * qcore.sy(0)
    np.testing.assert_allclose(dense_matrix(o, 1), oracle.X @ oracle.Y)


# --- property tests ---------------------------------------------------------

_MATS = [qcore.SX, qcore.SY, qcore.SZ, qcore.PROJ0, qcore.PROJ1, qcore.ID2]


@st.composite
def op_and_state(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    n_terms = draw(st.integers(1, 4))
    terms = []
    for _ in range(n_terms):
        sites = draw(st.lists(st.integers(0, n - 1), unique=True, max_size=n))
        factors = tuple(qcore.LocalOperator(_MATS[draw(st.integers(0, 5))], s) for s in sites)
        c = complex(draw(st.floats(-2, 2)), draw(st.floats(-2, 2)))
        terms.append((c, factors))
    seed = draw(st.integers(0, 2**31))
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return OperatorSum(tuple(terms)), qcore.normalize(qcore.StateVector(n, amps))


@settings(max_examples=60, deadline=None)
@given(op_and_state())
def test_apply_agrees_with_dense(case):
    o, s = case
    ref = dense_matrix(o, s.n_sites) @ s.amplitudes
    np.testing.assert_allclose(apply(o, s).amplitudes, ref, atol=1e-10)


@settings(max_examples=60, deadline=None)
@given(op_and_state(), st.integers(0, 2**31))
def test_inner_conjugate_symmetry(case, seed):
    _, a = case
    rng = np.random.default_rng(seed)
    b = qcore.normalize(qcore.StateVector(a.n_sites, rng.normal(size=a.dim) + 1j * rng.normal(size=a.dim)))
    assert abs(inner(a, b) - np.conj(inner(b, a))) <= 1e-14
    assert abs(a.norm - 1) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(op_and_state(max_n=5))
def test_eigendecomposition_reconstructs(case):
    o, _ = case
    n = max(o.max_site + 1, 1)
    m = dense_matrix(o, n)
    h = (m + m.conj().T) / 2
    sp = qcore.eigendecompose(h, n)
    np.testing.assert_allclose(sp.reconstruct(), h, atol=1e-8)
    for i, p in enumerate(sp.projectors):
        np.testing.assert_allclose(p @ p, p, atol=1e-8)
        for q in sp.projectors[i + 1:]:
            np.testing.assert_allclose(p @ q, 0, atol=1e-8)
    assert list(sp.eigenvalues) == sorted(sp.eigenvalues)
