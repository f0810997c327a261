import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpnormal import (
    Block,
    DimensionMismatch,
    Instance,
    Interval,
    NonHermitian,
    OrderError,
    direct_sum_norm,
    hermitian_eigendecomposition,
    matrix_exponential,
    point_spectrum_union,
)
from mpnormal.growth import Sequence


def random_hermitian(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (Z + Z.conj().T)


def test_eigh_identity():
    lam, V = hermitian_eigendecomposition(np.eye(2))
    np.testing.assert_allclose(lam, [1, 1])
    np.testing.assert_allclose(V.conj().T @ V, np.eye(2), atol=1e-14)


def test_eigh_diagonal():
    lam, V = hermitian_eigendecomposition(np.diag([1.0, 3.0]))
    np.testing.assert_allclose(lam, [1, 3])
    np.testing.assert_allclose(np.abs(V), np.eye(2), atol=1e-14)


def test_eigh_reconstruction(rng):
    H = random_hermitian(rng, 4)
    lam, V = hermitian_eigendecomposition(H)
    np.testing.assert_allclose((V * lam) @ V.conj().T, H, atol=1e-12)


def test_eigh_rejects_non_hermitian():
    with pytest.raises(NonHermitian):
        hermitian_eigendecomposition(np.array([[1.0, 2.0], [0.0, 1.0]]))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 16))
def test_eigh_residual_property(seed, n):
    rng = np.random.default_rng(seed)
    H = random_hermitian(rng, n)
    lam, V = hermitian_eigendecomposition(H)
    scale = np.linalg.norm(H, 2)
    assert np.all(np.diff(lam) >= 0)
    for i in range(n):
        assert np.linalg.norm(H @ V[:, i] - lam[i] * V[:, i]) <= 1e-10 * scale
    np.testing.assert_allclose(V.conj().T @ V, np.eye(n), atol=1e-12)


def test_expm_zero():
    np.testing.assert_allclose(matrix_exponential(np.zeros((3, 3)), 1.0), np.eye(3))


def test_expm_diagonal():
    np.testing.assert_allclose(matrix_exponential(np.diag([1.0, 2.0]), -1.0), np.diag([np.exp(-1), np.exp(-2)]))


def test_expm_non_hermitian_matches_series():
    # nilpotent: exp(tN) = I + tN
    N = np.array([[0.0, 1.0], [0.0, 0.0]])
    np.testing.assert_allclose(matrix_exponential(N, 2.5), np.eye(2) + 2.5 * N, atol=1e-14)
    # rotation generator
    J = np.array([[0.0, -1.0], [1.0, 0.0]])
    c, s = np.cos(0.7), np.sin(0.7)
    np.testing.assert_allclose(matrix_exponential(J, 0.7), [[c, -s], [s, c]], atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 8), t=st.floats(-10, 10))
def test_expm_group_inverse(seed, n, t):
    rng = np.random.default_rng(seed)
    H = random_hermitian(rng, n)
    # product roundoff grows like exp(|t| * spread(H)); keep t * spread <= 10
    H = 0.5 * H / np.linalg.norm(H, 2)
    P = matrix_exponential(H, t) @ matrix_exponential(H, -t)
    np.testing.assert_allclose(P, np.eye(n), atol=1e-10)


def test_direct_sum_norm_finite():
    assert direct_sum_norm([1, 2, 3]).value == 3
    assert direct_sum_norm([1, 1, 1]).value == 1
    assert direct_sum_norm([1, 2]).bounded is None


def test_direct_sum_norm_inverse_family():
    norms = [np.linalg.norm(np.linalg.inv(n * np.eye(2)), 2) for n in range(1, 6)]
    np.testing.assert_allclose(norms, [1 / n for n in range(1, 6)])
    assert direct_sum_norm(norms).value == pytest.approx(1.0, abs=0)


def test_direct_sum_norm_growth_flag():
    assert direct_sum_norm([0.5, 0.25], Sequence.power(1.0, -1.0)) == (1.0, True)
    r = direct_sum_norm([1, 2], Sequence.linear(1.0))
    assert r.bounded is False and r.value == float("inf")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1e6), min_size=1, max_size=30))
def test_direct_sum_norm_is_max(xs):
    assert direct_sum_norm(xs).value == max(xs)


def test_point_spectrum_union_examples():
    assert point_spectrum_union([{1}, {2}]) == [(1, 1), (2, 2)]
    assert point_spectrum_union([{1}, {1}]) == [(1, 1), (1, 2)]
    s1 = hermitian_eigendecomposition(np.diag([1.0, 2.0]))[0]
    s2 = hermitian_eigendecomposition(np.diag([2.0, 3.0]))[0]
    u = point_spectrum_union([s1, s2])
    assert [(t.value.real, t.block) for t in u] == [(1, 1), (2, 1), (2, 2), (3, 2)]


@given(st.lists(st.lists(st.integers(-5, 5), max_size=6), min_size=1, max_size=6))
def test_point_spectrum_union_cardinality(spectra):
    assert len(point_spectrum_union(spectra)) == sum(len(s) for s in spectra)


def test_block_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Block(Interval(0, 1), np.eye(2), np.eye(3))
    with pytest.raises(DimensionMismatch):
        Block(Interval(0, 1), np.ones((2, 3)), np.ones((2, 3)))


def test_instance_order_and_h(rng):
    b1 = Block(Interval(0, 1), [[1]], [[1]])
    b2 = Block(Interval(1.5, 4), [[2]], [[1]])
    inst = Instance((b1, b2))
    assert inst.h == 2.5
    with pytest.raises(OrderError):
        Instance((b2, b1))
    with pytest.raises(OrderError):
        Instance((Block(Interval(0, 2), [[1]], [[1]]), Block(Interval(1, 3), [[1]], [[1]])))


def test_block_is_immutable():
    b = Block(Interval(0, 1), [[1]], [[1]])
    with pytest.raises(ValueError):
        b.A[0, 0] = 2
