import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpnormal import Block, CommutationViolated, Interval, simultaneous_eigenbasis, validate_block

from conftest import random_block, random_unitary


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def test_identity_pair_valid():
    r = validate_block(Block(Interval(0, 1), np.eye(2), np.eye(2)))
    assert r.verdict == "valid"
    assert r.hermitian_defect == r.unitarity_defect == r.commutation_defect == 0
    assert r.positivity_margin == 0 and r.interval_ok


def test_rotation_does_not_commute():
    A, W = np.diag([1.0, 2.0]), rotation(np.pi / 4)
    r = validate_block(Block(Interval(0, 1), A, W))
    assert r.verdict == "invalid"
    # [W, A] = [[0, -s], [-s, 0]] * (2 - 1) with s = sin(pi/4): norm sqrt(2)/2
    assert r.commutation_defect == pytest.approx(np.linalg.norm(W @ A - A @ W, 2))
    assert r.commutation_defect == pytest.approx(np.sqrt(2) / 2)


@pytest.mark.parametrize("t1,t2", [(0.0, 0.0), (0.3, -2.0), (np.pi, 1.0)])
def test_commuting_diagonals_valid(t1, t2):
    W = np.diag([np.exp(1j * t1), np.exp(1j * t2)])
    assert validate_block(Block(Interval(0, 1), np.diag([1.0, 2.0]), W)).valid


def test_each_hypothesis_detected():
    I = np.eye(2)
    assert "Hermitian" in validate_block(Block(Interval(0, 1), [[1, 1], [0, 1]], I)).reasons[0]
    assert "not >= I" in validate_block(Block(Interval(0, 1), np.diag([0.5, 2]), I)).reasons[0]
    r = validate_block(Block(Interval(0, 1), I, np.diag([2.0, 1.0])))
    assert r.unitarity_defect == pytest.approx(3.0)
    assert not validate_block(Block(Interval(1, 1), I, I)).interval_ok


def test_eigenbasis_diagonal():
    modes = simultaneous_eigenbasis(Block(Interval(0, 1), np.diag([1.0, 2.0]), np.diag([1j, -1])))
    assert [(m.alpha, m.omega) for m in modes] == [(1.0, 1j), (2.0, -1)]
    assert [m.m for m in modes] == [1, 2]
    np.testing.assert_allclose(np.abs(np.array([m.vector for m in modes])), np.eye(2))


def test_eigenbasis_degenerate(rng):
    W = random_unitary(rng, 2)
    modes = simultaneous_eigenbasis(Block(Interval(0, 1), np.eye(2), W))
    assert [m.alpha for m in modes] == pytest.approx([1, 1])
    expected = sorted(np.linalg.eigvals(W), key=np.angle)
    np.testing.assert_allclose([m.omega for m in modes], expected, atol=1e-12)


def test_eigenbasis_conjugated(rng):
    Q = random_unitary(rng, 2)
    A = Q @ np.diag([1.0, 3.0]) @ Q.conj().T
    W = Q @ np.diag([1.0, np.exp(1j * np.pi / 3)]) @ Q.conj().T
    modes = simultaneous_eigenbasis(Block(Interval(0, 1), A, W))
    np.testing.assert_allclose([m.alpha for m in modes], [1, 3], atol=1e-10)
    np.testing.assert_allclose([m.omega for m in modes], [1, np.exp(1j * np.pi / 3)], atol=1e-10)


def test_ordering_within_cluster():
    W = np.diag(np.exp(1j * np.array([2.0, -1.0, 0.5])))
    modes = simultaneous_eigenbasis(Block(Interval(0, 1), np.eye(3), W))
    np.testing.assert_allclose([np.angle(m.omega) for m in modes], [-1.0, 0.5, 2.0])


def test_non_commuting_raises():
    with pytest.raises(CommutationViolated):
        simultaneous_eigenbasis(Block(Interval(0, 1), np.diag([1.0, 2.0]), rotation(np.pi / 4)))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_joint_eigenbasis_properties(seed):
    rng = np.random.default_rng(seed)
    block, _, _ = random_block(rng)
    modes = simultaneous_eigenbasis(block)
    V = np.array([m.vector for m in modes]).T
    for m in modes:
        assert np.linalg.norm(block.A @ m.vector - m.alpha * m.vector) <= 1e-9
        assert np.linalg.norm(block.W @ m.vector - m.omega * m.vector) <= 1e-9
        assert abs(abs(m.omega) - 1) <= 1e-10
    np.testing.assert_allclose(V.conj().T @ V, np.eye(block.dim), atol=1e-10)
    alphas = np.array([m.alpha for m in modes])
    omegas = np.array([m.omega for m in modes])
    np.testing.assert_allclose((V * alphas) @ V.conj().T, block.A, atol=1e-9)
    np.testing.assert_allclose((V * omegas) @ V.conj().T, block.W, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), commuting=st.booleans())
def test_validation_conjugation_invariant(seed, commuting):
    rng = np.random.default_rng(seed)
    block, _, _ = random_block(rng)
    W = block.W if commuting else random_unitary(rng, block.dim)
    base = validate_block(Block(block.interval, block.A, W))
    Q = random_unitary(rng, block.dim)
    conj = validate_block(Block(block.interval, Q.conj().T @ block.A @ Q, Q.conj().T @ W @ Q), tol=10 * 1e-10)
    if base.valid:
        assert conj.valid
    for field in ("hermitian_defect", "unitarity_defect", "commutation_defect"):
        assert abs(getattr(base, field) - getattr(conj, field)) <= 1e-9 * base.scale
