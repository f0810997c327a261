import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpnormal import Block, Instance, Interval, InvalidBlock, simultaneous_eigenbasis
from mpnormal.oracle import characteristic_residual, hausdorff_distance
from mpnormal.spectrum import (
    EigenvalueRecord,
    SpectrumSlice,
    block_eigenvalues,
    mode_phase,
    operator_spectrum,
    product_phases,
    verify_normal_spectrum_structure,
)

from conftest import random_block, random_unitary, scalar_block

TWO_PI = 2 * np.pi


def eigs(block, k_max):
    return np.array([r.value for r in block_eigenvalues(block, simultaneous_eigenbasis(block), k_max)])


def test_trivial_block_k1(trivial):
    recs = block_eigenvalues(trivial, simultaneous_eigenbasis(trivial), 1)
    # lambda = 1 + i (0 + 2 k pi) / (0 - 1) = 1 - 2 pi i k
    assert {r.fourier_index: r.value for r in recs} == {-1: 1 + TWO_PI * 1j, 0: 1, 1: 1 - TWO_PI * 1j}
    # independent: e^{(lambda - 1) * 1} = 1
    for r in recs:
        assert abs(np.exp(r.value - 1) - 1) < 1e-14


def test_antiperiodic_block():
    b = scalar_block(omega=-1.0)
    (rec,) = block_eigenvalues(b, simultaneous_eigenbasis(b), 0)
    assert rec.delta == pytest.approx(np.pi, abs=0)
    assert rec.value == pytest.approx(1 - 1j * np.pi, abs=1e-15)
    vals = eigs(b, 3)
    # e^{lambda - 1} = -1, i.e. lambda = 1 + i pi (2j + 1)
    for v in vals:
        assert abs(np.exp(v - 1) + 1) < 1e-13
    odd = (vals.imag / np.pi - 1) / 2
    np.testing.assert_allclose(odd, np.round(odd), atol=1e-13)


def test_length_scaling():
    vals = np.sort(eigs(scalar_block(b=2.0), 3).imag)
    np.testing.assert_allclose(np.diff(vals), np.pi)


def test_operator_spectrum_single():
    sl = operator_spectrum(Instance((scalar_block(),)), 0)
    assert len(sl) == 1 and sl.records[0].value == 1


def test_operator_spectrum_two_identical_blocks():
    inst = Instance((scalar_block(), scalar_block(a=2.0, b=3.0)))
    sl = operator_spectrum(inst, 2)
    by_block = {1: [], 2: []}
    for r in sl.records:
        by_block[r.block_index].append(r.value)
    assert sorted(by_block[1], key=lambda z: (z.real, z.imag)) == sorted(by_block[2], key=lambda z: (z.real, z.imag))
    assert len(sl) == 10


def test_operator_spectrum_two_blocks_tags():
    inst = Instance((scalar_block(1.0, 1.0, 0, 1), scalar_block(2.0, 1.0, 1.5, 2.5)))
    sl = operator_spectrum(inst, 1)
    got = {(r.block_index, round(r.value.real, 12), round(r.value.imag, 12)) for r in sl.records}
    want = {(n, float(al), round(s * TWO_PI, 12)) for n, al in ((1, 1), (2, 2)) for s in (-1, 0, 1)}
    assert got == {(n, re, im + 0.0) for n, re, im in want}
    # per-block characteristic equation e^{(lambda - alpha)} = 1
    for r in sl.records:
        assert abs(np.exp(r.value - r.block_index) - 1) < 1e-13


def test_operator_spectrum_ordering():
    inst = Instance((scalar_block(2.0), scalar_block(1.0, a=2, b=3)))
    sl = operator_spectrum(inst, 2)
    keys = [(abs(r.value), r.block_index, r.mode_index, r.fourier_index) for r in sl.records]
    assert keys == sorted(keys)
    assert sl.records[0].block_index == 2


def test_operator_spectrum_rejects_invalid():
    bad = Block(Interval(0, 1), np.diag([1.0, 2.0]), [[0, 1], [1, 0]])
    with pytest.raises(InvalidBlock) as info:
        operator_spectrum(Instance((bad,)), 1)
    assert info.value.report.commutation_defect > 0.1


def test_slice_count_formula(rng):
    blocks = []
    a = 0.0
    for _ in range(3):
        b, _, _ = random_block(rng, a=a)
        blocks.append(b)
        a = b.interval.b + 0.5
    sl = operator_spectrum(Instance(tuple(blocks)), 4)
    assert len(sl) == sum(b.dim for b in blocks) * 9
    assert sl.complete_modes


def test_structure_pass_and_negative_control(rng, trivial):
    assert verify_normal_spectrum_structure(operator_spectrum(Instance((trivial,)), 3)).passed
    sl = operator_spectrum(Instance((trivial,)), 3)
    recs = list(sl.records)
    r = recs[2]
    recs[2] = EigenvalueRecord(r.value + 0.1j, r.block_index, r.mode_index, r.fourier_index, r.delta)
    bad = SpectrumSlice(tuple(recs), sl.m_max, sl.k_max, True, sl.lengths)
    rep = verify_normal_spectrum_structure(bad)
    assert not rep.passed and any(f"k={r.fourier_index}" in f or f"->{r.fourier_index}" in f for f in rep.failures)


def test_structure_random_instance_and_regression(rng):
    blocks, a = [], 0.0
    for _ in range(3):
        b, _, _ = random_block(rng, a=a)
        blocks.append(b)
        a = b.interval.b + 0.1
    sl = operator_spectrum(Instance(tuple(blocks)), 5)
    assert verify_normal_spectrum_structure(sl).passed
    # independent: least-squares slope of Im(lambda) on k is -2 pi / length
    for n, b in enumerate(blocks, start=1):
        for m in range(1, b.dim + 1):
            recs = [r for r in sl.records if r.block_index == n and r.mode_index == m]
            k = np.array([r.fourier_index for r in recs], dtype=float)
            y = np.array([r.value.imag for r in recs])
            slope = np.polyfit(k, y, 1)[0]
            assert slope == pytest.approx(-TWO_PI / b.length, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), theta=st.floats(-3.0, 3.0))
def test_gauge_invariance(seed, theta):
    rng = np.random.default_rng(seed)
    block, _, _ = random_block(rng)
    K = 6
    base = eigs(block, K)
    rotated = eigs(Block(block.interval, block.A, np.exp(1j * theta) * block.W), K)
    # W -> e^{i theta} W moves every eigenvalue by i theta / length
    shifted = base + 1j * theta / block.length
    edge = (K - 1) * TWO_PI / block.length
    inner_s = shifted[np.abs(shifted.imag) <= edge]
    inner_r = rotated[np.abs(rotated.imag) <= edge]
    assert np.abs(inner_s[:, None] - rotated[None, :]).min(axis=1).max() <= 1e-9
    assert np.abs(inner_r[:, None] - shifted[None, :]).min(axis=1).max() <= 1e-9


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_conjugation_invariance(seed):
    rng = np.random.default_rng(seed)
    block, _, _ = random_block(rng)
    Q = random_unitary(rng, block.dim)
    other = Block(block.interval, Q.conj().T @ block.A @ Q, Q.conj().T @ block.W @ Q)
    assert hausdorff_distance(eigs(block, 4), eigs(other, 4)) <= 1e-9


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_phase_self_check_and_product_path(seed):
    rng = np.random.default_rng(seed)
    block, _, _ = random_block(rng, alpha_max=3.0, length=float(rng.uniform(0.1, 2.0)))
    modes = simultaneous_eigenbasis(block)
    deltas = []
    for m in modes:
        d = mode_phase(m, block.length)
        assert d == pytest.approx(np.angle(np.conj(m.omega)), abs=1e-15) or abs(abs(d) - np.pi) < 1e-12
        deltas.append(d)
    # matrix route: arguments of eig(W* exp(-A l)) match per-mode phases as a multiset
    prod = np.exp(1j * np.array(product_phases(block)))
    modal = np.exp(1j * np.array(deltas))
    assert hausdorff_distance(prod, modal) <= 1e-9


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_slice_satisfies_characteristic_equation(seed):
    rng = np.random.default_rng(seed)
    block, _, _ = random_block(rng, alpha_max=4.0)
    for lam in eigs(block, 3):
        assert characteristic_residual(block, lam) <= 1e-8
