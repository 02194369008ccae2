import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from puretomo.errors import DimensionMismatch, EmptySupport, ZeroVector
from puretomo.states import (
    PureState,
    canonicalize,
    fidelity,
    haar_random,
    haar_vectors,
    random_with_support,
    support,
)

R = 1 / np.sqrt(2)


@pytest.mark.parametrize("raw, expected", [
    ([0, 1j], [0, 1]),
    ([1, 1], [R, R]),
    (np.exp(1j * np.pi / 3) * np.array([1, 1j]) * R, [R, 1j * R]),
])
def test_canonicalize_examples(raw, expected):
    np.testing.assert_allclose(canonicalize(raw).amplitudes, expected, atol=1e-15)


def test_canonicalize_zero():
    with pytest.raises(ZeroVector):
        canonicalize([0, 0])


@settings(max_examples=200)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.floats(0, 2 * np.pi))
def test_canonicalize_idempotent_and_phase_blind(d, seed, alpha):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    c = canonicalize(v)
    np.testing.assert_allclose(canonicalize(c).amplitudes, c.amplitudes, atol=1e-15)
    rotated = canonicalize(np.exp(1j * alpha) * v)
    np.testing.assert_allclose(rotated.amplitudes, c.amplitudes, atol=1e-14)
    assert fidelity(rotated, c) == pytest.approx(1.0, abs=1e-14)
    assert abs(np.linalg.norm(c.amplitudes) - 1) <= 1e-12
    first = c.amplitudes[np.flatnonzero(np.abs(c.amplitudes) ** 2 > 1e-12)[0]]
    assert first.imag == 0 and first.real > 0


def test_fidelity_examples():
    zero, one = PureState.basis(2, 0), PureState.basis(2, 1)
    assert fidelity(zero, zero) == 1
    assert fidelity(zero, one) == 0
    assert fidelity(zero, canonicalize([1, 1])) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(DimensionMismatch):
        fidelity(zero, PureState.basis(3, 0))


def test_fidelity_symmetric(rng):
    for _ in range(100):
        a, b = haar_random(5, rng), haar_random(5, rng)
        assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-15)
        assert 0 <= fidelity(a, b) <= 1


def test_haar_examples():
    np.testing.assert_allclose(haar_random(1, 5).amplitudes, [1])
    assert haar_random(2, 11) == haar_random(2, 11)
    assert haar_random(2, 11) != haar_random(2, 12)


def test_haar_wraps_batch_sampler():
    a = haar_random(4, 3)
    b = canonicalize(haar_vectors(4, 1, np.random.default_rng(3))[0])
    assert a == b


def test_haar_coordinate_symmetry():
    # E|psi_0|^2 = 1/d by permutation symmetry of the Haar measure
    v = haar_vectors(4, 100_000, np.random.default_rng(0))
    m = np.mean(np.abs(v) ** 2, axis=0)
    np.testing.assert_allclose(m, 0.25, atol=0.01)


def test_haar_unitary_invariance():
    rng = np.random.default_rng(1)
    u, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    v = haar_vectors(3, 50_000, rng)
    w = v @ u.T
    # second moments E[psi psi^H] = I/d survive any fixed unitary
    for x in (v, w):
        cov = x.T @ x.conj() / len(x)
        np.testing.assert_allclose(cov, np.eye(3) / 3, atol=0.01)


def test_support_examples():
    s = support(PureState.basis(4, 2))
    assert s.indices == (2,) and s.k == 1
    s = support(canonicalize([0, 1, 0, 1j]))
    assert s.indices == (1, 3) and s.k == 2
    assert support(canonicalize([1, 1, 1])).indices == (0, 1, 2)


def test_support_errors():
    with pytest.raises(EmptySupport):
        support(canonicalize([1, 1, 1, 1]), threshold=0.5)
    with pytest.raises(ValueError):
        support(PureState.basis(2, 0), threshold=1.5)


def test_random_with_support(rng):
    s = random_with_support(6, [4, 1], rng)
    assert support(s).indices == (1, 4)
    assert s.amplitudes[1].imag == 0 and s.amplitudes[1].real > 0
