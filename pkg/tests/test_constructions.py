import itertools

import numpy as np
import pytest

from puretomo import qmath
from puretomo.constructions import (
    SIC_BLOCH,
    BlochVector,
    Basis,
    counterexample_d2,
    eight_ops_d3,
    mubs_d2,
    mubs_prime,
    sic_d2,
    theorem2_collection,
    theorem2_collections,
    theorem2_count,
)
from puretomo.errors import DimensionTooLarge, IndexOutOfRange, MixedDimensions, NotPrime
from puretomo.povm import check_resolution_subset, outcome_vector, rank1_convert
from puretomo.states import PureState


def cross_overlaps(bases):
    out = []
    for b1, b2 in itertools.combinations(bases, 2):
        out.extend(abs(np.vdot(x.amplitudes, y.amplitudes)) ** 2 for x in b1 for y in b2)
    return np.array(out)


def test_sic_structure():
    p = sic_d2()
    assert len(p) == 4
    assert p.completeness_defect() <= 1e-12
    hs = [np.trace(a @ b).real for a, b in itertools.combinations(p.elements, 2)]
    # (1 + n.n') / 8 with n.n' = -1/3
    np.testing.assert_allclose(hs, 1 / 12, atol=1e-12)
    dots = [SIC_BLOCH[i] @ SIC_BLOCH[j] for i, j in itertools.combinations(range(4), 2)]
    np.testing.assert_allclose(dots, -1 / 3, atol=1e-15)
    np.testing.assert_allclose(SIC_BLOCH.sum(axis=0), 0, atol=1e-15)


def test_sic_generators_match_bloch_form():
    for n, e in zip(SIC_BLOCH, sic_d2().elements):
        np.testing.assert_allclose(e, BlochVector(tuple(n)).matrix, atol=1e-15)


def test_bloch_vector_requires_unit_norm():
    with pytest.raises(ValueError):
        BlochVector((-np.sqrt(2) / 3, np.sqrt(2) / 3, -1 / 3))


def test_mubs_d2():
    bases = mubs_d2()
    assert len(bases) == 3
    np.testing.assert_allclose(cross_overlaps(bases), 0.5, atol=1e-15)
    assert len(cross_overlaps(bases)) == 12
    for b in bases:
        np.testing.assert_allclose(b.matrix.conj().T @ b.matrix, np.eye(2), atol=1e-15)
    r = 1 / np.sqrt(2)
    np.testing.assert_allclose(bases[2][1].amplitudes, [r, -1j * r])


@pytest.mark.parametrize("d", [2, 3, 5, 7, 11, 13])
def test_mubs_prime_unbiased(d):
    bases = mubs_prime(d)
    assert len(bases) == d + 1
    np.testing.assert_allclose(cross_overlaps(bases), 1 / d, atol=1e-10)
    for b in bases:
        np.testing.assert_allclose(b.matrix.conj().T @ b.matrix, np.eye(d), atol=1e-12)


def test_mubs_prime_two_matches_explicit_triple():
    def projector_set(b):
        return sorted(tuple(np.round(qmath.outer(s.amplitudes), 12).ravel()) for s in b)

    explicit = [projector_set(b) for b in mubs_d2()]
    for b in mubs_prime(2):
        assert projector_set(b) in explicit


def test_mubs_prime_errors():
    with pytest.raises(NotPrime):
        mubs_prime(4)
    with pytest.raises(DimensionTooLarge):
        mubs_prime(17)


def test_basis_rejects_non_orthogonal():
    with pytest.raises(ValueError):
        Basis.from_columns([[1, 0], [1, 1]])


def test_eight_ops():
    ops = eight_ops_d3()
    assert len(ops) == 8
    assert np.trace(ops.elements[6]).real == pytest.approx(3)
    assert check_resolution_subset(ops, [0, 1, 2])
    assert ops.resolution_subset == (0, 1, 2)
    for e in ops.elements:
        w = np.linalg.eigvalsh(e)
        assert w[-2] <= 1e-12 * w[-1]
    np.testing.assert_allclose(ops.elements[4], [[1, -1j, 0], [1j, 1, 0], [0, 0, 0]])
    np.testing.assert_allclose(ops.elements[7], [[1, 1, -1j], [1, 1, -1j], [1j, 1j, 1]])


def test_counterexample():
    p = counterexample_d2()
    assert len(p) == 4
    np.testing.assert_allclose(p.total(), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(
        outcome_vector(PureState.basis(2, 0), p), outcome_vector(PureState.basis(2, 1), p)
    )
    np.testing.assert_allclose(p.elements[2], [[0.25, -0.25j], [0.25j, 0.25]])


@pytest.mark.parametrize("m_bases, d, expected", [(3, 2, 12), (4, 3, 108)])
def test_theorem2_counts(m_bases, d, expected):
    bases = mubs_d2() if d == 2 else mubs_prime(d)
    cols = list(theorem2_collections(bases[:m_bases]))
    assert len(cols) == expected == theorem2_count(m_bases, d)
    for c in cols:
        assert len(c) == m_bases * (d - 1) + 1
        assert c.resolution_subset == tuple(range(d))
        assert c.is_rank1


def test_theorem2_single_basis():
    cols = list(theorem2_collections(mubs_prime(5)[:1]))
    assert len(cols) == 1 and len(cols[0]) == 5


def test_theorem2_order_and_index():
    bases = mubs_d2()
    cols = list(theorem2_collections(bases))
    assert cols[0].name == "theorem2[full=0,drop=[0, 0]]"
    assert cols[3].name == "theorem2[full=0,drop=[1, 1]]"
    assert cols[4].name == "theorem2[full=1,drop=[0, 0]]"
    for i in (0, 5, 11):
        assert theorem2_collection(bases, i).name == cols[i].name
    with pytest.raises(IndexOutOfRange):
        theorem2_collection(bases, 12)


def test_theorem2_mixed_dims():
    with pytest.raises(MixedDimensions):
        next(theorem2_collections([mubs_d2()[0], mubs_prime(3)[0]]))


def test_theorem2_collections_convert():
    for bases in (mubs_d2(), mubs_prime(3)):
        for c in theorem2_collections(bases):
            assert rank1_convert(c).completeness_defect() <= 1e-9
