import numpy as np
import pytest

from puretomo import qmath
from puretomo.constructions import counterexample_d2, eight_ops_d3, mubs_d2, theorem2_collection
from puretomo.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NegativeWeight,
    NotAPovm,
    NotPSD,
    NotRank1,
    SingularGram,
)
from puretomo.povm import (
    OperatorSet,
    Povm,
    Rank1Operator,
    check_resolution_subset,
    generator_of,
    outcome_vector,
    rank1_convert,
    scale_elements,
)
from puretomo.states import PureState, canonicalize, haar_random


def second_eigenvalue_ratio(m):
    w = np.linalg.eigvalsh(m)
    return w[-2] / w[-1]


def test_resolution_subset_examples():
    ops = eight_ops_d3()
    assert check_resolution_subset(ops, [0, 1, 2])
    assert not check_resolution_subset(ops, [0, 1])
    p = counterexample_d2()
    assert check_resolution_subset(p, range(len(p)))
    with pytest.raises(IndexOutOfRange):
        check_resolution_subset(ops, [0, 8])


def test_operator_set_validation():
    with pytest.raises(NotPSD):
        OperatorSet([np.diag([1.0, -1.0])])
    with pytest.raises(NotPSD):
        OperatorSet([np.zeros((2, 2))])
    with pytest.raises(DimensionMismatch):
        OperatorSet([np.eye(2), np.eye(3)])
    with pytest.raises(NotAPovm):
        OperatorSet.from_generators([[1, 0], [1, 1]], resolution_subset=[0, 1])
    with pytest.raises(NotAPovm):
        Povm.from_generators([[1, 0]])


def test_generator_of_round_trip(rng):
    for _ in range(20):
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        g = generator_of(qmath.outer(v))
        np.testing.assert_allclose(qmath.outer(g), qmath.outer(v), atol=1e-12)
    with pytest.raises(NotRank1):
        generator_of(np.eye(2))
    with pytest.raises(NotRank1):
        generator_of(np.zeros((2, 2)))


def test_convert_identity_case():
    p = counterexample_d2()
    f = rank1_convert(p)
    for a, b in zip(p.elements, f.elements):
        np.testing.assert_allclose(a, b, atol=1e-14)


def test_convert_eight_ops():
    ops = eight_ops_d3()
    f = rank1_convert(ops)
    assert len(f) == 8
    assert f.completeness_defect() <= 1e-9
    g = ops.total()
    r = np.linalg.inv(scipy_sqrtm(g))
    for e, fk in zip(ops.elements, f.elements):
        # independent route: dense matrix products with a LAPACK square root
        np.testing.assert_allclose(fk, r @ e @ r, atol=1e-12)
        assert second_eigenvalue_ratio(fk) <= 1e-10


def scipy_sqrtm(a):
    w, u = np.linalg.eigh(a)
    return (u * np.sqrt(w)) @ u.conj().T


def test_convert_qubit_collection_index3():
    # |0>, |1>, (|0>+|1>)/sqrt2, (|0>+i|1>)/sqrt2
    s = theorem2_collection(mubs_d2(), 3)
    expected = [[1, 0], [0, 1], [1 / np.sqrt(2)] * 2, [1 / np.sqrt(2), 1j / np.sqrt(2)]]
    for g, e in zip(s.generators, expected):
        np.testing.assert_allclose(qmath.outer(g), qmath.outer(e), atol=1e-15)
    f = rank1_convert(s)
    assert len(f) == 4 and f.completeness_defect() <= 1e-9
    assert all(second_eigenvalue_ratio(x) <= 1e-10 for x in f.elements)


def test_convert_errors():
    with pytest.raises(SingularGram):
        rank1_convert(OperatorSet.from_generators([[1, 0, 0], [0, 1, 0]]))
    with pytest.raises(NotRank1):
        rank1_convert(OperatorSet([np.eye(2)]))


def test_outcome_vector_examples():
    p = counterexample_d2()
    np.testing.assert_allclose(outcome_vector(PureState.basis(2, 0), p), [0.25] * 4, atol=1e-15)
    np.testing.assert_allclose(outcome_vector(PureState.basis(2, 1), p), [0.25] * 4, atol=1e-15)
    basis = OperatorSet(eight_ops_d3().elements[:3])
    np.testing.assert_allclose(outcome_vector(canonicalize([1, 1, 1]), basis), [1 / 3] * 3, atol=1e-15)
    with pytest.raises(DimensionMismatch):
        outcome_vector(PureState.basis(3, 0), p)


def test_outcome_vector_matrix_and_generator_paths_agree(rng):
    ops = eight_ops_d3()
    dense = OperatorSet(ops.elements)
    for _ in range(20):
        s = haar_random(3, rng)
        np.testing.assert_allclose(outcome_vector(s, ops), outcome_vector(s, dense), atol=1e-14)
        direct = [qmath.born_value(s.density(), e) for e in ops.elements]
        np.testing.assert_allclose(outcome_vector(s, ops), direct, atol=1e-14)


def test_povm_outcomes_sum_to_one(rng):
    f = rank1_convert(eight_ops_d3())
    for _ in range(50):
        assert outcome_vector(haar_random(3, rng), f).sum() == pytest.approx(1, abs=1e-9)


def test_scale_elements():
    ops = eight_ops_d3()
    same = scale_elements(ops, [1] * 5)
    for a, b in zip(ops.elements, same.elements):
        np.testing.assert_array_equal(a, b)
    doubled = scale_elements(ops, [2] * 5)
    for k in range(8):
        factor = 1 if k < 3 else 2
        np.testing.assert_allclose(doubled.elements[k], factor * ops.elements[k])
    assert doubled.resolution_subset == (0, 1, 2)
    assert check_resolution_subset(doubled, [0, 1, 2])
    zeroed = scale_elements(ops, [1, 0, 1, 1, 1])
    assert not np.any(zeroed.elements[4])
    with pytest.raises(NotRank1):
        rank1_convert(zeroed)
    with pytest.raises(NegativeWeight):
        scale_elements(ops, [1, -1, 1, 1, 1])
    with pytest.raises(ValueError):
        scale_elements(ops, [1, 1])


def test_rank1_operator():
    op = Rank1Operator([1, 1j])
    assert op.weight == pytest.approx(2)
    np.testing.assert_allclose(op.matrix, [[1, -1j], [1j, 1]])
    assert op.expectation([1, 0]) == pytest.approx(1)
