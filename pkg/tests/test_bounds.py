import pytest

from puretomo import bounds


@pytest.mark.parametrize("d, expected", [(2, 1), (4, 2), (8, 3), (9, 1), (100, 4)])
def test_alpha(d, expected):
    assert bounds.alpha(d) == expected


def popcount_bruteforce(n):
    count = 0
    while n:
        count += n & 1
        n >>= 1
    return count


@pytest.mark.parametrize("d", range(2, 300))
def test_alpha_against_bruteforce(d):
    assert bounds.alpha(d) == popcount_bruteforce(d - 1)


def test_alpha_power_of_two_plus_one():
    for t in range(1, 40):
        assert bounds.alpha(2 ** t + 1) == 1


def test_m0_table():
    assert [bounds.m0(d).lower for d in range(2, 8)] == [4, 8, 10, 16, 18, 23]
    assert all(bounds.m0(d).exact for d in range(2, 8))


def test_m0_interval():
    assert bounds.m0(9).as_list() == [31, 32]
    for d in range(8, 200):
        a = popcount_bruteforce(d - 1)
        assert bounds.m0(d).as_list() == [4 * d - 3 - 2 * a, 4 * d - 3 - a]


def test_c_alpha_from_table():
    assert [bounds.c_alpha(d) for d in range(2, 8)] == [1, 1, 3, 1, 3, 2]
    assert bounds.c_alpha(8) is None


def test_feasibility():
    assert [bounds.feasible_3d_minus_2(d) for d in range(2, 8)] == [True, False, True, False, False, False]
    assert not bounds.feasible_3d_minus_2(100)
    assert bounds.m0(100).lower == 389


def test_m0_exceeds_3d_minus_2_beyond_seven():
    for d in range(8, 1001):
        assert bounds.m0(d).lower > 3 * d - 2
        assert not bounds.feasible_3d_minus_2(d)


@pytest.mark.parametrize("d, rng_", [(2, [4, 4]), (3, [8, 8]), (4, [10, 13]), (5, [16, 17]),
                                     (6, [18, 21]), (7, [23, 25])])
def test_m1_range(d, rng_):
    assert bounds.m1_range(d).as_list() == rng_


def test_m1_within_envelope():
    for d in range(2, 500):
        r = bounds.m1_range(d)
        assert bounds.m0(d).lower <= r.lower <= r.upper <= 4 * d - 3
        assert r.lower >= 3 * d - 2


def test_report():
    rep = bounds.report(4).to_dict()
    assert rep == {
        "d": 4, "alpha": 2, "m0": 10, "three_d_minus_2": 10, "four_d_minus_3": 13,
        "m1_range": [10, 13], "feasible_3d_minus_2": True, "c_alpha": 3,
    }
    assert bounds.report(9).to_dict()["m0"] == [31, 32]


def test_bad_dimension():
    with pytest.raises(ValueError):
        bounds.alpha(1)
