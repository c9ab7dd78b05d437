"""Tests for the gain bound and the gap to the construction."""

from fractions import Fraction
import pytest
from source import exceptions
from source.pda.params import CaseKind, classify_kt, validate
from source.pda.bounds import GainBranch, achieves_bound, g_star, gain_gap, proposition1_holds
from source.pda.constructions import theorem_parameters_kt
from conftest import valid_triples


@pytest.mark.parametrize("K, t, g, r, branch", [
    (10, 6, 4, Fraction(1), GainBranch.EVEN),
    (5, 2, 2, Fraction(3, 2), GainBranch.EVEN),
    (11, 6, 3, Fraction(5, 3), GainBranch.ODD),
    (9, 0, 1, Fraction(9), GainBranch.ODD),
    (1, 0, 1, Fraction(1), GainBranch.ODD),
])
def test_g_star(K, t, g, r, branch):
    bound = g_star(K, t)
    assert (bound.g_star, bound.r_star, bound.branch) == (g, r, branch)


def test_g_star_all_cached_sentinel():
    bound = g_star(6, 6)
    assert (bound.g_star, bound.r_star, bound.branch) == (0, 0, GainBranch.ALL_CACHED)


@pytest.mark.parametrize("K, t", [(5, 6), (5, -1), (0, 0)])
def test_g_star_rejects_bad_input(K, t):
    with pytest.raises(exceptions.ParameterError):
        g_star(K, t)


def test_proposition1():
    assert proposition1_holds(10, 6, 4)
    assert (4 - 2) * 10 == 4 * (6 - 1)
    assert not proposition1_holds(10, 6, 5)
    for K in range(1, 20):
        for t in range(0, K + 1):
            assert proposition1_holds(K, t, 2)


def test_bound_dominates_the_construction():
    for K in range(1, 41):
        for t in range(0, K + 1):
            bound = g_star(K, t)
            achieved = theorem_parameters_kt(K, t).g
            assert achieved <= bound.g_star
            case = classify_kt(K, t)
            if case in (CaseKind.DIVISIBLE, CaseKind.REMAINDER_KMT, CaseKind.ALL_CACHED):
                assert achieved == bound.g_star
            assert (bound.g_star - achieved == 0) == achieves_bound(K, t)
            assert bound.g_star - achieved in (0, 1)


def test_other_case_can_still_reach_the_bound():
    # (5, 2) is neither divisible nor remainder K-t, yet the even branch is met
    assert classify_kt(5, 2) is CaseKind.OTHER
    assert achieves_bound(5, 2)
    assert gain_gap(validate(5, 2, 1)) == 0


def test_gap_of_one():
    gaps = [
        (K, t) for K in range(2, 30) for t in range(1, K) if not achieves_bound(K, t)
    ]
    assert (9, 4) in gaps
    for K, t in gaps:
        assert g_star(K, t).branch is GainBranch.ODD
        assert classify_kt(K, t) is CaseKind.OTHER


def test_gain_gap_over_the_sweep():
    for K, L, gamma in valid_triples(20):
        params = validate(K, L, gamma)
        assert gain_gap(params) == (0 if achieves_bound(K, params.t) else 1)
