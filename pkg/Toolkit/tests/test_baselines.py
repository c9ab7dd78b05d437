"""Tests for the earlier schemes' closed forms and the comparison table."""

from fractions import Fraction
import pytest
from source import exceptions
from source.pda.params import CaseKind, validate
from source.pda.constructions import theorem_parameters
from source.pda.baselines import (
    CSV_HEADER, compare_table, f_cw, f_rk1, f_spe, r_cw, r_hkd, r_mr, r_rk1, r_sr2,
    sr2_applicability, to_csv,
)
from conftest import valid_triples


@pytest.mark.parametrize("K, L, gamma, expected", [
    (10, 5, 1, Fraction(5, 2)),
    (36, 5, 3, Fraction(33, 4)),
])
def test_r_hkd(K, L, gamma, expected):
    assert r_hkd(K, L, gamma) == expected


def test_rk1_and_cw():
    assert r_rk1(10, 3, 2) == Fraction(8, 5)
    assert f_rk1(10, 3, 2) == 25
    assert r_cw(10, 3, 2) == Fraction(4, 3)
    assert f_cw(10, 3, 2) == 150
    assert r_cw(36, 5, 3) == Fraction(21, 4)


def test_sr2():
    applicable, reason = sr2_applicability(10, 3, 2)
    assert not applicable
    assert "does not divide" in reason
    assert r_sr2(10, 3, 2) is None
    assert r_sr2(12, 4, 2) == 1
    assert sr2_applicability(12, 4, 0) == (False, "SR2 needs gamma >= 1")


@pytest.mark.parametrize("K, L, expected", [(5, 2, Fraction(8, 5)), (45, 7, Fraction(19)), (6, 6, 0)])
def test_r_mr(K, L, expected):
    assert r_mr(K, L) == expected


def test_f_spe():
    assert f_spe(10, 3) == 15
    assert f_spe(8, 3) == 8
    assert f_spe(6, 4) is None
    assert f_spe(5, 2) is None


def test_uncached_rates_are_k():
    for K in range(1, 15):
        for L in range(1, K + 1):
            assert r_hkd(K, L, 0) == r_rk1(K, L, 0) == r_cw(K, L, 0) == K
            assert theorem_parameters(validate(K, L, 0)).rate == K


def test_baselines_reject_bad_gamma():
    with pytest.raises(exceptions.ParameterError):
        r_cw(10, 3, 4)
    with pytest.raises(exceptions.ParameterError):
        r_mr(5, 6)


def _row(rows, gamma, scheme):
    return next(row for row in rows if row.gamma == gamma and row.scheme == scheme)


def test_compare_table_example():
    rows = compare_table(36, 5)
    assert sorted({row.gamma for row in rows}) == list(range(0, 8))
    assert len(rows) == 8 * 7
    new = _row(rows, 3, "NEW")
    assert (new.rate, new.subpacketization, new.gain) == (Fraction(21, 2), 72, 2)
    assert _row(rows, 3, "CW").rate == Fraction(21, 4)
    assert not _row(rows, 3, "MR").applicable
    hkd = _row(rows, 3, "HKD")
    assert hkd.subpacketization is None and hkd.reason


def test_compare_table_range():
    rows = compare_table(10, 3, gamma_min=1, gamma_max=2)
    assert {row.gamma for row in rows} == {1, 2}
    assert _row(rows, 2, "SPE").subpacketization == 15
    assert _row(rows, 1, "MR").applicable
    assert _row(rows, 2, "NEW").reason == CaseKind.DIVISIBLE.value


@pytest.mark.parametrize("K, L, gamma_min, gamma_max", [
    (4, 5, 0, None), (10, 3, 2, 1), (10, 3, 0, 4), (10, 3, -1, 2),
])
def test_compare_table_rejects_bad_ranges(K, L, gamma_min, gamma_max):
    with pytest.raises(exceptions.ParameterError):
        compare_table(K, L, gamma_min, gamma_max)


def test_csv_output():
    text = to_csv(compare_table(10, 3, 2, 2))
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + 7
    new = next(line for line in lines if ",NEW," in line)
    assert new.startswith("2,NEW,1,1,1,10,")
    sr2 = next(line for line in lines if ",SR2," in line)
    assert sr2.startswith("2,SR2,0,,,,")


def test_orderings_over_the_sweep():
    for K, L, gamma in valid_triples(40):
        params = validate(K, L, gamma)
        t, q = params.t, params.q
        new = theorem_parameters(params)
        if K > 1:
            assert new.subpacketization < K * K
        if t == K or gamma == 0:
            continue
        if 2 * (K // q) * (K - t) > K:
            assert new.rate < r_rk1(K, L, gamma)
        if gamma == 1:
            assert new.rate <= r_cw(K, L, gamma)
        elif gamma % 2 and 2 * K >= (gamma + 1) * q:
            assert new.rate <= r_cw(K, L, gamma)
        elif gamma % 2 == 0 and 2 * K >= (gamma + 2) * q:
            assert new.rate < r_cw(K, L, gamma)
        if gamma > 1 and sr2_applicability(K, L, gamma)[0]:
            if new.case is CaseKind.DIVISIBLE:
                assert new.rate < r_sr2(K, L, gamma)
                assert new.subpacketization == K
            elif new.case is CaseKind.REMAINDER_KMT:
                assert new.rate < r_sr2(K, L, gamma)
                assert new.subpacketization > K
            else:
                assert new.rate <= r_sr2(K, L, gamma)
                assert new.subpacketization > K
