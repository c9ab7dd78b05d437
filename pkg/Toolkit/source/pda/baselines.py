"""
Closed-form rates and subpacketizations of earlier multi-access schemes, and the comparison table.

Schemes without a closed form are reported as not applicable, with a reason,
rather than estimated.

Classes:
- ComparisonRow: One scheme at one gamma.

Functions:
- r_hkd(K, L, gamma) -> Fraction
- r_rk1(K, L, gamma) -> Fraction; f_rk1(K, L, gamma) -> int
- r_cw(K, L, gamma) -> Fraction; f_cw(K, L, gamma) -> int
- sr2_applicability(K, L, gamma) -> Tuple[bool, str]
- r_sr2(K, L, gamma) -> Fraction | None; f_sr2(K) -> int
- r_mr(K, L) -> Fraction; f_mr(K) -> int
- f_spe(K, L) -> int | None
- compare_table(K, L, gamma_min, gamma_max) -> List[ComparisonRow]
- to_csv(rows) -> str

Constants:
- CSV_HEADER: Column names of the comparison CSV.
"""

import csv
import io
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb
from typing import List, Optional, Tuple
from source import exceptions
from source.pda.params import validate
from source.pda.constructions import theorem_parameters

logger = logging.getLogger(__name__)

CSV_HEADER = [
    "gamma", "scheme", "applicable", "rate_num", "rate_den",
    "subpacketization", "gain_num", "gain_den", "reason",
]
RK2021_FOOTNOTE = "RK2021 omitted: its rate has no closed form here"


def _check_gamma(K: int, L: int, gamma: int, minimum: int = 0) -> None:
    if not 1 <= L <= K or not minimum <= gamma <= K // L:
        raise exceptions.ParameterError(
            f"Need 1 <= L <= K and {minimum} <= gamma <= floor(K/L), "
            f"got K={K}, L={L}, gamma={gamma}"
        )


def r_hkd(K: int, L: int, gamma: int) -> Fraction:
    """K(1 - L gamma/K)/(1 + gamma) if L | K, else K(1 - gamma/K)/(1 + gamma)."""
    _check_gamma(K, L, gamma)
    if K % L == 0:
        return Fraction(K - L * gamma, 1 + gamma)
    return Fraction(K - gamma, 1 + gamma)


def r_rk1(K: int, L: int, gamma: int) -> Fraction:
    """(K - gamma L)^2 / K."""
    _check_gamma(K, L, gamma)
    return Fraction((K - gamma * L) ** 2, K)


def f_rk1(K: int, L: int, gamma: int) -> int:
    """(K/gamma) * binom(K - gamma(L-1) - 1, gamma - 1); 1 when gamma = 0."""
    _check_gamma(K, L, gamma)
    if gamma == 0:
        return 1
    value = Fraction(K, gamma) * comb(K - gamma * (L - 1) - 1, gamma - 1)
    if value.denominator != 1:
        raise exceptions.InvariantError(f"F_RK1 is not an integer for K={K}, L={L}, gamma={gamma}")
    return value.numerator


def r_cw(K: int, L: int, gamma: int) -> Fraction:
    """(K - gamma L) / (gamma + 1)."""
    _check_gamma(K, L, gamma)
    return Fraction(K - gamma * L, gamma + 1)


def f_cw(K: int, L: int, gamma: int) -> int:
    """K * binom(K - gamma(L-1), gamma)."""
    _check_gamma(K, L, gamma)
    return K * comb(K - gamma * (L - 1), gamma)


def sr2_applicability(K: int, L: int, gamma: int) -> Tuple[bool, str]:
    """
    Returns whether the SR2 scheme applies and why not when it does not.

    It needs gamma >= 1, gamma | K and (K - gamma L + gamma) | K.
    """
    _check_gamma(K, L, gamma)
    if gamma < 1:
        return False, "SR2 needs gamma >= 1"
    if K % gamma:
        return False, f"gamma={gamma} does not divide K={K}"
    width = K - gamma * L + gamma
    if K % width:
        return False, f"K-gamma*L+gamma={width} does not divide K={K}"
    return True, ""


def r_sr2(K: int, L: int, gamma: int) -> Optional[Fraction]:
    """(K - gamma L)(K - gamma L + gamma) / (2K), or None when SR2 does not apply."""
    applicable, _ = sr2_applicability(K, L, gamma)
    if not applicable:
        return None
    return Fraction((K - gamma * L) * (K - gamma * L + gamma), 2 * K)


def f_sr2(K: int) -> int:
    """SR2 splits each file into K packets."""
    return K


def r_mr(K: int, L: int) -> Fraction:
    """
    ceil(K(K-L) / (2 + floor(L/(K-L+1)) + floor((L-1)/(K-L+1)))) / K, for gamma = 1.
    """
    _check_gamma(K, L, 1)
    width = K - L + 1
    divisor = 2 + L // width + (L - 1) // width
    return Fraction(ceil(Fraction(K * (K - L), divisor)), K)


def f_mr(K: int) -> int:
    """MR splits each file into K packets."""
    return K


def f_spe(K: int, L: int) -> Optional[int]:
    """K(K - 2L + 2)/4 for gamma = 2, or None unless that is a positive integer."""
    value = Fraction(K * (K - 2 * L + 2), 4)
    if value.denominator != 1 or value <= 0:
        return None
    return value.numerator


@dataclass(frozen=True)
class ComparisonRow:
    """
    One scheme at one gamma.

    Attributes:
    - gamma: The memory parameter.
    - scheme: HKD, RK1, CW, SR2, MR, SPE or NEW.
    - applicable: Whether the scheme is defined here.
    - rate: Exact rate, or None.
    - subpacketization: Exact packet count, or None.
    - gain: (K - t)/R for linear-subpacketization schemes, or None.
    - reason: Why something is missing.
    """
    gamma: int
    scheme: str
    applicable: bool
    rate: Optional[Fraction]
    subpacketization: Optional[int]
    gain: Optional[Fraction] = None
    reason: str = ""

    def to_csv_fields(self) -> List[str]:
        """Returns the row in CSV_HEADER order; missing values are empty."""
        def parts(value: Optional[Fraction]) -> List[str]:
            return ["", ""] if value is None else [str(value.numerator), str(value.denominator)]
        return [
            str(self.gamma), self.scheme, "1" if self.applicable else "0",
            *parts(self.rate),
            "" if self.subpacketization is None else str(self.subpacketization),
            *parts(self.gain),
            self.reason,
        ]


def _linear_gain(K: int, t: int, rate: Optional[Fraction]) -> Optional[Fraction]:
    if rate is None or rate == 0:
        return None
    return Fraction(K - t) / rate


def _rows_for_gamma(K: int, L: int, gamma: int) -> List[ComparisonRow]:
    t = gamma * L
    rows = [
        ComparisonRow(gamma, "HKD", True, r_hkd(K, L, gamma), None,
                      reason="subpacketization known only as an order estimate"),
        ComparisonRow(gamma, "RK1", True, r_rk1(K, L, gamma), f_rk1(K, L, gamma)),
        ComparisonRow(gamma, "CW", True, r_cw(K, L, gamma), f_cw(K, L, gamma)),
    ]

    applicable, reason = sr2_applicability(K, L, gamma)
    if applicable:
        rate = r_sr2(K, L, gamma)
        rows.append(ComparisonRow(gamma, "SR2", True, rate, f_sr2(K), _linear_gain(K, t, rate)))
    else:
        rows.append(ComparisonRow(gamma, "SR2", False, None, None, reason=reason))

    if gamma == 1:
        rate = r_mr(K, L)
        rows.append(ComparisonRow(gamma, "MR", True, rate, f_mr(K), _linear_gain(K, t, rate)))
    else:
        rows.append(ComparisonRow(gamma, "MR", False, None, None, reason="MR needs gamma = 1"))

    spe = f_spe(K, L) if gamma == 2 else None
    if spe is not None:
        rows.append(ComparisonRow(gamma, "SPE", True, None, spe,
                                  reason="rate has no closed form; gain only bounded"))
    else:
        reason = "SPE needs gamma = 2" if gamma != 2 else "K(K-2L+2)/4 is not a positive integer"
        rows.append(ComparisonRow(gamma, "SPE", False, None, None, reason=reason))

    new = theorem_parameters(validate(K, L, gamma))
    rows.append(ComparisonRow(
        gamma, "NEW", True, new.rate, new.subpacketization, _linear_gain(K, t, new.rate),
        reason=new.case.value,
    ))
    return sorted(rows, key=lambda row: row.scheme)


def compare_table(
        K: int, L: int, gamma_min: int = 0, gamma_max: int = None
    ) -> List[ComparisonRow]:
    """
    Builds the comparison rows for every gamma in [gamma_min:gamma_max].

    Parameters:
    - K (int): Number of users.
    - L (int): Access degree.
    - gamma_min (int): First gamma. Defaults to 0.
    - gamma_max (int): Last gamma. Defaults to floor(K/L).

    Returns:
    - List[ComparisonRow]: Sorted by gamma, then scheme name.

    Exceptions:
    - ParameterError: If K, L or the gamma range is invalid.
    """
    validate(K, L, 0)
    if gamma_max is None:
        gamma_max = K // L
    if not 0 <= gamma_min <= gamma_max <= K // L:
        raise exceptions.ParameterError(
            f"Need 0 <= gamma-min <= gamma-max <= floor(K/L) = {K // L}, "
            f"got [{gamma_min}:{gamma_max}]"
        )
    rows = []
    for gamma in range(gamma_min, gamma_max + 1):
        rows.extend(_rows_for_gamma(K, L, gamma))
    logger.debug("Comparison table for K=%d, L=%d has %d rows", K, L, len(rows))
    return rows


def to_csv(rows: List[ComparisonRow]) -> str:
    """Writes the rows as CSV with CSV_HEADER."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.to_csv_fields())
    return buffer.getvalue()
