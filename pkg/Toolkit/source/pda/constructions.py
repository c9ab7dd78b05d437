"""
The two PDA constructions under the consecutive cyclic placement and the dispatcher.

Non-star cells are filled with two-dimensional vectors. The first coordinate is
the class of the cell's track (its cyclic diagonal <j - k>_K); the second is a
position along the track, chosen so equal vectors meet the cross-star rule.

Classes:
- TheoremParameters: Closed-form gain, rate and subpacketization of the scheme.
- SchemeResult: A built array together with its checked parameters.

Functions:
- track_of(K, j, k) -> int
- track_class(K, t, l) -> int
- g_new(K, t) -> int
- theorem_parameters(params) -> TheoremParameters
- all_star_array(params) -> Pda
- construction1(params) -> Pda
- construction2(params) -> Pda
- build_scheme(params) -> SchemeResult
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from source import exceptions
from source.pda.modmath import mod1
from source.pda.params import CaseKind, SystemParams, classify, classify_kt
from source.pda.core import STAR, Pda, PdaStats, verify, verify_against_placement

logger = logging.getLogger(__name__)


def track_of(K: int, j: int, k: int) -> int:
    """Returns the track <j - k>_K of cell (j, k)."""
    return mod1(j - k, K)


def track_class(K: int, t: int, l: int) -> int:
    """Returns the class min(l, K - t + 1 - l) of track l."""
    return min(l, K - t + 1 - l)


def g_new(K: int, t: int) -> int:
    """
    Returns the gain of Construction 2.

    2*floor(K/(K-t+1)) + 1 when <K>_{K-t+1} = K - t, else 2*floor(K/(K-t+1)).

    Parameters:
    - K (int): Number of users.
    - t (int): Users per subfile.

    Returns:
    - int: The gain.

    Exceptions:
    - WrongCaseError: Unless (K-t+1) does not divide K and K - t > 1, or t = 0.
    """
    q = K - t + 1
    if t != 0 and not (K % q != 0 and K - t > 1):
        raise exceptions.WrongCaseError(
            f"Construction 2 gain needs (K-t+1) not dividing K and K-t > 1, got K={K}, t={t}"
        )
    base = 2 * (K // q)
    return base + 1 if mod1(K, q) == K - t else base


@dataclass(frozen=True)
class TheoremParameters:
    """
    The closed forms for one (K, t).

    Attributes:
    - case: The case of the split.
    - g: Gain of every symbol, 0 when nothing is sent.
    - rate: R_new.
    - subpacketization: F_new.
    """
    case: CaseKind
    g: int
    rate: Fraction
    subpacketization: int


def theorem_parameters(params: SystemParams) -> TheoremParameters:
    """
    Evaluates the achievable rate and subpacketization closed forms.

    Parameters:
    - params (SystemParams): The system parameters.

    Returns:
    - TheoremParameters: Case, gain, rate and subpacketization.
    """
    return theorem_parameters_kt(params.K, params.t)


def theorem_parameters_kt(K: int, t: int) -> TheoremParameters:
    """Same as theorem_parameters, on (K, t) alone."""
    case = classify_kt(K, t)
    q = K - t + 1
    if case is CaseKind.ALL_CACHED:
        return TheoremParameters(case, 0, Fraction(0), K)
    if case is CaseKind.DIVISIBLE:
        if (2 * K) % q:
            raise exceptions.InvariantError(f"2K/(K-t+1) is not an integer for K={K}, t={t}")
        return TheoremParameters(case, 2 * K // q, Fraction((K - t) * q, 2 * K), K)
    g = g_new(K, t)
    return TheoremParameters(case, g, Fraction(K - t, g), g * K)


def all_star_array(params: SystemParams) -> Pda:
    """Returns the K x K all-star array of the t = K case."""
    grid = tuple(tuple(STAR for _ in range(params.K)) for _ in range(params.K))
    return Pda(K=params.K, rows=tuple(range(1, params.K + 1)), grid=grid, provenance="all-star")


def construction1(params: SystemParams) -> Pda:
    """
    Builds the K x K array of the divisible case.

    With d = <j - k>_K and q = K - t + 1:
    - d > K - t: star
    - d < q/2: (d, <k>_q)
    - q/2 < d <= K - t: (q - d, <j>_q)
    - d = q/2: (d, <k>_{q/2}), reachable only when K - t is odd

    Parameters:
    - params (SystemParams): Parameters with (K-t+1) | K or K-t = 1, and t >= 1.

    Returns:
    - Pda: The array, rows indexed by subfile j.

    Exceptions:
    - WrongCaseError: If the parameters are not in the divisible case.
    - InvariantError: If the middle branch is hit with K - t even.
    """
    K, t = params.K, params.t
    if classify(params) is not CaseKind.DIVISIBLE or t < 1:
        raise exceptions.WrongCaseError(f"Construction 1 does not apply to {params}")
    q = K - t + 1

    grid = []
    for j in range(1, K + 1):
        row = []
        for k in range(1, K + 1):
            d = track_of(K, j, k)
            if d > K - t:
                row.append(STAR)
            elif 2 * d < q:
                row.append((d, mod1(k, q)))
            elif 2 * d > q:
                row.append((q - d, mod1(j, q)))
            else:
                if (K - t) % 2 == 0:
                    raise exceptions.InvariantError(
                        f"Middle track reached with K-t={K - t} even at ({j}, {k})"
                    )
                row.append((d, mod1(k, q // 2)))
        grid.append(tuple(row))

    logger.debug("Construction 1 built a %dx%d array for %s", K, K, params)
    return Pda(K=K, rows=tuple(range(1, K + 1)), grid=tuple(grid), provenance="construction-1")


def construction2(params: SystemParams) -> Pda:
    """
    Builds the g_new*K x K array; each subfile is split into g_new packets.

    Rows are (i, j) for i in [1:g_new], j in [1:K]. With d = <j - k>_K and
    q = K - t + 1, a cell is a star when d > K - t; otherwise it holds
    (d, <k - ((i-1)/2) q>_K) for odd i and (q - d, <j - (i/2) q>_K) for even i.

    Parameters:
    - params (SystemParams): Parameters in the remainder or other case, or with t = 0.

    Returns:
    - Pda: The array.

    Exceptions:
    - WrongCaseError: If the parameters fall in another case.
    """
    K, t = params.K, params.t
    case = classify(params)
    if t != 0 and case not in (CaseKind.REMAINDER_KMT, CaseKind.OTHER):
        raise exceptions.WrongCaseError(f"Construction 2 does not apply to {params}")
    q = K - t + 1
    g = g_new(K, t)

    rows = []
    grid = []
    for i in range(1, g + 1):
        for j in range(1, K + 1):
            row = []
            for k in range(1, K + 1):
                d = track_of(K, j, k)
                if d > K - t:
                    row.append(STAR)
                elif i % 2 == 1:
                    row.append((d, mod1(k - ((i - 1) // 2) * q, K)))
                else:
                    row.append((q - d, mod1(j - (i // 2) * q, K)))
            rows.append((i, j))
            grid.append(tuple(row))

    provenance = "construction-2" if t else "construction-2/uncached"
    logger.debug("Construction 2 built a %dx%d array (g=%d) for %s", g * K, K, g, params)
    return Pda(K=K, rows=tuple(rows), grid=tuple(grid), provenance=provenance)


@dataclass(frozen=True)
class SchemeResult:
    """
    A built array with its verified statistics and closed-form parameters.

    Attributes:
    - params: The system parameters.
    - pda: The array.
    - stats: Its verified statistics.
    - g_claimed: The gain every symbol has.
    - rate: R_new.
    - subpacketization: F_new.
    - case: The case that picked the construction.
    """
    params: SystemParams
    pda: Pda
    stats: PdaStats
    g_claimed: int
    rate: Fraction
    subpacketization: int
    case: CaseKind

    def summary(self) -> str:
        """Returns e.g. '4-(10,10,6,10) PDA, R=1, F=10'."""
        return f"{self.stats.summary()}, R={self.rate}, F={self.subpacketization}"


def build_scheme(params: SystemParams) -> SchemeResult:
    """
    Builds the array for any valid parameters and checks it.

    The array must satisfy C1-C3, follow the placement star pattern, be
    regular with the closed-form gain, and reproduce the closed-form rate and
    subpacketization exactly.

    Parameters:
    - params (SystemParams): Validated parameters.

    Returns:
    - SchemeResult: The checked scheme.

    Exceptions:
    - InvariantError: If any of the checks fails.
    """
    expected = theorem_parameters(params)
    if expected.case is CaseKind.ALL_CACHED:
        pda = all_star_array(params)
    elif params.t == 0:
        pda = construction2(params)
    elif expected.case is CaseKind.DIVISIBLE:
        pda = construction1(params)
    else:
        pda = construction2(params)

    report = verify(pda)
    if not report.ok:
        raise exceptions.InvariantError(f"{pda.provenance} for {params}: {report.violation}")
    if not verify_against_placement(pda, params):
        raise exceptions.InvariantError(
            f"{pda.provenance} for {params} does not follow the placement star pattern"
        )
    stats = report.stats
    if stats.F != expected.subpacketization or stats.rate != expected.rate:
        raise exceptions.InvariantError(
            f"{pda.provenance} for {params} gives F={stats.F}, R={stats.rate}; "
            f"expected F={expected.subpacketization}, R={expected.rate}"
        )
    if not stats.regular or stats.g_min != expected.g:
        raise exceptions.InvariantError(
            f"{pda.provenance} for {params} is not {expected.g}-regular"
        )

    logger.debug("Built scheme %s for %s", stats.summary(), params)
    return SchemeResult(
        params=params, pda=pda, stats=stats, g_claimed=expected.g,
        rate=expected.rate, subpacketization=expected.subpacketization, case=expected.case,
    )
