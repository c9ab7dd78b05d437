"""
Upper bound on the coded caching gain under the consecutive cyclic placement.

Classes:
- GainBranch: Which branch of the gain bound fired.
- GainBound: The optimal gain g* and the rate lower bound R*.

Functions:
- g_star(K, t) -> GainBound
- proposition1_holds(K, t, g) -> bool
- achieves_bound(K, t) -> bool
- gain_gap(params) -> int
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from source import exceptions
from source.pda.modmath import mod1
from source.pda.params import SystemParams
from source.pda.constructions import theorem_parameters

logger = logging.getLogger(__name__)


class GainBranch(Enum):
    """Branch of the bound: 2*floor(K/q), 2*floor(K/q)+1, or the all-cached sentinel."""
    EVEN = "2*floor(K/q)"
    ODD = "2*floor(K/q)+1"
    ALL_CACHED = "all-cached"


@dataclass(frozen=True)
class GainBound:
    """
    The bound for one (K, t).

    Attributes:
    - K, t: The system.
    - g_star: Maximal gain; 0 when t = K since no symbol exists.
    - r_star: (K - t) / g_star, 0 when t = K.
    - branch: Which branch fired.
    """
    K: int
    t: int
    g_star: int
    r_star: Fraction
    branch: GainBranch


def g_star(K: int, t: int) -> GainBound:
    """
    Evaluates the maximal gain and the rate lower bound.

    With q = K - t + 1: g* = 2*floor(K/q) if <K>_q <= floor((K-t)/2) or q | K,
    else 2*floor(K/q) + 1.

    Parameters:
    - K (int): Number of users.
    - t (int): Users per subfile.

    Returns:
    - GainBound: The bound.

    Exceptions:
    - ParameterError: If t is outside [0:K].
    """
    if K < 1 or not 0 <= t <= K:
        raise exceptions.ParameterError(f"Need K >= 1 and 0 <= t <= K, got K={K}, t={t}")
    if t == K:
        return GainBound(K, t, 0, Fraction(0), GainBranch.ALL_CACHED)
    q = K - t + 1
    base = 2 * (K // q)
    if mod1(K, q) <= (K - t) // 2 or K % q == 0:
        bound = GainBound(K, t, base, Fraction(K - t, base), GainBranch.EVEN)
    else:
        bound = GainBound(K, t, base + 1, Fraction(K - t, base + 1), GainBranch.ODD)
    logger.debug("g*(K=%d, t=%d) = %d via %s", K, t, bound.g_star, bound.branch.value)
    return bound


def proposition1_holds(K: int, t: int, g: int) -> bool:
    """Returns True iff (g - 2) K <= g (t - 1)."""
    return (g - 2) * K <= g * (t - 1)


def achieves_bound(K: int, t: int) -> bool:
    """
    Returns True when the constructed scheme reaches g*.

    That is when <K>_q <= floor((K-t)/2), <K>_q = K - t, q | K, or K - t = 1,
    and trivially when t = K.
    """
    if t == K:
        return True
    q = K - t + 1
    remainder = mod1(K, q)
    return remainder <= (K - t) // 2 or remainder == K - t or K % q == 0 or K - t == 1


def gain_gap(params: SystemParams) -> int:
    """
    Returns g* minus the gain the construction achieves.

    Parameters:
    - params (SystemParams): The system parameters.

    Returns:
    - int: 0 or 1.
    """
    achieved = theorem_parameters(params).g
    return g_star(params.K, params.t).g_star - achieved
