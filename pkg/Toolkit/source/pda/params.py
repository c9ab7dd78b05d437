"""
System parameters of the multi-access network and the case split that picks a construction.

Classes:
- CaseKind: Which closed form and construction apply to (K, t).
- SystemParams: The validated (K, L, gamma, N) tuple.

Functions:
- validate(K, L, gamma, N) -> SystemParams
- classify(params) -> CaseKind
- classify_kt(K, t) -> CaseKind
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from source import exceptions
from source.pda.modmath import mod1

logger = logging.getLogger(__name__)


class CaseKind(Enum):
    """
    The four cases of the rate and subpacketization closed forms.

    - ALL_CACHED: t = K, every user can retrieve everything.
    - DIVISIBLE: (K-t+1) | K or K-t = 1, handled by Construction 1.
    - REMAINDER_KMT: <K>_{K-t+1} = K-t and K-t > 1, Construction 2 with an odd gain.
    - OTHER: everything else, Construction 2 with an even gain.
    """
    ALL_CACHED = "all-cached"
    DIVISIBLE = "divisible"
    REMAINDER_KMT = "remainder-kmt"
    OTHER = "other"


@dataclass(frozen=True)
class SystemParams:
    """
    The (K, L, M, N) multi-access system with M = gamma * N / K.

    Attributes:
    - K: Number of users, also the number of cache-nodes.
    - L: Number of consecutive cache-nodes each user accesses.
    - gamma: Cache-node memory parameter.
    - N: Number of files in the library.
    """
    K: int
    L: int
    gamma: int
    N: int

    @property
    def t(self) -> int:
        """Number of users that can retrieve each subfile."""
        return self.gamma * self.L

    @property
    def q(self) -> int:
        """K - t + 1, the modulus shared by the constructions and bounds."""
        return self.K - self.t + 1

    @property
    def memory_ratio(self) -> Fraction:
        """M / N of a single cache-node."""
        return Fraction(self.gamma, self.K)

    def __str__(self) -> str:
        return f"(K={self.K}, L={self.L}, gamma={self.gamma}, N={self.N}, t={self.t})"


def _require_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise exceptions.ParameterError(f"{name} must be an integer, got {value!r}")
    return value


def validate(K: int, L: int, gamma: int, N: int = None) -> SystemParams:
    """
    Validates the system parameters.

    Parameters:
    - K (int): Number of users and cache-nodes.
    - L (int): Access degree.
    - gamma (int): Cache-node memory parameter.
    - N (int): Number of files. Defaults to K.

    Returns:
    - SystemParams: The validated parameters.

    Exceptions:
    - ParameterError: If a bound is violated; the message names it.
    """
    if N is None:
        N = K
    for name, value in (("K", K), ("L", L), ("gamma", gamma), ("N", N)):
        _require_int(name, value)

    if K < 1:
        raise exceptions.ParameterError(f"K must be at least 1, got K={K}")
    if N < 1:
        raise exceptions.ParameterError(f"N must be at least 1, got N={N}")
    if L < 1:
        raise exceptions.ParameterError(f"L must be at least 1, got L={L}")
    if L > K:
        raise exceptions.ParameterError(f"L must not exceed K, got L={L} > K={K}")
    if gamma < 0:
        raise exceptions.ParameterError(f"gamma must be non-negative, got gamma={gamma}")
    if gamma > K // L:
        raise exceptions.ParameterError(
            f"gamma must not exceed floor(K/L) = {K // L}, got gamma={gamma}"
        )

    params = SystemParams(K=K, L=L, gamma=gamma, N=N)
    logger.debug("Validated parameters %s", params)
    return params


def classify_kt(K: int, t: int) -> CaseKind:
    """
    Classifies (K, t) into its construction case.

    Parameters:
    - K (int): Number of users.
    - t (int): Users per subfile, 0 <= t <= K.

    Returns:
    - CaseKind: The unique matching case.

    Exceptions:
    - ParameterError: If t is outside [0:K].
    """
    if K < 1 or not 0 <= t <= K:
        raise exceptions.ParameterError(f"Need K >= 1 and 0 <= t <= K, got K={K}, t={t}")
    if t == K:
        return CaseKind.ALL_CACHED
    q = K - t + 1
    if K % q == 0 or K - t == 1:
        return CaseKind.DIVISIBLE
    if mod1(K, q) == K - t:
        return CaseKind.REMAINDER_KMT
    return CaseKind.OTHER


def classify(params: SystemParams) -> CaseKind:
    """
    Classifies validated parameters into their construction case.

    Parameters:
    - params (SystemParams): Validated parameters.

    Returns:
    - CaseKind: The unique matching case.
    """
    case = classify_kt(params.K, params.t)
    logger.debug("Parameters %s classified as %s", params, case.value)
    return case
