"""
One-based cyclic arithmetic.

Every index in the toolkit (users, cache-nodes, subfiles) lives in [1:q], so
residues are taken in [1:q] rather than [0:q-1].

Classes:
- CyclicIndex: An integer pinned to [1:q].

Functions:
- mod1(a: int, q: int) -> int
- cyclic_range(a: int, b: int, q: int) -> List[int]
"""

import logging
from dataclasses import dataclass
from typing import List
from source import exceptions

logger = logging.getLogger(__name__)


def mod1(a: int, q: int) -> int:
    """
    Returns q when q divides a, otherwise the least positive residue of a modulo q.

    Parameters:
    - a (int): Any integer, negative values included.
    - q (int): The modulus.

    Returns:
    - int: A value in [1:q] congruent to a.

    Exceptions:
    - InvalidModulusError: If q is not positive.
    """
    if q <= 0:
        raise exceptions.InvalidModulusError(f"Modulus must be positive, got {q}")
    residue = a % q  # python keeps the sign of q
    return residue if residue else q


def cyclic_range(a: int, b: int, q: int) -> List[int]:
    """
    Returns the cyclic interval [a:b]_q as an ordered list.

    Parameters:
    - a (int): First element before reduction.
    - b (int): Last element before reduction, b >= a - 1.
    - q (int): The modulus.

    Returns:
    - List[int]: mod1(a, q), mod1(a + 1, q), ..., mod1(b, q).

    Exceptions:
    - InvalidRangeError: If b < a - 1.
    - InvalidModulusError: If q is not positive.
    """
    if q <= 0:
        raise exceptions.InvalidModulusError(f"Modulus must be positive, got {q}")
    if b < a - 1:
        raise exceptions.InvalidRangeError(f"Empty interval needs b >= a - 1, got [{a}:{b}]")
    return [mod1(x, q) for x in range(a, b + 1)]


@dataclass(frozen=True)
class CyclicIndex:
    """An integer pinned to [1:q]."""
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus <= 0:
            raise exceptions.InvalidModulusError(
                f"Modulus must be positive, got {self.modulus}"
            )
        if not 1 <= self.value <= self.modulus:
            raise exceptions.InvalidRangeError(
                f"Cyclic index {self.value} outside [1:{self.modulus}]"
            )

    @classmethod
    def of(cls, a: int, q: int) -> "CyclicIndex":
        """Reduces any integer into a CyclicIndex."""
        return cls(mod1(a, q), q)

    def shift(self, offset: int) -> "CyclicIndex":
        """Returns the index moved by offset positions around the cycle."""
        return CyclicIndex.of(self.value + offset, self.modulus)
