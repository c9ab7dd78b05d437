"""
Brute-force certification of the gain bound at desk scale.

The search looks for the largest set of cells one symbol could occupy under the
consecutive cyclic star pattern: non-star cells in distinct rows and columns
whose cross cells are all stars. Packet-split arrays add nothing, because two
cells of one symbol never share a subfile, so the K x K pattern bounds every
array under this placement.

Classes:
- GainSearchResult: The maximum found and a witness.

Functions:
- resolve_max_k(override) -> int
- max_single_symbol_gain(K, t, max_k, max_nodes) -> GainSearchResult
- is_valid_symbol_set(K, t, cells) -> bool
- satisfies_intersection_form(K, t, cells) -> bool
- naive_pda_check(pda) -> bool

Constants:
- ORACLE_CAP_ENV: Environment variable overriding the K cap.
"""

import logging
import os
from dataclasses import dataclass
from typing import List, Sequence, Tuple
from source import exceptions, utils
from source.pda.modmath import mod1, cyclic_range
from source.pda.placement import is_retrievable
from source.pda.core import Pda, is_star

logger = logging.getLogger(__name__)

ORACLE_CAP_ENV = "PDA_ORACLE_MAX_K"

Cell = Tuple[int, int]


@dataclass(frozen=True)
class GainSearchResult:
    """
    Result of the exhaustive search.

    Attributes:
    - K, t: The system.
    - g_max: Largest symbol multiplicity possible.
    - witness: (row j, column k) cells reaching it, sorted by column.
    - nodes_explored: Search nodes visited.
    """
    K: int
    t: int
    g_max: int
    witness: Tuple[Cell, ...]
    nodes_explored: int


def resolve_max_k(override: int = None, settings: utils.Settings = None) -> int:
    """
    Returns the K cap: the override, else the environment variable, else the settings.

    Exceptions:
    - ParameterError: If the environment variable is not a positive integer.
    """
    if override is not None:
        return override
    env_value = os.environ.get(ORACLE_CAP_ENV)
    if env_value:
        try:
            cap = int(env_value)
        except ValueError:
            raise exceptions.ParameterError(
                f"{ORACLE_CAP_ENV} must be an integer, got {env_value!r}"
            ) from None
        if cap < 1:
            raise exceptions.ParameterError(f"{ORACLE_CAP_ENV} must be positive, got {cap}")
        return cap
    return (settings or utils.Settings()).get_oracle("max_k")


class _GainSearch:
    """Backtracking over columns with the first cell anchored in column 1."""
    def __init__(self, K: int, t: int, max_nodes: int):
        self.K = K
        self.t = t
        self.max_nodes = max_nodes
        self.nodes = 0
        self.best: List[int] = []
        # non-star cells ordered by column, then row
        self.cells: List[Cell] = [
            (j, k) for k in range(1, K + 1) for j in range(1, K + 1)
            if not is_retrievable(K, t, j, k)
        ]
        self.compatible = [
            [self._pair_ok(a, b) for b in self.cells] for a in self.cells
        ]

    def _pair_ok(self, a: Cell, b: Cell) -> bool:
        (j1, k1), (j2, k2) = a, b
        return j1 != j2 and k1 != k2 \
            and is_retrievable(self.K, self.t, j1, k2) and is_retrievable(self.K, self.t, j2, k1)

    def run(self) -> List[Cell]:
        """Searches every anchor in column 1 and returns the best cell set."""
        # the pattern is invariant under shifting rows and columns together,
        # so some optimal set has a cell in column 1
        for anchor, (_, k) in enumerate(self.cells):
            if k != 1:
                break
            candidates = [
                other for other in range(len(self.cells))
                if self.cells[other][1] > 1 and self.compatible[anchor][other]
            ]
            self._extend([anchor], candidates)
        return [self.cells[index] for index in self.best]

    def _extend(self, chosen: List[int], candidates: List[int]) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise exceptions.ResourceGuardError(
                f"Gain search for K={self.K}, t={self.t} exceeded {self.max_nodes} nodes"
            )
        if len(chosen) > len(self.best):
            self.best = list(chosen)

        for position, index in enumerate(candidates):
            remaining = candidates[position:]
            columns_left = len({self.cells[other][1] for other in remaining})
            if len(chosen) + columns_left <= len(self.best):
                return
            column = self.cells[index][1]
            narrowed = [
                other for other in remaining[1:]
                if self.cells[other][1] > column and self.compatible[index][other]
            ]
            self._extend(chosen + [index], narrowed)


def max_single_symbol_gain(
        K: int, t: int, max_k: int = None, max_nodes: int = None,
        settings: utils.Settings = None
    ) -> GainSearchResult:
    """
    Finds the largest number of cells a single symbol can occupy.

    Parameters:
    - K (int): Number of users.
    - t (int): Users per subfile, 0 <= t < K.
    - max_k (int): K cap; resolved with resolve_max_k when None.
    - max_nodes (int): Search node cap; taken from the settings when None.
    - settings (utils.Settings): Settings to fall back on; the default file when None.

    Returns:
    - GainSearchResult: The maximum and a witness.

    Exceptions:
    - ParameterError: If t is outside [0:K-1].
    - ResourceGuardError: If K exceeds the cap or the search exceeds max_nodes.
    """
    if K < 1 or not 0 <= t < K:
        raise exceptions.ParameterError(f"Need K >= 1 and 0 <= t < K, got K={K}, t={t}")
    cap = resolve_max_k(max_k, settings)
    if K > cap:
        raise exceptions.ResourceGuardError(
            f"K={K} exceeds the exhaustive search cap {cap}; "
            f"raise it with --max-K-override or {ORACLE_CAP_ENV}"
        )
    if max_nodes is None:
        max_nodes = (settings or utils.Settings()).get_oracle("max_nodes")

    logger.debug("Searching the maximal single-symbol gain for K=%d, t=%d", K, t)
    search = _GainSearch(K, t, max_nodes)
    witness = search.run()
    result = GainSearchResult(
        K=K, t=t, g_max=len(witness), witness=tuple(witness), nodes_explored=search.nodes
    )
    logger.info(
        "Gain search K=%d t=%d: g_max=%d after %d nodes", K, t, result.g_max, search.nodes
    )
    return result


def is_valid_symbol_set(K: int, t: int, cells: Sequence[Cell]) -> bool:
    """
    Checks cells directly against the single-symbol rules.

    Distinct rows, distinct columns, every cell non-star, and for every
    ordered pair u != v the cell (j_v, k_u) is a star.
    """
    rows = [j for j, _ in cells]
    columns = [k for _, k in cells]
    if len(set(rows)) != len(rows) or len(set(columns)) != len(columns):
        return False
    if any(mod1(j - k, K) > K - t for j, k in cells):
        return False
    for u, (_, k_u) in enumerate(cells):
        for v, (j_v, _) in enumerate(cells):
            if u != v and not mod1(j_v - k_u, K) > K - t:
                return False
    return True


def satisfies_intersection_form(K: int, t: int, cells: Sequence[Cell]) -> bool:
    """Checks that each k_u lies in every [j_v : j_v + t - 1]_K with v != u."""
    for u, (_, k_u) in enumerate(cells):
        for v, (j_v, _) in enumerate(cells):
            if u != v and k_u not in cyclic_range(j_v, j_v + t - 1, K):
                return False
    return True


def naive_pda_check(pda: Pda) -> bool:
    """
    Checks C1-C3 by walking every pair of cells, with no grouping.

    Parameters:
    - pda (Pda): The array.

    Returns:
    - bool: True iff the array is a PDA.
    """
    grid = pda.grid
    star_counts = set()
    for k in range(pda.K):
        star_counts.add(sum(1 for row in grid if is_star(row[k])))
    if len(star_counts) > 1:
        return False

    labels = set()
    for row in grid:
        for cell in row:
            if not is_star(cell):
                labels.add(cell)
    plain = [label for label in labels if type(label) is int]  # pylint: disable=unidiomatic-typecheck
    vectors = [label for label in labels if isinstance(label, tuple)]
    if len(plain) + len(vectors) != len(labels):
        return False
    if plain and vectors:
        return False
    if plain and sorted(plain) != list(range(1, len(plain) + 1)):
        return False

    positions = [(j, k) for j in range(pda.F) for k in range(pda.K)]
    for first, (j1, k1) in enumerate(positions):
        cell = grid[j1][k1]
        if is_star(cell):
            continue
        for j2, k2 in positions[first + 1:]:
            if grid[j2][k2] != cell:
                continue
            if j1 == j2 or k1 == k2:
                return False
            if not is_star(grid[j1][k2]) or not is_star(grid[j2][k1]):
                return False
    return True
