"""
The consecutive cyclic placement.

Each file is split into K subfiles. Cache-node C_k stores subfile
<k - iL + 1>_K of every file for i in [1:gamma], so subfile j sits on nodes
<j + iL - 1>_K and is retrievable by users j, j+1, ..., j+t-1 (cyclically).

Grids use numpy boolean arrays with row = subfile - 1 and column = node/user - 1.

Classes:
- PlacementArrays: The cache-node placement array C and user-retrieve array U.

Functions:
- is_retrievable(K, t, j, k) -> bool
- node_cache_contents(params, k) -> FrozenSet[int]
- nodes_of_user(params, k) -> List[int]
- users_of_subfile(params, j) -> List[int]
- build_placement_arrays(params) -> PlacementArrays
- check_local_gain(params) -> bool
- render_grid(grid) -> str
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, List
import numpy as np
from source import exceptions
from source.pda.modmath import mod1, cyclic_range
from source.pda.params import SystemParams

logger = logging.getLogger(__name__)

STAR_TEXT = "*"
BLANK_TEXT = "."


def is_retrievable(K: int, t: int, j: int, k: int) -> bool:
    """
    The star rule: user k can retrieve subfile j iff <j - k>_K > K - t.

    Parameters:
    - K (int): Number of users.
    - t (int): Users per subfile.
    - j (int): Subfile index in [1:K].
    - k (int): User index in [1:K].

    Returns:
    - bool: True for a star position.
    """
    return mod1(j - k, K) > K - t


def _check_index(name: str, index: int, K: int) -> None:
    if not 1 <= index <= K:
        raise exceptions.ParameterError(f"{name} index must be in [1:{K}], got {index}")


def node_cache_contents(params: SystemParams, k: int) -> FrozenSet[int]:
    """
    Returns the subfile indices cache-node k stores.

    Parameters:
    - params (SystemParams): The system parameters.
    - k (int): Cache-node index in [1:K].

    Returns:
    - FrozenSet[int]: {<k - iL + 1>_K : i in [1:gamma]}, exactly gamma elements.

    Exceptions:
    - ParameterError: If k is out of range.
    """
    _check_index("Cache-node", k, params.K)
    return frozenset(mod1(k - i * params.L + 1, params.K) for i in range(1, params.gamma + 1))


def nodes_of_user(params: SystemParams, k: int) -> List[int]:
    """Returns the L cache-nodes user k accesses, in order."""
    _check_index("User", k, params.K)
    return cyclic_range(k, k + params.L - 1, params.K)


def users_of_subfile(params: SystemParams, j: int) -> List[int]:
    """Returns the t users that can retrieve subfile j, in order."""
    _check_index("Subfile", j, params.K)
    return cyclic_range(j, j + params.t - 1, params.K)


def render_grid(grid: np.ndarray) -> str:
    """
    Renders a boolean grid, '*' for True and '.' for False.

    Rows are subfiles 1..K top to bottom, columns nodes or users 1..K left to right.
    """
    return "\n".join(
        " ".join(STAR_TEXT if cell else BLANK_TEXT for cell in row) for row in grid
    )


@dataclass(frozen=True)
class PlacementArrays:
    """
    The cache-node placement array and the user-retrieve array.

    Attributes:
    - K: Number of users and nodes.
    - t: Users per subfile.
    - node_array: C[j-1, k-1] is True iff node k caches subfile j.
    - user_array: U[j-1, k-1] is True iff user k can retrieve subfile j.
    """
    K: int
    t: int
    node_array: np.ndarray
    user_array: np.ndarray

    def render(self) -> str:
        """Renders C and U one after the other."""
        return "C\n" + render_grid(self.node_array) + "\n\nU\n" + render_grid(self.user_array)


def build_placement_arrays(params: SystemParams) -> PlacementArrays:
    """
    Builds C from the node contents and U from the users' node access.

    U is derived twice, once by OR-ing the L accessible columns of C and once
    from the closed-form star rule, and the two must agree.

    Parameters:
    - params (SystemParams): The system parameters.

    Returns:
    - PlacementArrays: The two grids, read-only.

    Exceptions:
    - InvariantError: If the two derivations of U disagree.
    """
    K, t = params.K, params.t
    node_array = np.zeros((K, K), dtype=bool)
    for k in range(1, K + 1):
        for j in node_cache_contents(params, k):
            node_array[j - 1, k - 1] = True

    user_array = np.zeros((K, K), dtype=bool)
    for k in range(1, K + 1):
        columns = [node - 1 for node in nodes_of_user(params, k)]
        user_array[:, k - 1] = node_array[:, columns].any(axis=1)

    closed_form = np.array(
        [[is_retrievable(K, t, j, k) for k in range(1, K + 1)] for j in range(1, K + 1)],
        dtype=bool,
    )
    if not np.array_equal(user_array, closed_form):
        raise exceptions.InvariantError(
            f"User-retrieve array from node access disagrees with the star rule for {params}"
        )

    node_array.flags.writeable = False
    user_array.flags.writeable = False
    logger.debug("Built placement arrays for %s", params)
    return PlacementArrays(K=K, t=t, node_array=node_array, user_array=user_array)


def check_local_gain(params: SystemParams) -> bool:
    """
    Checks that any L neighbouring cache-nodes hold pairwise disjoint contents.

    Parameters:
    - params (SystemParams): The system parameters.

    Returns:
    - bool: True when every user retrieves gamma * L distinct subfiles.
    """
    for k in range(1, params.K + 1):
        seen = set()
        for node in nodes_of_user(params, k):
            contents = node_cache_contents(params, node)
            if seen & contents:
                logger.warning("Nodes accessed by user %d overlap on %s", k, seen & contents)
                return False
            seen |= contents
    return True
