"""
Seeded file library split into equal subpackets.

Classes:
- FileStore: N files of F subpackets of B bytes each.
"""

import logging
import numpy as np
from source import exceptions

logger = logging.getLogger(__name__)


class FileStore:
    """
    N files, each split into F subpackets of B bytes.

    File n (1-based) is data[n - 1], and its subpacket at row position r
    (0-based, in the array's row order) is data[n - 1, r]. Contents are drawn
    from numpy's default generator, so a seed fixes them.

    Properties:
    - N, F, B: Files, subpackets per file, bytes per subpacket.
    - file_size: F * B.
    - library_bytes: N * F * B.

    Methods:
    - subpacket: A read-only view of one subpacket.
    - rows_of_every_file: The rows one cache-node keeps.
    - gather: Many subpackets in one call.
    - file_bytes: The whole file as bytes.
    """
    def __init__(self, N: int, F: int, B: int, seed: int = 0):
        if N < 1 or F < 1 or B < 1:
            raise exceptions.ParameterError(
                f"Need N >= 1, F >= 1 and B >= 1, got N={N}, F={F}, B={B}"
            )
        rng = np.random.default_rng(seed)
        self._data = rng.integers(0, 256, size=(N, F, B), dtype=np.uint8)
        self._data.flags.writeable = False
        logger.debug("File store: N=%d, F=%d, B=%d, seed=%d", N, F, B, seed)

    @property
    def N(self) -> int:  # pylint: disable=invalid-name
        """Number of files."""
        return self._data.shape[0]

    @property
    def F(self) -> int:  # pylint: disable=invalid-name
        """Subpackets per file."""
        return self._data.shape[1]

    @property
    def B(self) -> int:  # pylint: disable=invalid-name
        """Bytes per subpacket."""
        return self._data.shape[2]

    @property
    def file_size(self) -> int:
        """Bytes per file."""
        return self.F * self.B

    @property
    def library_bytes(self) -> int:
        """Bytes in the whole library."""
        return self._data.nbytes

    def _check_file(self, n: int) -> None:
        if not 1 <= n <= self.N:
            raise exceptions.DemandError(f"File {n} outside [1:{self.N}]")

    def subpacket(self, n: int, position: int) -> np.ndarray:
        """
        Returns subpacket W_{n, r} for the row at the given position.

        Parameters:
        - n (int): File index in [1:N].
        - position (int): Zero-based row position in [0:F-1].

        Returns:
        - np.ndarray: B read-only bytes.
        """
        self._check_file(n)
        if not 0 <= position < self.F:
            raise exceptions.ShapeError(f"Row position {position} outside [0:{self.F - 1}]")
        return self._data[n - 1, position]

    def subpackets(self, n: int) -> np.ndarray:
        """Returns the F x B read-only view of file n."""
        self._check_file(n)
        return self._data[n - 1]

    def file_bytes(self, n: int) -> bytes:
        """Returns file n as the concatenation of its subpackets in row order."""
        return self.subpackets(n).tobytes()

    def rows_of_every_file(self, positions) -> np.ndarray:
        """
        Returns the N x len(positions) x B copy of the given rows of every file.

        Exceptions:
        - ShapeError: If a position is outside [0:F-1].
        """
        positions = self._check_positions(positions)
        rows = self._data[:, positions]
        rows.flags.writeable = False
        return rows

    def gather(self, files, positions) -> np.ndarray:
        """
        Returns subpackets W_{files[i], positions[i]} stacked into a len x B array.

        Exceptions:
        - DemandError: If a file is outside [1:N].
        - ShapeError: If a position is outside [0:F-1].
        """
        files = np.asarray(files, dtype=np.intp)
        positions = self._check_positions(positions)
        if files.shape != positions.shape:
            raise exceptions.ShapeError(
                f"{files.size} files for {positions.size} row positions"
            )
        if files.size and (files.min() < 1 or files.max() > self.N):
            raise exceptions.DemandError(f"File outside [1:{self.N}] in {files.tolist()}")
        return self._data[files - 1, positions]

    def _check_positions(self, positions) -> np.ndarray:
        positions = np.asarray(positions, dtype=np.intp)
        if positions.size and (positions.min() < 0 or positions.max() >= self.F):
            raise exceptions.ShapeError(f"Row position outside [0:{self.F - 1}]")
        return positions
