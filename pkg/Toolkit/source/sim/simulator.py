"""
Byte-level run of a PDA scheme: placement, XOR delivery and decoding at every user.

The server sends one message per symbol, the XOR of the subpackets W_{d_k, r}
over every cell (r, k) holding it. A user rebuilds each row of its file either
from the cache-nodes it can reach (star cells) or from the message of the
row's symbol, cancelling the other terms with subpackets it can reach.

The cell bookkeeping of an array is computed once and cached (delivery_plan),
so runs over many demands and seeds only move bytes.

Classes:
- NodeCache: What one cache-node stores.
- Message: One XOR multicast.
- DeliveryTranscript: Every message plus totals.
- UserPlan, DeliveryPlan: Precomputed cell indices of an array.
- DecodeOutcome: Decoded files and per-user failures.
- SimulationReport: Outcome of a full run.

Functions:
- demand_vector(preset, K, N, seed) -> List[int]
- delivery_plan(pda) -> DeliveryPlan
- place(params, pda, store) -> Dict[int, NodeCache]
- deliver(params, pda, store, demand) -> DeliveryTranscript
- decode(params, pda, transcript, caches, k, demand) -> bytes
- decode_all(params, pda, transcript, caches, demand, workers) -> DecodeOutcome
- run_simulation(params, N, B, demand, seed, scheme, strict) -> SimulationReport
- transcript_records(transcript) -> Dict
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union
import numpy as np
from source import exceptions, utils
from source.pda.modmath import mod1
from source.pda.params import SystemParams
from source.pda.placement import node_cache_contents, nodes_of_user
from source.pda.core import Pda, RowIndex, is_star, subfile_of, symbol_map
from source.pda.constructions import SchemeResult, build_scheme
from source.sim.filestore import FileStore

logger = logging.getLogger(__name__)

DECODE_WORKERS = 4
INLINE_DECODE_USERS = 8


@dataclass(frozen=True)
class NodeCache:
    """
    Contents of one cache-node.

    Attributes:
    - node: Node index k.
    - positions: Cached row positions (every file), ascending.
    - data: N x len(positions) x B bytes.
    """
    node: int
    positions: Tuple[int, ...]
    data: np.ndarray

    @property
    def nbytes(self) -> int:
        """Bytes stored."""
        return self.data.nbytes

    @cached_property
    def offsets(self) -> Dict[int, int]:
        """Row position -> index along the second axis of data."""
        return {position: offset for offset, position in enumerate(self.positions)}

    def holds(self, position: int) -> bool:
        """True when the row at this position is cached."""
        return position in self.offsets

    def get(self, n: int, position: int) -> np.ndarray:
        """Returns the cached subpacket W_{n, r}."""
        if position not in self.offsets:
            raise exceptions.DecodeError(
                f"Node {self.node} does not cache row position {position}", row=position
            )
        return self.data[n - 1, self.offsets[position]]


@dataclass(frozen=True)
class Message:
    """
    One multicast.

    Attributes:
    - symbol: Canonical symbol s.
    - payload: XOR of the subpackets the symbol's cells ask for.
    - served: (user k, row position) for every cell holding s.
    """
    symbol: int
    payload: np.ndarray
    served: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class DeliveryTranscript:
    """
    Everything the server sent.

    Attributes:
    - messages: One per symbol, ordered by symbol.
    - rows: Row indices of the array, to name row positions.
    - subpacket_bytes: B.
    - file_size: F * B.
    """
    messages: Tuple[Message, ...]
    rows: Tuple[RowIndex, ...]
    subpacket_bytes: int
    file_size: int

    @property
    def messages_sent(self) -> int:
        """Number of messages, S."""
        return len(self.messages)

    @property
    def bytes_sent(self) -> int:
        """Total payload bytes, S * B."""
        return sum(message.payload.nbytes for message in self.messages)

    @property
    def rate(self) -> Fraction:
        """Bytes sent over the file size."""
        return Fraction(self.bytes_sent, self.file_size)

    @cached_property
    def payloads(self) -> np.ndarray:
        """S x B matrix of every payload, row s - 1 for symbol s."""
        if not self.messages:
            return np.zeros((0, self.subpacket_bytes), dtype=np.uint8)
        return np.stack([message.payload for message in self.messages])

    def message(self, symbol: int) -> Message:
        """Returns the message of a symbol."""
        if 1 <= symbol <= len(self.messages) and self.messages[symbol - 1].symbol == symbol:
            return self.messages[symbol - 1]
        raise exceptions.DecodeError(f"No message for symbol {symbol}", symbol=symbol)


@dataclass(frozen=True)
class UserPlan:
    """
    Cell indices one user decodes with.

    Attributes:
    - star_positions: Rows the user reads from its caches.
    - coded_positions: Rows the user recovers from a message.
    - coded_symbols: The symbol of each coded row.
    - side_users, side_positions: The other cells of each coded row's symbol,
      grouped by coded row.
    - side_owner: Index into coded_positions of each side cell.
    - order, group_starts: Gather order and group starts into the pool
      [payloads of coded_symbols; side subpackets] for one XOR reduction per coded row.
    """
    star_positions: np.ndarray
    coded_positions: np.ndarray
    coded_symbols: np.ndarray
    side_users: np.ndarray
    side_positions: np.ndarray
    side_owner: np.ndarray
    order: np.ndarray
    group_starts: np.ndarray


@dataclass(frozen=True)
class DeliveryPlan:
    """
    Cell bookkeeping of an array, independent of demand and bytes.

    Attributes:
    - S: Number of symbols.
    - cell_users, cell_positions: Every non-star cell, sorted by symbol.
    - symbol_starts: Start of each symbol's run in the cell arrays.
    - served: (user, row position) per symbol, for the transcript.
    - users: UserPlan of users 1..K, at index k - 1.
    """
    S: int
    cell_users: np.ndarray
    cell_positions: np.ndarray
    symbol_starts: np.ndarray
    served: Tuple[Tuple[Tuple[int, int], ...], ...]
    users: Tuple[UserPlan, ...]


@dataclass(frozen=True)
class DecodeOutcome:
    """
    Result of decode_all.

    Attributes:
    - decoded: user -> decoded file, for the users that decoded.
    - failures: user -> the error that stopped it.
    """
    decoded: Dict[int, bytes]
    failures: Dict[int, Exception] = field(default_factory=dict)


@dataclass(frozen=True)
class SimulationReport:
    """
    Outcome of run_simulation.

    Attributes:
    - params: The system.
    - N, B: Files and bytes per subpacket.
    - demand: The demand vector.
    - decoded_users: Users whose file came back byte-exact.
    - messages_sent, bytes_sent, file_size: Delivery totals.
    - rate: bytes_sent / file_size.
    - node_bytes: Bytes stored per node.
    - transcript: The delivery transcript.
    - failures: (user, reason) for every user that did not decode.
    """
    params: SystemParams
    N: int
    B: int
    demand: Tuple[int, ...]
    decoded_users: Tuple[int, ...]
    messages_sent: int
    bytes_sent: int
    file_size: int
    rate: Fraction
    node_bytes: Tuple[int, ...]
    transcript: DeliveryTranscript
    failures: Tuple[Tuple[int, str], ...] = ()

    @property
    def all_decoded(self) -> bool:
        """True when every user decoded."""
        return len(self.decoded_users) == self.params.K

    def summary(self) -> str:
        """Returns e.g. 'all 10 users decoded; bytes = 1 × file size'."""
        decoded = f"all {self.params.K} users decoded" if self.all_decoded \
            else f"{len(self.decoded_users)} of {self.params.K} users decoded"
        return f"{decoded}; bytes = {self.rate} × file size"


def demand_vector(preset: str, K: int, N: int, seed: int = 0) -> List[int]:
    """
    Builds a demand vector.

    Parameters:
    - preset (str): 'worst' (distinct files while N >= K, else round-robin),
      'equal' (everyone asks for file 1) or 'random' (uniform, seeded).
    - K (int): Number of users.
    - N (int): Number of files.
    - seed (int): Seed of the random preset.

    Returns:
    - List[int]: d_1..d_K in [1:N].

    Exceptions:
    - DemandError: If the preset is unknown or N < 1.
    """
    if N < 1:
        raise exceptions.DemandError(f"Need at least one file, got N={N}")
    if preset == "worst":
        return [mod1(k, N) for k in range(1, K + 1)]
    if preset == "equal":
        return [1] * K
    if preset == "random":
        rng = np.random.default_rng(seed)
        return [int(n) for n in rng.integers(1, N + 1, size=K)]
    raise exceptions.DemandError(
        f"Unknown demand preset '{preset}', expected one of {', '.join(utils.DEMAND_PRESETS)}"
    )


def _check_demand(demand: Sequence[int], K: int, N: int) -> Tuple[int, ...]:
    if len(demand) != K:
        raise exceptions.DemandError(f"Demand has {len(demand)} entries, expected K={K}")
    for k, n in enumerate(demand, start=1):
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or not 1 <= n <= N:
            raise exceptions.DemandError(f"User {k} demands file {n!r}, outside [1:{N}]")
    return tuple(int(n) for n in demand)


def _check_dimensions(params: SystemParams, pda: Pda, store: FileStore) -> None:
    if pda.K != params.K:
        raise exceptions.ShapeError(f"Array has {pda.K} columns, parameters have K={params.K}")
    if store.F != pda.F:
        raise exceptions.ShapeError(f"File store has F={store.F}, array has {pda.F} rows")


def _indices(values) -> np.ndarray:
    return np.array(values, dtype=np.intp)


def _user_plan(pda: Pda, mapping: Dict, served, k: int) -> UserPlan:
    star, coded, symbols = [], [], []
    side_users, side_positions, side_owner = [], [], []
    for position, row in enumerate(pda.grid):
        cell = row[k - 1]
        if is_star(cell):
            star.append(position)
            continue
        symbol = mapping[cell]
        owner = len(coded)
        coded.append(position)
        symbols.append(symbol)
        for other_k, other_position in served[symbol - 1]:
            if (other_k, other_position) != (k, position):
                side_users.append(other_k)
                side_positions.append(other_position)
                side_owner.append(owner)

    # pool rows: coded row c at c, its side cells after all payloads
    order, group_starts = [], []
    cursor = 0
    for owner in range(len(coded)):
        group_starts.append(len(order))
        order.append(owner)
        while cursor < len(side_owner) and side_owner[cursor] == owner:
            order.append(len(coded) + cursor)
            cursor += 1

    return UserPlan(
        star_positions=_indices(star), coded_positions=_indices(coded),
        coded_symbols=_indices(symbols), side_users=_indices(side_users),
        side_positions=_indices(side_positions), side_owner=_indices(side_owner),
        order=_indices(order), group_starts=_indices(group_starts),
    )


@lru_cache(maxsize=128)
def delivery_plan(pda: Pda) -> DeliveryPlan:
    """
    Groups the cells of an array by symbol and lists, per user, what it reads
    from its caches and what it cancels out of each message.

    Cached per array; the plan does not depend on demand, N or B.
    """
    mapping = symbol_map(pda)
    groups = [[] for _ in mapping]
    for position, k, cell in pda.cells():
        if not is_star(cell):
            groups[mapping[cell] - 1].append((k, position))
    served = tuple(tuple(group) for group in groups)
    sizes = _indices([len(group) for group in served])
    flat = [cell for group in served for cell in group]

    plan = DeliveryPlan(
        S=len(served),
        cell_users=_indices([k for k, _ in flat]),
        cell_positions=_indices([position for _, position in flat]),
        symbol_starts=np.cumsum(sizes) - sizes,
        served=served,
        users=tuple(_user_plan(pda, mapping, served, k) for k in range(1, pda.K + 1)),
    )
    logger.debug("Delivery plan: %d symbols over %d cells, K=%d", plan.S, len(flat), pda.K)
    return plan


def place(params: SystemParams, pda: Pda, store: FileStore) -> Dict[int, NodeCache]:
    """
    Fills every cache-node: node k keeps all rows whose subfile it caches, for every file.

    Parameters:
    - params (SystemParams): The system.
    - pda (Pda): The array; each row carries a subfile j.
    - store (FileStore): The library, with F = pda.F.

    Returns:
    - Dict[int, NodeCache]: node -> contents.

    Exceptions:
    - ShapeError: If the array, parameters and store disagree on dimensions.
    """
    _check_dimensions(params, pda, store)
    subfiles = [subfile_of(row_index) for row_index in pda.rows]
    caches = {}
    for k in range(1, params.K + 1):
        contents = node_cache_contents(params, k)
        positions = tuple(p for p, j in enumerate(subfiles) if j in contents)
        caches[k] = NodeCache(node=k, positions=positions, data=store.rows_of_every_file(positions))
    logger.debug(
        "Placed %s: %d bytes per node", params, caches[1].nbytes if caches else 0
    )
    return caches


def deliver(
        params: SystemParams, pda: Pda, store: FileStore, demand: Sequence[int]
    ) -> DeliveryTranscript:
    """
    Builds one XOR message per symbol.

    Parameters:
    - params (SystemParams): The system.
    - pda (Pda): The array.
    - store (FileStore): The library.
    - demand (Sequence[int]): d_1..d_K in [1:N].

    Returns:
    - DeliveryTranscript: S messages of B bytes each.

    Exceptions:
    - DemandError: If the demand vector is malformed.
    - ShapeError: On a dimension mismatch.
    """
    _check_dimensions(params, pda, store)
    demand = _check_demand(demand, params.K, store.N)
    plan = delivery_plan(pda)
    payloads = np.zeros((0, store.B), dtype=np.uint8)
    if plan.S:
        files = _indices(demand)[plan.cell_users - 1]
        subpackets = store.gather(files, plan.cell_positions)
        payloads = np.bitwise_xor.reduceat(subpackets, plan.symbol_starts, axis=0)
        payloads.flags.writeable = False
    messages = tuple(
        Message(symbol=symbol, payload=payloads[symbol - 1], served=plan.served[symbol - 1])
        for symbol in range(1, plan.S + 1)
    )

    transcript = DeliveryTranscript(
        messages=messages, rows=pda.rows,
        subpacket_bytes=store.B, file_size=store.file_size,
    )
    logger.debug(
        "Delivered %d messages (%d bytes) for demand %s",
        transcript.messages_sent, transcript.bytes_sent, list(demand),
    )
    return transcript


def _reachable(caches: Dict[int, NodeCache], params: SystemParams, k: int) -> List[NodeCache]:
    return [caches[node] for node in nodes_of_user(params, k)]


def _reachable_rows(reachable: List[NodeCache], F: int) -> Tuple[np.ndarray, np.ndarray]:
    """Stacks the reachable caches; lookup[r] is the column of row r, or -1."""
    data = np.concatenate([cache.data for cache in reachable], axis=1)
    lookup = np.full(F, -1, dtype=np.intp)
    offset = data.shape[1]
    for cache in reversed(reachable):
        offset -= len(cache.positions)
        lookup[_indices(cache.positions)] = offset + np.arange(len(cache.positions))
    return data, lookup


def decode(
        params: SystemParams, pda: Pda, transcript: DeliveryTranscript,
        caches: Dict[int, NodeCache], k: int, demand: Sequence[int]
    ) -> bytes:
    """
    Rebuilds the file user k asked for.

    Parameters:
    - params (SystemParams): The system.
    - pda (Pda): The array used for delivery.
    - transcript (DeliveryTranscript): The messages.
    - caches (Dict[int, NodeCache]): Node contents from place.
    - k (int): The user.
    - demand (Sequence[int]): The demand vector.

    Returns:
    - bytes: File d_k.

    Exceptions:
    - DecodeError: If a message is missing or a needed subpacket is out of reach.
    """
    reachable = _reachable(caches, params, k)
    plan = delivery_plan(pda).users[k - 1]
    demand = _indices(demand)
    data, lookup = _reachable_rows(reachable, pda.F)
    rows = np.empty((pda.F, transcript.subpacket_bytes), dtype=np.uint8)

    star_columns = lookup[plan.star_positions]
    missing = np.flatnonzero(star_columns < 0)
    if missing.size:
        row = pda.rows[plan.star_positions[missing[0]]]
        raise exceptions.DecodeError(
            f"User {k} cannot reach row {row!r} marked as cached", row=row
        )
    rows[plan.star_positions] = data[demand[k - 1] - 1, star_columns]

    if plan.coded_positions.size:
        highest = int(plan.coded_symbols.max())
        if highest > transcript.messages_sent:
            transcript.message(highest)
        side_columns = lookup[plan.side_positions]
        missing = np.flatnonzero(side_columns < 0)
        if missing.size:
            row = pda.rows[plan.side_positions[missing[0]]]
            symbol = int(plan.coded_symbols[plan.side_owner[missing[0]]])
            logger.error("User %d misses row %r for symbol %d", k, row, symbol)
            raise exceptions.DecodeError(
                f"User {k} cannot cancel row {row!r} in the message of symbol {symbol}",
                row=row, symbol=symbol,
            )
        pool = np.concatenate((
            transcript.payloads[plan.coded_symbols - 1],
            data[demand[plan.side_users - 1] - 1, side_columns],
        ))
        rows[plan.coded_positions] = np.bitwise_xor.reduceat(
            pool[plan.order], plan.group_starts, axis=0
        )
    return rows.tobytes()


def _decode_users(
        params: SystemParams, pda: Pda, transcript: DeliveryTranscript,
        caches: Dict[int, NodeCache], demand: Sequence[int], users: Sequence[int]
    ) -> DecodeOutcome:
    outcome = DecodeOutcome(decoded={})
    for k in users:
        try:
            outcome.decoded[k] = decode(params, pda, transcript, caches, k, demand)
        except exceptions.DecodeError as error:
            outcome.failures[k] = error
    return outcome


def decode_all(
        params: SystemParams, pda: Pda, transcript: DeliveryTranscript,
        caches: Dict[int, NodeCache], demand: Sequence[int], workers: int = DECODE_WORKERS
    ) -> DecodeOutcome:
    """
    Decodes every user and collects a DecodeError per user instead of stopping.

    Up to INLINE_DECODE_USERS users, or with workers <= 1, decoding runs in the
    calling thread. Otherwise users are split over `workers` threads; any other
    exception propagates on join.

    Returns:
    - DecodeOutcome: Decoded files and failures, keyed by user.
    """
    users = list(range(1, params.K + 1))
    args = (params, pda, transcript, caches, demand)
    if workers <= 1 or len(users) <= INLINE_DECODE_USERS:
        return _decode_users(*args, users)

    threads = [
        utils.PropagatingThread(
            target=_decode_users, args=(*args, users[first::workers]),
            name=f"decode-batch-{first + 1}",
        )
        for first in range(min(workers, len(users)))
    ]
    for thread in threads:
        thread.start()
    merged = DecodeOutcome(decoded={})
    for thread in threads:
        outcome = thread.join()
        merged.decoded.update(outcome.decoded)
        merged.failures.update(outcome.failures)
    return merged


@lru_cache(maxsize=64)
def _cached_scheme(params: SystemParams) -> SchemeResult:
    return build_scheme(params)


def run_simulation(
        params: SystemParams, N: int = None, B: int = None,
        demand: Union[str, Sequence[int]] = None, seed: int = None,
        scheme: Optional[SchemeResult] = None, strict: bool = True
    ) -> SimulationReport:
    """
    Runs placement, delivery and decoding of the scheme for params.

    Unset arguments come from the simulation settings; N defaults to params.N.

    Parameters:
    - params (SystemParams): The system.
    - N (int): Number of files.
    - B (int): Bytes per subpacket.
    - demand (str | Sequence[int]): A preset name or an explicit vector.
    - seed (int): Seed of the file contents and of the random preset.
    - scheme (SchemeResult): A prebuilt scheme; built (and cached) from params when unset.
    - strict (bool): Raise the first user's DecodeError instead of reporting it.

    Returns:
    - SimulationReport: Totals, the users that decoded and the failures.

    Exceptions:
    - DecodeError: If strict and a user cannot decode or decodes wrong bytes.
    - InvariantError: If the measured rate differs from the scheme's rate.
    """
    settings = None
    if B is None or seed is None or demand is None:
        settings = utils.Settings()
    N = params.N if N is None else N
    B = settings.get_simulation("subpacket_bytes") if B is None else B
    seed = settings.get_simulation("seed") if seed is None else seed
    demand = settings.get_simulation("demand") if demand is None else demand
    if isinstance(demand, str):
        demand = demand_vector(demand, params.K, N, seed)

    scheme = _cached_scheme(params) if scheme is None else scheme
    store = FileStore(N, scheme.pda.F, B, seed)
    caches = place(params, scheme.pda, store)
    transcript = deliver(params, scheme.pda, store, demand)
    outcome = decode_all(params, scheme.pda, transcript, caches, demand)

    failures = dict(outcome.failures)
    for k, data in outcome.decoded.items():
        if data != store.file_bytes(demand[k - 1]):
            logger.error("User %d decoded wrong bytes for file %d", k, demand[k - 1])
            failures[k] = exceptions.DecodeError(
                f"User {k} decoded wrong bytes for file {demand[k - 1]}"
            )

    report = SimulationReport(
        params=params, N=N, B=B, demand=tuple(demand),
        decoded_users=tuple(sorted(set(outcome.decoded) - set(failures))),
        messages_sent=transcript.messages_sent, bytes_sent=transcript.bytes_sent,
        file_size=transcript.file_size, rate=transcript.rate,
        node_bytes=tuple(caches[k].nbytes for k in sorted(caches)),
        transcript=transcript,
        failures=tuple((k, str(failures[k])) for k in sorted(failures)),
    )
    if failures:
        logger.error("Simulation of %s: %s", params, report.summary())
        if strict:
            raise failures[min(failures)]
    if transcript.rate != scheme.rate:
        raise exceptions.InvariantError(
            f"Measured rate {transcript.rate} differs from the scheme rate {scheme.rate}"
        )
    if not failures:
        logger.info("Simulation of %s: %s", params, report.summary())
    return report


def transcript_records(transcript: DeliveryTranscript) -> Dict:
    """
    Flattens a transcript into plain data for YAML.

    Returns:
    - Dict: 'messages' (symbol, bytes, served [user, row]) and 'totals'.
    """
    def row_value(position: int):
        row_index = transcript.rows[position]
        return list(row_index) if isinstance(row_index, tuple) else row_index

    return {
        "messages": [
            {
                "symbol": message.symbol,
                "bytes": int(message.payload.nbytes),
                "served": [[k, row_value(position)] for k, position in message.served],
            }
            for message in transcript.messages
        ],
        "totals": {
            "messages_sent": transcript.messages_sent,
            "bytes_sent": transcript.bytes_sent,
            "file_size": transcript.file_size,
            "rate": str(transcript.rate),
        },
    }
