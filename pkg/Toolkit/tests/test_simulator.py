"""Tests for the file store and the byte-level simulator."""

import dataclasses
from fractions import Fraction
import numpy as np
import pytest
import yaml
from source import exceptions
from source.pda.params import validate
from source.pda.core import is_star, symbol_map
from source.sim.filestore import FileStore
from source.sim.simulator import (
    decode, decode_all, deliver, demand_vector, place, run_simulation, transcript_records,
)
from conftest import scheme_for, valid_triples


def test_file_store_is_seeded():
    first, second = FileStore(3, 4, 8, seed=5), FileStore(3, 4, 8, seed=5)
    assert first.file_bytes(2) == second.file_bytes(2)
    assert first.file_bytes(2) != FileStore(3, 4, 8, seed=6).file_bytes(2)
    assert (first.N, first.F, first.B) == (3, 4, 8)
    assert first.file_size == 32
    assert first.library_bytes == 96
    assert len(first.file_bytes(3)) == 32


def test_file_store_errors():
    store = FileStore(2, 3, 4)
    with pytest.raises(exceptions.DemandError):
        store.subpacket(3, 0)
    with pytest.raises(exceptions.ShapeError):
        store.subpacket(1, 3)
    with pytest.raises(ValueError):
        store.subpacket(1, 0)[0] = 1
    with pytest.raises(exceptions.ParameterError):
        FileStore(0, 3, 4)


def test_demand_presets():
    assert demand_vector("worst", 5, 3) == [1, 2, 3, 1, 2]
    assert demand_vector("worst", 3, 10) == [1, 2, 3]
    assert demand_vector("equal", 4, 9) == [1, 1, 1, 1]
    random_demand = demand_vector("random", 50, 4, seed=3)
    assert random_demand == demand_vector("random", 50, 4, seed=3)
    assert all(1 <= n <= 4 for n in random_demand)
    with pytest.raises(exceptions.DemandError):
        demand_vector("best", 3, 3)
    with pytest.raises(exceptions.DemandError):
        demand_vector("worst", 3, 0)


def test_example1_run(example1):
    params = validate(10, 3, 2)
    report = run_simulation(params, B=8, demand="worst", seed=1)
    assert report.all_decoded
    assert report.messages_sent == 10
    assert report.bytes_sent == 80
    assert report.rate == 1
    assert report.summary() == "all 10 users decoded; bytes = 1 × file size"
    library_bytes = 10 * example1.pda.F * 8
    assert all(Fraction(nbytes, library_bytes) == Fraction(2, 10) for nbytes in report.node_bytes)


def test_example2_run():
    report = run_simulation(validate(5, 2, 1), B=8, demand="worst", seed=1)
    assert report.messages_sent == 15
    assert report.rate == Fraction(3, 2)
    assert report.file_size == 80
    assert all(Fraction(nbytes, 5 * 80) == Fraction(1, 5) for nbytes in report.node_bytes)


@pytest.mark.parametrize("K, L, gamma", [(10, 3, 2), (5, 2, 1)])
def test_examples_under_random_demands(K, L, gamma):
    for seed in range(100):
        report = run_simulation(validate(K, L, gamma), B=4, demand="random", seed=seed)
        assert report.all_decoded


def test_run_uses_settings_defaults():
    report = run_simulation(validate(5, 2, 1))
    assert report.B == 64
    assert report.demand == (1, 2, 3, 4, 5)
    assert report.bytes_sent == 15 * 64


def test_uncached_run_sends_every_cell():
    report = run_simulation(validate(7, 1, 0), B=8)
    assert report.messages_sent == 49
    assert report.rate == 7
    assert report.node_bytes == (0,) * 7


def test_all_cached_run_sends_nothing():
    report = run_simulation(validate(6, 2, 3), B=8)
    assert report.all_decoded
    assert report.messages_sent == 0
    assert report.bytes_sent == 0
    assert report.rate == 0


def test_fewer_files_than_users():
    report = run_simulation(validate(10, 3, 2, N=3), B=8, demand="worst")
    assert report.all_decoded
    assert report.demand == (1, 2, 3, 1, 2, 3, 1, 2, 3, 1)


@pytest.mark.parametrize("demand", [[1, 2, 3], [1, 2, 3, 4, 6], [1, 2, 3, 4, True]])
def test_bad_explicit_demand(demand):
    with pytest.raises(exceptions.DemandError):
        run_simulation(validate(5, 2, 1), B=4, demand=demand)


def test_place_rejects_mismatched_store(example1):
    with pytest.raises(exceptions.ShapeError):
        place(validate(10, 3, 2), example1.pda, FileStore(10, 9, 4))


def _fault(pda):
    """A star (position, k) and a symbol from another column that its row cannot reach."""
    for position, k, cell in pda.cells():
        if not is_star(cell):
            continue
        for _, k2, symbol in pda.cells():
            if k2 != k and not is_star(symbol) and not is_star(pda.grid[position][k2 - 1]):
                return position, k, symbol, k2
    raise AssertionError("no fault found")


def test_corrupted_star_is_reported_by_decode(example1):
    params = validate(10, 3, 2)
    position, k, symbol, victim = _fault(example1.pda)
    corrupted = example1.pda.with_cell(position, k, symbol)
    demand = demand_vector("worst", 10, 10)
    store = FileStore(10, corrupted.F, 4)
    caches = place(params, corrupted, store)
    transcript = deliver(params, corrupted, store, demand)
    with pytest.raises(exceptions.DecodeError) as error:
        decode(params, corrupted, transcript, caches, victim, demand)
    assert error.value.row == corrupted.rows[position]
    assert error.value.symbol == symbol_map(corrupted)[symbol]


def test_decode_matches_the_library(example2):
    params = validate(5, 2, 1)
    store = FileStore(5, example2.pda.F, 16, seed=9)
    demand = [2, 2, 5, 1, 3]
    caches = place(params, example2.pda, store)
    transcript = deliver(params, example2.pda, store, demand)
    for k in range(1, 6):
        assert decode(params, example2.pda, transcript, caches, k, demand) == \
            store.file_bytes(demand[k - 1])
    with pytest.raises(exceptions.DecodeError):
        transcript.message(16)


def test_transcript_records(example2):
    report = run_simulation(validate(5, 2, 1), B=4)
    records = transcript_records(report.transcript)
    assert len(records["messages"]) == 15
    assert records["totals"] == {
        "messages_sent": 15, "bytes_sent": 60, "file_size": 40, "rate": "3/2",
    }
    first = records["messages"][0]
    assert first["bytes"] == 4
    assert all(isinstance(row, list) and len(row) == 2 for _, row in first["served"])
    served_rows = {tuple(row) for _, row in first["served"]}
    assert served_rows <= set(example2.pda.rows)
    assert yaml.safe_load(yaml.safe_dump(records)) == records


def _random_seeds(K: int) -> range:
    return range(100) if K <= 10 else range(10)


@pytest.mark.parametrize("K", range(1, 21))
def test_every_scheme_decodes(K):
    for _, L, gamma in (triple for triple in valid_triples(20) if triple[0] == K):
        params = validate(K, L, gamma)
        scheme = scheme_for(K, L, gamma)
        runs = [("worst", K), ("equal", K)] + [("random", seed) for seed in _random_seeds(K)]
        for demand, seed in runs:
            report = run_simulation(params, B=8, demand=demand, seed=seed, scheme=scheme)
            assert report.all_decoded, (params, demand, seed)
            assert report.messages_sent * 8 == report.bytes_sent
            node_bytes = Fraction(gamma, K) * report.N * report.file_size
            assert all(nbytes == node_bytes for nbytes in report.node_bytes)


def test_failed_user_is_reported_when_not_strict(example1):
    params = validate(10, 3, 2)
    position, k, symbol, victim = _fault(example1.pda)
    corrupted = dataclasses.replace(example1, pda=example1.pda.with_cell(position, k, symbol))

    report = run_simulation(params, B=4, demand="worst", seed=0, scheme=corrupted, strict=False)
    assert not report.all_decoded
    assert victim not in report.decoded_users
    assert victim in dict(report.failures)
    assert len(report.decoded_users) + len(report.failures) == 10
    assert report.summary() == f"{len(report.decoded_users)} of 10 users decoded; bytes = 1 × file size"

    with pytest.raises(exceptions.DecodeError) as error:
        run_simulation(params, B=4, demand="worst", seed=0, scheme=corrupted)
    assert f"User {min(dict(report.failures))} " in str(error.value)


def test_threaded_decode_matches_inline():
    params = validate(12, 2, 3)
    pda = scheme_for(12, 2, 3).pda
    store = FileStore(12, pda.F, 8, seed=4)
    demand = demand_vector("random", 12, 12, seed=4)
    caches = place(params, pda, store)
    transcript = deliver(params, pda, store, demand)
    inline = decode_all(params, pda, transcript, caches, demand, workers=1)
    threaded = decode_all(params, pda, transcript, caches, demand, workers=5)
    assert not inline.failures and not threaded.failures
    assert inline.decoded == threaded.decoded
    assert inline.decoded[7] == store.file_bytes(demand[6])


def test_node_cache_lookups(example2):
    params = validate(5, 2, 1)
    store = FileStore(2, example2.pda.F, 4, seed=1)
    cache = place(params, example2.pda, store)[3]
    position = cache.positions[-1]
    assert cache.holds(position)
    assert np.array_equal(cache.get(2, position), store.subpacket(2, position))
    missing = next(p for p in range(example2.pda.F) if p not in cache.positions)
    assert not cache.holds(missing)
    with pytest.raises(exceptions.DecodeError):
        cache.get(1, missing)


def test_file_store_gather():
    store = FileStore(3, 4, 2, seed=2)
    gathered = store.gather([3, 1, 3], [0, 2, 3])
    assert gathered.shape == (3, 2)
    assert np.array_equal(gathered[1], store.subpacket(1, 2))
    assert store.rows_of_every_file([1, 3]).shape == (3, 2, 2)
    with pytest.raises(exceptions.DemandError):
        store.gather([4], [0])
    with pytest.raises(exceptions.ShapeError):
        store.gather([1], [4])
    with pytest.raises(exceptions.ShapeError):
        store.gather([1, 2], [0])
