"""Shared fixtures and parameter sweeps."""

from functools import lru_cache
from typing import List, Tuple
import pytest
from source import path
from source.pda.oracle import ORACLE_CAP_ENV
from source.pda.params import validate
from source.pda.constructions import build_scheme


def valid_triples(k_max: int) -> List[Tuple[int, int, int]]:
    """Every valid (K, L, gamma) with K <= k_max."""
    return [
        (K, L, gamma)
        for K in range(1, k_max + 1)
        for L in range(1, K + 1)
        for gamma in range(0, K // L + 1)
    ]


def triples_by_t(K: int) -> List[Tuple[int, int, int]]:
    """One (K, L, gamma) per reachable t, the array depending only on (K, t)."""
    chosen = {}
    for L in range(1, K + 1):
        for gamma in range(0, K // L + 1):
            chosen.setdefault(gamma * L, (K, L, gamma))
    return [chosen[t] for t in sorted(chosen)]


@lru_cache(maxsize=None)
def scheme_for(K: int, L: int, gamma: int):
    """Cached build_scheme."""
    return build_scheme(validate(K, L, gamma))


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Points the settings file into tmp_path and clears the oracle override."""
    settings_path = tmp_path / "settings.yaml"
    monkeypatch.setattr(path, "SETTINGS_PATH", settings_path)
    monkeypatch.delenv(ORACLE_CAP_ENV, raising=False)
    return settings_path


@pytest.fixture
def example1():
    """K=10, L=3, gamma=2."""
    return scheme_for(10, 3, 2)


@pytest.fixture
def example2():
    """K=5, L=2, gamma=1."""
    return scheme_for(5, 2, 1)
