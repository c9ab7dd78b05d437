"""Tests for the consecutive cyclic placement."""

import numpy as np
import pytest
from source import exceptions
from source.pda.params import validate
from source.pda.placement import (
    build_placement_arrays, check_local_gain, is_retrievable, node_cache_contents,
    nodes_of_user, users_of_subfile,
)


@pytest.mark.parametrize("K, L, gamma, k, expected", [
    (10, 3, 2, 1, {9, 6}),
    (10, 3, 0, 4, set()),
    (5, 2, 1, 3, {2}),
])
def test_node_cache_contents(K, L, gamma, k, expected):
    assert node_cache_contents(validate(K, L, gamma), k) == expected


def test_node_cache_contents_rejects_bad_node():
    with pytest.raises(exceptions.ParameterError):
        node_cache_contents(validate(10, 3, 2), 11)


def test_example_user_array_column():
    arrays = build_placement_arrays(validate(10, 3, 2))
    rows = {j for j in range(1, 11) if arrays.user_array[j - 1, 0]}
    assert rows == {6, 7, 8, 9, 10, 1}


def test_degenerate_user_arrays():
    assert not build_placement_arrays(validate(7, 2, 0)).user_array.any()
    assert build_placement_arrays(validate(6, 2, 3)).user_array.all()


def test_arrays_are_read_only():
    arrays = build_placement_arrays(validate(5, 2, 1))
    with pytest.raises(ValueError):
        arrays.node_array[0, 0] = True


def test_neighbouring_nodes_are_disjoint_in_example():
    params = validate(10, 3, 2)
    contents = [node_cache_contents(params, k) for k in (1, 2, 3)]
    assert contents == [{9, 6}, {10, 7}, {1, 8}]
    assert check_local_gain(params)
    assert check_local_gain(validate(10, 3, 0))


@pytest.mark.parametrize("K", range(1, 41))
def test_placement_invariants(K):
    for L in range(1, K + 1):
        for gamma in range(0, K // L + 1):
            _check_placement(validate(K, L, gamma))


def _check_placement(params):
    K, gamma = params.K, params.gamma
    arrays = build_placement_arrays(params)
    assert np.all(arrays.node_array.sum(axis=0) == gamma)
    assert np.all(arrays.user_array.sum(axis=0) == params.t)
    assert np.all(arrays.user_array.sum(axis=1) == params.t)
    assert check_local_gain(params)
    for j in range(1, K + 1):
        users = set(users_of_subfile(params, j))
        assert users == {k for k in range(1, K + 1) if is_retrievable(K, params.t, j, k)}


def test_nodes_of_user_wraps():
    assert nodes_of_user(validate(10, 3, 2), 9) == [9, 10, 1]


def test_render_uses_star_and_dot():
    text = build_placement_arrays(validate(3, 1, 1)).render()
    assert text.startswith("C\n")
    assert "\n\nU\n" in text
    user_rows = text.split("\n\nU\n")[1].splitlines()
    assert user_rows == ["* . .", ". * .", ". . *"]
