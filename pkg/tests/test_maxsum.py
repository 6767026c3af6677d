import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcsums.digraph import Digraph, girth, is_strongly_connected
from qcsums.errors import DomainError, StructureError
from qcsums.maxsum import (
    game_bound,
    maxsum_attained,
    maxsum_infimum,
    maxsum_witness,
    mutual_pair_game,
    witness_value,
)
from qcsums.named import cycle_graph, six_vertex_graph
from qcsums.sums import circulant, graphic_p_sum, graphic_p_sum_batch

from oracles import random_digraph


def test_examples():
    assert maxsum_infimum(six_vertex_graph()) == 3
    assert maxsum_infimum(Digraph.from_edges([("a", "b"), ("b", "c"), ("c", "b")])) == 2
    assert maxsum_infimum(cycle_graph(7)) == 7


def test_sum_over_final_components():
    g = Digraph.from_edges([("s", "a"), ("s", "b"), ("a", "a2"), ("a2", "a"),
                            ("b", "b2"), ("b2", "b3"), ("b3", "b")])
    assert maxsum_infimum(g) == 2 + 3
    x = maxsum_witness(g, 1e-4)
    assert graphic_p_sum(g, x, "inf") <= 5 + 1e-4


def test_pure_cycle_witness_is_exact():
    g = cycle_graph(4)
    x = maxsum_witness(g, 0.5)
    assert np.all(x == 1.0)
    assert graphic_p_sum(g, x, "inf") == 4.0
    assert maxsum_attained(g)


def test_attained_only_for_cycle_unions():
    assert not maxsum_attained(six_vertex_graph())
    two = Digraph.from_edges([("a", "b"), ("b", "a"), ("c", "d"), ("d", "e"), ("e", "c")])
    assert maxsum_attained(two)
    assert not maxsum_attained(Digraph.from_edges([("a", "b"), ("b", "c"), ("c", "b")]))


def test_six_vertex_witness():
    assert witness_value(six_vertex_graph(), 1e-3) <= 3.001


@pytest.mark.parametrize("eps", [1.0, 1e-2, 1e-4, 1e-6])
def test_witness_within_epsilon(eps):
    rng = np.random.default_rng(4)
    for _ in range(10):
        g = random_digraph(rng, 7, 0.3)
        assert witness_value(g, eps) <= maxsum_infimum(g) + eps


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.integers(2, 8))
def test_random_search_never_beats_infimum(seed, n):
    rng = np.random.default_rng(seed)
    g = random_digraph(rng, n, 0.35, require_strong=True)
    inf = maxsum_infimum(g)
    assert inf == girth(g)
    X = np.exp(rng.uniform(-4, 4, size=(2000, n)))
    assert graphic_p_sum_batch(g, X, math.inf).min() >= inf - 1e-9


def test_errors():
    with pytest.raises(StructureError):
        maxsum_infimum(Digraph.from_edges([("a", "b")]))
    with pytest.raises(DomainError):
        maxsum_witness(cycle_graph(3), 0.0)


def test_game_bound():
    assert game_bound(40, 12) == 4
    assert game_bound(6, 2) == 3
    assert game_bound(2022, 1) == 2022
    with pytest.raises(DomainError):
        game_bound(5, 5)


def test_mutual_pair_game_reaches_two():
    g = mutual_pair_game(40, 12)
    assert is_strongly_connected(g)
    assert all(d == 12 for d in g.out_degrees())
    assert maxsum_infimum(g) == 2
    assert witness_value(g, 1e-3) <= 2 + 1e-3
    assert maxsum_infimum(circulant(40, 12)) == 4
