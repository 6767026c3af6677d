import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcsums.digraph import (
    Digraph,
    WeightedDigraph,
    bfs_distances_to,
    check_automorphism,
    final_strong_components,
    girth,
    induced_subgraph,
    is_strongly_connected,
    parse_graph,
    read_graph,
    scc,
    shortest_cycle,
)
from qcsums.errors import ParseError, ValidationError
from qcsums.named import cycle_graph, mutual_star_graph, six_vertex_graph

from oracles import components_by_reachability, random_digraph, reachability, simple_cycles_min_length


@st.composite
def digraphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [(str(a), str(b)) for (a, b), m in zip(pairs, mask) if m]
    return Digraph(tuple(str(i) for i in range(n)), tuple(edges))


# ---------------------------------------------------------------------------
# parsing


def test_parse_edge_list_unweighted():
    g = parse_graph("# comment\na b\nb c  # trailing\n\nc a\n")
    assert isinstance(g, Digraph)
    assert g.vertices == ("a", "b", "c")
    assert g.edges == (("a", "b"), ("b", "c"), ("c", "a"))


def test_parse_edge_list_weights_default_to_one():
    g = parse_graph("A B 2.5\nB A\n")
    assert isinstance(g, WeightedDigraph)
    assert g.weight_map() == {("A", "B"): 2.5, ("B", "A"): 1.0}


def test_parse_error_carries_line_number():
    with pytest.raises(ParseError, match="line 2"):
        parse_graph("a b\na b c d\n")
    with pytest.raises(ParseError) as info:
        parse_graph("a b\nb a x\n")
    assert info.value.line == 2


def test_parse_rejects_nonpositive_weight():
    with pytest.raises(ValidationError):
        parse_graph("A B 0\n")
    with pytest.raises(ValidationError):
        parse_graph("A B -1\n")


def test_parse_rejects_self_loop_and_duplicates():
    with pytest.raises(ValidationError):
        parse_graph("a a\n")
    with pytest.raises(ValidationError):
        parse_graph("a b\na b\n")


def test_parse_json_roundtrip(tmp_path):
    doc = {"vertices": ["x", "y", "z"], "edges": [{"from": "x", "to": "y", "weight": 3},
                                                   {"from": "y", "to": "x"}]}
    g = parse_graph(json.dumps(doc), "json")
    assert g.vertices == ("x", "y", "z")
    assert g.weight_map() == {("x", "y"): 3.0, ("y", "x"): 1.0}
    path = tmp_path / "g.json"
    path.write_text(json.dumps(doc))
    assert read_graph(str(path)).weight_map() == g.weight_map()


def test_parse_json_errors():
    with pytest.raises(ParseError):
        parse_graph("{not json", "json")
    with pytest.raises(ParseError):
        parse_graph('{"edges": [{"from": "a"}]}', "json")
    with pytest.raises(ValidationError):
        parse_graph('{"vertices": ["a"], "edges": [{"from": "a", "to": "b"}]}', "json")


def test_read_edge_list_file(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("1 2\n2 1\n")
    assert read_graph(str(path)).edges == (("1", "2"), ("2", "1"))


# ---------------------------------------------------------------------------
# components


def test_scc_chain_into_cycle():
    g = Digraph.from_edges([("a", "b"), ("b", "c"), ("c", "b")])
    d = scc(g)
    assert d.components == (("a",), ("b", "c"))
    assert d.final == (False, True)
    assert d.condensation.edges == (("0", "1"),)
    assert final_strong_components(g) == [("b", "c")]
    assert not is_strongly_connected(g)


def test_two_sinks_both_final():
    g = Digraph.from_edges([("s", "a"), ("s", "b"), ("a", "a2"), ("a2", "a"), ("b", "b2"), ("b2", "b")])
    finals = {frozenset(c) for c in final_strong_components(g)}
    assert finals == {frozenset({"a", "a2"}), frozenset({"b", "b2"})}


def test_named_graphs_strongly_connected():
    assert is_strongly_connected(mutual_star_graph())
    assert is_strongly_connected(six_vertex_graph())


@settings(max_examples=150, deadline=None)
@given(digraphs())
def test_scc_matches_reachability(g):
    d = scc(g)
    assert {frozenset(c) for c in d.components} == components_by_reachability(g)
    # topological order: every condensation edge goes forward
    for a, b in d.condensation.edges:
        assert int(a) < int(b)
    # final components are exactly those with no escaping edge
    R = reachability(g)
    for comp, fin in zip(d.components, d.final):
        idx = [g.index[v] for v in comp]
        escapes = R[idx].any(axis=0).sum() > len(comp)
        assert fin == (not escapes)


# ---------------------------------------------------------------------------
# girth and cycles


def test_girth_examples():
    assert girth(six_vertex_graph()) == 3
    assert girth(cycle_graph(5)) == 5
    assert girth(Digraph.from_edges([("a", "b"), ("b", "a")])) == 2
    assert girth(Digraph.from_edges([("a", "b"), ("b", "c")])) is None


def test_shortest_cycle_six_vertex():
    assert shortest_cycle(six_vertex_graph()) == ["1", "2", "4"]


@settings(max_examples=200, deadline=None)
@given(digraphs())
def test_girth_matches_cycle_enumeration(g):
    assert girth(g) == simple_cycles_min_length(g)


@settings(max_examples=100, deadline=None)
@given(digraphs())
def test_shortest_cycle_is_a_cycle_of_girth_length(g):
    cyc = shortest_cycle(g)
    if cyc is None:
        assert girth(g) is None
        return
    assert len(cyc) == girth(g) == len(set(cyc))
    es = set(g.edges)
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        assert (a, b) in es
    assert g.index[cyc[0]] == min(g.index[v] for v in cyc)


def test_bfs_distances_to_cycle():
    g = Digraph.from_edges([("x", "y"), ("y", "a"), ("a", "b"), ("b", "a")])
    assert bfs_distances_to(g, ["a", "b"]) == {"a": 0, "b": 0, "y": 1, "x": 2}


def test_induced_subgraph_keeps_order():
    g = six_vertex_graph()
    h = induced_subgraph(g, ["4", "1", "2"])
    assert h.vertices == ("1", "2", "4")
    assert set(h.edges) == {("1", "2"), ("2", "4"), ("4", "1")}


# ---------------------------------------------------------------------------
# automorphisms


def test_rotation_is_automorphism_of_cycle():
    g = cycle_graph(4)
    assert check_automorphism(g, {"1": "2", "2": "3", "3": "4", "4": "1"})
    assert not check_automorphism(g, {"1": "2", "2": "1", "3": "3", "4": "4"})


def test_automorphism_respects_weights():
    g = WeightedDigraph.from_weighted_edges([("A", "B", 1.0), ("B", "A", 2.0)])
    assert check_automorphism(g, ["A", "B"])
    assert not check_automorphism(g, ["B", "A"])


def test_automorphism_rejects_non_bijection():
    g = cycle_graph(3)
    with pytest.raises(ValidationError):
        check_automorphism(g, {"1": "1", "2": "1", "3": "3"})
    with pytest.raises(ValidationError):
        check_automorphism(g, ["1", "2"])


def test_random_corpus_generator_is_deterministic():
    a = random_digraph(np.random.default_rng(5), 6, 0.3, require_strong=True)
    b = random_digraph(np.random.default_rng(5), 6, 0.3, require_strong=True)
    assert a == b and is_strongly_connected(a)
