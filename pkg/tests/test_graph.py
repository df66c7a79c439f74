import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grefine.graph import Graph, graph_from_dict, graph_to_dict


def test_has_edge_ring(ring6):
    assert ring6.has_edge(0, 1)
    assert ring6.has_edge(1, 0)
    assert not ring6.has_edge(0, 3)


def test_has_edge_self_query_is_false(ring6):
    assert not ring6.has_edge(2, 2)


def test_has_edge_out_of_range(ring6):
    with pytest.raises(ValueError):
        ring6.has_edge(0, 6)
    with pytest.raises(ValueError):
        ring6.has_edge(-1, 0)


def test_add_edge_new(ring6):
    g = ring6.add_edge(0, 3)
    assert g.edge_count == 7
    assert ring6.edge_count == 6  # original untouched


def test_add_edge_existing_is_noop(ring6):
    assert ring6.add_edge(0, 1).edge_count == 6
    assert ring6.add_edge(1, 0).edges == ring6.edges


def test_add_edge_errors(ring6):
    with pytest.raises(ValueError):
        ring6.add_edge(2, 2)
    with pytest.raises(ValueError):
        ring6.add_edge(0, 17)


def test_remove_then_add_restores(ring6):
    assert ring6.remove_edge(0, 1).add_edge(0, 1).edges == ring6.edges


def test_remove_missing_is_noop(ring6):
    assert ring6.remove_edge(0, 3).edges == ring6.edges


def test_degrees_ring(ring6):
    assert ring6.degrees() == [2, 2, 2, 2, 2, 2]


def test_degrees_empty_graph():
    assert Graph(4).degrees() == [0, 0, 0, 0]


def test_degrees_sum_is_twice_edges():
    # Edge set reached at the end of the documented edit walkthrough.
    g = Graph.from_edges(6, [(1, 2), (2, 3), (0, 3), (1, 4), (2, 4), (5, 3), (1, 3), (0, 4)])
    assert sum(g.degrees()) == 16 == 2 * g.edge_count


def test_construction_rejects_self_loop():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])


def test_construction_rejects_out_of_range():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])


def test_from_edges_normalizes_and_dedups():
    g = Graph.from_edges(4, [(2, 1), (1, 2), (0, 3)])
    assert g.sorted_edges() == [(0, 3), (1, 2)]


def test_json_round_trip(ring6):
    obj = graph_to_dict(ring6)
    assert obj["n"] == 6
    assert all(u < v for u, v in obj["edges"])
    assert graph_from_dict(json.loads(json.dumps(obj))) == ring6


def test_json_rejects_malformed():
    with pytest.raises(ValueError):
        graph_from_dict({"n": 3, "edges": [[0, 0]]})
    with pytest.raises(ValueError):
        graph_from_dict({"n": 3})
    with pytest.raises(ValueError):
        graph_from_dict({"n": 3, "edges": [[0, 1]], "extra": 1})
    with pytest.raises(ValueError):
        graph_from_dict({"n": "3", "edges": []})
    with pytest.raises(ValueError):
        graph_from_dict({"n": 3, "edges": [[0, 1, 2]]})


edge_lists = st.integers(min_value=2, max_value=12).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
                lambda e: e[0] != e[1]
            ),
            max_size=20,
        ),
    )
)


@given(edge_lists)
@settings(max_examples=200)
def test_degree_sum_invariant(case):
    n, edges = case
    g = Graph.from_edges(n, edges)
    assert sum(g.degrees()) == 2 * g.edge_count


@given(edge_lists)
@settings(max_examples=200)
def test_serialization_round_trip(case):
    n, edges = case
    g = Graph.from_edges(n, edges, class_label=1)
    assert graph_from_dict(graph_to_dict(g)) == g


@given(edge_lists, st.integers(0, 11), st.integers(0, 11))
@settings(max_examples=200)
def test_add_then_remove_restores(case, u, v):
    n, edges = case
    g = Graph.from_edges(n, edges)
    if u == v or u >= n or v >= n:
        return
    assert g.add_edge(u, v).remove_edge(u, v).remove_edge(u, v).add_edge(u, v).edges == (
        g.add_edge(u, v).edges
    )
    if not g.has_edge(u, v):
        assert g.add_edge(u, v).remove_edge(u, v).edges == g.edges
