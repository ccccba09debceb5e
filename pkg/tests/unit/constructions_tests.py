from math import comb

import networkx as nx
import pytest

from hyperbanana.analysis.maxwell import check_condition1
from hyperbanana.constructions import (ConstructionError, EPlusLayout, Family, FamilyParams, PredictionKind,
                                       banana_bunch, build_family, e_plus_edges, even_hyperbanana, henneberg0,
                                       hyperbanana, in_theorem_family, predicted_nullity)
from hyperbanana.graph import VertexSubset, complete_graph, relabel, to_networkx


def setup_module():
    print(f" == Setting up tests for {__name__}")


def teardown_module():
    print(f" == Tearing down tests for {__name__}")


# Tests

def test_henneberg0_adds_one_vertex_of_degree_d():
    graph = henneberg0(complete_graph(3), 3, [0, 1, 2])
    assert graph.n == 4
    assert graph.m == 6
    assert graph.degree(3) == 3


def test_henneberg0_rejects_bad_attachment():
    k3 = complete_graph(3)
    with pytest.raises(ConstructionError):
        henneberg0(k3, 4, [0, 1, 2, 3])
    with pytest.raises(ConstructionError):
        henneberg0(k3, 2, [0, 0])
    with pytest.raises(ConstructionError):
        henneberg0(k3, 2, [0])
    with pytest.raises(ConstructionError):
        henneberg0(k3, 2, [0, 5])


def test_banana_bunch_counts():
    for d, b in [(3, 2), (4, 3), (5, 3), (7, 4)]:
        graph, labels = banana_bunch(d, b)
        assert graph.n == d + b
        assert graph.m == comb(d, 2) + d * b
        assert labels.base == tuple(range(d))
        assert labels.bananas == tuple(range(d, d + b))
        # no edges among banana vertices
        assert all(not graph.has_edge(x, y) for x in labels.bananas for y in labels.bananas if x < y)


def test_banana_bunch_degrees():
    for d, b in [(2, 1), (3, 2), (5, 3), (6, 4)]:
        graph, labels = banana_bunch(d, b)
        assert all(graph.degree(v) == d for v in labels.bananas)
        assert all(graph.degree(v) == d - 1 + b for v in labels.base)


def test_hyperbanana_halves_are_banana_bunches():
    for d, b in [(3, 2), (4, 3), (5, 3)]:
        graph, labels = hyperbanana(d, b)
        bunch = to_networkx(banana_bunch(d, b)[0])
        nx_graph = to_networkx(graph)
        for half in (labels.v1, labels.v2):
            assert nx.is_isomorphic(nx_graph.subgraph(half + labels.u), bunch)
    graph, labels = hyperbanana(5, 3)
    assert graph.induced_edge_count(VertexSubset.of(labels.v1 + labels.u)) == 25
    assert graph.induced_edge_count(VertexSubset.of(labels.v2 + labels.u)) == 25


def test_maxwell_families_meet_the_edge_count():
    for b in range(2, 7):
        graph, _ = hyperbanana(2 * b - 1, b)
        assert check_condition1(graph, 2 * b - 1).passed
    for b in range(2, 6):
        graph, _ = even_hyperbanana(2 * b, b)
        assert check_condition1(graph, 2 * b).passed
    result = check_condition1(hyperbanana(4, 3)[0], 4)
    assert not result.passed
    assert (result.actual, result.expected) == (36, 34)


def test_hyperbanana_counts_and_layout():
    graph, labels = hyperbanana(3, 2)
    assert graph.n == 8
    assert graph.m == 18
    assert labels.v1 == (0, 1, 2)
    assert labels.v2 == (3, 4, 5)
    assert labels.u == (6, 7)
    assert labels.u_pairs == [(6, 7)]
    assert not graph.has_edge(6, 7)
    assert all(not graph.has_edge(x, y) for x in labels.v1 for y in labels.v2)
    graph, _ = hyperbanana(5, 3)
    assert (graph.n, graph.m) == (13, 50)


def test_double_banana_is_the_classical_graph():
    graph, _ = hyperbanana(3, 2)
    nx_graph = to_networkx(graph)
    assert sorted(degree for _, degree in nx_graph.degree()) == [4] * 6 + [6] * 2
    assert nx.is_connected(nx_graph)
    # swapping the two bunches while fixing U is an automorphism
    swap = {v: v for v in graph.vertices}
    swap.update({0: 3, 1: 4, 2: 5, 3: 0, 4: 1, 5: 2})
    assert relabel(graph, swap) == graph


def test_even_hyperbanana_extra_edges():
    graph, labels = even_hyperbanana(4, 2)
    assert (graph.n, graph.m) == (10, 30)
    assert labels.e_plus == ((0, 4), (1, 5))
    graph, labels = even_hyperbanana(6, 3)
    assert (graph.n, graph.m) == (15, 69)
    endpoints = [v for edge in labels.e_plus for v in edge]
    assert len(set(endpoints)) == len(endpoints)


def test_even_hyperbanana_shared_layout():
    assert e_plus_edges(6, EPlusLayout.SHARED) == ((0, 6), (0, 7), (0, 8))
    graph, labels = even_hyperbanana(6, 3, EPlusLayout.SHARED)
    assert graph.m == 69
    assert labels.e_plus == ((0, 6), (0, 7), (0, 8))


def test_even_hyperbanana_needs_even_dimension():
    with pytest.raises(ConstructionError):
        even_hyperbanana(5, 3)


def test_positive_parameters():
    with pytest.raises(ConstructionError):
        hyperbanana(0, 2)
    with pytest.raises(ConstructionError):
        banana_bunch(3, 0)


def test_theorem_family_membership():
    assert in_theorem_family(Family.HYPERBANANA, 5, 3)
    assert not in_theorem_family(Family.HYPERBANANA, 4, 3)
    assert in_theorem_family(Family.EVEN_HYPERBANANA, 6, 3)
    assert not in_theorem_family(Family.EVEN_HYPERBANANA, 2, 1)
    assert in_theorem_family(Family.BANANA, 4, 3)


def test_predicted_nullity():
    prediction = predicted_nullity(Family.HYPERBANANA, 7, 4)
    assert prediction.kind is PredictionKind.THEOREM
    assert prediction.nullity == 34
    prediction = predicted_nullity(Family.EVEN_HYPERBANANA, 4, 2)
    assert prediction.kind is PredictionKind.CONJECTURE
    assert prediction.nullity == 11
    assert predicted_nullity(Family.BANANA, 5, 3).nullity == 15
    assert predicted_nullity(Family.HYPERBANANA, 4, 3) is None


def test_build_family_dispatch():
    graph, labels = build_family(Family.COMPLETE, 3, n=5)
    assert graph.m == 10 and labels is None
    graph, labels = build_family(Family.BANANA, 3, 2)
    assert labels.bananas == (3, 4)
    with pytest.raises(ConstructionError):
        build_family(Family.COMPLETE, 3)
    with pytest.raises(ConstructionError):
        build_family(Family.HYPERBANANA, 3)


def test_build_family_warns_outside_theorem_families(caplog):
    build_family(Family.HYPERBANANA, 4, 3)
    assert 'outside the Maxwell families' in caplog.text


def test_family_params_prediction_and_dict():
    params = FamilyParams(Family.EVEN_HYPERBANANA, 4, 2)
    assert params.prediction().nullity == 11
    assert params.to_dict() == {'family': 'even-hyperbanana', 'd': 4, 'b': 2, 'e_plus': 'matching'}
    assert FamilyParams(Family.EVEN_HYPERBANANA, 4, 2, e_plus=EPlusLayout.SHARED).prediction() is None
    assert FamilyParams(Family.COMPLETE, 3, n=4).prediction() is None
