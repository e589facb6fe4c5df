import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kmatch import complexes as cxm
from kmatch import graphs as gr
from kmatch.errors import BudgetExceeded, ComplexError
from strategies import brute_k_matchings, small_graphs


def brute_independent_sets(g: gr.Graph) -> set[frozenset]:
    out = set()
    for r in range(len(g.vertices) + 1):
        for combo in itertools.combinations(g.vertices, r):
            if not any(g.has_edge(u, v) for u, v in itertools.combinations(combo, 2)):
                out.add(frozenset(combo))
    return out


@given(small_graphs(max_vertices=6, max_edges=9), st.integers(1, 3))
def test_matching_complex_against_brute_force(g, k):
    cx = cxm.matching_complex(g, k)
    assert cx.face_family() == brute_k_matchings(g, k)


@given(small_graphs(max_vertices=8, max_edges=10))
def test_independence_complex_against_brute_force(g):
    assert cxm.independence_complex(g).face_family() == brute_independent_sets(g)


@given(small_graphs(max_vertices=6, max_edges=9), st.integers(1, 3))
def test_faces_closed_under_subsets(g, k):
    cx = cxm.matching_complex(g, k)
    cx.check_closed()
    assert np.all(np.diff(cx.masks) > 0)


@given(small_graphs(max_vertices=6, max_edges=8))
def test_m1_is_independence_of_line_graph(g):
    a = cxm.matching_complex(g, 1)
    b = cxm.independence_complex(gr.line_graph(g))
    assert a.face_family() == b.face_family()


@given(small_graphs(max_vertices=6, max_edges=8))
def test_large_k_gives_full_simplex(g):
    k = max(1, g.max_degree)
    cx = cxm.matching_complex(g, k)
    assert len(cx) == 2 ** len(g.edges)


def test_euler_characteristic_of_points():
    assert cxm.points(["a", "b", "c"]).euler_reduced() == 2
    assert cxm.simplex(["a", "b"]).euler_reduced() == 0


def test_join_and_suspension_sizes():
    a = cxm.points(["a", "b"])
    b = cxm.points(["x", "y", "z"])
    j = cxm.join(a, b)
    assert len(j) == 3 * 4
    j.check_closed()
    s = cxm.m_point_suspension(a, 3)
    assert len(s) == 3 * 4 and s.dim == 1
    with pytest.raises(ComplexError):
        cxm.join(a, a)


def test_from_facets_and_facets_round_trip():
    cx = cxm.SimplicialComplex.from_facets(["a", "b", "c", "d"], [("a", "b", "c"), ("c", "d")])
    assert sorted(cx.facets()) == [("a", "b", "c"), ("c", "d")]
    assert ("a", "c") in cx and ("b", "d") not in cx
    assert cx.f_vector() == {-1: 1, 0: 4, 1: 4, 2: 1}


def test_non_closed_masks_rejected():
    with pytest.raises(ComplexError):
        cxm.SimplicialComplex(["a", "b"], [0, 3])


def test_void_complex():
    g = gr.Graph(["a", "b"], [("a", "b")])
    cx = cxm.bounded_degree_complex(g, 0)
    assert cx.is_void and len(cx) == 1


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        cxm.matching_complex(gr.complete(7), 2, budget=100)


def test_budget_env(monkeypatch):
    monkeypatch.setenv("KMATCH_BUDGET", "50")
    with pytest.raises(BudgetExceeded):
        cxm.matching_complex(gr.complete(6), 2)
    monkeypatch.setenv("KMATCH_BUDGET", "zzz")
    with pytest.raises(ComplexError):
        cxm.get_budget()


def test_relabel_and_json():
    cx = cxm.matching_complex(gr.cycle(5), 1)
    back = cxm.SimplicialComplex.from_json(cx.to_json())
    assert back == cx
    r = cx.relabeled({v: "e" + v for v in cx.vertices})
    assert len(r) == len(cx) and r.euler_reduced() == cx.euler_reduced()


def test_per_vertex_caps():
    g = gr.star(3)
    cx = cxm.bounded_degree_complex(g, {"c": 2, "0": 1, "1": 1, "2": 1})
    assert cx.dim == 1 and len(cx) == 1 + 3 + 3
    with pytest.raises(ComplexError):
        cxm.bounded_degree_complex(g, {"c": 2})
