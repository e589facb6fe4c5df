import json

import networkx as nx
import pytest
from hypothesis import given

from kmatch import graphs as gr
from kmatch.errors import GraphError, ScriptError
from strategies import max_degree_3_graphs, small_graphs


def to_nx(g: gr.Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


def test_natural_label_order():
    assert gr.sort_labels(["10", "2", "c10", "c2", "a"]) == ["2", "10", "a", "c2", "c10"]


@pytest.mark.parametrize("n", range(4, 10))
def test_wheel_shape(n):
    g = gr.wheel(n)
    assert len(g.vertices) == n
    assert len(g.edges) == 2 * (n - 1)
    assert g.degree("h") == n - 1
    # rim edge c_i meets spokes l_{i-1} and l_i
    a, b = g.endpoints("c1")
    assert {a, b} == {"r0", "r1"}
    assert nx.is_isomorphic(to_nx(g), nx.wheel_graph(n))


@pytest.mark.parametrize("n,m", [(1, 2), (2, 3), (3, 2), (4, 4)])
def test_caterpillar_shape(n, m):
    g = gr.caterpillar(n, m)
    assert len(g.vertices) == n * (m + 1)
    assert len(g.edges) == n - 1 + n * m
    assert nx.is_tree(to_nx(g))
    assert all(g.degree(f"x{i}.1") == 1 for i in range(1, n + 1))


def test_clawed_path_labels_and_units():
    g = gr.clawed_path(1)
    assert sorted(g.labels, key=int) == [str(i) for i in range(1, 7)]
    units = gr.find_claw_units(g)
    assert [u.center for u in units] == ["0", "1"]
    assert gr.decomposes_into_claw_units(g)


def test_whiskered_cycle_labels():
    g = gr.whiskered_cycle(5)
    assert {"1", "2", "3", "4", "5", "x1,2", "x4,5", "x1,5"} <= set(g.labels)
    assert set(g.endpoints("1")) == {"w5", "w1"}
    assert g.endpoints("x1,5")[0] == "leaf:w5:0" or "w5" in g.endpoints("x1,5")


def test_whiskered_odd_triangle_is_not_clawed():
    assert not gr.decomposes_into_claw_units(gr.whiskered_cycle(3))


@given(max_degree_3_graphs())
def test_claw_counts(g):
    cg = gr.claw(g)
    assert len(cg.edges) == 3 * len(g.vertices)
    assert len(gr.find_claw_units(cg)) == len(g.vertices)
    assert gr.decomposes_into_claw_units(cg)
    assert cg.max_degree == 3


def test_claw_rejects_degree_four():
    with pytest.raises(GraphError):
        gr.claw(gr.star(4))


@given(small_graphs())
def test_line_graph_matches_networkx(g):
    lg = gr.line_graph(g)
    assert nx.is_isomorphic(to_nx(lg), nx.line_graph(to_nx(g)))


@given(small_graphs())
def test_json_round_trip(g):
    assert gr.Graph.from_json(json.loads(g.dumps())) == g


def test_custom_labels_survive_json():
    g = gr.wheel(5)
    back = gr.Graph.from_json(json.loads(g.dumps()))
    assert back.labels == g.labels


@pytest.mark.parametrize(
    "spec,nv,ne",
    [("wheel:5", 5, 8), ("clawed-path:2", 10, 9), ("whiskered-cycle:6", 12, 12), ("caterpillar:3:2", 9, 8), ("clawed-cycle:4", 12, 12), (":edgeless:3", 3, 0)],
)
def test_builder_strings(spec, nv, ne):
    g = gr.parse_builder(spec)
    assert (len(g.vertices), len(g.edges)) == (nv, ne)


@pytest.mark.parametrize("spec", ["", "nosuch:3", "wheel", "wheel:x", "wheel:3"])
def test_bad_builder_strings(spec):
    with pytest.raises(GraphError):
        gr.parse_builder(spec)


def test_graph_validation():
    with pytest.raises(GraphError):
        gr.Graph(["a", "b"], [("a", "c")])
    with pytest.raises(GraphError):
        gr.Graph(["a"], [("a", "a")])
    with pytest.raises(GraphError):
        gr.Graph(["a", "b"], [("a", "b"), ("b", "a")])


def test_surgeries():
    p = gr.path(2)
    s = gr.subdivide(p, "0", "1")
    assert len(s.edges) == 3 and not s.has_edge("0", "1")
    a = gr.attach_leaf(p, "1")
    assert a.degree("1") == 3
    merged = gr.identify_leaves(gr.path(3), "0", "3")
    assert len(merged.vertices) == 3 and nx.is_isomorphic(to_nx(merged), nx.cycle_graph(3))
    w = gr.whisker_all(gr.cycle(4))
    assert len(w.leaves()) == 4


@pytest.mark.parametrize(
    "script,T,L,E",
    [(gr.TRIANGLE_PATH_SCRIPT, 5, 3, 15), (gr.SQUARE_TWO_PATHS_SCRIPT, 7, 3, 21), (gr.TRIANGLE_TWO_PATHS_SCRIPT, 6, 2, 18), (gr.ClawedBuildScript(3), 3, 3, 9)],
)
def test_clawed_build_counts(script, T, L, E):
    b = gr.build_clawed_nonseparable(script)
    assert (b.T, b.L, len(b.graph.edges)) == (T, L, E)
    assert gr.decomposes_into_claw_units(b.graph)
    # every degree-2 vertex joins two claws
    deg2 = [v for v in b.graph.vertices if b.graph.degree(v) == 2]
    assert len(deg2) == (3 * T - L) // 2
    assert nx.is_biconnected(to_nx(gr.Graph([v for v in b.graph.vertices if not b.graph.is_leaf(v)], [e for e in b.graph.edges if not (b.graph.is_leaf(e[0]) or b.graph.is_leaf(e[1]))])))


def test_script_errors():
    with pytest.raises(ScriptError):
        gr.build_clawed_nonseparable(gr.ClawedBuildScript(3, (("c0", "leaf:c1:0", 1),)))
    with pytest.raises(ScriptError):
        gr.build_clawed_nonseparable(gr.ClawedBuildScript(3, (("leaf:c0:0", "leaf:c0:0", 1),)))
    with pytest.raises(ScriptError):
        gr.ClawedBuildScript.from_json({"steps": []})


def test_script_json_round_trip():
    s = gr.SQUARE_TWO_PATHS_SCRIPT
    assert gr.ClawedBuildScript.from_json(json.loads(json.dumps(s.to_json()))) == s
