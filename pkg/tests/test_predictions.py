import pytest
from hypothesis import assume, given, settings

from kmatch import complexes as cxm
from kmatch import graphs as gr
from kmatch import predictions as pr
from kmatch.homology import betti
from strategies import max_degree_3_graphs, small_graphs

SMALL_INSTANCES = [
    ("clawed-path", {"n": 1}),
    ("clawed-path", {"n": 2}),
    ("clawed-cycle", {"n": 3}),
    ("clawed-cycle", {"n": 4}),
    ("whiskered-cycle", {"n": 3}),
    ("whiskered-cycle", {"n": 6}),
    ("whiskered-cycle", {"n": 5}),
    ("wheel-M1", {"n": 5}),
    ("wheel-M1", {"n": 7}),
    ("wheel-M2", {"n": 4}),
    ("wheel-M2", {"n": 5}),
    ("wheel-M2", {"n": 6}),
    ("cycle-ind", {"n": 6}),
    ("cycle-ind", {"n": 7}),
    ("caterpillar-M1", {"n": 2, "m": 3}),
    ("caterpillar-M2", {"n": 2, "m": 2}),
    ("caterpillar-M2", {"n": 3, "m": 2}),
    ("caterpillar-BD", {"n": 2, "m": 3}),
    ("two-claw", {}),
]


@pytest.mark.parametrize("family,params", SMALL_INSTANCES, ids=lambda x: str(x))
def test_family_predictions_match_homology(family, params):
    v = pr.verify(family, **params)
    data = v.to_json()
    assert data["match"], data["mismatches"]
    assert data["rational_check"] in (True, None)


def test_prediction_examples():
    assert pr.predict("wheel-M2", n=5).wedge.dims == (3, 3)
    assert pr.predict("cycle-ind", n=6).wedge.dims == (1, 1)
    assert pr.predict("nosuch", n=3).status == "unknown"
    assert pr.predict("wheel-M2", n=2).status == "unknown"
    # the even whiskered-cycle statement starts at six cycle edges
    assert pr.predict("whiskered-cycle", n=4).status == "unknown"


@pytest.mark.parametrize("n,expected", [(4, 0), (5, 1), (6, 1), (7, 1), (8, 2), (10, 2)])
def test_nu(n, expected):
    assert pr.nu(n) == expected


def test_caterpillar_tables_frozen():
    # first terms generated by iterating the recurrences and compared against brute-force homology
    t = pr.caterpillar_tables(3, 6)
    assert (t.x, t.y) == (2, 1)
    assert t.A == [2, 4, 14, 40, 122, 364]
    assert t.B == [1, 5, 13, 41, 121, 365]
    assert t.alpha[(2, 3)] == 10 and t.beta[(3, 5)] == 24


@pytest.mark.parametrize("m", [2, 3, 4])
def test_caterpillar_closed_forms(m):
    t = pr.caterpillar_tables(m, 8)
    data = t.to_json()
    assert data["match"]
    assert t.a_sign() == "-"
    agree = {c.name: c.agrees for c in t.checks if "derived" in c.name}
    assert agree and all(agree.values())


@pytest.mark.parametrize("n,m", [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_caterpillar_rows_against_homology(n, m):
    t = pr.caterpillar_tables(m, n)
    _, bd = pr.build_instance("caterpillar-BD", n=n, m=m)
    _, m2 = pr.build_instance("caterpillar-M2", n=n, m=m)
    assert dict(betti(bd).betti) == t.row("BD", n - 1)
    assert dict(betti(m2).betti) == t.row("M2", n - 1)


def test_unit_check():
    assert pr.remark_unit_check()


@pytest.mark.parametrize("m,n", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_towers_match_direct_homology(m, n):
    bd, m2 = pr.bd_m2_towers(m, n)
    g, bd_cx = pr.build_instance("caterpillar-BD", n=n, m=m)
    _, m2_cx = pr.build_instance("caterpillar-M2", n=n, m=m)
    assert betti(bd_cx) == bd
    assert betti(m2_cx) == m2


def test_k_matching_sequence_wheel():
    s = pr.k_matching_sequence(gr.wheel(4))
    assert [dict(p.betti) for p in s.profiles] == [{0: 2}, {2: 3}, {}]
    assert s.cone_k == 3 and s.cone_verified


@given(small_graphs(max_vertices=5, max_edges=6, min_edges=1))
@settings(max_examples=20)
def test_sequence_ends_in_cone(g):
    assume(g.edges)
    s = pr.k_matching_sequence(g)
    assert s.cone_k == pr.cone_index(g)
    assert s.profiles[-1].is_zero and s.cone_verified


def test_gap_report():
    data = pr.jonsson_gap(gr.clawed_path(1)).to_json()
    assert data["bound"] == 1 and data["observed_sphere_dim"] == 3 and data["gap"] == 2


@given(small_graphs(max_vertices=7, max_edges=10, min_edges=1))
def test_bridge_rule(g):
    assume(pr.bridge_edge(g))
    assert pr.predict("bridge", graph=g).status == "contractible"
    assert betti(cxm.matching_complex(g, 2)).is_zero


@given(max_degree_3_graphs(max_vertices=4))
@settings(max_examples=15)
def test_clawed_prediction(g):
    data = pr.verify("clawed", graph=g).to_json()
    assert data["match"], data["mismatches"]


def test_whiskered_matching_is_acyclic():
    for n in range(3, 8):
        m = pr.whiskered_matching(n)
        assert m.acyclic


@pytest.mark.parametrize("fourth", ["c3", "short"])
@pytest.mark.parametrize("n", [5, 6, 7])
def test_wheel_strata_readings(n, fourth):
    m = pr.wheel_m2_matching(n, fourth=fourth)
    assert m.acyclic
