import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmatch import graphs as gr
from kmatch import sites as s
from kmatch.errors import MatchingError
from kmatch.morse import claw_induced_matching

BUILDS = {
    "triangle-path": (gr.TRIANGLE_PATH_SCRIPT, 5),
    "square-two-paths": (gr.SQUARE_TWO_PATHS_SCRIPT, 6),
    "triangle-two-paths": (gr.TRIANGLE_TWO_PATHS_SCRIPT, 6),
    "three-claw": (gr.ClawedBuildScript(3), 3),
}


def brute_best(g: gr.Graph) -> int:
    units = gr.find_claw_units(g)
    best = 0
    for choice in itertools.product(*[u.edges for u in units]):
        toggles = {u.center: e for u, e in zip(units, choice)}
        best = max(best, s.attaching_site_analysis(g, toggles).n_sites)
    return best


@pytest.mark.parametrize("name", list(BUILDS))
def test_site_counts(name):
    script, expected = BUILDS[name]
    b = gr.build_clawed_nonseparable(script)
    assert s.maximize_sites(b).sites == expected
    assert s.best_site_count(b.graph) == expected
    assert brute_best(b.graph) == expected
    assert expected <= b.T


def test_triangle_path_assignment_is_a_complete_matching():
    b = gr.build_clawed_nonseparable(gr.TRIANGLE_PATH_SCRIPT)
    a = s.maximize_sites(b)
    an = s.attaching_site_analysis(b.graph, a.toggles, check_matching=True)
    assert an.matching_checked
    assert an.matching_critical == [an.critical_cell]


@st.composite
def scripts(draw):
    """Random build scripts: a claw cycle plus up to two clawed paths joining pairs of leaves."""
    t0 = draw(st.integers(3, 4))
    steps = []
    b = gr.build_clawed_nonseparable(gr.ClawedBuildScript(t0))
    for _ in range(draw(st.integers(0, 2))):
        leaves = sorted(b.graph.leaves())
        a, c = draw(st.sampled_from(list(itertools.combinations(leaves, 2))))
        steps.append((a, c, draw(st.integers(1, 2))))
        b = gr.build_clawed_nonseparable(gr.ClawedBuildScript(t0, tuple(steps)))
    return b


@given(scripts())
@settings(max_examples=15)
def test_algorithm_bounded_by_optimum(b):
    a = s.maximize_sites(b)
    opt = s.best_site_count(b.graph)
    assert a.sites <= opt <= b.T
    assert opt == brute_best(b.graph)


@given(st.integers(0, 10_000))
@settings(max_examples=10)
def test_random_toggles_never_beat_optimum(seed):
    b = gr.build_clawed_nonseparable(gr.SQUARE_TWO_PATHS_SCRIPT)
    r = s.compare_random(b, trials=10, seed=seed)
    assert r.ok and max(r.samples) <= r.best


def test_site_flag_depends_on_the_matching():
    # the middle vertex of the clawed edge is a site for one complete matching and not for another,
    # while attaching a leaf there leaves the homology unchanged in both cases
    g = gr.clawed_path(1)
    m_out = claw_induced_matching(g, {"0": "3", "1": "6"})
    m_in = claw_induced_matching(g, {"0": "1", "1": "4"})
    c_out, c_in = s.classify_sites(g, m_out), s.classify_sites(g, m_in)
    assert c_out.site == {"sub:0:1": False}
    assert c_in.site == {"sub:0:1": True}
    (chk_out,) = s.leaf_dichotomy(g, c_out)
    (chk_in,) = s.leaf_dichotomy(g, c_in)
    assert chk_out.profile == chk_in.profile == {"betti": {"3": 1}, "torsion": {}}
    assert chk_in.ok and not chk_out.ok


def test_incomplete_matching_rejected():
    g = gr.clawed_path(1)
    m = claw_induced_matching(g, {"0": "1"})
    assert not m.complete
    with pytest.raises(MatchingError):
        s.classify_sites(g, m)


def test_shared_toggles():
    b = gr.build_clawed_nonseparable(gr.TRIANGLE_TWO_PATHS_SCRIPT)
    t = s.shared_toggles(b.graph, {"c0": "p0.1", "c1": "c2"})
    an = s.attaching_site_analysis(b.graph, t)
    assert an.n_sites == 6
