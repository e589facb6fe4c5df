import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from kmatch import complexes as cxm
from kmatch import graphs as gr
from kmatch.homology import (
    BettiProfile,
    SphereWedge,
    betti,
    homology,
    join_profile,
    join_shift_check,
    profile_matches,
    smith_invariants,
    suspend_profile,
)
from strategies import small_graphs


def oracle_homology(faces: set[frozenset]) -> tuple[dict, dict]:
    """Reduced homology via sympy Smith forms of the full augmented chain complex."""
    by_dim: dict[int, list[tuple]] = {}
    for f in faces:
        by_dim.setdefault(len(f) - 1, []).append(tuple(sorted(f)))
    for v in by_dim.values():
        v.sort()
    top = max(by_dim)
    rank, tors = {}, {}
    for d in range(0, top + 1):
        rows, cols = by_dim[d - 1], by_dim.get(d, [])
        if not cols:
            rank[d] = 0
            continue
        pos = {f: i for i, f in enumerate(rows)}
        m = [[0] * len(cols) for _ in rows]
        for j, f in enumerate(cols):
            for i in range(len(f)):
                m[pos[f[:i] + f[i + 1:]]][j] = (-1) ** i
        snf = smith_normal_form(Matrix(m), domain=ZZ)
        diag = [abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0]
        rank[d] = len(diag)
        tors[d - 1] = tuple(sorted(int(x) for x in diag if x > 1))
    out_b = {}
    for d in range(-1, top + 1):
        b = len(by_dim.get(d, [])) - rank.get(d, 0) - rank.get(d + 1, 0)
        if b:
            out_b[d] = b
    return out_b, {k: v for k, v in tors.items() if v}


@pytest.mark.parametrize(
    "cx,expected",
    [
        (cxm.points(["a", "b", "c"]), {0: 2}),
        (cxm.simplex(["a", "b", "c"]), {}),
        (cxm.SimplicialComplex.from_facets(list("abc"), [("a", "b"), ("b", "c"), ("a", "c")]), {1: 1}),
        (cxm.suspension(cxm.suspension(cxm.points(["a", "b"]), "p"), "q"), {2: 1}),
    ],
)
def test_small_examples(cx, expected):
    r = homology(cx, check_dd=True)
    assert dict(r.profile.betti) == expected
    assert r.profile.torsion_free and r.dd_ok and r.rational_agrees


def test_void_complex_homology():
    cx = cxm.bounded_degree_complex(gr.Graph(["a", "b"], [("a", "b")]), 0)
    p = betti(cx)
    assert p.void and p.betti == {-1: 1}


def test_projective_plane_torsion():
    # six-vertex triangulation of the real projective plane
    facets = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2), (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    cx = cxm.SimplicialComplex.from_facets([str(i) for i in range(1, 7)], [tuple(map(str, f)) for f in facets])
    p = betti(cx)
    assert p.betti == {} and p.torsion == {1: (2,)}


def test_k7_matching_complex_has_three_torsion():
    # frozen regression: computed once with reduction on and off, and cross-checked rationally
    r = homology(cxm.matching_complex(gr.complete(7), 1))
    assert dict(r.profile.betti) == {2: 20}
    assert dict(r.profile.torsion) == {1: (3,)}
    assert r.rational_agrees


@given(small_graphs(max_vertices=6, max_edges=7), st.integers(1, 2))
def test_against_sympy_oracle(g, k):
    cx = cxm.matching_complex(g, k)
    b, t = oracle_homology(set(cx.face_family()))
    p = betti(cx, reduce=False)
    assert dict(p.betti) == b
    assert dict(p.torsion) == t


@given(small_graphs(max_vertices=7, max_edges=10), st.integers(1, 2))
def test_reduction_preserves_homology(g, k):
    cx = cxm.matching_complex(g, k)
    assert betti(cx, reduce=True) == betti(cx, reduce=False)


@given(small_graphs(max_vertices=7, max_edges=9))
def test_relabel_invariance(g):
    cx = cxm.matching_complex(g, 1)
    rev = cx.relabeled({v: f"z{len(cx.vertices) - i}" for i, v in enumerate(cx.vertices)})
    assert betti(cx) == betti(rev)


@given(small_graphs(max_vertices=7, max_edges=9))
def test_euler_characteristic_agrees(g):
    cx = cxm.matching_complex(g, 1)
    p = betti(cx)
    assert p.euler() == cx.euler_reduced()


@given(small_graphs(max_vertices=5, max_edges=5), small_graphs(max_vertices=4, max_edges=4))
def test_join_degree_shift(g, h):
    a = cxm.matching_complex(g, 1)
    b = cxm.matching_complex(h, 1).relabeled({v: "b" + v for v in cxm.matching_complex(h, 1).vertices})
    if a.is_void or b.is_void:
        return
    chk = join_shift_check(a, b)
    assert chk.ok in (True, None)


def test_profile_algebra():
    assert join_profile({0: 1}, {0: 1}) == {1: 1}
    assert join_profile({1: 2}, {0: 3}) == {2: 6}
    assert suspend_profile({1: 2}, 3) == {2: 4}
    assert suspend_profile({1: 2}, 1) == {}


def test_smith_invariants_example():
    # [[2, 4], [6, 8]] has invariant factors 2 and 4
    cols = {0: {0: 2, 1: 6}, 1: {0: 4, 1: 8}}
    assert smith_invariants(cols) == [2, 4]


def test_profile_matches_reports():
    ok, rep = profile_matches(BettiProfile({2: 3}), SphereWedge((2, 2, 2)))
    assert ok and rep == []
    ok, rep = profile_matches(BettiProfile({2: 3}, {1: (3,)}), SphereWedge((2, 2, 2)))
    assert not ok and "torsion" in rep[0]


def test_profile_validation_and_json():
    with pytest.raises(ValueError):
        BettiProfile({1: -1})
    p = BettiProfile({3: 2}, {1: (2,)})
    assert BettiProfile.from_json(p.to_json()) == p
    assert p.wedge() is None
    assert BettiProfile({1: 2}).wedge() == SphereWedge((1, 1))
    assert SphereWedge(()).describe() == "pt"


@pytest.mark.parametrize("n", range(4, 8))
def test_cycle_matching_complexes(n):
    # independent oracle: itertools faces fed to the sympy Smith forms
    g = gr.cycle(n)
    faces = set()
    for r in range(n + 1):
        for combo in itertools.combinations(g.labels, r):
            ends = [v for lab in combo for v in g.endpoints(lab)]
            if len(ends) == len(set(ends)):
                faces.add(frozenset(combo))
    b, t = oracle_homology(faces)
    p = betti(cxm.matching_complex(g, 1))
    assert dict(p.betti) == b and not t and not p.torsion
