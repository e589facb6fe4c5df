import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from kmatch import complexes as cxm
from kmatch import graphs as gr
from kmatch.errors import AcyclicityError, MatchingError, StrataError
from kmatch.homology import betti
from kmatch.morse import (
    FacePoset,
    MorseMatching,
    check_extension,
    claw_induced_matching,
    is_complete,
    morse_vector,
    patchwork,
    toggle,
    toggle_sequence,
    verify_acyclic,
)
from kmatch.predictions import wheel_m2_matching
from strategies import small_graphs


def triangle_boundary():
    cx = cxm.SimplicialComplex.from_facets(list("abc"), [("a", "b"), ("b", "c"), ("a", "c")])
    return FacePoset(cx)


def test_cyclic_matching_detected():
    poset = triangle_boundary()
    m = MorseMatching.from_pairs(poset, [(("a",), ("a", "b")), (("b",), ("b", "c")), (("c",), ("a", "c"))])
    cert = verify_acyclic(m)
    assert not cert.acyclic
    assert cert.cycle[0] == cert.cycle[-1] and len(cert.cycle) == 7
    with pytest.raises(AcyclicityError):
        morse_vector(m)


def test_acyclic_matching_certified():
    poset = triangle_boundary()
    m = MorseMatching.from_pairs(poset, [((), ("a",)), (("b",), ("a", "b")), (("c",), ("a", "c"))])
    cert = verify_acyclic(m)
    assert cert.acyclic and check_extension(m, cert.extension)
    mv = morse_vector(m)
    assert mv.counts == {1: 1} and mv.empty_paired


def test_non_cover_pair_rejected():
    poset = triangle_boundary()
    with pytest.raises(MatchingError):
        MorseMatching.from_pairs(poset, [(("a",), ("b",))])
    with pytest.raises(MatchingError):
        MorseMatching.from_pairs(poset, [(("a",), ("a", "b")), (("a",), ("a", "c"))])


def test_toggle_on_cone_vertex_leaves_nothing():
    cx = cxm.cone(cxm.points(["a", "b", "c"]))
    m = toggle(FacePoset(cx), "apex")
    assert m.acyclic and m.critical() == [] and is_complete(m)


@given(small_graphs(max_vertices=6, max_edges=8, min_edges=1), st.integers(1, 2), st.randoms(use_true_random=False))
def test_toggle_sequences_are_acyclic_and_bound_homology(g, k, rnd):
    cx = cxm.matching_complex(g, k)
    order = list(cx.vertices)
    rnd.shuffle(order)
    m = toggle_sequence(FacePoset(cx), order)
    assert m.acyclic
    assert check_extension(m, m.certificate.extension)
    mv = morse_vector(m)
    p = betti(cx)
    assert mv.dominates(p.betti)
    assert mv.euler() == cx.euler_reduced()


@given(small_graphs(max_vertices=6, max_edges=8, min_edges=1))
def test_excluding_empty_face(g):
    assume(g.edges)
    cx = cxm.matching_complex(g, 1)
    poset = FacePoset(cx, include_empty=False)
    m = toggle_sequence(poset, list(cx.vertices))
    assert m.acyclic and m.partner[0] == -1
    # at least one critical vertex survives once the empty face is withheld
    assert morse_vector(m).get(0) >= 1


def test_claw_induced_matching_on_one_claw():
    g = gr.claw(gr.path(1))
    m = claw_induced_matching(g, {"0": "0-leaf:0:0", "1": "1-leaf:1:0"})
    assert m.acyclic and m.complete
    assert morse_vector(m).counts == {3: 1}
    assert betti(cxm.matching_complex(g, 2)).betti == {3: 1}


def test_claw_induced_matching_validation():
    g = gr.claw(gr.path(1))
    with pytest.raises(MatchingError):
        claw_induced_matching(g, {"nope": "1"})
    with pytest.raises(MatchingError):
        claw_induced_matching(g, {"0": "1-leaf:1:0"})


def test_patchwork_rejects_order_violations():
    with pytest.raises(StrataError):
        wheel_m2_matching(4, strict=True)
    m = wheel_m2_matching(4)
    assert m.acyclic and m.notes["order_violations"]


def test_patchwork_on_split_by_vertex():
    cx = cxm.matching_complex(gr.cycle(5), 1)
    poset = FacePoset(cx)
    has = poset.containing(["0-1"])
    # faces without edge 1 form a downset, so stratum 0 then stratum 1 is order preserving
    m = patchwork(poset, [~has, has], lambda p, sel, s: toggle(p, "2-3" if s == 0 else "1-2", restricted_to=sel, verify=False))
    assert m.acyclic
    assert morse_vector(m).dominates(betti(cx).betti)
    with pytest.raises(StrataError):
        patchwork(poset, [has, ~has], lambda p, sel, s: np.full(len(p), -1))


def test_matching_json():
    poset = triangle_boundary()
    m = toggle(poset, "a")
    data = m.to_json()
    assert ["b", "c"] in data["critical"]
    assert [["b"], ["a", "b"]] in data["pairs"]
