"""Predicted homotopy descriptors for graph families, plus the tables and
pipelines used to check them.

Predictions are only made for families with a known closed form; anything
else is ``unknown``.  The caterpillar recurrences are the source of truth for
their tables; the closed-form generating functions are expanded and compared
term by term, and disagreements are reported, never patched over.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Callable, Mapping

import numpy as np

from . import graphs as gr
from .complexes import SimplicialComplex, bounded_degree_complex, independence_complex, matching_complex
from .errors import GraphError, KMatchError
from .homology import BettiProfile, SphereWedge, betti, homology, join_profile, profile_matches, suspend_profile, wedge_profile
from .morse import FacePoset, MorseMatching, patchwork, toggle_sequence
from .series import expand_bivariate, expand_univariate


def nu(n: int) -> int:
    """ceil((n - 4) / 3)."""
    return -((4 - n) // 3)


@dataclass(frozen=True)
class Prediction:
    status: str  # "wedge", "contractible" or "unknown"
    wedge: SphereWedge | None = None
    note: str = ""

    @classmethod
    def of(cls, dims, note: str = "") -> "Prediction":
        w = SphereWedge(tuple(dims))
        return cls("contractible" if w.is_point else "wedge", w, note)

    @classmethod
    def unknown(cls, note: str = "") -> "Prediction":
        return cls("unknown", None, note)

    def to_json(self) -> dict:
        d = {"status": self.status}
        if self.wedge is not None:
            d.update(self.wedge.to_json())
        if self.note:
            d["note"] = self.note
        return d


# ---------------------------------------------------------------------------
# closed forms


def _wheel_m1(n: int) -> Prediction:
    if n < 4:
        return Prediction.unknown("wheels need n >= 4")
    v = nu(n)
    count = {1: 2, 2: n - 2, 0: n}[n % 3]
    return Prediction.of([v] * count)


def _wheel_m2(n: int) -> Prediction:
    if n < 4:
        return Prediction.unknown("wheels need n >= 4")
    if n == 4:
        return Prediction.of([2, 2, 2])
    if n == 5:
        return Prediction.of([3, 3])
    return Prediction.of([])


def _cycle_ind(n: int) -> Prediction:
    if n < 3:
        return Prediction.unknown("cycles need n >= 3")
    v = nu(n)
    return Prediction.of([v, v] if n % 3 == 0 else [v])


def _whiskered(n: int) -> Prediction:
    if n % 2 == 1 and n >= 3:
        return Prediction.of([n - 1])
    if n % 2 == 0 and n >= 6:
        return Prediction.of([n - 1])
    return Prediction.unknown("the even whiskered-cycle result needs a 2m-cycle with m >= 3")


def caterpillar_m1_wedge(n: int, m: int) -> list[int]:
    """Sphere dimensions of M_1 of the perfect m-caterpillar of length n (cited closed form)."""
    x = m - 1
    dims: list[int] = []
    if n % 2 == 0:
        k = n // 2
        for t in range(k + 1):
            dims += [k - 1 + t] * (comb(k + t, k - t) * x ** (2 * t))
    else:
        k = (n - 1) // 2
        for t in range(k + 1):
            dims += [k + t] * (comb(k + 1 + t, k - t) * x ** (2 * t + 1))
    return dims


def _caterpillar(n: int, m: int, which: str) -> Prediction:
    if n < 1 or m < 2:
        return Prediction.unknown("caterpillars need n >= 1 and m >= 2")
    if which == "M1":
        return Prediction.of(caterpillar_m1_wedge(n, m))
    tab = caterpillar_tables(m, n)
    row = tab.alpha if which == "BD" else tab.beta
    dims = [j for (i, j), c in sorted(row.items()) if i == n - 1 for _ in range(c)]
    return Prediction.of(dims)


def bridge_edge(g: gr.Graph) -> tuple[str, str] | None:
    for u, v in g.edges:
        if g.degree(u) <= 2 and g.degree(v) <= 2:
            return (u, v)
    return None


def _clawed_prediction(cg: gr.Graph) -> Prediction:
    if not gr.decomposes_into_claw_units(cg):
        return Prediction.unknown("graph does not decompose into induced claw units")
    return Prediction.of([2 * len(cg.labels) // 3 - 1])


@dataclass(frozen=True)
class Family:
    name: str
    params: tuple[str, ...]
    graph: Callable[..., gr.Graph]
    complex: Callable[[gr.Graph, dict], SimplicialComplex]
    predict: Callable[..., Prediction]
    describe: str = ""


def _m(k):
    return lambda g, p: matching_complex(g, k, p.get("budget"))


def _bd_cat(g, p):
    n = p["n"]
    caps = {v: 2 for v in g.vertices}
    caps[f"x{n}"] = 1
    return bounded_degree_complex(g, caps, p.get("budget"))


def _graph_param(p) -> gr.Graph:
    if "graph" not in p:
        raise KMatchError("this family needs a graph")
    g = p["graph"]
    return gr.parse_builder(g) if isinstance(g, str) else g


def _clawed_graph(p):
    return gr.claw(_graph_param(p))


FAMILIES: dict[str, Family] = {
    "clawed-path": Family("clawed-path", ("n",), lambda n: gr.clawed_path(n), _m(2), lambda n: Prediction.of([2 * n + 1]), "M2 of the clawed path CP_n"),
    "clawed-cycle": Family("clawed-cycle", ("n",), lambda n: gr.clawed_cycle(n), _m(2), lambda n: Prediction.of([2 * n - 1]) if n >= 3 else Prediction.unknown(), "M2 of the clawed cycle CC_n"),
    "whiskered-cycle": Family("whiskered-cycle", ("n",), lambda n: gr.whiskered_cycle(n), _m(2), _whiskered, "M2 of the fully whiskered n-cycle"),
    "wheel-M1": Family("wheel-M1", ("n",), lambda n: gr.wheel(n), _m(1), _wheel_m1, "M1 of the wheel W_n"),
    "wheel-M2": Family("wheel-M2", ("n",), lambda n: gr.wheel(n), _m(2), _wheel_m2, "M2 of the wheel W_n"),
    "cycle-ind": Family("cycle-ind", ("n",), lambda n: gr.cycle(n), lambda g, p: independence_complex(g, p.get("budget")), _cycle_ind, "independence complex of C_n"),
    "caterpillar-M1": Family("caterpillar-M1", ("n", "m"), lambda n, m: gr.caterpillar(n, m), _m(1), lambda n, m: _caterpillar(n, m, "M1"), "M1 of the perfect m-caterpillar"),
    "caterpillar-M2": Family("caterpillar-M2", ("n", "m"), lambda n, m: gr.caterpillar(n, m), _m(2), lambda n, m: _caterpillar(n, m, "M2"), "M2 of the perfect m-caterpillar"),
    "caterpillar-BD": Family("caterpillar-BD", ("n", "m"), lambda n, m: gr.caterpillar(n, m), _bd_cat, lambda n, m: _caterpillar(n, m, "BD"), "degree-bounded complex BD(G_n) of the caterpillar"),
    "two-claw": Family("two-claw", (), lambda: gr.two_claw_example(), _m(2), lambda: Prediction.of([2]), "M2 of the two-claw example graph"),
}


def predict(family: str, **params) -> Prediction:
    """Predicted descriptor for a family instance, or for a graph via ``bridge``/``clawed``."""
    if family == "bridge":
        g = _graph_param(params)
        return Prediction.of([], "edge with both endpoint degrees <= 2") if bridge_edge(g) else Prediction.unknown("no bridge-type edge")
    if family == "clawed":
        return _clawed_prediction(_clawed_graph(params))
    fam = FAMILIES.get(family)
    if fam is None:
        return Prediction.unknown(f"unsupported family {family!r}")
    try:
        args = [int(params[p]) for p in fam.params]
    except KeyError as exc:
        raise KMatchError(f"{family} needs parameter {exc.args[0]!r}") from None
    return fam.predict(*args)


@dataclass
class Verification:
    family: str
    params: dict
    prediction: Prediction
    profile: BettiProfile
    match: bool
    report: list[str]
    faces: int
    rational_agrees: bool | None = None

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": {k: (v if isinstance(v, (int, str)) else str(v)) for k, v in self.params.items()},
            "predicted": self.prediction.to_json(),
            "homology": self.profile.to_json(),
            "faces": self.faces,
            "rational_check": self.rational_agrees,
            "match": self.match,
            "mismatches": self.report,
        }


def build_instance(family: str, budget: int | None = None, **params) -> tuple[gr.Graph, SimplicialComplex]:
    if family == "clawed":
        g = _clawed_graph(params)
        return g, matching_complex(g, 2, budget)
    if family == "bridge":
        g = _graph_param(params)
        return g, matching_complex(g, 2, budget)
    fam = FAMILIES.get(family)
    if fam is None:
        raise KMatchError(f"unsupported family {family!r}")
    args = [int(params[p]) for p in fam.params]
    g = fam.graph(*args)
    return g, fam.complex(g, {**dict(zip(fam.params, args)), "budget": budget})


def verify(family: str, budget: int | None = None, **params) -> Verification:
    """Build the instance, compute its homology and compare with the prediction."""
    pred = predict(family, **params)
    g, cx = build_instance(family, budget, **params)
    res = homology(cx, budget=budget)
    if pred.status == "unknown":
        ok, rep = False, ["no prediction for this instance"]
    else:
        ok, rep = profile_matches(res.profile, pred.wedge)
    if res.rational_agrees is False:
        ok = False
        rep.append("rational rank cross-check disagrees")
    return Verification(family, dict(params), pred, res.profile, ok, rep, len(cx), res.rational_agrees)


# ---------------------------------------------------------------------------
# caterpillar tables


@dataclass
class FormCheck:
    name: str
    rendering: str
    agrees: bool
    first_mismatch: dict | None = None

    def to_json(self) -> dict:
        d = {"form": self.name, "rendering": self.rendering, "agrees": self.agrees}
        if self.first_mismatch:
            d["first_mismatch"] = self.first_mismatch
        return d


@dataclass
class CaterpillarTables:
    """Sphere counts for BD(G_{i+1}) (``A``, ``alpha``) and M2(G_{i+1}) (``B``, ``beta``).

    ``alpha[(i, j)]`` and ``beta[(i, j)]`` count spheres of dimension ``j``.
    """

    m: int
    depth: int
    x: int
    y: int
    A: list[int]
    B: list[int]
    alpha: dict[tuple[int, int], int]
    beta: dict[tuple[int, int], int]
    checks: list[FormCheck] = field(default_factory=list)

    def row(self, which: str, i: int) -> dict[int, int]:
        src = self.alpha if which == "BD" else self.beta
        return {j: c for (ii, j), c in sorted(src.items()) if ii == i}

    def a_sign(self) -> str:
        minus = next(c for c in self.checks if c.name == "A(t)" and "- (x^2-y)" in c.rendering)
        plus = next(c for c in self.checks if c.name == "A(t)" and "+ (x^2-y)" in c.rendering)
        if minus.agrees and not plus.agrees:
            return "-"
        if plus.agrees and not minus.agrees:
            return "+"
        return "both" if plus.agrees else "neither"

    def to_json(self) -> dict:
        def tab(d):
            return {f"{i},{j}": c for (i, j), c in sorted(d.items())}

        return {
            "m": self.m,
            "depth": self.depth,
            "x": self.x,
            "y": self.y,
            "A": self.A,
            "B": self.B,
            "alpha": tab(self.alpha),
            "beta": tab(self.beta),
            "closed_forms": [c.to_json() for c in self.checks],
            "A_sign_supported": self.a_sign(),
            "match": all(c.agrees for c in self.checks if c.name.endswith("derived")),
        }


def _first_diff_1d(got: list[int], want: list[int]) -> dict | None:
    for k, (a, b) in enumerate(zip(got, want)):
        if a != b:
            return {"index": k, "closed_form": a, "recurrence": b}
    return None


def _first_diff_2d(got: Mapping, want: Mapping, keys) -> dict | None:
    for key in keys:
        a, b = got.get(key, 0), want.get(key, 0)
        if a != b:
            return {"index": list(key), "closed_form": a, "recurrence": b}
    return None


def caterpillar_tables(m: int, depth: int) -> CaterpillarTables:
    """Recurrence tables for i = 0 .. depth-1 plus closed-form comparisons."""
    if m < 2 or depth < 1:
        raise KMatchError("caterpillar tables need m >= 2 and depth >= 1")
    x, y = m - 1, comb(m - 1, 2)
    A, B = [x], [y]
    for _ in range(1, depth):
        A, B = A + [A[-1] + x * B[-1]], B + [x * A[-1] + y * B[-1]]
    alpha = {(0, 0): x}
    beta = {(0, 1): y} if y else {}
    for i in range(1, depth):
        for j in range(0, 3 * i + 2):
            a = alpha.get((i - 1, j - 1), 0) + x * beta.get((i - 1, j - 1), 0)
            b = x * alpha.get((i - 1, j - 2), 0) + y * beta.get((i - 1, j - 2), 0)
            if a:
                alpha[(i, j)] = a
            if b:
                beta[(i, j)] = b
    for i in range(depth):
        if sum(c for (ii, _), c in alpha.items() if ii == i) != A[i]:
            raise AssertionError("alpha table disagrees with its totals")
        if sum(c for (ii, _), c in beta.items() if ii == i) != B[i]:
            raise AssertionError("beta table disagrees with its totals")

    d = x * x - y
    checks = []
    den_minus = {0: 1, 1: -(1 + y), 2: -d}
    den_plus = {0: 1, 1: -(1 + y), 2: d}
    for label, den in (("x / (1 - (1+y)t - (x^2-y)t^2)", den_minus), ("x / (1 - (1+y)t + (x^2-y)t^2)", den_plus)):
        got = expand_univariate({0: x}, den, depth)
        diff = _first_diff_1d(got, A)
        checks.append(FormCheck("A(t)", label, diff is None, diff))
    got = expand_univariate({0: x}, den_minus, depth)
    diff = _first_diff_1d(got, B)
    checks.append(FormCheck("B(t)", "x / (1 - (1+y)t - (x^2-y)t^2)", diff is None, diff))
    got = expand_univariate({0: y, 1: d}, den_minus, depth)
    diff = _first_diff_1d(got, B)
    checks.append(FormCheck("B(t) derived", "(y + (x^2-y)t) / (1 - (1+y)t - (x^2-y)t^2)", diff is None, diff))

    max_j = 3 * depth
    den2 = {(0, 0): 1, (1, 1): -1, (2, 3): -d, (1, 2): -y}
    claimed = expand_bivariate({(0, 0): x}, den2, depth, max_j)
    keys = [(i, j) for i in range(depth) for j in range(max_j + 1)]
    diff = _first_diff_2d(claimed, beta, keys)
    checks.append(FormCheck("B(r,t) dimension j of M2(G_{i+1})", "x / (1 - rt - (x^2-y)r^2t^3 - yrt^2)", diff is None, diff))
    # statement indexing: coefficient of r^i t^j counts spheres of dimension i+j in M2(G_i)
    shifted = {(i, j - i): c for (ii, j), c in beta.items() for i in [ii + 1] if j - i >= 0}
    keys_s = [(i, j) for i in range(1, depth + 1) for j in range(max_j + 1)]
    diff = _first_diff_2d(claimed, shifted, [(0, j) for j in range(max_j + 1)] + keys_s)
    checks.append(FormCheck("B(r,t) dimension i+j of M2(G_i)", "x / (1 - rt - (x^2-y)r^2t^3 - yrt^2)", diff is None, diff))
    derived = expand_bivariate({(0, 1): y, (1, 2): d}, den2, depth, max_j)
    diff = _first_diff_2d(derived, beta, keys)
    checks.append(FormCheck("B(r,t) derived", "(yt + (x^2-y)rt^2) / (1 - rt - yrt^2 - (x^2-y)r^2t^3)", diff is None, diff))
    return CaterpillarTables(m, depth, x, y, A, B, alpha, beta, checks)


def remark_unit_check(max_i: int = 8) -> bool:
    """Coefficients of 1 / (1 - rt(1+t)) are binom(i, j - i)."""
    coef = expand_bivariate({(0, 0): 1}, {(0, 0): 1, (1, 1): -1, (1, 2): -1}, max_i, 2 * max_i)
    for i in range(max_i + 1):
        for j in range(2 * max_i + 1):
            want = comb(i, j - i) if 0 <= j - i <= i else 0
            if coef.get((i, j), 0) != want:
                return False
    return True


def bd_m2_towers(m: int, n: int) -> tuple[BettiProfile, BettiProfile]:
    """Predicted homology of BD(G_n) and M2(G_n) by iterating the two decompositions."""
    if m < 2 or n < 1:
        raise KMatchError("towers need m >= 2 and n >= 1")
    y = comb(m - 1, 2)
    bd = {0: m - 1}
    m2 = {1: y} if y else {}
    star_m2 = dict(m2)
    for _ in range(1, n):
        bd, m2 = (
            wedge_profile(suspend_profile(m2, m), suspend_profile(bd, 2)),
            wedge_profile(join_profile(m2, star_m2), suspend_profile(suspend_profile(bd, m), 2)),
        )
    return BettiProfile(bd), BettiProfile(m2)


# ---------------------------------------------------------------------------
# k-matching sequences and the connectivity gap


def cone_index(g: gr.Graph) -> int | None:
    """Smallest k for which M_k(g) is a cone: some edge has both endpoint degrees <= k."""
    if not g.edges:
        return None
    return min(max(g.degree(u), g.degree(v)) for u, v in g.edges)


@dataclass
class KMatchingSequence:
    profiles: list[BettiProfile]
    cone_k: int | None
    cone_verified: bool

    def to_json(self) -> dict:
        return {
            "profiles": [p.to_json() for p in self.profiles],
            "describe": [(w.describe() if (w := p.wedge()) is not None else ("void complex" if p.void else "torsion")) for p in self.profiles],
            "cone_k": self.cone_k,
            "match": self.cone_verified,
        }


def k_matching_sequence(g: gr.Graph, budget: int | None = None) -> KMatchingSequence:
    n = cone_index(g)
    if n is None:
        return KMatchingSequence([betti(matching_complex(g, 1, budget))], None, False)
    profiles = [betti(matching_complex(g, k, budget), budget=budget) for k in range(1, n + 1)]
    return KMatchingSequence(profiles, n, profiles[-1].is_zero)


@dataclass
class GapReport:
    edges: int
    nu: int
    connectivity: int
    observed_dim: int | None
    stated_dim: int
    theorem_dim: int

    @property
    def gap(self) -> int | None:
        return None if self.observed_dim is None else self.observed_dim - self.nu

    def to_json(self) -> dict:
        return {
            "edges": self.edges,
            "bound": self.nu,
            "connectivity_ceil_nu_minus_1": self.connectivity,
            "observed_sphere_dim": self.observed_dim,
            "stated_dim_E_over_3": self.stated_dim,
            "sphere_dim_2E_over_3_minus_1": self.theorem_dim,
            "gap": self.gap,
            "match": self.gap is not None and self.gap > 0,
        }


def jonsson_gap(g: gr.Graph, budget: int | None = None) -> GapReport:
    if not gr.decomposes_into_claw_units(g):
        raise GraphError("graph is not clawed: its claw units do not partition the edges")
    e = len(g.labels)
    v = e // 3 - 1
    prof = betti(matching_complex(g, 2, budget), budget=budget)
    low = min(prof.betti) if prof.betti else None
    return GapReport(e, v, v - 1 if v >= 1 else -1, low, e // 3, 2 * e // 3 - 1)


# ---------------------------------------------------------------------------
# wheel M2 pipeline


def wheel_m2_strata(poset: FacePoset, n: int, fourth: str = "c3") -> np.ndarray:
    """Stratum label per face: 0 for c0, 1 for c2, 2 for R.

    ``fourth`` picks the reading of the last R pattern for n >= 6:
    ``"c3"`` uses {c_{n-2}, l_{n-2}, c3, l2}, ``"short"`` uses {c_{n-2}, l_{n-2}, l2}.
    """
    cx = poset.complex
    masks = poset.masks
    top = n - 2

    def has(*labels):
        mk = cx.mask_of(labels)
        return (masks & mk) == mk

    c0 = cx.mask_of(["c0"])
    in_c0 = ((masks & c0) != 0) | (poset.lookup(masks | c0) >= 0)
    if n == 4:
        listed = [{"c1", "c2", "l2"}, {"c2", "l2"}, {"c2", "l2", "l0"}, {"c1", "l0", "l1"}, {"c2", "l1", "l2"}]
        in_r = np.zeros(len(poset), bool)
        for f in listed:
            in_r[poset.index(sorted(f))] = True
    else:
        fourth_pat = has(f"c{top}", f"l{top}", "c3", "l2") if fourth == "c3" else has(f"c{top}", f"l{top}", "l2")
        in_r = has("c1", "l0", "l1") | has("c1", "l0", "c3", "l2") | has(f"c{top}", f"l{top}", "c1", "l1") | fourth_pat
    in_c2 = (has("c1", "l0") | has(f"c{top}", f"l{top}")) & ~in_r
    label = np.full(len(poset), -1, np.int64)
    label[in_c0] = 0
    label[~in_c0 & in_c2] = 1
    label[~in_c0 & ~in_c2 & in_r] = 2
    if np.any(label < 0):
        raise KMatchError("wheel strata do not cover every face")
    return label


def wheel_final_toggles(n: int) -> list[str]:
    if n == 4:
        return ["c1"]
    if n == 5:
        return ["c1", "c3"]
    if n == 6:
        return ["c1", "c3", "c4"]
    return ["c4"]


def wheel_m2_matching(n: int, fourth: str = "c3", strict: bool | None = None) -> MorseMatching:
    """Patchwork matching on M2(W_n): toggle c0 and c2 on their strata, then the final toggles on R."""
    poset = FacePoset(matching_complex(gr.wheel(n), 2))
    label = wheel_m2_strata(poset, n, fourth)
    finals = wheel_final_toggles(n)

    def per(p, sel, s):
        vs = ["c0"] if s == 0 else ["c2"] if s == 1 else finals
        return toggle_sequence(p, vs, restricted_to=sel, verify=False)

    if strict is None:
        strict = n != 4
    return patchwork(poset, label, per, strict=strict)


# ---------------------------------------------------------------------------
# whiskered cycles and wheel MTA counts


def whiskered_toggles(n: int) -> list[str]:
    """Leaf edges x_{i,i+1} for odd i, then x_{n-1,n} when n is odd."""
    out = [f"x{i},{i + 1}" for i in range(1, n, 2)]
    if n % 2 == 1:
        out.append(f"x{n - 1},{n}")
    return out


def whiskered_matching(n: int) -> MorseMatching:
    g = gr.whiskered_cycle(n)
    poset = FacePoset(matching_complex(g, 2))
    return toggle_sequence(poset, whiskered_toggles(n))


def wheel_mta_counts(n: int) -> dict[int, int]:
    """Critical cell sizes the wheel policy should leave before any cancellation."""
    v = nu(n)
    if n % 3 == 0:
        return {v + 1: n}
    if n % 3 == 1:
        return {v + 1: 2}
    return {v: 1, v + 1: n - 1}
