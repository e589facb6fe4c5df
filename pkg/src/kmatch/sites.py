"""Attaching sites of claw-induced matchings on clawed graphs.

Each claw unit toggles on one of its three edges.  A degree-2 vertex is a
site when neither of its edges is a toggle edge; the sites are where a new
clawed path can be attached without creating new critical cells.  When every
claw toggles, the unique critical cell is the set of non-toggle edges.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping

import networkx as nx

from .errors import MatchingError
from .graphs import ClawedBuild, ClawUnit, Graph, find_claw_units, label_key, sort_labels
from .morse import claw_induced_matching


@dataclass
class SiteAnalysis:
    toggles: dict[str, str]
    sites: list[str]
    candidates: list[str]
    critical_cell: list[str]
    T: int
    L: int
    matching_checked: bool | None = None
    matching_critical: list[list[str]] | None = None

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def to_json(self) -> dict:
        d = {
            "toggles": dict(sorted(self.toggles.items(), key=lambda kv: label_key(kv[0]))),
            "sites": self.sites,
            "n_sites": self.n_sites,
            "candidates": len(self.candidates),
            "critical_cell": self.critical_cell,
            "T": self.T,
            "L": self.L,
            "sites_at_least_T": self.n_sites >= self.T,
        }
        if self.matching_checked is not None:
            d["matching_checked"] = self.matching_checked
            d["matching_critical"] = self.matching_critical
        return d


def _units(g: Graph) -> dict[str, ClawUnit]:
    return {u.center: u for u in find_claw_units(g)}


def attaching_site_analysis(g: Graph, toggles: Mapping[str, str], check_matching: bool = False) -> SiteAnalysis:
    """Sites of the matching toggling ``toggles[center]`` at every claw unit.

    With ``check_matching`` the claw-induced matching on M2(g) is built and
    its critical cells compared with the predicted single cell.
    """
    units = _units(g)
    if set(toggles) != set(units):
        missing = sorted(set(units) - set(toggles), key=label_key)
        extra = sorted(set(toggles) - set(units), key=label_key)
        raise MatchingError(f"toggles must cover each claw unit exactly (missing {missing}, unknown {extra})")
    for c, e in toggles.items():
        if e not in units[c].edges:
            raise MatchingError(f"edge {e!r} does not belong to the claw unit at {c!r}")
    used = set(toggles.values())
    cands = [v for v in g.vertices if g.degree(v) == 2]
    sites = [v for v in cands if not used & set(g.incident_labels(v))]
    crit = sort_labels(set(g.labels) - used)
    out = SiteAnalysis(dict(toggles), sites, cands, crit, len(units), len(g.leaves()))
    if check_matching:
        m = claw_induced_matching(g, toggles)
        found = [list(c) for c in m.critical()]
        out.matching_critical = found
        out.matching_checked = bool(m.acyclic) and found == [crit]
    return out


def _leaf_edge(g: Graph, u: ClawUnit) -> str | None:
    for lab in u.edges:
        if g.is_leaf(u.other_end(g, lab)):
            return lab
    return None


def optimal_toggles(g: Graph | ClawedBuild) -> dict[str, str]:
    """Toggle choice with the largest possible number of sites.

    Claws owning a leaf toggle on a leaf edge and cost nothing.  Every other
    claw blocks one degree-2 vertex; two such claws sharing a vertex can both
    toggle there, so the blocked count is minimised by a maximum matching of
    the leafless claws along shared vertices.
    """
    if isinstance(g, ClawedBuild):
        g = g.graph
    units = _units(g)
    toggles: dict[str, str] = {}
    leafless = []
    for c, u in units.items():
        e = _leaf_edge(g, u)
        if e is None:
            leafless.append(c)
        else:
            toggles[c] = e
    h = nx.Graph()
    h.add_nodes_from(leafless)
    for v in g.vertices:
        if g.degree(v) != 2:
            continue
        a, b = g.neighbors(v)
        if a in leafless and b in leafless:
            h.add_edge(a, b, via=v)
    pairs = nx.max_weight_matching(h, maxcardinality=True)
    for a, b in sorted((tuple(sort_labels(p)) for p in pairs), key=lambda p: label_key(p[0])):
        v = h.edges[a, b]["via"]
        toggles[a] = g.edge_label(a, v)
        toggles[b] = g.edge_label(b, v)
    for c in leafless:
        toggles.setdefault(c, units[c].edges[0])
    return toggles


def best_site_count(g: Graph | ClawedBuild) -> int:
    if isinstance(g, ClawedBuild):
        g = g.graph
    return attaching_site_analysis(g, optimal_toggles(g)).n_sites


def random_toggles(g: Graph, rng: random.Random) -> dict[str, str]:
    return {c: rng.choice(u.edges) for c, u in _units(g).items()}


@dataclass
class RandomComparison:
    best: int
    samples: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s <= self.best for s in self.samples)

    def to_json(self) -> dict:
        return {"best": self.best, "max_random": max(self.samples, default=None), "trials": len(self.samples), "ok": self.ok}


def compare_random(build: ClawedBuild, trials: int = 50, seed: int = 0) -> RandomComparison:
    """Site count of :func:`maximize_sites` against random toggle choices."""
    g = build.graph
    rng = random.Random(seed)
    best = attaching_site_analysis(g, maximize_sites(build).toggles).n_sites
    return RandomComparison(best, [attaching_site_analysis(g, random_toggles(g, rng)).n_sites for _ in range(trials)])


def shared_toggles(g: Graph, pairs: Mapping[str, str] = (), free_default: bool = True) -> dict[str, str]:
    """Toggles where each (a, b) in ``pairs`` toggles at their shared vertex, leaf claws use a leaf edge."""
    units = _units(g)
    toggles: dict[str, str] = {}
    for a, b in dict(pairs).items():
        common = set(g.neighbors(a)) & set(g.neighbors(b))
        if not common:
            raise MatchingError(f"claws {a!r} and {b!r} share no vertex")
        v = min(common, key=label_key)
        toggles[a], toggles[b] = g.edge_label(a, v), g.edge_label(b, v)
    for c, u in units.items():
        if c in toggles:
            continue
        e = _leaf_edge(g, u)
        if e is None and not free_default:
            raise MatchingError(f"claw {c!r} has no leaf and no partner")
        toggles[c] = e if e is not None else u.edges[0]
    return toggles


# ---------------------------------------------------------------------------
# replaying a build script


@dataclass
class ToggleAssignment:
    toggles: dict[str, str]
    pairs: list[tuple[str, str]]
    sites: int
    T: int
    L: int

    def to_json(self) -> dict:
        return {
            "toggles": dict(sorted(self.toggles.items(), key=lambda kv: label_key(kv[0]))),
            "pairs": [list(p) for p in self.pairs],
            "sites": self.sites,
            "T": self.T,
            "L": self.L,
        }


def _shared(g: Graph, a: str, b: str) -> str | None:
    common = [v for v in g.neighbors(a) if v in set(g.neighbors(b)) and g.degree(v) == 2]
    return min(common, key=label_key) if common else None


def _augmenting_path(g: Graph, start: str, chosen: list[str], partner: dict[str, str]) -> list[str]:
    """Claws c0, d0, c1, d1, ... to pair as (c_i, d_i); empty when none exists."""
    seen = {start}

    def walk(c):
        for d in sorted(chosen, key=label_key):
            if d in seen or not _shared(g, c, d):
                continue
            seen.add(d)
            if d not in partner:
                return [c, d]
            e = partner[d]
            if e in seen:
                continue
            seen.add(e)
            rest = walk(e)
            if rest:
                return [c, d] + rest
        return []

    return walk(start)


def maximize_sites(build: ClawedBuild) -> ToggleAssignment:
    """Replay the construction, toggling leaf edges and pairing chosen claws.

    Every claw starts on its leaf edge.  At each step the two claws that lose
    a leaf become chosen; each one adjacent to an unpaired chosen claw is
    paired with it at their shared vertex.  Claws adjacent to only one
    earlier chosen claw go first, ties broken by label.  When every adjacent
    chosen claw is already paired, existing pairs are shifted along an
    alternating path if that frees a partner.
    """
    g = build.graph
    units = _units(g)
    toggles = {c: _leaf_edge(g, u) for c, u in units.items()}
    partner: dict[str, str] = {}
    chosen: list[str] = []
    for step in build.history:
        before = set(chosen)
        now = [c for c in step.chosen if c not in before]
        chosen += now

        def prio(c):
            return (sum(1 for d in before if _shared(g, c, d)), label_key(c))

        for c in sorted(now, key=prio):
            if c in partner:
                continue
            path = _augmenting_path(g, c, chosen, partner)
            for a, b in zip(path[::2], path[1::2]):
                v = _shared(g, a, b)
                partner[a], partner[b] = b, a
                toggles[a], toggles[b] = g.edge_label(a, v), g.edge_label(b, v)
    for c, u in units.items():
        if toggles[c] is None:
            toggles[c] = u.edges[0]
    pairs = sorted({tuple(sort_labels((a, b))) for a, b in partner.items()}, key=lambda p: label_key(p[0]))
    n = attaching_site_analysis(g, toggles).n_sites
    return ToggleAssignment(toggles, pairs, n, len(units), len(g.leaves()))


# ---------------------------------------------------------------------------
# classification from a matching, and the leaf-attachment check


@dataclass
class SiteClassification:
    site: dict[str, bool]
    T: int
    L: int
    candidates_formula: int

    @property
    def sites(self) -> list[str]:
        return [v for v, ok in self.site.items() if ok]

    def to_json(self) -> dict:
        return {"sites": self.sites, "n_sites": len(self.sites), "T": self.T, "L": self.L, "candidates": self.candidates_formula}


def classify_sites(g: Graph, m) -> SiteClassification:
    """A degree-2 vertex is a site iff some critical cell of ``m`` holds both its edges."""
    if not m.complete:
        raise MatchingError("site classification needs a complete claw-induced matching")
    crit = [set(c) for c in m.critical()]
    site = {}
    for v in g.vertices:
        if g.degree(v) != 2:
            continue
        e1, e2 = g.incident_labels(v)
        site[v] = any(e1 in c and e2 in c for c in crit)
    T = len(_units(g))
    L = len(g.leaves())
    return SiteClassification(site, T, L, (3 * T - L) // 2)


@dataclass
class LeafCheck:
    vertex: str
    site: bool
    profile: dict
    ok: bool


def leaf_dichotomy(g: Graph, classification: SiteClassification, budget: int | None = None) -> list[LeafCheck]:
    """Attach a leaf at each degree-2 vertex: sites keep the homology, other vertices make it vanish."""
    from .complexes import matching_complex
    from .graphs import attach_leaf
    from .homology import betti

    base = betti(matching_complex(g, 2, budget), budget=budget)
    out = []
    for v, is_site in classification.site.items():
        p = betti(matching_complex(attach_leaf(g, v), 2, budget), budget=budget)
        ok = (p == base) if is_site else p.is_zero
        out.append(LeafCheck(v, is_site, p.to_json(), ok))
    return out
