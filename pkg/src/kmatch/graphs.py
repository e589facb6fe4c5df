"""Finite simple labeled graphs and the constructions applied to them.

Vertices are strings.  Every edge carries a string label; the matching
complexes built later use edge labels as their vertex set, so surgeries that
keep an edge also keep its label.  Generated vertices get structured names
(``sub:u:v`` for subdivision vertices, ``leaf:v:k`` for attached leaves).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import GraphError, ScriptError

_DIGITS = re.compile(r"(\d+)")


def label_key(label: str) -> tuple:
    """Natural sort key: ``c2`` sorts before ``c10``."""
    parts = _DIGITS.split(label)
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p != "")


def sort_labels(labels: Iterable[str]) -> list[str]:
    return sorted(labels, key=label_key)


def default_edge_label(u: str, v: str) -> str:
    a, b = sort_labels((u, v))
    return f"{a}-{b}"


def _norm_edge(u: str, v: str) -> tuple[str, str]:
    return (u, v) if label_key(u) <= label_key(v) else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph with labeled edges.

    ``edges[i]`` carries label ``labels[i]``; edges are kept sorted by label
    and vertices by name (natural order).
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        verts = [str(v) for v in self.vertices]
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex ids")
        vset = set(verts)
        edges = [tuple(map(str, e)) for e in self.edges]
        labels = list(self.labels) if self.labels else [default_edge_label(*e) for e in edges]
        if len(labels) != len(edges):
            raise GraphError("labels must parallel edges")
        if len(set(labels)) != len(labels):
            raise GraphError("duplicate edge labels")
        seen = set()
        pairs = []
        for (u, v), lab in zip(edges, labels):
            if u == v:
                raise GraphError(f"loop at {u!r}")
            if u not in vset or v not in vset:
                raise GraphError(f"edge {lab!r} has an undeclared endpoint")
            e = _norm_edge(u, v)
            if e in seen:
                raise GraphError(f"parallel edge {e}")
            seen.add(e)
            pairs.append((str(lab), e))
        pairs.sort(key=lambda p: label_key(p[0]))
        object.__setattr__(self, "vertices", tuple(sort_labels(verts)))
        object.__setattr__(self, "edges", tuple(e for _, e in pairs))
        object.__setattr__(self, "labels", tuple(lab for lab, _ in pairs))

    # -- queries ---------------------------------------------------------

    @cached_property
    def _adj(self) -> dict[str, tuple[str, ...]]:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sort_labels(ns)) for v, ns in adj.items()}

    @cached_property
    def _label_of(self) -> dict[tuple[str, str], str]:
        return dict(zip(self.edges, self.labels))

    @cached_property
    def _edge_of(self) -> dict[str, tuple[str, str]]:
        return dict(zip(self.labels, self.edges))

    def neighbors(self, v: str) -> tuple[str, ...]:
        try:
            return self._adj[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def degree(self, v: str) -> int:
        return len(self.neighbors(v))

    @property
    def max_degree(self) -> int:
        return max((len(ns) for ns in self._adj.values()), default=0)

    def has_vertex(self, v: str) -> bool:
        return v in self._adj

    def has_edge(self, u: str, v: str) -> bool:
        return _norm_edge(u, v) in self._label_of

    def edge_label(self, u: str, v: str) -> str:
        try:
            return self._label_of[_norm_edge(u, v)]
        except KeyError:
            raise GraphError(f"no edge {u!r}-{v!r}") from None

    def endpoints(self, label: str) -> tuple[str, str]:
        try:
            return self._edge_of[label]
        except KeyError:
            raise GraphError(f"unknown edge label {label!r}") from None

    def incident_labels(self, v: str) -> tuple[str, ...]:
        return tuple(sort_labels(self.edge_label(v, w) for w in self.neighbors(v)))

    def is_leaf(self, v: str) -> bool:
        return self.degree(v) == 1

    def leaves(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.degree(v) == 1)

    def degree_map(self) -> dict[str, int]:
        return {v: len(ns) for v, ns in self._adj.items()}

    def same_shape(self, other: "Graph") -> bool:
        """Equal vertex and edge sets, ignoring edge labels."""
        return self.vertices == other.vertices and set(self.edges) == set(other.edges)

    def __len__(self) -> int:
        return len(self.vertices)

    # -- relabeling ------------------------------------------------------

    def relabel_edges(self, mapping: Mapping[str, str]) -> "Graph":
        labels = [mapping.get(lab, lab) for lab in self.labels]
        return Graph(self.vertices, self.edges, labels)

    def prefixed(self, prefix: str) -> "Graph":
        """Copy with every vertex id and edge label prefixed."""
        return Graph(
            [prefix + v for v in self.vertices],
            [(prefix + u, prefix + v) for u, v in self.edges],
            [prefix + lab for lab in self.labels],
        )

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        data = {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}
        if any(lab != default_edge_label(*e) for e, lab in zip(self.edges, self.labels)):
            data["labels"] = list(self.labels)
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "Graph":
        try:
            return cls(data["vertices"], [tuple(e) for e in data["edges"]], data.get("labels") or ())
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# named families


def path(n: int) -> Graph:
    """P_n: ``n`` edges on vertices ``0..n``; P_0 is a single vertex."""
    if n < 0:
        raise GraphError("path length must be >= 0")
    vs = [str(i) for i in range(n + 1)]
    return Graph(vs, [(vs[i], vs[i + 1]) for i in range(n)])


def cycle(n: int, names: Sequence[str] | None = None) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    vs = list(names) if names is not None else [str(i) for i in range(n)]
    return Graph(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def star(m: int) -> Graph:
    """St_m = K_{1,m} with center ``c``."""
    if m < 1:
        raise GraphError("star needs m >= 1")
    leaves = [str(i) for i in range(m)]
    return Graph(["c", *leaves], [("c", v) for v in leaves])


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    vs = [str(i) for i in range(n)]
    return Graph(vs, [(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(m: int, n: int) -> Graph:
    if m < 1 or n < 1:
        raise GraphError("complete bipartite graph needs m, n >= 1")
    a = [f"a{i}" for i in range(m)]
    b = [f"b{j}" for j in range(n)]
    return Graph(a + b, [(u, v) for u in a for v in b])


def edgeless(n: int) -> Graph:
    if n < 0:
        raise GraphError("edgeless graph needs n >= 0")
    return Graph([str(i) for i in range(n)], [])


def wheel(n: int) -> Graph:
    """W_n: hub ``h`` joined to the rim cycle ``r0..r{n-2}``.

    Spokes are ``l{i}`` (hub to ``r{i}``); rim edges are ``c{i}`` joining
    ``r{i-1}`` and ``r{i}``, so ``c{i}`` meets ``l{i-1}`` and ``l{i}``.
    """
    if n < 4:
        raise GraphError("wheel needs n >= 4")
    m = n - 1
    rims = [f"r{i}" for i in range(m)]
    edges, labels = [], []
    for i in range(m):
        edges.append(("h", rims[i]))
        labels.append(f"l{i}")
        edges.append((rims[i - 1], rims[i]))
        labels.append(f"c{i}")
    return Graph(["h", *rims], edges, labels)


def caterpillar(n: int, m: int) -> Graph:
    """Perfect m-caterpillar G_n: spine ``x1..xn`` with ``m`` legs at each spine vertex.

    Spine edges are ``e{i}`` (``x{i}``-``x{i+1}``); legs are ``l{i}.{k}``.
    """
    if n < 1 or m < 1:
        raise GraphError("caterpillar needs n >= 1 and m >= 1")
    spine = [f"x{i}" for i in range(1, n + 1)]
    vs = list(spine)
    edges, labels = [], []
    for i in range(1, n):
        edges.append((f"x{i}", f"x{i + 1}"))
        labels.append(f"e{i}")
    for i in range(1, n + 1):
        for k in range(1, m + 1):
            leg = f"x{i}.{k}"
            vs.append(leg)
            edges.append((f"x{i}", leg))
            labels.append(f"l{i}.{k}")
    return Graph(vs, edges, labels)


def _number_claw_edges(g: Graph, centers: Sequence[str]) -> Graph:
    """Relabel a fully partitioned clawed graph's edges ``1, 2, ...`` claw by claw."""
    mapping = {}
    k = 1
    for c in centers:
        for lab in g.incident_labels(c):
            mapping[lab] = str(k)
            k += 1
    return g.relabel_edges(mapping)


def clawed_path(n: int) -> Graph:
    """CP_n with edges numbered ``1..3(n+1)``, three per claw along the path."""
    g = claw(path(n))
    return _number_claw_edges(g, [str(i) for i in range(n + 1)])


def clawed_cycle(n: int) -> Graph:
    """CC_n with edges numbered ``1..3n``, three per claw around the cycle."""
    g = claw(cycle(n))
    return _number_claw_edges(g, [str(i) for i in range(n)])


def whiskered_cycle(n: int) -> Graph:
    """Fully whiskered n-cycle.

    Cycle edges are ``1..n``; cycle vertex ``w{i}`` sits between edges ``i``
    and ``i+1`` and carries the leaf edge ``x{i},{i+1}`` (``x1,{n}`` at ``w{n}``).
    """
    if n < 3:
        raise GraphError("whiskered cycle needs n >= 3")
    ws = [f"w{i}" for i in range(1, n + 1)]
    vs = list(ws)
    edges, labels = [], []
    for i in range(1, n + 1):
        edges.append((ws[i - 2] if i > 1 else ws[-1], ws[i - 1]))
        labels.append(str(i))
    for i in range(1, n + 1):
        leaf = f"leaf:w{i}:0"
        vs.append(leaf)
        edges.append((f"w{i}", leaf))
        labels.append(f"x{i},{i + 1}" if i < n else f"x1,{n}")
    return Graph(vs, edges, labels)


def clawing_example() -> Graph:
    """The 5-vertex graph clawed in the worked clawing example (degrees 3,2,1,1,1)."""
    return Graph(["p", "q", "r", "s", "t"], [("p", "r"), ("q", "r"), ("r", "s"), ("s", "t")])


def two_claw_example() -> Graph:
    """Two degree-3 vertices joined by ``c``, each with two pendant edges."""
    return Graph(
        ["p", "q", "u", "v", "s", "t"],
        [("p", "u"), ("q", "u"), ("u", "v"), ("v", "s"), ("v", "t")],
        ["a", "b", "c", "d", "e"],
    )


def paw() -> Graph:
    """Triangle with a pendant edge; edges ``x`` (pendant), ``y``, ``z`` at the center, ``e`` opposite."""
    return Graph(
        ["0", "1", "2", "3"],
        [("0", "1"), ("1", "2"), ("1", "3"), ("2", "3")],
        ["x", "y", "z", "e"],
    )


# ---------------------------------------------------------------------------
# surgeries


def subdivide(g: Graph, u: str, v: str) -> Graph:
    if not g.has_edge(u, v):
        raise GraphError(f"no edge {u!r}-{v!r} to subdivide")
    a, b = _norm_edge(u, v)
    w = f"sub:{a}:{b}"
    if g.has_vertex(w):
        raise GraphError(f"vertex {w!r} already exists")
    drop = g.edge_label(a, b)
    edges = [e for e in g.edges if e != (a, b)]
    labels = [lab for lab in g.labels if lab != drop]
    edges += [(a, w), (w, b)]
    labels += [default_edge_label(a, w), default_edge_label(w, b)]
    return Graph([*g.vertices, w], edges, labels)


def _fresh_leaf(g: Graph, v: str, taken: set[str]) -> str:
    k = 0
    while f"leaf:{v}:{k}" in taken or g.has_vertex(f"leaf:{v}:{k}"):
        k += 1
    return f"leaf:{v}:{k}"


def attach_leaf(g: Graph, v: str, name: str | None = None) -> Graph:
    if not g.has_vertex(v):
        raise GraphError(f"unknown vertex {v!r}")
    w = name or _fresh_leaf(g, v, set())
    if g.has_vertex(w):
        raise GraphError(f"vertex {w!r} already exists")
    return Graph([*g.vertices, w], [*g.edges, (v, w)], [*g.labels, default_edge_label(v, w)])


def identify_leaves(g: Graph, u: str, v: str, name: str | None = None) -> Graph:
    """G_(u,v): merge two leaves into one vertex; every edge keeps its label."""
    for x in (u, v):
        if not g.has_vertex(x):
            raise GraphError(f"unknown vertex {x!r}")
        if g.degree(x) != 1:
            raise GraphError(f"{x!r} is not a leaf")
    if u == v or g.has_edge(u, v):
        raise GraphError("leaves to identify must be distinct and non-adjacent")
    uv = name or f"{u}&{v}"
    if g.has_vertex(uv):
        raise GraphError(f"vertex {uv!r} already exists")
    edges = [tuple(uv if x in (u, v) else x for x in e) for e in g.edges]
    verts = [x for x in g.vertices if x not in (u, v)] + [uv]
    return Graph(verts, edges, g.labels)


def wedge_at(g: Graph, h: Graph, v1: str, v2: str) -> Graph:
    """Glue ``h`` to ``g`` by identifying ``v2`` in ``h`` with ``v1`` in ``g`` (name kept from ``g``)."""
    if not g.has_vertex(v1) or not h.has_vertex(v2):
        raise GraphError("wedge point missing")
    if set(g.vertices) & set(h.vertices):
        raise GraphError("graphs to wedge must have disjoint vertex sets")
    if set(g.labels) & set(h.labels):
        raise GraphError("graphs to wedge must have disjoint edge labels")
    ren = {v2: v1}
    edges = list(g.edges) + [tuple(ren.get(x, x) for x in e) for e in h.edges]
    verts = list(g.vertices) + [x for x in h.vertices if x != v2]
    return Graph(verts, edges, list(g.labels) + list(h.labels))


def whisker_all(g: Graph) -> Graph:
    verts, edges, labels = list(g.vertices), list(g.edges), list(g.labels)
    taken: set[str] = set()
    for v in g.vertices:
        w = _fresh_leaf(g, v, taken)
        taken.add(w)
        verts.append(w)
        edges.append((v, w))
        labels.append(default_edge_label(v, w))
    return Graph(verts, edges, labels)


def claw(g: Graph) -> Graph:
    """Clawed graph CG: subdivide every edge, then pad every original vertex to degree 3 with leaves."""
    if g.max_degree > 3:
        bad = [v for v in g.vertices if g.degree(v) > 3]
        raise GraphError(f"cannot claw: vertices of degree > 3: {bad}")
    verts = list(g.vertices)
    edges = []
    for u, v in g.edges:
        w = f"sub:{u}:{v}"
        verts.append(w)
        edges += [(u, w), (w, v)]
    for v in g.vertices:
        for k in range(3 - g.degree(v)):
            leaf = f"leaf:{v}:{k}"
            verts.append(leaf)
            edges.append((v, leaf))
    return Graph(verts, edges)


def line_graph(g: Graph) -> Graph:
    """Vertices are edge labels of ``g``; two are adjacent when the edges share an endpoint."""
    edges = set()
    for v in g.vertices:
        inc = g.incident_labels(v)
        for i in range(len(inc)):
            for j in range(i + 1, len(inc)):
                edges.add(_norm_edge(inc[i], inc[j]))
    return Graph(list(g.labels), sorted(edges))


# ---------------------------------------------------------------------------
# claw units


@dataclass(frozen=True)
class ClawUnit:
    """An induced claw unit: a degree-3 center whose three neighbors have degree <= 2."""

    center: str
    edges: tuple[str, str, str]

    def other_end(self, g: Graph, label: str) -> str:
        u, v = g.endpoints(label)
        return v if u == self.center else u


def find_claw_units(g: Graph) -> list[ClawUnit]:
    units = []
    for v in g.vertices:
        if g.degree(v) == 3 and all(g.degree(w) <= 2 for w in g.neighbors(v)):
            units.append(ClawUnit(v, tuple(g.incident_labels(v))))
    return units


def decomposes_into_claw_units(g: Graph) -> bool:
    """True when the claw units partition E(g) and pairwise share at most one vertex."""
    units = find_claw_units(g)
    covered = [lab for u in units for lab in u.edges]
    if len(covered) != len(set(covered)) or set(covered) != set(g.labels):
        return False
    spans = []
    for u in units:
        spans.append({x for lab in u.edges for x in g.endpoints(lab)})
    return all(len(spans[i] & spans[j]) <= 1 for i in range(len(spans)) for j in range(i + 1, len(spans)))


# ---------------------------------------------------------------------------
# clawed non-separable graphs


@dataclass(frozen=True)
class ClawedBuildScript:
    """Start from the clawed ``n``-cycle, then attach clawed paths between leaf pairs.

    Each step is ``(v1, v2, k)``: ``v1`` and ``v2`` are leaves of the graph
    built so far and ``k >= 1`` is the number of claws on the new clawed
    path; its first claw attaches at ``v1``, its last at ``v2``.
    """

    n: int
    steps: tuple[tuple[str, str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple((str(a), str(b), int(k)) for a, b, k in self.steps))

    def to_json(self) -> dict:
        return {"n": self.n, "steps": [list(s) for s in self.steps]}

    @classmethod
    def from_json(cls, data: Mapping) -> "ClawedBuildScript":
        try:
            return cls(int(data["n"]), tuple(tuple(s) for s in data.get("steps", ())))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScriptError(f"malformed script JSON: {exc}") from exc


@dataclass(frozen=True)
class BuildStep:
    chosen: tuple[str, str]  # claw centers owning v1 and v2
    junctions: tuple[str, str]  # v1, v2 (now degree-2 vertices)
    new_claws: tuple[str, ...]


@dataclass(frozen=True)
class ClawedBuild:
    script: ClawedBuildScript
    graph: Graph
    initial_claws: tuple[str, ...]
    history: tuple[BuildStep, ...]

    @property
    def claws(self) -> list[ClawUnit]:
        return find_claw_units(self.graph)

    @property
    def leaf_claws(self) -> tuple[str, ...]:
        """Centers of claw units that still own a leaf."""
        g = self.graph
        return tuple(c.center for c in self.claws if any(g.is_leaf(w) for w in g.neighbors(c.center)))

    @property
    def T(self) -> int:
        return len(self.claws)

    @property
    def L(self) -> int:
        return len(self.graph.leaves())


def build_clawed_nonseparable(script: ClawedBuildScript) -> ClawedBuild:
    if script.n < 3:
        raise ScriptError("the base cycle needs n >= 3")
    centers = [f"c{i}" for i in range(script.n)]
    g = claw(cycle(script.n, centers))
    history = []
    for s, (v1, v2, k) in enumerate(script.steps):
        if k < 1:
            raise ScriptError(f"step {s}: clawed path needs at least one claw")
        for v in (v1, v2):
            if not g.has_vertex(v) or g.degree(v) != 1:
                raise ScriptError(f"step {s}: {v!r} is not a leaf of the current graph")
        if v1 == v2:
            raise ScriptError(f"step {s}: the two leaves must differ")
        owner1, owner2 = g.neighbors(v1)[0], g.neighbors(v2)[0]
        qs = [f"p{s}.{i}" for i in range(k)]
        verts = list(g.vertices) + qs
        edges = list(g.edges) + [(v1, qs[0]), (qs[-1], v2)]
        for a, b in zip(qs, qs[1:]):
            w = f"sub:{a}:{b}"
            verts.append(w)
            edges += [(a, w), (w, b)]
        for q in qs:
            leaf = f"leaf:{q}:0"
            verts.append(leaf)
            edges.append((q, leaf))
        g = Graph(verts, edges)
        history.append(BuildStep((owner1, owner2), (v1, v2), tuple(qs)))
    return ClawedBuild(script, g, tuple(centers), tuple(history))


TRIANGLE_PATH_SCRIPT = ClawedBuildScript(3, (("leaf:c0:0", "leaf:c1:0", 2),))
SQUARE_TWO_PATHS_SCRIPT = ClawedBuildScript(
    4, (("leaf:c1:0", "leaf:c2:0", 2), ("leaf:p0.1:0", "leaf:c3:0", 1))
)
# Three-panel progression: clawed triangle, a two-claw path between the leaves
# of c2 and c0, then a single claw between p0.1's leaf and c1's leaf.
TRIANGLE_TWO_PATHS_SCRIPT = ClawedBuildScript(3, (("leaf:c2:0", "leaf:c0:0", 2), ("leaf:p0.1:0", "leaf:c1:0", 1)))


# ---------------------------------------------------------------------------
# builder strings


def build_named(family: str, *params: int) -> Graph:
    """Build a named family; see :data:`FAMILIES` for names and parameter counts."""
    fam = family.strip().lower()
    if fam not in FAMILIES:
        raise GraphError(f"unknown graph family {family!r}")
    fn, arity = FAMILIES[fam]
    if len(params) != arity:
        raise GraphError(f"{family} takes {arity} integer parameter(s), got {len(params)}")
    try:
        return fn(*params)
    except GraphError:
        raise
    except (TypeError, ValueError) as exc:
        raise GraphError(f"{family}: {exc}") from exc


FAMILIES = {
    "path": (path, 1),
    "cycle": (cycle, 1),
    "star": (star, 1),
    "complete": (complete, 1),
    "bipartite": (complete_bipartite, 2),
    "edgeless": (edgeless, 1),
    "wheel": (wheel, 1),
    "caterpillar": (caterpillar, 2),
    "clawed-path": (clawed_path, 1),
    "clawed-cycle": (clawed_cycle, 1),
    "whiskered-cycle": (whiskered_cycle, 1),
    "clawing-example": (clawing_example, 0),
    "two-claw": (two_claw_example, 0),
    "paw": (paw, 0),
    "triangle-path": (lambda: build_clawed_nonseparable(TRIANGLE_PATH_SCRIPT).graph, 0),
    "square-two-paths": (lambda: build_clawed_nonseparable(SQUARE_TWO_PATHS_SCRIPT).graph, 0),
    "triangle-two-paths": (lambda: build_clawed_nonseparable(TRIANGLE_TWO_PATHS_SCRIPT).graph, 0),
}


def parse_builder(spec: str) -> Graph:
    """Parse ``"wheel:5"``, ``"caterpillar:3:2"`` (n then m), ``":edgeless:3"`` and friends."""
    parts = [p for p in spec.strip().split(":") if p != ""]
    if not parts:
        raise GraphError("empty graph builder string")
    try:
        params = [int(p) for p in parts[1:]]
    except ValueError:
        raise GraphError(f"non-integer parameter in {spec!r}") from None
    return build_named(parts[0], *params)
