"""The Matching Tree Algorithm on independence complexes.

Every node is a set Sigma(A, B) of independent sets containing A and avoiding
B.  Rule 1 (free vertex) ends a branch with an empty leaf, rule 2 (pivot)
forces the pivot's only remaining neighbour into A, and rule 3 (tentative
pivot) branches.  A node with A and B covering the vertex set is a leaf
holding the single set A, which is a critical cell.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .complexes import independence_complex
from .errors import GraphError, MatchingError
from .graphs import Graph, label_key, sort_labels
from .morse import FacePoset, MorseMatching, MorseVector, morse_vector, verify_acyclic

KINDS = ("root", "free-leaf", "pivot-child", "tentative-left", "tentative-right", "terminal")


@dataclass
class SigmaNode:
    A: frozenset
    B: frozenset
    kind: str
    rule: int | None = None  # rule applied at this node: 1, 2, 3, or None for leaves
    vertex: str | None = None  # free vertex, pivot, or tentative pivot
    match: str | None = None  # matching vertex for rule 2
    children: list["SigmaNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def empty(self) -> bool:
        return self.kind == "free-leaf"

    def to_json(self) -> dict:
        d = {"A": sort_labels(self.A), "B": sort_labels(self.B), "kind": self.kind}
        if self.rule is not None:
            d["rule"] = self.rule
            d["vertex"] = self.vertex
        if self.match is not None:
            d["match"] = self.match
        if self.children:
            d["children"] = [c.to_json() for c in self.children]
        return d


@dataclass
class PivotPolicy:
    """Choices left open by the algorithm.

    ``free(g, cands, ctx)`` and ``pivot(g, cands, ctx)`` pick among rule-1
    vertices and rule-2 (pivot, matching vertex) pairs; ``tentative(g, rest,
    ctx)`` picks the rule-3 vertex.  ``ctx`` carries the last tentative pivot
    on the path from the root and the remaining-degree map.
    """

    name: str
    free: Callable
    pivot: Callable
    tentative: Callable


def _min_free(g, cands, ctx):
    return min(cands, key=label_key)


def _min_pivot(g, cands, ctx):
    return min(cands, key=lambda p: label_key(p[0]))


def _min_degree(g, rest, ctx):
    deg = ctx["degree"]
    return min(rest, key=lambda v: (deg[v], label_key(v)))


def default_policy() -> PivotPolicy:
    return PivotPolicy("min-label", _min_free, _min_pivot, _min_degree)


_IDX = re.compile(r"^([a-z]+)(\d+)$")


def _split(label: str) -> tuple[str, int] | None:
    mt = _IDX.match(label)
    return (mt.group(1), int(mt.group(2))) if mt else None


def wheel_policy(n: int) -> PivotPolicy:
    """Pivot rules for the line graph of the wheel W_n.

    Tentative pivots are the spokes l0, l1, ... in order and then c0.  Among
    pivot candidates the one closest clockwise after the most recent
    tentative pivot is used, so each branch walks its cycle path in steps of
    three starting next to that pivot.
    """
    if n < 4:
        raise GraphError("wheel policy needs n >= 4")
    m = n - 1

    def pivot(g, cands, ctx):
        j = ctx["last_index"]

        def key(p):
            s = _split(p[0])
            if s is None or s[0] != "c":
                return (1, 0, label_key(p[0]))
            return (0, (s[1] - j) % m, label_key(p[0]))

        return min(cands, key=key)

    def tentative(g, rest, ctx):
        spokes = sorted((v for v in rest if (_split(v) or ("", 0))[0] == "l"), key=label_key)
        if spokes:
            return spokes[0]
        rims = sorted((v for v in rest if (_split(v) or ("", 0))[0] == "c"), key=label_key)
        if rims:
            return rims[0]
        return _min_degree(g, rest, ctx)

    return PivotPolicy(f"wheel:{n}", _min_free, pivot, tentative)


def policy_by_name(name: str, g: Graph | None = None) -> PivotPolicy:
    if name in ("min-label", "default"):
        return default_policy()
    if name.startswith("wheel"):
        parts = name.split(":")
        if len(parts) == 2:
            return wheel_policy(int(parts[1]))
        raise GraphError("wheel policy needs the wheel size, e.g. 'wheel:6'")
    raise GraphError(f"unknown policy {name!r}")


@dataclass
class MatchingTree:
    graph: Graph
    policy: str
    root: SigmaNode

    def nodes(self) -> Iterable[SigmaNode]:
        stack = [self.root]
        while stack:
            nd = stack.pop()
            yield nd
            stack.extend(reversed(nd.children))

    def leaves(self) -> list[SigmaNode]:
        return [nd for nd in self.nodes() if nd.is_leaf]

    def critical_cells(self) -> list[tuple[str, ...]]:
        """A-sets of non-empty leaves, in tree order."""
        out = []
        for nd in self.leaves():
            if nd.kind == "terminal":
                out.append(tuple(sort_labels(nd.A)))
        return out

    def critical_sizes(self) -> list[int]:
        return sorted(len(c) for c in self.critical_cells())

    def count_by_size(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.critical_cells():
            out[len(c)] = out.get(len(c), 0) + 1
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        return {"policy": self.policy, "root": self.root.to_json(), "critical": [list(c) for c in self.critical_cells()]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def matching(self, poset: FacePoset | None = None) -> MorseMatching:
        """The explicit face pairing encoded by the tree on Ind(graph)."""
        g = self.graph
        if poset is None:
            poset = FacePoset(independence_complex(g))
        pairs = []
        for nd in self.nodes():
            if nd.rule not in (1, 2):
                continue
            v = nd.vertex
            for I in _independent_sets(g, nd.A, nd.B):
                if v in I:
                    continue
                if nd.rule == 2 and nd.match in I:
                    continue
                pairs.append((I, I | {v}))
        m = MorseMatching.from_pairs(poset, pairs)
        m.certificate = verify_acyclic(m)
        return m


def _independent_sets(g: Graph, A: frozenset, B: frozenset) -> list[frozenset]:
    """All members of Sigma(A, B)."""
    rest = [v for v in g.vertices if v not in A and v not in B]
    out = []

    def rec(i, cur, banned):
        if i == len(rest):
            out.append(frozenset(cur))
            return
        v = rest[i]
        rec(i + 1, cur, banned)
        if v not in banned:
            cur.append(v)
            rec(i + 1, cur, banned | set(g.neighbors(v)))
            cur.pop()

    banned = set()
    for a in A:
        banned |= set(g.neighbors(a))
    rec(0, list(A), banned)
    return out


def run_mta(g: Graph, policy: PivotPolicy | None = None) -> MatchingTree:
    policy = policy or default_policy()
    V = frozenset(g.vertices)
    nbr = {v: frozenset(g.neighbors(v)) for v in g.vertices}

    def expand(node: SigmaNode, last: str | None):
        used = node.A | node.B
        if used == V:
            node.kind = "terminal"
            return
        rest = sorted(V - used, key=label_key)
        rem = {v: nbr[v] - used for v in rest}
        ctx = {"last": last, "last_index": (_split(last)[1] if last and _split(last) else 0), "degree": {v: len(rem[v]) for v in rest}}
        free = [v for v in rest if not rem[v]]
        if free:
            v = policy.free(g, free, ctx)
            node.rule, node.vertex = 1, v
            node.children = [SigmaNode(node.A, node.B, "free-leaf")]
            return
        cands = [(v, next(iter(rem[v]))) for v in rest if len(rem[v]) == 1]
        if cands:
            v, w = policy.pivot(g, cands, ctx)
            node.rule, node.vertex, node.match = 2, v, w
            child = SigmaNode(node.A | {w}, node.B | nbr[w], "pivot-child")
            node.children = [child]
            expand(child, last)
            return
        v = policy.tentative(g, rest, ctx)
        if v not in rem:
            raise MatchingError(f"policy chose {v!r}, which is not available")
        node.rule, node.vertex = 3, v
        right = SigmaNode(node.A | {v}, node.B | nbr[v], "tentative-right")
        left = SigmaNode(node.A, node.B | {v}, "tentative-left")
        node.children = [right, left]
        expand(right, v)
        expand(left, v)

    root = SigmaNode(frozenset(), frozenset(), "root")
    expand(root, None)
    return MatchingTree(g, policy.name, root)


def check_node_invariants(tree: MatchingTree) -> list[str]:
    """Violations of A∩B = ∅, N(A) ⊆ B, A independent, and leaf sizes in {0, 1}."""
    g = tree.graph
    bad = []
    for nd in tree.nodes():
        if nd.kind == "free-leaf":
            continue
        if nd.A & nd.B:
            bad.append(f"A and B meet at {sorted(nd.A & nd.B)}")
        for a in nd.A:
            if not set(g.neighbors(a)) <= nd.B:
                bad.append(f"neighbours of {a} not all in B")
            if set(g.neighbors(a)) & nd.A:
                bad.append(f"A not independent at {a}")
        if nd.is_leaf:
            size = len(_independent_sets(g, nd.A, nd.B))
            if size != 1:
                bad.append(f"terminal leaf with {size} sets")
    return bad


def post_cancel(tree: MatchingTree, pairs: Sequence[tuple[Iterable[str], Iterable[str]]], matching: MorseMatching | None = None) -> MorseVector:
    """Pair further critical cells of the tree's matching; the result must stay acyclic."""
    base = matching or tree.matching()
    crit = {frozenset(c) for c in base.critical()}
    for a, b in pairs:
        a, b = frozenset(a), frozenset(b)
        if a not in crit or b not in crit:
            raise MatchingError("post-cancellation pairs must both be critical cells")
        if not (a < b and len(b) == len(a) + 1):
            raise MatchingError(f"{sorted(a)} and {sorted(b)} are not a cover relation")
    extended = base.with_pairs([(tuple(a), tuple(b)) for a, b in pairs])
    extended.certificate = verify_acyclic(extended)
    if not extended.certificate.acyclic:
        raise MatchingError("cancellation creates an alternating cycle")
    return morse_vector(extended)
