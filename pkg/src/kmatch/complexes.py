"""Explicit simplicial complexes built from graphs.

A complex keeps its vertex labels in natural order; bit ``i`` of a face mask
stands for ``vertices[i]``.  The full face family, empty face included, is
stored as a sorted ``int64`` array, which caps complexes at 62 vertices.
"""

from __future__ import annotations

import json
import os
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import BudgetExceeded, ComplexError
from .graphs import Graph, sort_labels

MAX_VERTICES = 62
DEFAULT_BUDGET = 1 << 24


def get_budget(budget: int | None = None) -> int:
    """Explicit budget, else ``KMATCH_BUDGET``, else 2**24 candidates."""
    if budget is not None:
        b = int(budget)
    else:
        env = os.environ.get("KMATCH_BUDGET")
        try:
            b = int(env) if env else DEFAULT_BUDGET
        except ValueError:
            raise ComplexError(f"KMATCH_BUDGET must be an integer, got {env!r}") from None
    if b <= 0:
        raise ComplexError("budget must be positive")
    return b


def popcounts(masks: np.ndarray) -> np.ndarray:
    """Vectorized popcount of an int64 array."""
    x = masks.astype(np.uint64)
    out = np.zeros(x.shape, np.int64)
    while True:
        nz = x != 0
        if not nz.any():
            return out
        out += nz
        x &= x - np.uint64(1)


class SimplicialComplex:
    """Downward-closed face family over labeled vertices.

    Faces are sets of vertex labels; ``faces()`` yields them as sorted tuples.
    Dimension of a face is its size minus one, so the empty face sits in
    dimension -1.
    """

    def __init__(self, vertices: Sequence[str], masks, check: bool = True):
        verts = tuple(vertices)
        if len(verts) > MAX_VERTICES:
            raise ComplexError(f"at most {MAX_VERTICES} vertices supported, got {len(verts)}")
        if len(set(verts)) != len(verts):
            raise ComplexError("duplicate vertex labels")
        if list(verts) != sort_labels(verts):
            order = sort_labels(verts)
            pos = {v: i for i, v in enumerate(order)}
            masks = _remap(np.asarray(masks, np.int64), [pos[v] for v in verts])
            verts = tuple(order)
        arr = np.unique(np.asarray(masks, dtype=np.int64))
        if arr.size == 0 or arr[0] != 0:
            raise ComplexError("the empty face must belong to every complex")
        if arr[-1] >> len(verts):
            raise ComplexError("face mask references an unknown vertex")
        self.vertices = verts
        self.masks = arr
        self.masks.setflags(write=False)
        if check:
            self.check_closed()

    # -- basic queries ---------------------------------------------------

    def __len__(self) -> int:
        return int(self.masks.size)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimplicialComplex)
            and self.vertices == other.vertices
            and np.array_equal(self.masks, other.masks)
        )

    def __hash__(self):
        return hash((self.vertices, self.masks.tobytes()))

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self.vertices)} vertices, {len(self)} faces, dim {self.dim})"

    @cached_property
    def sizes(self) -> np.ndarray:
        return popcounts(self.masks)

    @property
    def dim(self) -> int:
        return int(self.sizes.max()) - 1

    @property
    def is_void(self) -> bool:
        """Only the empty face."""
        return self.masks.size == 1

    def f_vector(self) -> dict[int, int]:
        dims, counts = np.unique(self.sizes - 1, return_counts=True)
        return {int(d): int(c) for d, c in zip(dims, counts)}

    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def mask_of(self, face: Iterable[str]) -> int:
        idx = self.index()
        m = 0
        for v in face:
            try:
                m |= 1 << idx[v]
            except KeyError:
                raise ComplexError(f"unknown vertex {v!r}") from None
        return m

    def labels_of(self, mask: int) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vertices) if mask >> i & 1)

    def contains_mask(self, mask: int) -> bool:
        j = np.searchsorted(self.masks, mask)
        return j < self.masks.size and int(self.masks[j]) == mask

    def __contains__(self, face) -> bool:
        try:
            return self.contains_mask(self.mask_of(face))
        except ComplexError:
            return False

    def faces(self) -> list[tuple[str, ...]]:
        return [self.labels_of(int(m)) for m in self.masks]

    def face_family(self) -> frozenset[frozenset[str]]:
        return frozenset(frozenset(self.labels_of(int(m))) for m in self.masks)

    def same_faces(self, other: "SimplicialComplex") -> bool:
        """Face-for-face equality by labels (vertex lists may differ only in unused labels)."""
        return self.face_family() == other.face_family()

    def facet_masks(self) -> np.ndarray:
        """Faces with no coface, in mask order."""
        n = len(self.vertices)
        m = self.masks
        maximal = np.ones(m.size, bool)
        for b in range(n):
            bit = np.int64(1) << b
            sel = (m & bit) == 0
            up = m[sel] | bit
            j = np.searchsorted(m, up)
            j = np.minimum(j, m.size - 1)
            hit = m[j] == up
            idx = np.nonzero(sel)[0][hit]
            maximal[idx] = False
        return m[maximal]

    def facets(self) -> list[tuple[str, ...]]:
        return sorted((self.labels_of(int(f)) for f in self.facet_masks()), key=lambda f: (len(f), [self.vertices.index(x) for x in f]))

    def check_closed(self) -> None:
        """Raise unless every facet of every face is present."""
        m = self.masks
        for b in range(len(self.vertices)):
            bit = np.int64(1) << b
            sel = m[(m & bit) != 0] ^ bit
            if sel.size == 0:
                continue
            j = np.searchsorted(m, sel)
            j = np.minimum(j, m.size - 1)
            if not np.all(m[j] == sel):
                bad = int(sel[m[j] != sel][0] | bit)
                raise ComplexError(f"not downward closed: face {self.labels_of(bad)} is missing a facet")

    def euler_reduced(self) -> int:
        """Reduced Euler characteristic: sum over faces of (-1)**dim, empty face included."""
        s = self.sizes
        return int(np.sum(np.where((s - 1) % 2 == 0, 1, -1)))

    def relabeled(self, mapping: Mapping[str, str]) -> "SimplicialComplex":
        new = [mapping.get(v, v) for v in self.vertices]
        return SimplicialComplex(new, self.masks)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "facets": [list(f) for f in self.facets()]}

    @classmethod
    def from_facets(cls, vertices: Sequence[str], facets: Iterable[Iterable[str]]) -> "SimplicialComplex":
        verts = sort_labels(vertices)
        idx = {v: i for i, v in enumerate(verts)}
        seen = {0}
        for f in facets:
            try:
                top = 0
                for v in f:
                    top |= 1 << idx[v]
            except KeyError as exc:
                raise ComplexError(f"facet uses unknown vertex {exc.args[0]!r}") from None
            sub = top
            while sub:
                seen.add(sub)
                sub = (sub - 1) & top
        return cls(verts, np.fromiter(seen, dtype=np.int64, count=len(seen)), check=False)

    @classmethod
    def from_json(cls, data: Mapping) -> "SimplicialComplex":
        try:
            return cls.from_facets(data["vertices"], data["facets"])
        except (KeyError, TypeError) as exc:
            raise ComplexError(f"malformed complex JSON: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _remap(masks: np.ndarray, new_pos: Sequence[int]) -> np.ndarray:
    """Move bit i to bit new_pos[i]."""
    out = np.zeros_like(masks)
    for i, j in enumerate(new_pos):
        out |= ((masks >> i) & 1) << j
    return out


# ---------------------------------------------------------------------------
# builders


def _enumerate(n: int, members: Sequence[Sequence[int]], caps: Sequence[int], budget: int | None, what: str) -> np.ndarray:
    if n > MAX_VERTICES:
        raise ComplexError(f"at most {MAX_VERTICES} vertices supported, got {n}")
    limit = get_budget(budget)
    indptr = np.zeros(n + 1, np.int64)
    for i, g in enumerate(members):
        indptr[i + 1] = indptr[i] + len(g)
    groups = np.array([x for g in members for x in g], dtype=np.int64)
    cap = np.array(caps, dtype=np.int64)
    empty = np.empty(0, np.int64)
    count, visited = _kernels.enumerate_capped(n, indptr, groups, cap, limit, empty)
    if count < 0:
        raise BudgetExceeded(what, 2**n, limit, visited)
    out = np.empty(count, np.int64)
    _kernels.enumerate_capped(n, indptr, groups, cap, limit, out)
    out.sort()
    return out


def bounded_degree_complex(g: Graph, bound: Mapping[str, int] | int, budget: int | None = None) -> SimplicialComplex:
    """Edge subsets of ``g`` in which vertex ``x`` has degree at most ``bound[x]``.

    ``bound`` may be a single integer cap for every vertex.
    """
    if isinstance(bound, int):
        caps = {v: bound for v in g.vertices}
    else:
        caps = dict(bound)
        missing = [v for v in g.vertices if v not in caps]
        if missing:
            raise ComplexError(f"degree bound missing for vertices {missing}")
    if any(int(c) < 0 for c in caps.values()):
        raise ComplexError("degree caps must be nonnegative")
    vid = {v: i for i, v in enumerate(g.vertices)}
    members = [(vid[u], vid[v]) for u, v in g.edges]
    cap_list = [int(caps[v]) for v in g.vertices]
    masks = _enumerate(len(g.labels), members, cap_list, budget, "face enumeration")
    return SimplicialComplex(g.labels, masks)


def matching_complex(g: Graph, k: int, budget: int | None = None) -> SimplicialComplex:
    """M_k(g): vertices are edge labels, faces are edge sets with all degrees <= k."""
    if k < 1:
        raise ComplexError("k must be >= 1")
    return bounded_degree_complex(g, k, budget)


def independence_complex(g: Graph, budget: int | None = None) -> SimplicialComplex:
    """Ind(g): vertices are vertex ids, faces are independent sets."""
    vid = {v: i for i, v in enumerate(g.vertices)}
    members: list[list[int]] = [[] for _ in g.vertices]
    for e, (u, v) in enumerate(g.edges):
        members[vid[u]].append(e)
        members[vid[v]].append(e)
    masks = _enumerate(len(g.vertices), members, [1] * len(g.edges), budget, "face enumeration")
    return SimplicialComplex(g.vertices, masks)


def simplex(vertices: Sequence[str]) -> SimplicialComplex:
    n = len(vertices)
    if n > 24:
        raise ComplexError("full simplex too large to store explicitly")
    return SimplicialComplex(vertices, np.arange(1 << n, dtype=np.int64))


def points(labels: Sequence[str]) -> SimplicialComplex:
    """Discrete complex: the given isolated vertices."""
    return SimplicialComplex(labels, np.array([0] + [1 << i for i in range(len(labels))], dtype=np.int64))


def join(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    """Faces are unions of a face of ``a`` and a face of ``b`` (disjoint vertex labels)."""
    clash = set(a.vertices) & set(b.vertices)
    if clash:
        raise ComplexError(f"join needs disjoint vertex labels; shared: {sorted(clash)}")
    verts = sort_labels(a.vertices + b.vertices)
    if len(verts) > MAX_VERTICES:
        raise ComplexError(f"at most {MAX_VERTICES} vertices supported")
    pos = {v: i for i, v in enumerate(verts)}
    am = _remap(a.masks, [pos[v] for v in a.vertices])
    bm = _remap(b.masks, [pos[v] for v in b.vertices])
    masks = (am[:, None] | bm[None, :]).ravel()
    return SimplicialComplex(verts, masks, check=False)


def m_point_suspension(a: SimplicialComplex, m: int, prefix: str = "pt") -> SimplicialComplex:
    """Join with ``m`` isolated points; m = 2 is the ordinary suspension, m = 1 the cone."""
    if m < 1:
        raise ComplexError("m must be >= 1")
    labels = [f"{prefix}{i}" for i in range(m)]
    return join(a, points(labels))


def suspension(a: SimplicialComplex, prefix: str = "pt") -> SimplicialComplex:
    return m_point_suspension(a, 2, prefix)


def cone(a: SimplicialComplex, apex: str = "apex") -> SimplicialComplex:
    return join(a, points([apex]))
