"""Discrete Morse matchings on face posets of simplicial complexes.

A matching is stored as a partner array parallel to the complex's sorted face
masks (``-1`` for critical faces).  Toggling is vectorized over the whole
array; acyclicity is decided by a topological sort of the alternating
digraph and certified by a linear extension in which matched faces are
adjacent.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .complexes import SimplicialComplex, matching_complex
from .errors import AcyclicityError, MatchingError, StrataError
from .graphs import Graph, find_claw_units

Restriction = "np.ndarray | Callable[[tuple[str, ...]], bool] | None"


class FacePoset:
    """Faces of a complex ordered by inclusion; covers differ by one vertex.

    With ``include_empty=False`` the empty face is left out of every matching.
    """

    def __init__(self, cx: SimplicialComplex, include_empty: bool = True):
        self.complex = cx
        self.masks = cx.masks
        self.sizes = cx.sizes
        self.include_empty = include_empty
        self.active = np.ones(self.masks.size, bool)
        if not include_empty:
            self.active[0] = False

    def __len__(self) -> int:
        return int(self.masks.size)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.complex.vertices

    def bit(self, v: str) -> int:
        try:
            return 1 << self.complex.vertices.index(v)
        except ValueError:
            raise MatchingError(f"{v!r} is not a vertex of the complex") from None

    def lookup(self, masks: np.ndarray) -> np.ndarray:
        """Indices of the given masks, -1 where absent."""
        masks = np.asarray(masks, np.int64)
        j = np.searchsorted(self.masks, masks)
        j = np.minimum(j, self.masks.size - 1)
        return np.where(self.masks[j] == masks, j, -1)

    def index(self, face: Iterable[str] | int) -> int:
        m = face if isinstance(face, (int, np.integer)) else self.complex.mask_of(face)
        i = int(self.lookup(np.array([m]))[0])
        if i < 0:
            raise MatchingError(f"{self.labels(int(m))} is not a face")
        return i

    def labels(self, mask: int) -> tuple[str, ...]:
        return self.complex.labels_of(int(mask))

    def restriction(self, spec) -> np.ndarray:
        """Normalize a restriction (bool array, predicate on label tuples, or None)."""
        if spec is None:
            return self.active.copy()
        if callable(spec):
            arr = np.fromiter((bool(spec(self.labels(int(m)))) for m in self.masks), bool, self.masks.size)
        else:
            arr = np.asarray(spec, bool)
            if arr.shape != self.masks.shape:
                raise MatchingError("restriction array has the wrong length")
        return arr & self.active

    def containing(self, labels: Iterable[str]) -> np.ndarray:
        m = self.complex.mask_of(labels)
        return (self.masks & m) == m


@dataclass
class Certificate:
    acyclic: bool
    extension: np.ndarray | None = None  # face indices, matched pairs adjacent
    cycle: list[int] | None = None  # alternating masks a1, u(a1), a2, ..., a1


@dataclass(eq=False)
class MorseMatching:
    poset: FacePoset
    partner: np.ndarray
    certificate: Certificate | None = None
    complete: bool | None = None
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        p = np.asarray(self.partner, np.int64)
        if p.shape != self.poset.masks.shape:
            raise MatchingError("partner array has the wrong length")
        self.partner = p
        _validate(self.poset, p)

    # -- views -----------------------------------------------------------

    @property
    def acyclic(self) -> bool | None:
        return None if self.certificate is None else self.certificate.acyclic

    def critical_mask(self) -> np.ndarray:
        return (self.partner < 0) & self.poset.active

    def critical_masks(self) -> np.ndarray:
        return self.poset.masks[self.critical_mask()]

    def critical(self) -> list[tuple[str, ...]]:
        return [self.poset.labels(int(m)) for m in self.critical_masks()]

    def pair_indices(self) -> tuple[np.ndarray, np.ndarray]:
        """(lower, upper) index arrays, one entry per pair."""
        lo = np.nonzero((self.partner >= 0) & (self.partner > np.arange(self.partner.size)))[0]
        hi = self.partner[lo]
        # masks sort increasing and the upper face strictly contains the lower one
        return lo, hi

    def pairs(self) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
        lo, hi = self.pair_indices()
        m = self.poset.masks
        return [(self.poset.labels(int(m[a])), self.poset.labels(int(m[b]))) for a, b in zip(lo, hi)]

    @property
    def n_pairs(self) -> int:
        return int(np.count_nonzero(self.partner >= 0) // 2)

    def up(self, face) -> tuple[str, ...] | None:
        i = self.poset.index(face)
        j = int(self.partner[i])
        if j < 0 or self.poset.sizes[j] < self.poset.sizes[i]:
            return None
        return self.poset.labels(int(self.poset.masks[j]))

    def with_pairs(self, extra: Iterable[tuple[Iterable[str], Iterable[str]]]) -> "MorseMatching":
        p = self.partner.copy()
        for a, b in extra:
            i, j = self.poset.index(a), self.poset.index(b)
            if p[i] >= 0 or p[j] >= 0:
                raise MatchingError(f"{self.poset.labels(int(self.poset.masks[i]))} or its partner is already matched")
            p[i], p[j] = j, i
        return MorseMatching(self.poset, p)

    def to_json(self) -> dict:
        return {
            "pairs": [[list(a), list(b)] for a, b in self.pairs()],
            "critical": [list(c) for c in self.critical()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_pairs(cls, poset: FacePoset, pairs: Iterable[tuple[Iterable[str], Iterable[str]]]) -> "MorseMatching":
        p = np.full(len(poset), -1, np.int64)
        for a, b in pairs:
            i, j = poset.index(a), poset.index(b)
            if p[i] >= 0 or p[j] >= 0:
                raise MatchingError(f"face matched twice: {poset.labels(int(poset.masks[i if p[i] >= 0 else j]))}")
            p[i], p[j] = j, i
        return cls(poset, p)

    @classmethod
    def empty(cls, poset: FacePoset) -> "MorseMatching":
        return cls(poset, np.full(len(poset), -1, np.int64))


def _validate(poset: FacePoset, p: np.ndarray) -> None:
    idx = np.nonzero(p >= 0)[0]
    if idx.size == 0:
        return
    q = p[idx]
    if np.any(q >= p.size) or np.any(p[q] != idx):
        raise MatchingError("partner relation is not symmetric")
    if np.any(~poset.active[idx]):
        raise MatchingError("matching uses a face excluded from the poset")
    diff = poset.masks[idx] ^ poset.masks[q]
    sub = (poset.masks[idx] & poset.masks[q]) == np.minimum(poset.masks[idx], poset.masks[q])
    one_bit = (diff != 0) & ((diff & (diff - 1)) == 0)
    if not np.all(one_bit & sub):
        bad = int(idx[~(one_bit & sub)][0])
        raise MatchingError(f"pair at {poset.labels(int(poset.masks[bad]))} is not a cover relation")


# ---------------------------------------------------------------------------
# toggling


def _toggle_into(poset: FacePoset, partner: np.ndarray, bit: int, allowed: np.ndarray) -> int:
    """Pair a <-> a + bit for unmatched allowed faces; mutates ``partner``."""
    m = poset.masks
    free = allowed & (partner < 0)
    lo = np.nonzero(free & ((m & bit) == 0))[0]
    if lo.size == 0:
        return 0
    hi = poset.lookup(m[lo] | bit)
    ok = hi >= 0
    lo, hi = lo[ok], hi[ok]
    ok = free[hi]
    lo, hi = lo[ok], hi[ok]
    partner[lo] = hi
    partner[hi] = lo
    return int(lo.size)


def toggle(poset: FacePoset, v: str, restricted_to=None, verify: bool = True) -> MorseMatching:
    """Pair every face ``a`` without ``v`` with ``a + v`` when both lie in the restriction."""
    partner = np.full(len(poset), -1, np.int64)
    _toggle_into(poset, partner, poset.bit(v), poset.restriction(restricted_to))
    m = MorseMatching(poset, partner)
    if verify:
        m.certificate = verify_acyclic(m)
    return m


def toggle_sequence(poset: FacePoset, vs: Sequence[str], restricted_to=None, verify: bool = True) -> MorseMatching:
    """Toggle on each vertex in turn, each time among the faces still unmatched."""
    partner = np.full(len(poset), -1, np.int64)
    allowed = poset.restriction(restricted_to)
    for v in vs:
        _toggle_into(poset, partner, poset.bit(v), allowed)
    m = MorseMatching(poset, partner)
    if verify:
        m.certificate = verify_acyclic(m)
    return m


def is_complete(m: MorseMatching) -> bool:
    """No two critical faces form a cover relation."""
    crit = np.sort(m.critical_masks())
    if crit.size < 2:
        return True
    for b in range(len(m.poset.vertices)):
        bit = np.int64(1) << b
        lo = crit[(crit & bit) == 0] | bit
        if lo.size == 0:
            continue
        j = np.minimum(np.searchsorted(crit, lo), crit.size - 1)
        if np.any(crit[j] == lo):
            return False
    return True


def claw_induced_matching(
    g: Graph,
    toggle_choice: Mapping[str, str],
    poset: FacePoset | None = None,
    order: Sequence[str] | None = None,
    verify: bool = True,
) -> MorseMatching:
    """Toggle, claw by claw, on one chosen edge of each selected claw unit of ``g``.

    ``toggle_choice`` maps a claw center to one of its three edge labels;
    ``order`` lists centers in toggling order (default: by center label).
    The poset defaults to that of the 2-matching complex of ``g``.
    """
    units = {u.center: u for u in find_claw_units(g)}
    for c, e in toggle_choice.items():
        if c not in units:
            raise MatchingError(f"{c!r} is not the center of an induced claw unit")
        if e not in units[c].edges:
            raise MatchingError(f"edge {e!r} does not belong to the claw unit at {c!r}")
    if order is None:
        order = [c for c in units if c in toggle_choice]
    if sorted(order) != sorted(toggle_choice):
        raise MatchingError("order must list exactly the chosen claw centers")
    if poset is None:
        poset = FacePoset(matching_complex(g, 2))
    m = toggle_sequence(poset, [toggle_choice[c] for c in order], verify=verify)
    m.complete = is_complete(m)
    m.notes["toggles"] = {c: toggle_choice[c] for c in order}
    return m


# ---------------------------------------------------------------------------
# acyclicity


def verify_acyclic(m: MorseMatching) -> Certificate:
    """Linear extension with matched pairs adjacent, or an alternating cycle."""
    poset = m.poset
    masks = poset.masks
    nbits = len(poset.vertices)
    order, n_sorted, nup = _kernels.level_graph_topo(masks, m.partner, nbits)
    if n_sorted < nup:
        return Certificate(False, None, _find_cycle(m, set(order.tolist())))
    sizes = poset.sizes
    crit = m.critical_mask()
    rev = order[::-1]
    rev_sizes = sizes[rev]
    inactive = np.nonzero(~poset.active)[0]
    pieces = [inactive]
    for s in range(int(sizes.max()) + 1):
        pieces.append(np.nonzero(crit & (sizes == s))[0])
        lo = rev[rev_sizes == s]
        if lo.size:
            inter = np.empty(2 * lo.size, np.int64)
            inter[0::2] = lo
            inter[1::2] = m.partner[lo]
            pieces.append(inter)
    ext = np.concatenate(pieces) if pieces else np.empty(0, np.int64)
    return Certificate(True, ext, None)


def _find_cycle(m: MorseMatching, sorted_nodes: set[int]) -> list[int]:
    """Shortest alternating cycle among faces left over by the topological sort."""
    poset = m.poset
    masks = poset.masks
    partner = m.partner
    up_nodes = [
        int(k) for k in np.nonzero((partner >= 0) & (partner > np.arange(partner.size)))[0] if int(k) not in sorted_nodes
    ]
    nodeset = set(up_nodes)

    def succ(k: int) -> list[int]:
        b = int(masks[partner[k]])
        out = []
        x = b
        while x:
            low = x & -x
            x ^= low
            f = b ^ low
            if f == int(masks[k]):
                continue
            j = int(poset.lookup(np.array([f]))[0])
            if j in nodeset:
                out.append(j)
        return out

    best = None
    for start in up_nodes[:200]:
        prev = {start: None}
        dq = deque([start])
        found = None
        while dq and found is None:
            k = dq.popleft()
            for j in succ(k):
                if j == start:
                    found = k
                    break
                if j not in prev:
                    prev[j] = k
                    dq.append(j)
        if found is None:
            continue
        path = [found]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        path.reverse()
        if best is None or len(path) < len(best):
            best = path
    if best is None:
        return []
    out = []
    for k in best:
        out += [int(masks[k]), int(masks[partner[k]])]
    out.append(int(masks[best[0]]))
    return out


def check_extension(m: MorseMatching, ext: np.ndarray) -> bool:
    """Independent check that ``ext`` is a linear extension with every pair adjacent."""
    poset = m.poset
    if sorted(ext.tolist()) != list(range(len(poset))):
        return False
    pos = np.empty(len(poset), np.int64)
    pos[ext] = np.arange(ext.size)
    masks = poset.masks
    for b in range(len(poset.vertices)):
        bit = np.int64(1) << b
        has = np.nonzero((masks & bit) != 0)[0]
        lower = poset.lookup(masks[has] ^ bit)
        if np.any(pos[lower] >= pos[has]):
            return False
    lo, hi = m.pair_indices()
    return bool(np.all(pos[hi] == pos[lo] + 1))


# ---------------------------------------------------------------------------
# patchwork


def _stratum_index(poset: FacePoset, strata) -> np.ndarray:
    if callable(strata):
        return np.fromiter((int(strata(poset.labels(int(m)))) for m in poset.masks), np.int64, len(poset))
    if isinstance(strata, np.ndarray) and strata.ndim == 1 and strata.dtype != bool:
        return strata.astype(np.int64)
    out = np.full(len(poset), -1, np.int64)
    for s, part in enumerate(strata):
        part = np.asarray(part, bool)
        if np.any(out[part] >= 0):
            raise StrataError("strata overlap")
        out[part] = s
    if np.any(out < 0):
        raise StrataError("strata do not cover every face")
    return out


def order_violations(poset: FacePoset, label: np.ndarray, limit: int = 5) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """Covers a < b with stratum(a) > stratum(b)."""
    masks = poset.masks
    bad = []
    for b in range(len(poset.vertices)):
        bit = np.int64(1) << b
        has = np.nonzero((masks & bit) != 0)[0]
        lower = poset.lookup(masks[has] ^ bit)
        viol = label[lower] > label[has]
        for lo, hi in zip(lower[viol][:limit], has[viol][:limit]):
            bad.append((poset.labels(int(masks[lo])), poset.labels(int(masks[hi]))))
        if len(bad) >= limit:
            break
    return bad[:limit]


def patchwork(
    poset: FacePoset,
    strata,
    per_stratum: Callable[[FacePoset, np.ndarray, int], MorseMatching | np.ndarray],
    strict: bool = True,
) -> MorseMatching:
    """Union of matchings built separately on each stratum.

    ``strata`` is an ordered list of boolean face masks, an integer label per
    face, or a function from a face to its stratum index.  The stratum map
    must be order preserving for the union to be acyclic; with ``strict`` a
    violation raises, otherwise it is recorded in ``notes`` and the result is
    still certified by :func:`verify_acyclic`.
    """
    label = _stratum_index(poset, strata)
    viol = order_violations(poset, label)
    notes = {}
    if viol:
        if strict:
            raise StrataError(f"strata are not order preserving, e.g. {viol[0][0]} < {viol[0][1]}")
        notes["order_violations"] = [[list(a), list(b)] for a, b in viol]
    partner = np.full(len(poset), -1, np.int64)
    for s in range(int(label.max()) + 1):
        sel = (label == s) & poset.active
        part = per_stratum(poset, sel, s)
        p = part.partner if isinstance(part, MorseMatching) else np.asarray(part, np.int64)
        used = np.nonzero(p >= 0)[0]
        if np.any(~sel[used]) or np.any(~sel[p[used]]):
            raise StrataError(f"matching for stratum {s} leaves the stratum")
        partner[used] = p[used]
    out = MorseMatching(poset, partner, notes=notes)
    out.certificate = verify_acyclic(out)
    return out


# ---------------------------------------------------------------------------
# Morse vectors


@dataclass(frozen=True)
class MorseVector:
    """Critical face counts by dimension (the empty face counts in dimension -1)."""

    counts: Mapping[int, int]
    empty_paired: bool
    n_pairs: int
    n_faces: int

    def __post_init__(self):
        object.__setattr__(self, "counts", {int(k): int(v) for k, v in sorted(self.counts.items()) if v})

    def get(self, d: int) -> int:
        return self.counts.get(d, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def euler(self) -> int:
        return sum((-1) ** (d % 2) * c for d, c in self.counts.items())

    def dominates(self, betti: Mapping[int, int]) -> bool:
        return all(self.get(d) >= b for d, b in betti.items())

    def to_json(self) -> dict:
        return {
            "critical": {str(k): v for k, v in self.counts.items()},
            "empty_face_paired": self.empty_paired,
            "pairs": self.n_pairs,
        }


def morse_vector(m: MorseMatching) -> MorseVector:
    if m.certificate is None:
        m.certificate = verify_acyclic(m)
    if not m.certificate.acyclic:
        raise AcyclicityError("morse vector requested for a cyclic matching")
    crit = m.critical_mask()
    sizes = m.poset.sizes[crit]
    dims, counts = np.unique(sizes - 1, return_counts=True)
    return MorseVector(
        {int(d): int(c) for d, c in zip(dims, counts)},
        bool(m.partner[0] >= 0),
        m.n_pairs,
        len(m.poset),
    )
