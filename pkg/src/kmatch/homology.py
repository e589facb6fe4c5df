"""Exact reduced integral homology of simplicial complexes.

Faces are oriented by sorted vertex order and the boundary sign of dropping
the vertex at position ``p`` is ``(-1)**p``.  The empty face is the single
cell of dimension -1, so all homology here is reduced.

Large complexes are first shrunk by coreductions and elementary collapses
(``_kernels.reduce_pairs``).  Every removed pair has incidence +-1, so the
surviving cells with the restricted boundary have the same homology over the
integers, torsion included.  The survivors then go through a Smith normal
form computation with Python integers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping

import numpy as np

from . import _kernels
from .complexes import SimplicialComplex, get_budget
from .errors import BudgetExceeded

REDUCE_THRESHOLD = 500


# ---------------------------------------------------------------------------
# chain complexes


def _bit_positions(mask: int) -> list[int]:
    out = []
    b = 0
    while mask:
        if mask & 1:
            out.append(b)
        mask >>= 1
        b += 1
    return out


@dataclass
class ChainComplex:
    """Augmented simplicial chain complex restricted to a set of cells.

    ``cells[d]`` lists face masks of dimension ``d`` (from -1 up);
    ``boundary[d]`` is the matrix of the map from dimension d to d-1, stored
    column-wise as ``{col: {row: coeff}}`` with positions into ``cells``.
    """

    cells: dict[int, list[int]]
    boundary: dict[int, dict[int, dict[int, int]]]

    @classmethod
    def from_complex(cls, cx: SimplicialComplex, keep: np.ndarray | None = None) -> "ChainComplex":
        masks = cx.masks if keep is None else cx.masks[keep]
        masks = [int(m) for m in masks]
        cells: dict[int, list[int]] = {}
        for m in masks:
            cells.setdefault(m.bit_count() - 1, []).append(m)
        where = {d: {m: i for i, m in enumerate(ms)} for d, ms in cells.items()}
        boundary: dict[int, dict[int, dict[int, int]]] = {}
        for d, ms in cells.items():
            if d < 0:
                continue
            lower = where.get(d - 1, {})
            mat: dict[int, dict[int, int]] = {}
            for j, m in enumerate(ms):
                col = {}
                for p, b in enumerate(_bit_positions(m)):
                    r = lower.get(m ^ (1 << b))
                    if r is not None:
                        col[r] = -1 if p % 2 else 1
                if col:
                    mat[j] = col
            boundary[d] = mat
        return cls(cells, boundary)

    def dims(self) -> list[int]:
        return sorted(self.cells)

    def size(self, d: int) -> int:
        return len(self.cells.get(d, ()))

    def check_dd(self) -> bool:
        """Exact check that every composite of consecutive boundaries vanishes."""
        for d, mat in self.boundary.items():
            lower = self.boundary.get(d - 1)
            if not lower:
                continue
            for col in mat.values():
                acc: dict[int, int] = {}
                for r, v in col.items():
                    for r2, v2 in lower.get(r, {}).items():
                        acc[r2] = acc.get(r2, 0) + v * v2
                if any(acc.values()):
                    return False
        return True


# ---------------------------------------------------------------------------
# Smith normal form


def _eliminate_units(cols: dict[int, dict[int, int]]) -> tuple[int, dict[int, dict[int, int]]]:
    """Pivot on +-1 entries while any remain; returns (pivots used, leftover rows)."""
    rows: dict[int, dict[int, int]] = {}
    colsets: dict[int, set[int]] = {}
    for c, col in cols.items():
        colsets[c] = set(col)
        for r, v in col.items():
            rows.setdefault(r, {})[c] = v
    rank = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(colsets, key=lambda c: len(colsets[c])):
            rs = colsets.get(c)
            if not rs:
                continue
            best = None
            for r in rs:
                v = rows[r][c]
                if v == 1 or v == -1:
                    ln = len(rows[r])
                    if best is None or ln < best[0]:
                        best = (ln, r)
            if best is None:
                continue
            r = best[1]
            prow = rows.pop(r)
            pv = prow[c]
            for cc in prow:
                colsets[cc].discard(r)
            for r2 in list(colsets[c]):
                row2 = rows[r2]
                f = row2[c] * pv
                for cc, val in prow.items():
                    nv = row2.get(cc, 0) - f * val
                    if nv:
                        if cc not in row2:
                            colsets[cc].add(r2)
                        row2[cc] = nv
                    elif cc in row2:
                        del row2[cc]
                        colsets[cc].discard(r2)
            del colsets[c]
            rank += 1
            progress = True
    left = {r: row for r, row in rows.items() if row}
    return rank, left


def _dense_snf_diagonal(a: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of a dense integer matrix (full pivoting)."""
    a = [row[:] for row in a]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        # pivot: smallest nonzero absolute value in the trailing block
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (piv is None or abs(v) < piv[0]):
                    piv = (abs(v), i, j)
                    if piv[0] == 1:
                        break
            if piv and piv[0] == 1:
                break
        if piv is None:
            break
        _, i, j = piv
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for k in range(t, n):
                            ri[k] -= q * rt[k]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        dirty = True
            if not dirty:
                # divisibility of the trailing block by the pivot
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rb, rt = a[bad], a[t]
                for k in range(t, n):
                    rt[k] += rb[k]
                continue
            # move the smallest remaining entry of row/column t into the pivot
            best = (abs(a[t][t]), t, t)
            for i in range(t + 1, m):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, n):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    # normalize to a divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                x, y = diag[i], diag[j]
                g = gcd(x, y)
                if g != x:
                    diag[i], diag[j] = g, x * y // g
                    changed = True
    return sorted(diag)


def smith_invariants(cols: Mapping[int, Mapping[int, int]]) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix given column-wise."""
    rank, left = _eliminate_units({c: dict(col) for c, col in cols.items() if col})
    factors = [1] * rank
    if left:
        rkeys = sorted(left)
        ckeys = sorted({c for row in left.values() for c in row})
        cpos = {c: j for j, c in enumerate(ckeys)}
        dense = [[0] * len(ckeys) for _ in rkeys]
        for i, r in enumerate(rkeys):
            for c, v in left[r].items():
                dense[i][cpos[c]] = v
        factors += _dense_snf_diagonal(dense)
    return sorted(factors)


def rational_rank(cols: Mapping[int, Mapping[int, int]]) -> int:
    """Rank over the rationals by sparse fraction-exact row reduction."""
    pivots: dict[int, dict[int, Fraction]] = {}
    rank = 0
    for col in cols.values():
        v = {r: Fraction(x) for r, x in col.items() if x}
        while v:
            r = min(v)
            if r not in pivots:
                pivots[r] = v
                rank += 1
                break
            p = pivots[r]
            f = v[r] / p[r]
            for rr, x in p.items():
                nv = v.get(rr, 0) - f * x
                if nv:
                    v[rr] = nv
                else:
                    v.pop(rr, None)
    return rank


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class SphereWedge:
    """Multiset of sphere dimensions; empty means a point (contractible)."""

    dims: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(sorted(int(d) for d in self.dims)))

    @property
    def is_point(self) -> bool:
        return not self.dims

    def describe(self) -> str:
        if not self.dims:
            return "pt"
        return " v ".join(f"S^{d}" for d in self.dims)

    def betti(self) -> dict[int, int]:
        return dict(sorted(Counter(self.dims).items()))

    def to_json(self) -> dict:
        return {"spheres": list(self.dims), "describe": self.describe()}


@dataclass(frozen=True)
class BettiProfile:
    """Reduced Betti numbers and torsion coefficients, nonzero entries only.

    ``void`` marks the complex whose only face is empty; its reduced homology
    is a single copy of the integers in dimension -1.
    """

    betti: Mapping[int, int] = field(default_factory=dict)
    torsion: Mapping[int, tuple[int, ...]] = field(default_factory=dict)
    void: bool = False

    def __post_init__(self):
        b = {int(k): int(v) for k, v in sorted(self.betti.items()) if v}
        t = {int(k): tuple(sorted(int(x) for x in v)) for k, v in sorted(self.torsion.items()) if v}
        if any(v < 0 for v in b.values()):
            raise ValueError("Betti numbers must be nonnegative")
        if any(x < 2 for v in t.values() for x in v):
            raise ValueError("torsion coefficients must be at least 2")
        object.__setattr__(self, "betti", b)
        object.__setattr__(self, "torsion", t)

    @property
    def is_zero(self) -> bool:
        return not self.betti and not self.torsion

    @property
    def torsion_free(self) -> bool:
        return not self.torsion

    @property
    def total(self) -> int:
        return sum(self.betti.values())

    def euler(self) -> int:
        return sum((-1) ** (k % 2) * v for k, v in self.betti.items())

    def get(self, k: int) -> int:
        return self.betti.get(k, 0)

    def wedge(self) -> SphereWedge | None:
        """The sphere wedge with this homology, if torsion-free."""
        if self.torsion or self.void:
            return None
        return SphereWedge(tuple(d for d, c in self.betti.items() for _ in range(c)))

    def to_json(self) -> dict:
        data = {
            "betti": {str(k): v for k, v in self.betti.items()},
            "torsion": {str(k): list(v) for k, v in self.torsion.items()},
        }
        if self.void:
            data["void"] = True
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "BettiProfile":
        return cls(
            {int(k): v for k, v in data.get("betti", {}).items()},
            {int(k): tuple(v) for k, v in data.get("torsion", {}).items()},
            bool(data.get("void", False)),
        )

    @classmethod
    def of_wedge(cls, w: SphereWedge) -> "BettiProfile":
        return cls(w.betti())


@dataclass
class HomologyResult:
    profile: BettiProfile
    cells_total: int
    cells_kept: int
    rational_betti: dict[int, int] | None = None
    dd_ok: bool | None = None

    @property
    def rational_agrees(self) -> bool | None:
        if self.rational_betti is None:
            return None
        return self.rational_betti == dict(self.profile.betti)


def _residual(cx: SimplicialComplex, reduce) -> np.ndarray | None:
    if reduce == "auto":
        reduce = len(cx) > REDUCE_THRESHOLD
    if not reduce:
        return None
    masks = cx.masks
    n = len(cx.vertices)
    f_ptr, f_idx = _kernels.facet_table(masks, n)
    c_ptr, c_idx = _kernels.transpose_csr(f_ptr, f_idx, masks.size)
    return _kernels.reduce_pairs(f_ptr, f_idx, c_ptr, c_idx, masks.size)


def homology(
    cx: SimplicialComplex,
    reduce="auto",
    rational_check: bool = True,
    check_dd: bool = False,
    budget: int | None = None,
) -> HomologyResult:
    """Reduced integral homology with optional cross-checks.

    ``rational_check`` recomputes Betti numbers from ranks over the rationals
    on the same chain complex; ``check_dd`` verifies the boundary squares to
    zero.
    """
    limit = get_budget(budget)
    if len(cx) > limit:
        raise BudgetExceeded("homology", len(cx), limit)
    if cx.is_void:
        return HomologyResult(BettiProfile({-1: 1}, void=True), 1, 1, {-1: 1}, True)
    keep = _residual(cx, reduce)
    chain = ChainComplex.from_complex(cx, keep)
    dims = chain.dims()
    ranks: dict[int, int] = {}
    factors: dict[int, list[int]] = {}
    for d in dims:
        inv = smith_invariants(chain.boundary.get(d, {}))
        ranks[d] = len(inv)
        factors[d] = [f for f in inv if f > 1]
    betti, torsion = {}, {}
    for d in dims:
        b = chain.size(d) - ranks.get(d, 0) - ranks.get(d + 1, 0)
        if b:
            betti[d] = b
        if factors.get(d + 1):
            torsion[d] = tuple(factors[d + 1])
    rat = None
    if rational_check:
        rranks = {d: rational_rank(chain.boundary.get(d, {})) for d in dims}
        rat = {}
        for d in dims:
            b = chain.size(d) - rranks.get(d, 0) - rranks.get(d + 1, 0)
            if b:
                rat[d] = b
    kept = len(cx) if keep is None else int(keep.sum())
    dd = chain.check_dd() if check_dd else None
    return HomologyResult(BettiProfile(betti, torsion), len(cx), kept, rat, dd)


def betti(cx: SimplicialComplex, reduce="auto", budget: int | None = None) -> BettiProfile:
    return homology(cx, reduce=reduce, rational_check=False, budget=budget).profile


# ---------------------------------------------------------------------------
# comparisons


def profile_matches(profile: BettiProfile, claim: SphereWedge) -> tuple[bool, list[str]]:
    """True iff torsion-free with Betti numbers equal to the claimed multiplicities."""
    report = []
    if profile.void:
        report.append("void complex: homology sits in dimension -1")
    for d, t in profile.torsion.items():
        report.append(f"torsion in H_{d}: {list(t)}")
    want = claim.betti()
    for d in sorted(set(want) | set(profile.betti)):
        if want.get(d, 0) != profile.betti.get(d, 0):
            report.append(f"dimension {d}: expected {want.get(d, 0)}, found {profile.betti.get(d, 0)}")
    return not report, report


def join_profile(a: Mapping[int, int], b: Mapping[int, int]) -> dict[int, int]:
    """Betti numbers of a join from torsion-free factors: degree-shifted convolution."""
    out: dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j + 1] = out.get(i + j + 1, 0) + x * y
    return {k: v for k, v in sorted(out.items()) if v}


def suspend_profile(a: Mapping[int, int], m: int = 2) -> dict[int, int]:
    """m-point suspension: dimension +1 and multiplicity times (m - 1)."""
    return {k + 1: (m - 1) * v for k, v in a.items() if (m - 1) * v}


def wedge_profile(*profiles: Mapping[int, int]) -> dict[int, int]:
    out: Counter = Counter()
    for p in profiles:
        out.update(p)
    return {k: v for k, v in sorted(out.items()) if v}


def _reduced_vector(p: BettiProfile) -> dict[int, int]:
    return dict(p.betti)


@dataclass
class JoinCheck:
    ok: bool | None
    expected: dict[int, int]
    found: dict[int, int]
    note: str = ""


def join_shift_check(a: SimplicialComplex, b: SimplicialComplex) -> JoinCheck:
    """Compare the homology of ``join(a, b)`` with the convolution of the factors."""
    from .complexes import join

    pa, pb = betti(a), betti(b)
    if pa.torsion or pb.torsion:
        return JoinCheck(None, {}, {}, "torsion present; check skipped")
    expected = join_profile(_reduced_vector(pa), _reduced_vector(pb))
    pj = betti(join(a, b))
    if pj.torsion:
        return JoinCheck(False, expected, dict(pj.betti), "join has torsion")
    return JoinCheck(expected == dict(pj.betti), expected, dict(pj.betti))
