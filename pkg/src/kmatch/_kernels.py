"""numba kernels: constrained subset enumeration, homology-preserving reductions, acyclicity."""

import numpy as np
from numba import njit


@njit(cache=True)
def enumerate_capped(n, indptr, groups, caps, budget, out):
    """Enumerate subsets of range(n) respecting group caps.

    Element i belongs to groups[indptr[i]:indptr[i+1]]; a subset is admissible
    when every group holds at most caps[g] chosen elements.  Admissible sets
    are downward closed, so a depth-first search that extends only by larger
    elements visits each one once.  Writes masks into ``out`` when it is
    non-empty.  Returns (face count, candidates visited); the count is -1
    when more than ``budget`` candidates were examined.
    """
    load = np.zeros(caps.shape[0], np.int64)
    nxt = np.empty(n + 1, np.int64)
    chosen = np.empty(n + 1, np.int64)
    fill = out.shape[0] > 0
    count = 0
    visited = 0
    mask = np.int64(0)
    if fill:
        out[0] = 0
    count = 1
    depth = 0
    nxt[0] = 0
    while depth >= 0:
        i = nxt[depth]
        if i >= n:
            depth -= 1
            if depth >= 0:
                e = chosen[depth]
                mask ^= np.int64(1) << e
                for p in range(indptr[e], indptr[e + 1]):
                    load[groups[p]] -= 1
            continue
        nxt[depth] = i + 1
        visited += 1
        if visited > budget:
            return -1, visited
        ok = True
        for p in range(indptr[i], indptr[i + 1]):
            if load[groups[p]] >= caps[groups[p]]:
                ok = False
                break
        if not ok:
            continue
        for p in range(indptr[i], indptr[i + 1]):
            load[groups[p]] += 1
        mask |= np.int64(1) << i
        chosen[depth] = i
        if fill:
            out[count] = mask
        count += 1
        depth += 1
        nxt[depth] = i + 1
    return count, visited


@njit(cache=True)
def facet_table(masks, nbits):
    """CSR of facet indices for each face of a sorted mask array (-1 never stored)."""
    m = masks.shape[0]
    indptr = np.zeros(m + 1, np.int64)
    for k in range(m):
        c = 0
        x = masks[k]
        while x:
            x &= x - 1
            c += 1
        indptr[k + 1] = indptr[k] + c
    idx = np.empty(indptr[m], np.int64)
    for k in range(m):
        x = masks[k]
        p = indptr[k]
        for b in range(nbits):
            bit = np.int64(1) << b
            if x & bit:
                j = np.searchsorted(masks, x ^ bit)
                idx[p] = j
                p += 1
    return indptr, idx


@njit(cache=True)
def transpose_csr(indptr, idx, m):
    counts = np.zeros(m + 1, np.int64)
    for p in range(idx.shape[0]):
        counts[idx[p] + 1] += 1
    for k in range(m):
        counts[k + 1] += counts[k]
    out = np.empty(idx.shape[0], np.int64)
    fillp = counts[:m].copy()
    for k in range(m):
        for p in range(indptr[k], indptr[k + 1]):
            j = idx[p]
            out[fillp[j]] = k
            fillp[j] += 1
    return counts, out


@njit(cache=True)
def reduce_pairs(f_ptr, f_idx, c_ptr, c_idx, m):
    """Exhaust coreductions and elementary collapses; returns the alive flags.

    A coreduction removes a cell with exactly one alive facet together with
    that facet; a collapse removes a cell with exactly one alive coface together
    with that coface.  Both pairs have incidence +-1, so the boundary restricted
    to the surviving cells has the same integral homology.  Coreductions go
    first; a collapse is only taken when none is available, which keeps the
    greedy pass from stalling on large matching complexes.
    """
    alive = np.ones(m, np.bool_)
    bc = np.empty(m, np.int64)
    cc = np.empty(m, np.int64)
    for k in range(m):
        bc[k] = f_ptr[k + 1] - f_ptr[k]
        cc[k] = c_ptr[k + 1] - c_ptr[k]
    co = [np.int64(0) for _ in range(0)]
    cl = [np.int64(0) for _ in range(0)]
    for k in range(m - 1, -1, -1):
        if bc[k] == 1:
            co.append(np.int64(k))
        if cc[k] == 1:
            cl.append(np.int64(k))
    while len(co) > 0 or len(cl) > 0:
        a = -1
        b = -1
        if len(co) > 0:
            k = co.pop()
            if not alive[k] or bc[k] != 1:
                continue
            for p in range(f_ptr[k], f_ptr[k + 1]):
                if alive[f_idx[p]]:
                    a = f_idx[p]
                    break
            b = k
        else:
            k = cl.pop()
            if not alive[k] or cc[k] != 1:
                continue
            for p in range(c_ptr[k], c_ptr[k + 1]):
                if alive[c_idx[p]]:
                    b = c_idx[p]
                    break
            a = k
        if a < 0 or b < 0:
            continue
        alive[a] = False
        alive[b] = False
        for cell in (a, b):
            for p in range(c_ptr[cell], c_ptr[cell + 1]):
                q = c_idx[p]
                if alive[q]:
                    bc[q] -= 1
                    if bc[q] == 1:
                        co.append(q)
            for p in range(f_ptr[cell], f_ptr[cell + 1]):
                q = f_idx[p]
                if alive[q]:
                    cc[q] -= 1
                    if cc[q] == 1:
                        cl.append(q)
    return alive


@njit(cache=True)
def level_graph_topo(masks, partner, nbits):
    """Kahn order on the alternating digraph of a matching.

    Nodes are faces ``a`` matched upward (partner has one more bit).  There is
    an arc a -> a' whenever a' != a is a facet of u(a) that is itself matched
    upward.  Returns (order, n_sorted); n_sorted < number of such faces means
    a directed cycle exists.
    """
    m = masks.shape[0]
    up = np.zeros(m, np.bool_)
    nup = 0
    for k in range(m):
        p = partner[k]
        if p >= 0 and masks[p] > masks[k]:
            up[k] = True
            nup += 1
    indeg = np.zeros(m, np.int64)
    for k in range(m):
        if not up[k]:
            continue
        b = masks[partner[k]]
        for bit in range(nbits):
            bb = np.int64(1) << bit
            if b & bb:
                f = b ^ bb
                if f == masks[k]:
                    continue
                j = np.searchsorted(masks, f)
                if up[j]:
                    indeg[j] += 1
    order = np.empty(nup, np.int64)
    queue = np.empty(nup, np.int64)
    head = 0
    tail = 0
    for k in range(m):
        if up[k] and indeg[k] == 0:
            queue[tail] = k
            tail += 1
    n_sorted = 0
    while head < tail:
        k = queue[head]
        head += 1
        order[n_sorted] = k
        n_sorted += 1
        b = masks[partner[k]]
        for bit in range(nbits):
            bb = np.int64(1) << bit
            if b & bb:
                f = b ^ bb
                if f == masks[k]:
                    continue
                j = np.searchsorted(masks, f)
                if up[j]:
                    indeg[j] -= 1
                    if indeg[j] == 0:
                        queue[tail] = j
                        tail += 1
    return order[:n_sorted], n_sorted, nup
