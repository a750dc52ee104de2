"""Compiled inner loops for the direct (exact) oracle.

Both kernels answer "is there a hyperedge admitting a bijection from its
vertices onto the d slots, each vertex inside its slot's set?".  Candidate
edges are the ones incident to the smallest slot.
"""

import itertools

import numpy as np
from numba import njit


def permutations_array(d: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(d))), dtype=np.int64).reshape(-1, d)


@njit(cache=True)
def _edge_fits_masks(edges, e, member, perms, d):
    for p in range(perms.shape[0]):
        ok = True
        for pos in range(d):
            if not (member[edges[e, pos]] >> perms[p, pos]) & 1:
                ok = False
                break
        if ok:
            return True
    return False


@njit(cache=True)
def any_edge_csr(edges, inc_ptr, inc_idx, n, d, slot_ptr, slot_verts, group_ptr, perms):
    """Answer queries given as CSR slot lists.

    Query q owns slots ``q*d .. q*d+d-1``; slot s lists vertices
    ``slot_verts[slot_ptr[s]:slot_ptr[s+1]]``.  Queries are organised in
    groups (``group_ptr``); inside a group they are issued in order and the
    group stops at its first Yes.  Returns (first_yes_index or -1, issued)
    per group.
    """
    n_groups = group_ptr.shape[0] - 1
    first = np.full(n_groups, -1, dtype=np.int64)
    issued = np.zeros(n_groups, dtype=np.int64)
    member = np.zeros(n, dtype=np.int64)
    for g in range(n_groups):
        for q in range(group_ptr[g], group_ptr[g + 1]):
            issued[g] += 1
            best = -1
            best_size = 1 << 62
            empty = False
            for k in range(d):
                s = q * d + k
                size = slot_ptr[s + 1] - slot_ptr[s]
                if size == 0:
                    empty = True
                    break
                if size < best_size:
                    best_size = size
                    best = s
            if empty:
                continue
            for k in range(d):
                s = q * d + k
                for i in range(slot_ptr[s], slot_ptr[s + 1]):
                    member[slot_verts[i]] |= 1 << k
            found = False
            for i in range(slot_ptr[best], slot_ptr[best + 1]):
                v = slot_verts[i]
                for j in range(inc_ptr[v], inc_ptr[v + 1]):
                    if _edge_fits_masks(edges, inc_idx[j], member, perms, d):
                        found = True
                        break
                if found:
                    break
            for k in range(d):
                s = q * d + k
                for i in range(slot_ptr[s], slot_ptr[s + 1]):
                    member[slot_verts[i]] = 0
            if found:
                first[g] = q - group_ptr[g]
                break
    return first, issued


@njit(cache=True)
def any_edge_blocks(edges, inc_ptr, inc_idx, d, root_of, rank_of, root_verts, root_ptr,
                    slot_root, lo, hi, perms):
    """Answer queries whose slots are contiguous blocks of sorted root sets.

    Slot k of query q is ``root_verts[root_ptr[r] + lo[q,k] : root_ptr[r] + hi[q,k]]``
    with ``r = slot_root[k]``.
    """
    nq = lo.shape[0]
    out = np.zeros(nq, dtype=np.bool_)
    for q in range(nq):
        best = 0
        for k in range(1, d):
            if hi[q, k] - lo[q, k] < hi[q, best] - lo[q, best]:
                best = k
        if hi[q, best] <= lo[q, best]:
            continue
        base = root_ptr[slot_root[best]]
        found = False
        for i in range(base + lo[q, best], base + hi[q, best]):
            v = root_verts[i]
            for j in range(inc_ptr[v], inc_ptr[v + 1]):
                e = inc_idx[j]
                for p in range(perms.shape[0]):
                    ok = True
                    for pos in range(d):
                        u = edges[e, pos]
                        k = perms[p, pos]
                        r = root_of[u]
                        if r != slot_root[k] or rank_of[u] < lo[q, k] or rank_of[u] >= hi[q, k]:
                            ok = False
                            break
                    if ok:
                        found = True
                        break
                if found:
                    break
            if found:
                break
        out[q] = found
    return out
