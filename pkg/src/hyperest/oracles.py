"""Subset-query oracles over a hidden hypergraph, with query accounting.

``OracleHandle`` answers three kinds of query:

* ``gpis``  -- d pairwise-disjoint sets;
* ``gpis1`` -- disjoint sets with multiplicities (compact form);
* ``gpis2`` -- any d sets.

Each kind is either answered directly (exactly) or simulated through the
weaker oracle: gpis1 by random partitioning into GPIS queries, gpis2 by
splitting the sets into atoms of their Venn diagram and asking gpis1 on
every atom combination.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels
from .hypergraph import Hypergraph, HypergraphError


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class QueryStats:
    gpis: int = 0
    gpis1: int = 0
    gpis2: int = 0
    wall_ms: float = 0.0

    @property
    def total(self) -> int:
        return self.gpis + self.gpis1 + self.gpis2

    def __sub__(self, other: "QueryStats") -> "QueryStats":
        return QueryStats(self.gpis - other.gpis, self.gpis1 - other.gpis1,
                          self.gpis2 - other.gpis2, self.wall_ms - other.wall_ms)

    def to_dict(self) -> dict:
        return asdict(self)


def default_gpis1_reps(n: int, d: int, c: float = 5.0) -> int:
    """Rounds for simulated gpis1: failure probability <= exp(-c)/n."""
    return math.ceil(d ** d * (c + math.log(max(n, 2))))


def _csr(queries) -> tuple:
    """Flatten a list of queries (each a list of d vertex arrays) to CSR."""
    sizes = [len(s) for q in queries for s in q]
    ptr = np.zeros(len(sizes) + 1, dtype=np.int64)
    np.cumsum(sizes, out=ptr[1:])
    flat = [np.asarray(s, dtype=np.int64) for q in queries for s in q]
    verts = np.concatenate(flat) if flat else np.zeros(0, dtype=np.int64)
    return ptr, verts


class OracleHandle:
    """Query interface to a hidden d-uniform hypergraph.

    Single owner: counters and the random stream mutate on every call.
    """

    def __init__(self, H: Hypergraph, seed: int = 0, *, simulate_gpis1: bool = False,
                 simulate_gpis2: bool = False, gpis1_reps: int | None = None):
        self._H = H
        self.n = H.n
        self.d = H.d
        self.simulate_gpis1 = simulate_gpis1
        self.simulate_gpis2 = simulate_gpis2
        self.gpis1_reps = gpis1_reps or default_gpis1_reps(H.n, H.d)
        self.rng = np.random.default_rng(seed)
        self._perms = _kernels.permutations_array(H.d)
        self._ordered = None
        edges = np.ascontiguousarray(H.edges, dtype=np.int64)
        self._edges = edges
        flat = edges.ravel()
        order = np.argsort(flat, kind="stable")
        self._inc_idx = (order // H.d).astype(np.int64)
        self._inc_ptr = np.zeros(H.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(flat, minlength=H.n), out=self._inc_ptr[1:])
        self.reset()

    @property
    def mode(self) -> str:
        return "simulated" if (self.simulate_gpis1 or self.simulate_gpis2) else "direct"

    # accounting -----------------------------------------------------------

    def reset(self) -> None:
        self.gpis_count = 0
        self.gpis1_count = 0
        self.gpis2_count = 0
        self._t0 = time.perf_counter()

    def snapshot(self) -> QueryStats:
        return QueryStats(self.gpis_count, self.gpis1_count, self.gpis2_count,
                          (time.perf_counter() - self._t0) * 1000.0)

    # validation -------------------------------------------------------------

    def _sets(self, sets) -> list:
        out = [np.unique(np.asarray(s, dtype=np.int64)) for s in sets]
        for s in out:
            if len(s) and (s[0] < 0 or s[-1] >= self.n):
                raise HypergraphError("vertex id out of range")
        return out

    def _exact_csr(self, queries) -> np.ndarray:
        """Exact answers for a list of slot-set queries, no accounting."""
        ptr, verts = _csr(queries)
        group_ptr = np.arange(len(queries) + 1, dtype=np.int64)
        first, _ = _kernels.any_edge_csr(self._edges, self._inc_ptr, self._inc_idx, self.n,
                                         self.d, ptr, verts, group_ptr, self._perms)
        return first >= 0

    # GPIS -------------------------------------------------------------------

    def gpis(self, sets) -> bool:
        sets = self._sets(sets)
        if len(sets) != self.d:
            raise OracleError(f"gpis takes exactly {self.d} sets")
        allv = np.concatenate(sets) if sets else np.zeros(0, dtype=np.int64)
        if len(np.unique(allv)) != len(allv):
            raise OracleError("gpis sets must be pairwise disjoint")
        self.gpis_count += 1
        return bool(self._exact_csr([sets])[0])

    # GPIS_1 -----------------------------------------------------------------

    def _check_compact(self, sets, mults):
        mults = [int(a) for a in mults]
        if len(mults) != len(sets) or any(a < 1 or a > self.d for a in mults) or sum(mults) != self.d:
            raise OracleError("multiplicities must lie in [d] and sum to d")
        allv = np.concatenate(sets) if sets else np.zeros(0, dtype=np.int64)
        if len(np.unique(allv)) != len(allv):
            raise OracleError("compact-form sets must be pairwise disjoint")
        return mults

    def gpis1(self, sets, mults, reps: int | None = None) -> bool:
        sets = self._sets(sets)
        mults = self._check_compact(sets, mults)
        self.gpis1_count += 1
        if not self.simulate_gpis1:
            return bool(self._exact_csr([[s for s, a in zip(sets, mults) for _ in range(a)]])[0])
        return self._simulate_gpis1(sets, mults, reps)

    def _simulate_gpis1(self, sets, mults, reps) -> bool:
        rounds = 1 if all(a == 1 for a in mults) else (reps or self.gpis1_reps)
        for _ in range(rounds):
            parts = []
            for s, a in zip(sets, mults):
                if a == 1:
                    parts.append(s)
                    continue
                labels = self.rng.integers(0, a, size=len(s))
                parts.extend(s[labels == j] for j in range(a))
            self.gpis_count += 1
            if self._exact_csr([parts])[0]:
                return True
        return False

    def gpis1_blocks(self, roots, slot_root, lo, hi) -> np.ndarray:
        """Batch of gpis1 queries whose sets are blocks of sorted root sets.

        ``roots`` are pairwise-disjoint sorted vertex arrays; slot k of
        query q is ``roots[slot_root[k]][lo[q, k]:hi[q, k]]``.  Blocks of
        the same root are assumed equal or disjoint (as produced by
        repeated halving), so each query is a valid compact tuple.
        """
        lo = np.ascontiguousarray(lo, dtype=np.int64)
        hi = np.ascontiguousarray(hi, dtype=np.int64)
        if not self.simulate_gpis1:
            self.gpis1_count += len(lo)
            return self._answer_blocks(roots, slot_root, lo, hi)
        out = np.zeros(len(lo), dtype=bool)
        for q in range(len(lo)):
            groups: dict = {}
            for k, r in enumerate(slot_root):
                key = (r, lo[q, k], hi[q, k])
                groups[key] = groups.get(key, 0) + 1
            sets = [roots[r][a:b] for (r, a, b) in groups]
            out[q] = self.gpis1(sets, list(groups.values()))
        return out

    def gpis_blocks(self, roots, slot_root, lo, hi) -> np.ndarray:
        """Batch of plain GPIS queries in block form; blocks must be disjoint."""
        lo = np.ascontiguousarray(lo, dtype=np.int64)
        hi = np.ascontiguousarray(hi, dtype=np.int64)
        self.gpis_count += len(lo)
        return self._answer_blocks(roots, slot_root, lo, hi)

    def _answer_blocks(self, roots, slot_root, lo, hi) -> np.ndarray:
        slot_root = np.asarray(slot_root, dtype=np.int64)
        root_of, rank_of, verts, ptr = self._root_index(roots)
        if len(lo) * 8 >= len(self._edges) * len(self._perms):
            got = self._blocks_by_lookup(slot_root, root_of, rank_of, lo, hi)
            if got is not None:
                return got
        return _kernels.any_edge_blocks(self._edges, self._inc_ptr, self._inc_idx, self.d,
                                        root_of, rank_of, verts, ptr, slot_root, lo, hi, self._perms)

    def _blocks_by_lookup(self, slot_root, root_of, rank_of, lo, hi):
        """Answer a batch whose blocks are disjoint per slot by hashing ordered edges.

        Every ordered edge lands in at most one block per slot, so a query is
        Yes iff its tuple of block ids is hit by some ordered edge.  Returns
        None when blocks of one slot overlap (caller falls back).
        """
        d = self.d
        q_ids = np.empty((len(lo), d), dtype=np.int64)
        e_ids = []
        radix = []
        if self._ordered is None:
            self._ordered = self._edges[:, self._perms].reshape(-1, d)
        ordered = self._ordered
        ok = np.ones(len(ordered), dtype=bool)
        for k in range(d):
            span = int(hi[:, k].max()) + 1 if len(hi) else 1
            packed, inv = np.unique(lo[:, k] * span + hi[:, k], return_inverse=True)
            blocks = np.stack([packed // span, packed % span], axis=1)
            if np.any(blocks[1:, 0] < blocks[:-1, 1]):
                return None
            q_ids[:, k] = inv.reshape(-1)
            v = ordered[:, k]
            r = rank_of[v]
            b = np.searchsorted(blocks[:, 0], r, side="right") - 1
            bc = np.clip(b, 0, None)
            ok &= (root_of[v] == slot_root[k]) & (b >= 0) & (r < blocks[bc, 1])
            e_ids.append(bc)
            radix.append(len(blocks))
        if math.prod(radix) >= 1 << 62:
            return None
        qkey = np.zeros(len(lo), dtype=np.int64)
        ekey = np.zeros(int(ok.sum()), dtype=np.int64)
        for k in range(d):
            qkey = qkey * radix[k] + q_ids[:, k]
            ekey = ekey * radix[k] + e_ids[k][ok]
        return np.isin(qkey, ekey)

    def _root_index(self, roots):
        root_of = np.full(self.n, -1, dtype=np.int64)
        rank_of = np.zeros(self.n, dtype=np.int64)
        ptr = np.zeros(len(roots) + 1, dtype=np.int64)
        for r, s in enumerate(roots):
            s = np.asarray(s, dtype=np.int64)
            if np.any(root_of[s] >= 0):
                raise OracleError("root sets must be pairwise disjoint")
            root_of[s] = r
            rank_of[s] = np.arange(len(s))
            ptr[r + 1] = ptr[r] + len(s)
        verts = np.concatenate([np.asarray(s, dtype=np.int64) for s in roots]) if roots else np.zeros(0, np.int64)
        return root_of, rank_of, verts, ptr

    # GPIS_2 -----------------------------------------------------------------

    def gpis2(self, sets) -> bool:
        sets = self._sets(sets)
        if len(sets) != self.d:
            raise OracleError(f"gpis2 takes exactly {self.d} sets")
        self.gpis2_count += 1
        if not self.simulate_gpis2:
            return bool(self._exact_csr([sets])[0])
        return any(self.gpis1(groups, mults) for groups, mults in atom_combinations(sets))

    def gpis2_any(self, ptr, verts, group_ptr) -> tuple:
        """Issue batches of gpis2 queries, each batch stopping at its first Yes.

        Queries are in CSR slot form (see ``_kernels.any_edge_csr``).
        Returns (index of first Yes or -1, queries issued) per batch.
        """
        ptr = np.asarray(ptr, dtype=np.int64)
        verts = np.asarray(verts, dtype=np.int64)
        group_ptr = np.asarray(group_ptr, dtype=np.int64)
        if not self.simulate_gpis2:
            first, issued = _kernels.any_edge_csr(self._edges, self._inc_ptr, self._inc_idx, self.n,
                                                  self.d, ptr, verts, group_ptr, self._perms)
            self.gpis2_count += int(issued.sum())
            return first, issued
        d = self.d
        first = np.full(len(group_ptr) - 1, -1, dtype=np.int64)
        issued = np.zeros(len(group_ptr) - 1, dtype=np.int64)
        for g in range(len(group_ptr) - 1):
            for q in range(group_ptr[g], group_ptr[g + 1]):
                issued[g] += 1
                sets = [verts[ptr[q * d + k]:ptr[q * d + k + 1]] for k in range(d)]
                if self.gpis2(sets):
                    first[g] = q - group_ptr[g]
                    break
        return first, issued


def atom_combinations(sets) -> list:
    """Compact sub-queries covering a general-form query.

    Vertices are grouped by which of the d sets contain them (atoms,
    ordered by membership bitmask).  Each slot picks one atom it contains;
    equal picks merge into one set with a multiplicity.
    """
    d = len(sets)
    masks: dict = {}
    for k, s in enumerate(sets):
        for v in np.asarray(s).tolist():
            masks[v] = masks.get(v, 0) | (1 << k)
    atoms: dict = {}
    for v, b in masks.items():
        atoms.setdefault(b, []).append(v)
    keys = sorted(atoms)
    per_slot = [[b for b in keys if (b >> k) & 1] for k in range(d)]
    out = []
    for combo in itertools.product(*per_slot):
        mult: dict = {}
        for b in combo:
            mult[b] = mult.get(b, 0) + 1
        groups = [np.array(sorted(atoms[b]), dtype=np.int64) for b in mult]
        out.append((groups, list(mult.values())))
    return out
