"""Exact ordered-edge counting with a node budget (splitting tree).

Each tree node assigns to every one of the d slots a contiguous block of
the sorted root set the slot belongs to.  Children halve every block
(first ceil half, then floor half), giving 2^d children.  A node whose
blocks cannot host an edge (a block shared by b slots has fewer than b
vertices) is dead without a query; otherwise one GPIS_1 query labels it.
Live nodes whose slots are all distinct singletons are exactly the
ordered edges.

Nodes of one depth own disjoint sets of ordered edges, so the tree is
expanded a level at a time and the call stops as soon as the live nodes
of a level already outnumber tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hypergraph import PartiteTuple
from .oracles import OracleHandle


@dataclass(frozen=True)
class ExactOutcome:
    count: int | None
    nodes: int = 0
    depth: int = 0

    @property
    def exceeds(self) -> bool:
        return self.count is None

    @classmethod
    def exceeded(cls, nodes: int = 0, depth: int = 0) -> "ExactOutcome":
        return cls(None, nodes, depth)

    def __repr__(self):
        return "ExceedsThreshold" if self.exceeds else f"Exact({self.count})"


def node_budget(d: int, n: int, tau: int) -> int:
    return 2 ** (d + 2) * tau * max(1, math.ceil(math.log2(max(n, 2))))


def _feasible(slot_root: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Rows where every block holds at least as many vertices as slots using it."""
    d = lo.shape[1]
    size = hi - lo
    ok = np.ones(len(lo), dtype=bool)
    for k in range(d):
        need = np.ones(len(lo), dtype=np.int64)
        for j in range(d):
            if j != k and slot_root[j] == slot_root[k]:
                need += lo[:, j] == lo[:, k]
        ok &= size[:, k] >= need
    return ok


def _children(lo: np.ndarray, hi: np.ndarray) -> tuple:
    d = lo.shape[1]
    mid = lo + (hi - lo + 1) // 2
    bits = (np.arange(2 ** d)[:, None] >> np.arange(d)[None, :]) & 1  # (2^d, d)
    clo = np.where(bits[None], mid[:, None], lo[:, None]).reshape(-1, d)
    chi = np.where(bits[None], hi[:, None], mid[:, None]).reshape(-1, d)
    return clo, chi


def exact_count_or_exceeds(o: OracleHandle, t: PartiteTuple, tau: int) -> ExactOutcome:
    """Return Exact(m_o(t)) if m_o(t) <= tau, else ExceedsThreshold."""
    if tau < 1:
        raise ValueError("tau must be >= 1")
    if not t.compact:
        t = t.to_compact()
    if t.d != o.d:
        raise ValueError(f"tuple has {t.d} slots, oracle is {o.d}-uniform")
    roots = [np.asarray(s) for s in t.sets]
    slot_root = np.repeat(np.arange(len(roots)), t.mults).astype(np.int64)
    d = o.d
    budget = node_budget(d, o.n, tau)

    lo = np.zeros((1, d), dtype=np.int64)
    hi = np.array([[len(roots[r]) for r in slot_root]], dtype=np.int64)
    nodes = 1
    depth = 0
    found = 0
    while len(lo):
        alive = _feasible(slot_root, lo, hi)
        if alive.any():
            alive[alive] = o.gpis1_blocks(roots, slot_root, lo[alive], hi[alive])
        lo, hi = lo[alive], hi[alive]
        leaf = np.all(hi - lo == 1, axis=1)
        found += int(leaf.sum())
        lo, hi = lo[~leaf], hi[~leaf]
        if found + len(lo) > tau:
            return ExactOutcome.exceeded(nodes, depth)
        if not len(lo):
            break
        # every remaining node gets all 2^d children
        nodes += len(lo) * 2 ** d
        if nodes > budget:
            return ExactOutcome.exceeded(nodes, depth)
        lo, hi = _children(lo, hi)
        depth += 1
    return ExactOutcome(found, nodes, depth)
