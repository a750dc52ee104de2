"""Color-coding sparsification of a weighted partite tuple.

Vertices get independent uniform colors in [k]; a keyed hash picks each
color tuple in [k]^d with probability 1/k.  For every picked tuple
(c_1..c_d), slot i is narrowed to the vertices of color c_i, and the
child carries weight k*w.  The expected ordered count over all children
is m_o/k, so the weighted total is unbiased.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hypergraph import Hypergraph, PartiteTuple, _assignment_counts, _check_range


@dataclass(frozen=True)
class HdHash:
    """Keyed pseudorandom map [k]^d -> {0,1} with P[1] = floor(2^64/k)/2^64."""

    k: int
    d: int
    seed: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @property
    def _cut(self) -> int:
        return (1 << 64) // self.k

    def __call__(self, colors) -> bool:
        if self.k == 1:
            return True
        key = int(self.seed).to_bytes(16, "little", signed=True)
        msg = np.asarray(colors, dtype=np.int64).tobytes()
        val = int.from_bytes(hashlib.blake2b(msg, digest_size=8, key=key).digest(), "little")
        return val < self._cut

    def accepted(self):
        """Accepted color tuples in lexicographic order."""
        return [c for c in itertools.product(range(self.k), repeat=self.d) if self(c)]


class Coloring:
    """Independent uniform colors in [k] for vertices 0..size-1."""

    def __init__(self, k: int, seed: int, size: int):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), 0xC0])))
        self.colors = rng.integers(0, k, size=max(size, 0))

    def classes(self, s: np.ndarray) -> list:
        """chi(s, j) for j in [k]."""
        c = self.colors[s]
        return [s[c == j] for j in range(self.k)]


def sparsify(t: PartiteTuple, k: int, hash_seed: int, color_seed: int,
             coloring: Coloring | None = None) -> list:
    """Children of ``t`` under one coloring and hash draw, in lexicographic color order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    d = t.d
    h = HdHash(k, d, hash_seed)
    col = coloring or Coloring(k, color_seed, t.max_vertex() + 1)
    slots = t.slots()
    cls = [col.classes(s) for s in slots]
    w = t.weight * k
    out = []
    for c in itertools.product(range(k), repeat=d):
        parts = [cls[i][c[i]] for i in range(d)]
        if any(len(p) == 0 for p in parts):
            continue
        if h(c):
            out.append(PartiteTuple.general(parts, w))
    return out


def count_properly_colored(H: Hypergraph, t: PartiteTuple, k: int, h: HdHash, coloring: Coloring) -> int:
    """Ordered edges of ``t`` whose slot-color tuple is accepted by ``h`` (brute force)."""
    _check_range(H, t)
    d = H.d
    if H.m == 0:
        return 0
    slots = t.slots()
    member = np.zeros((d, H.n), dtype=bool)
    for i, s in enumerate(slots):
        member[i, s] = True
    total = 0
    for perm in itertools.permutations(range(d)):
        # perm[pos] = slot receiving edge vertex pos
        ok = np.ones(H.m, dtype=bool)
        for pos, slot in enumerate(perm):
            ok &= member[slot, H.edges[:, pos]]
        for e in np.nonzero(ok)[0]:
            colors = [0] * d
            for pos, slot in enumerate(perm):
                colors[slot] = int(coloring.colors[H.edges[e, pos]])
            total += h(colors)
    return total


def class_partition_total(H: Hypergraph, t: PartiteTuple, coloring: Coloring) -> int:
    """Sum over every color tuple in [k]^d (hash ignored) of the child ordered counts."""
    d = t.d
    cls = [coloring.classes(s) for s in t.slots()]
    total = 0
    for c in itertools.product(range(coloring.k), repeat=d):
        parts = [cls[i][c[i]] for i in range(d)]
        if any(len(p) == 0 for p in parts):
            continue
        total += int(_assignment_counts(H, PartiteTuple.general(parts)).sum())
    return total


def weighted_total(H: Hypergraph, tuples) -> Fraction:
    return sum((t.weight * int(_assignment_counts(H, t).sum()) for t in tuples), Fraction(0))
