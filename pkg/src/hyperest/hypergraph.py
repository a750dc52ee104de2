"""d-uniform hypergraphs, partite tuples, generators and exact counting.

Everything here is ground truth: the estimators never look inside a
``Hypergraph`` except through an oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class HypergraphError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, np.integer):
        x = int(x)
    return Fraction(x)


def _as_edge_array(edges, d: int) -> np.ndarray:
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, d), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != d:
        raise HypergraphError(f"edges must have shape (m, {d})")
    return arr


class Hypergraph:
    """Immutable d-uniform hypergraph on vertices ``0..n-1``.

    Edges are stored as an ``(m, d)`` int64 array, each row strictly
    increasing, rows sorted lexicographically.
    """

    __slots__ = ("n", "d", "_edges", "_edge_set")

    def __init__(self, n: int, d: int, edges=()):
        if d < 1:
            raise HypergraphError("uniformity d must be >= 1")
        if n < 0:
            raise HypergraphError("vertex count must be >= 0")
        arr = _as_edge_array(edges, d)
        if len(arr):
            if arr.min() < 0 or arr.max() >= n:
                raise HypergraphError("vertex id out of range")
            arr = np.sort(arr, axis=1)
            if d > 1 and np.any(arr[:, 1:] == arr[:, :-1]):
                raise HypergraphError("hyperedge with repeated vertex")
            order = np.lexsort(arr.T[::-1])
            arr = arr[order]
            if len(arr) > 1 and np.any(np.all(arr[1:] == arr[:-1], axis=1)):
                raise HypergraphError("duplicate hyperedge")
        arr.setflags(write=False)
        self.n = int(n)
        self.d = int(d)
        self._edges = arr
        self._edge_set = None

    @property
    def edges(self) -> np.ndarray:
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    def edge_set(self) -> frozenset:
        if self._edge_set is None:
            self._edge_set = frozenset(map(tuple, self._edges.tolist()))
        return self._edge_set

    def has_edge(self, vertices: Iterable[int]) -> bool:
        return tuple(sorted(vertices)) in self.edge_set()

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.n, self.d) == (other.n, other.d) and np.array_equal(self._edges, other._edges)

    def __hash__(self):
        return hash((self.n, self.d, self._edges.tobytes()))

    def __repr__(self):
        return f"Hypergraph(n={self.n}, d={self.d}, m={self.m})"


@dataclass(frozen=True, eq=False)
class PartiteTuple:
    """An ordered family of vertex sets with a weight.

    Compact form holds pairwise-disjoint ``sets`` with ``mults`` summing to
    d (the notation A_1^[a_1], ..., A_s^[a_s]).  General form holds exactly
    d arbitrary sets, every multiplicity 1.
    """

    sets: tuple
    mults: tuple
    weight: Fraction = Fraction(1)
    compact: bool = True

    def __post_init__(self):
        sets = tuple(np.unique(np.asarray(s, dtype=np.int64)) for s in self.sets)
        for s in sets:
            s.setflags(write=False)
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "mults", tuple(int(a) for a in self.mults))
        object.__setattr__(self, "weight", as_fraction(self.weight))
        if len(sets) != len(self.mults):
            raise HypergraphError("one multiplicity per set required")
        if any(a < 1 for a in self.mults):
            raise HypergraphError("multiplicities must be >= 1")
        if self.weight < 1:
            raise HypergraphError("weight must be >= 1")
        if self.compact:
            seen = np.concatenate(sets) if sets else np.zeros(0, dtype=np.int64)
            if len(np.unique(seen)) != len(seen):
                raise HypergraphError("compact-form sets must be pairwise disjoint")
        elif any(a != 1 for a in self.mults):
            raise HypergraphError("general-form multiplicities are all 1")

    @classmethod
    def general(cls, sets: Sequence, weight=1) -> "PartiteTuple":
        return cls(tuple(sets), (1,) * len(sets), weight, compact=False)

    @classmethod
    def whole(cls, n: int, d: int, weight=1) -> "PartiteTuple":
        """The tuple U^[d] over vertices 0..n-1."""
        return cls((np.arange(n),), (d,), weight)

    @property
    def d(self) -> int:
        return sum(self.mults)

    def slots(self) -> tuple:
        """The d sets in slot order (each set repeated by its multiplicity)."""
        return tuple(s for s, a in zip(self.sets, self.mults) for _ in range(a))

    def to_general(self) -> "PartiteTuple":
        return PartiteTuple.general(self.slots(), self.weight)

    def to_compact(self) -> "PartiteTuple":
        """Merge equal slots; raises if two slots overlap without being equal."""
        groups: list = []
        mults: list = []
        for s in self.slots():
            for i, g in enumerate(groups):
                if np.array_equal(g, s):
                    mults[i] += 1
                    break
            else:
                groups.append(s)
                mults.append(1)
        return PartiteTuple(tuple(groups), tuple(mults), self.weight, compact=True)

    def with_weight(self, weight) -> "PartiteTuple":
        return PartiteTuple(self.sets, self.mults, weight, self.compact)

    def max_vertex(self) -> int:
        return max((int(s[-1]) for s in self.sets if len(s)), default=-1)

    def same_sets(self, other: "PartiteTuple") -> bool:
        return (
            self.mults == other.mults
            and self.compact == other.compact
            and all(np.array_equal(a, b) for a, b in zip(self.sets, other.sets))
        )

    def __eq__(self, other):
        if not isinstance(other, PartiteTuple):
            return NotImplemented
        return self.same_sets(other) and self.weight == other.weight

    def __repr__(self):
        body = ", ".join(f"{list(s)}^[{a}]" if a > 1 else f"{list(s)}" for s, a in zip(self.sets, self.mults))
        return f"PartiteTuple({body}; w={self.weight})"


def _check_range(H: Hypergraph, t: PartiteTuple):
    if t.max_vertex() >= H.n or any(len(s) and s[0] < 0 for s in t.sets):
        raise HypergraphError("vertex id out of range")
    if t.d != H.d:
        raise HypergraphError(f"tuple has {t.d} slots, hypergraph is {H.d}-uniform")


def _assignment_counts(H: Hypergraph, t: PartiteTuple) -> np.ndarray:
    """Per edge, the number of slot orderings placing vertex k in its slot set."""
    d = H.d
    edges = H.edges
    if len(edges) == 0:
        return np.zeros(0, dtype=np.int64)
    member = np.zeros((d, H.n), dtype=bool)
    for k, s in enumerate(t.slots()):
        member[k, s] = True
    counts = np.zeros(len(edges), dtype=np.int64)
    for perm in itertools.permutations(range(d)):
        ok = np.ones(len(edges), dtype=bool)
        for pos, slot in enumerate(perm):
            ok &= member[slot, edges[:, pos]]
        counts += ok
    return counts


def brute_count(H: Hypergraph, t: PartiteTuple) -> int:
    """m(A_1, ..., A_d): hyperedges with exactly one vertex in each slot."""
    _check_range(H, t)
    return int(np.count_nonzero(_assignment_counts(H, t)))


def brute_ordered_count(H: Hypergraph, t: PartiteTuple) -> int:
    """m_o: ordered hyperedges whose i-th vertex lies in the i-th slot."""
    _check_range(H, t)
    return int(_assignment_counts(H, t).sum())


def ordered_count(m: int, mults: Sequence[int]) -> int:
    """Ordered count from an unordered one: m times the product of a_i!."""
    d = sum(mults)
    if m < 0 or not mults or any(a < 1 or a > d for a in mults):
        raise HypergraphError("multiplicities must lie in [d] and sum to d")
    return int(m) * math.prod(math.factorial(a) for a in mults)


# generators ---------------------------------------------------------------

KINDS = ("random", "sunflower", "clique", "empty")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    d: int
    m: int = 0
    seed: int = 0
    core: int = 1
    clique: int = 0
    params: dict = field(default_factory=dict, compare=False)


def _philox(seed: int, *labels: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *labels])))


def _distinct_subsets(rng: np.random.Generator, pool: np.ndarray, r: int, m: int) -> np.ndarray:
    """m distinct r-subsets of pool, uniformly at random."""
    total = math.comb(len(pool), r)
    if m > total:
        raise HypergraphError(f"cannot draw {m} distinct {r}-subsets of {len(pool)} vertices")
    if m == 0:
        return np.zeros((0, r), dtype=np.int64)
    if 2 * m >= total or total <= 4096:
        combos = np.array(list(itertools.combinations(range(len(pool)), r)), dtype=np.int64).reshape(-1, r)
        pick = rng.choice(total, size=m, replace=False)
        return np.sort(pool[combos[np.sort(pick)]], axis=1)
    chosen: set = set()
    out = []
    while len(out) < m:
        batch = np.sort(rng.integers(0, len(pool), size=(2 * (m - len(out)), r)), axis=1)
        if r > 1:
            batch = batch[np.all(batch[:, 1:] != batch[:, :-1], axis=1)]
        for row in map(tuple, batch.tolist()):
            if row not in chosen:
                chosen.add(row)
                out.append(row)
                if len(out) == m:
                    break
    return pool[np.array(out, dtype=np.int64)]


def generate(spec: GeneratorSpec) -> Hypergraph:
    n, d = spec.n, spec.d
    if spec.kind == "empty":
        return Hypergraph(n, d)
    if spec.kind == "random":
        rng = _philox(spec.seed, 1)
        edges = _distinct_subsets(rng, np.arange(n, dtype=np.int64), d, spec.m)
        return Hypergraph(n, d, edges)
    if spec.kind == "sunflower":
        if not 0 <= spec.core < d:
            raise HypergraphError("sunflower core size must be in [0, d)")
        rng = _philox(spec.seed, 2)
        perm = rng.permutation(n)
        core, rest = np.sort(perm[: spec.core]), np.sort(perm[spec.core:])
        petals = _distinct_subsets(rng, rest, d - spec.core, spec.m)
        edges = np.hstack([np.broadcast_to(core, (len(petals), spec.core)), petals])
        return Hypergraph(n, d, edges)
    if spec.kind == "clique":
        if not d <= spec.clique <= n:
            raise HypergraphError("clique size must be in [d, n]")
        rng = _philox(spec.seed, 3)
        members = np.sort(rng.choice(n, size=spec.clique, replace=False))
        edges = list(itertools.combinations(members.tolist(), d))
        return Hypergraph(n, d, edges)
    raise HypergraphError(f"unknown generator kind {spec.kind!r}")


# text format ----------------------------------------------------------------

def write_hypergraph(H: Hypergraph, path) -> None:
    lines = [f"{H.n} {H.d} {H.m}"]
    lines += [" ".join(map(str, row)) for row in H.edges.tolist()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_hypergraph(path) -> Hypergraph:
    text = Path(path).read_text(encoding="utf-8")
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 3:
        raise HypergraphError("malformed header, expected 'n d m'")
    try:
        n, d, m = map(int, rows[0])
    except ValueError as exc:
        raise HypergraphError("malformed header, expected 'n d m'") from exc
    body = rows[1:]
    if len(body) != m:
        raise HypergraphError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for lineno, row in enumerate(body, start=2):
        if len(row) != d:
            raise HypergraphError(f"line {lineno}: expected {d} vertex ids")
        try:
            vs = [int(x) for x in row]
        except ValueError as exc:
            raise HypergraphError(f"line {lineno}: non-integer vertex id") from exc
        if any(b <= a for a, b in zip(vs, vs[1:])):
            raise HypergraphError(f"line {lineno}: vertex ids must be distinct and increasing")
        edges.append(vs)
    return Hypergraph(n, d, edges)
