"""Coarse (polylog-factor) estimation of the ordered edge count of a tuple.

``verify_estimate`` tests a guess R by layered subsampling: for every
guess vector j it keeps each vertex of slot i with probability p(i, j)
and asks one GPIS_2 query, accepting on the first nonempty sample.
``coarse_estimate`` sweeps R over powers of two from the top down and
stops at the first guess accepted often enough.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hypergraph import PartiteTuple
from .oracles import OracleHandle

# cap on sampled mask cells per batch (memory bound)
_CELL_BUDGET = 1 << 23


def ceil_log2(n: int) -> int:
    return max(1, math.ceil(math.log2(max(n, 2))))


def guess_vectors(n: int, d: int) -> list:
    """All j in {0..ceil(d log n)}^(d-1), outer loop first, each counting down."""
    top = math.ceil(d * math.log2(max(n, 2)))
    return list(itertools.product(range(top, -1, -1), repeat=d - 1))


def probabilities(j, R, n: int, d: int) -> np.ndarray:
    """p(1, j), ..., p(d, j) for one guess vector."""
    L = d * math.log2(max(n, 2))
    p = np.empty(d)
    p[0] = min(2.0 ** j[0] / float(R), 1.0)
    for i in range(1, d - 1):
        p[i] = min(2.0 ** (j[i] - j[i - 1]) * L, 1.0)
    p[d - 1] = min(2.0 ** (-j[d - 2]), 1.0)
    return p


def theoretical_gamma(n: int, d: int) -> int:
    return d * 4 ** d * 2000 * ceil_log2(n)


def practical_gamma(n: int) -> int:
    return math.ceil(40 * math.log2(max(n, 2)))


@dataclass(frozen=True)
class CoarseResult:
    estimate: Fraction
    accepted_r: int | None
    trials: int

    @property
    def failed(self) -> bool:
        return self.estimate == 0


def _trial_batch(o: OracleHandle, slots, P: np.ndarray, trials: int, rng) -> np.ndarray:
    """Run ``trials`` verify runs sharing one probability table; returns accept flags."""
    G, d = P.shape
    width = max(len(s) for s in slots)
    V = np.zeros((d, width), dtype=np.int64)
    valid = np.zeros((d, width), dtype=bool)
    for i, s in enumerate(slots):
        V[i, :len(s)] = s
        valid[i, :len(s)] = True
    chunk = max(1, _CELL_BUDGET // max(1, G * d * width))
    out = np.zeros(trials, dtype=bool)
    for start in range(0, trials, chunk):
        c = min(chunk, trials - start)
        mask = rng.random((c, G, d, width)) < P[None, :, :, None]
        mask &= valid[None, None]
        sizes = mask.sum(axis=3).reshape(-1)
        ptr = np.zeros(len(sizes) + 1, dtype=np.int64)
        np.cumsum(sizes, out=ptr[1:])
        _, _, si, pos = np.nonzero(mask)
        verts = V[si, pos]
        group_ptr = np.arange(0, c * G + 1, G, dtype=np.int64)
        first, _ = o.gpis2_any(ptr, verts, group_ptr)
        out[start:start + c] = first >= 0
    return out


def _prob_table(R, n: int, d: int) -> np.ndarray:
    return np.array([probabilities(j, R, n, d) for j in guess_vectors(n, d)])


def verify_estimate(o: OracleHandle, t: PartiteTuple, R, rng) -> bool:
    """One run of the guess test for R; true iff some sampled tuple holds an edge."""
    if R <= 0:
        raise ValueError("R must be positive")
    if o.d < 2:
        raise ValueError("verify_estimate needs d >= 2")
    slots = t.slots()
    return bool(_trial_batch(o, slots, _prob_table(R, o.n, o.d), 1, rng)[0])


def verify_trials(o: OracleHandle, t: PartiteTuple, R, trials: int, rng) -> int:
    """Number of accepting runs among ``trials`` independent verify runs."""
    if R <= 0:
        raise ValueError("R must be positive")
    return int(_trial_batch(o, t.slots(), _prob_table(R, o.n, o.d), trials, rng).sum())


def _count_d1(o: OracleHandle, t: PartiteTuple) -> CoarseResult:
    # d = 1: every vertex of the slot is probed on its own
    s = t.slots()[0]
    hits = sum(o.gpis1([[int(v)]], [1]) for v in s)
    return CoarseResult(Fraction(hits), None, len(s))


def coarse_estimate(o: OracleHandle, t: PartiteTuple, rng, gamma: int | None = None) -> CoarseResult:
    """Sweep R = 2^ceil(d log n), ..., 2, 1; stop at the first R accepted > gamma/(10*2^d) times."""
    d, n = o.d, o.n
    if d == 1:
        return _count_d1(o, t)
    gamma = gamma or practical_gamma(n)
    need = gamma / (10 * 2 ** d)
    top = math.ceil(d * math.log2(max(n, 2)))
    used = 0
    slots = t.slots()
    if any(len(s) == 0 for s in slots):
        return CoarseResult(Fraction(0), None, 0)
    for e in range(top, -1, -1):
        R = 2 ** e
        hits = int(_trial_batch(o, slots, _prob_table(R, n, d), gamma, rng).sum())
        used += gamma
        if hits > need:
            return CoarseResult(Fraction(R, d ** (d - 2) * 2 ** d), R, used)
    return CoarseResult(Fraction(0), None, used)


def coarse_window(m_o: int, n: int, d: int) -> tuple:
    """Bounds the coarse estimate should fall in with high probability."""
    f = d ** (d - 1) * 2 ** d * math.log2(max(n, 2)) ** (d - 1)
    return m_o / (8 * f), 20 * f * m_o
