"""Weighted subsampling of tuples with coarse estimates.

Entries are bucketed by the level ceil(log2(w*e)).  Each level gets an
even share of the target size (shares unused by small levels are passed
on); a level larger than its share s keeps a uniform sample of s entries,
each kept weight scaled by population/s.  Each level is
unbiased on its own, and inside a level the true contributions w*m_o
differ by at most a factor 2*alpha^2, which keeps the variance in check.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hypergraph import PartiteTuple, as_fraction


@dataclass(frozen=True)
class WeightedEstimate:
    tuple: PartiteTuple
    w: Fraction
    e: Fraction

    def __post_init__(self):
        object.__setattr__(self, "w", as_fraction(self.w))
        object.__setattr__(self, "e", as_fraction(self.e))

    @property
    def level(self) -> int:
        x = self.w * self.e
        # exact ceil(log2 x) for a rational x >= 1
        k = max(0, (x.numerator // x.denominator).bit_length() - 1)
        while Fraction(2) ** k < x:
            k += 1
        return k


def level_quotas(pops, target: int) -> list:
    """Per-level sample sizes: an even share of ``target``, unused share passed on."""
    quota = [0] * len(pops)
    left = target
    order = sorted(range(len(pops)), key=lambda i: pops[i])
    for r, i in enumerate(order):
        share = left // (len(pops) - r)
        quota[i] = min(pops[i], share)
        left -= quota[i]
    return quota


def importance_sample(entries, lam: float, delta: float, alpha: float, M, target: int, rng) -> list:
    """Reduce ``entries`` to at most ``target`` entries, preserving the weighted sum in expectation."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if target < 1:
        raise ValueError("target must be >= 1")
    entries = list(entries)
    for x in entries:
        if x.w < 1 or x.e < 1:
            raise ValueError("weights and estimates must be >= 1")
    if len(entries) <= target:
        return entries
    levels = defaultdict(list)
    for i, x in enumerate(entries):
        levels[x.level].append(i)
    groups = [levels[lv] for lv in sorted(levels)]
    if len(groups) > target:
        # too many levels for one slot each: merge neighbours
        groups = [sum((groups[i] for i in part), [])
                  for part in np.array_split(np.arange(len(groups)), target)]
    keep = []
    for idx, quota in zip(groups, level_quotas([len(g) for g in groups], target)):
        if len(idx) <= quota:
            keep.extend((i, Fraction(1)) for i in idx)
            continue
        pick = np.sort(rng.choice(len(idx), size=quota, replace=False))
        scale = Fraction(len(idx), quota)
        keep.extend((idx[j], scale) for j in pick)
    keep.sort()
    out = []
    for i, scale in keep:
        x = entries[i]
        w = x.w * scale
        out.append(WeightedEstimate(x.tuple.with_weight(w), w, x.e))
    return out
