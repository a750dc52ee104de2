import itertools

import numpy as np
import pytest

from hyperest.hypergraph import Hypergraph


def slow_count(H: Hypergraph, slots) -> int:
    """Second enumerator: edges with some bijection onto the slots (pure python)."""
    slots = [set(int(v) for v in s) for s in slots]
    hits = 0
    for e in H.edges.tolist():
        if any(all(v in slots[k] for v, k in zip(p, range(len(slots))))
               for p in itertools.permutations(e)):
            hits += 1
    return hits


def slow_ordered(H: Hypergraph, slots) -> int:
    slots = [set(int(v) for v in s) for s in slots]
    return sum(
        all(v in slots[k] for k, v in enumerate(p))
        for e in H.edges.tolist()
        for p in itertools.permutations(e)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
