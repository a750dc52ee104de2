import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperest.exact import _children, exact_count_or_exceeds, node_budget
from hyperest.hypergraph import (GeneratorSpec, Hypergraph, PartiteTuple, brute_ordered_count,
                                 generate)
from hyperest.oracles import OracleHandle


def test_empty_family_costs_one_query():
    o = OracleHandle(Hypergraph(16, 2))
    res = exact_count_or_exceeds(o, PartiteTuple.whole(16, 2), 5)
    assert res.count == 0 and o.snapshot().gpis1 == 1


def test_single_edge_under_multiplicity_three():
    o = OracleHandle(Hypergraph(8, 3, [(0, 1, 2)]))
    assert exact_count_or_exceeds(o, PartiteTuple.whole(8, 3), 10).count == 6


def test_planted_clique_exceeds():
    H = generate(GeneratorSpec("clique", 16, 2, clique=6))
    res = exact_count_or_exceeds(OracleHandle(H), PartiteTuple.whole(16, 2), 10)
    assert res.exceeds
    assert repr(res) == "ExceedsThreshold"


def test_exact_never_above_tau():
    H = generate(GeneratorSpec("random", 20, 2, 30, 1))
    for tau in range(1, 80, 7):
        res = exact_count_or_exceeds(OracleHandle(H), PartiteTuple.whole(20, 2), tau)
        assert res.exceeds == (60 > tau)
        if not res.exceeds:
            assert res.count == 60


def test_tau_must_be_positive():
    with pytest.raises(ValueError):
        exact_count_or_exceeds(OracleHandle(Hypergraph(4, 2)), PartiteTuple.whole(4, 2), 0)


def test_children_halve_blocks():
    lo = np.array([[0, 3]])
    hi = np.array([[5, 4]])
    clo, chi = _children(lo, hi)
    assert len(clo) == 4
    assert sorted(map(tuple, (chi - clo)[:, 0:1].tolist())) == [(2,), (2,), (3,), (3,)]
    # slot 0: [0,3) and [3,5); slot 1: [3,4) and [4,4)
    assert {(a, b) for a, b in zip(clo[:, 0], chi[:, 0])} == {(0, 3), (3, 5)}


def test_depth_bounded():
    H = generate(GeneratorSpec("random", 32, 3, 40, 2))
    res = exact_count_or_exceeds(OracleHandle(H), PartiteTuple.whole(32, 3), 10**6)
    assert res.depth <= math.ceil(math.log2(32)) + 1


def test_general_input_is_compacted():
    H = generate(GeneratorSpec("random", 12, 2, 20, 3))
    t = PartiteTuple.general([range(6), range(6)])
    assert exact_count_or_exceeds(OracleHandle(H), t, 1000).count == brute_ordered_count(H, t)


def test_simulated_mode_never_overcounts():
    H = generate(GeneratorSpec("random", 16, 3, 25, 4))
    t = PartiteTuple.whole(16, 3)
    o = OracleHandle(H, seed=1, simulate_gpis1=True, gpis1_reps=60)
    res = exact_count_or_exceeds(o, t, 10**5)
    assert res.count <= brute_ordered_count(H, t)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 3), st.integers(4, 24), st.integers(0, 10**6), st.data())
def test_exact_matches_brute_force(d, n, seed, data):
    m = data.draw(st.integers(0, min(math.comb(n, d), 50)))
    H = generate(GeneratorSpec("random", n, d, m, seed))
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 3, size=n)
    groups = [np.nonzero(labels == j)[0] for j in range(3)]
    mults = data.draw(st.sampled_from([(d,), (d - 1, 1), (1,) * d]))
    t = PartiteTuple(tuple(groups[:len(mults)]), mults)
    mo = brute_ordered_count(H, t)
    tau = max(1, 10 * mo)
    o = OracleHandle(H)
    res = exact_count_or_exceeds(o, t, tau)
    assert res.count == mo
    assert o.snapshot().gpis1 <= 2 ** (d + 2) * tau * (math.ceil(math.log2(n)) + 1)
    assert res.nodes <= node_budget(d, n, tau)
