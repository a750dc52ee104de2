import math
from fractions import Fraction

import numpy as np
import pytest

from hyperest.coarse import (coarse_estimate, guess_vectors, coarse_window, probabilities,
                             practical_gamma, theoretical_gamma, verify_estimate, verify_trials)
from hyperest.hypergraph import GeneratorSpec, Hypergraph, PartiteTuple, brute_ordered_count, generate
from hyperest.oracles import OracleHandle


def test_guess_vectors_count_down():
    js = guess_vectors(16, 3)
    assert len(js) == (3 * 4 + 1) ** 2
    assert js[0] == (12, 12) and js[-1] == (0, 0)


def test_probabilities():
    p = probabilities((3,), 32, 16, 2)
    assert p.tolist() == [8 / 32, 1 / 8]
    p = probabilities((2, 5), 1, 16, 3)
    assert p[0] == 1.0 and p[1] == 1.0 and p[2] == 1 / 32
    assert np.all(p > 0) and np.all(p <= 1)


def test_gamma_values():
    assert theoretical_gamma(8, 2) == 2 * 16 * 2000 * 3
    assert practical_gamma(1024) == 400


def test_zero_soundness():
    o = OracleHandle(Hypergraph(16, 2))
    t = PartiteTuple.whole(16, 2).to_general()
    rng = np.random.default_rng(0)
    assert not any(verify_estimate(o, t, 1, rng) for _ in range(50))
    res = coarse_estimate(o, t, rng)
    assert res.estimate == 0 and res.failed


def test_verify_rejects_bad_guess():
    o = OracleHandle(Hypergraph(8, 2, [(0, 1)]))
    with pytest.raises(ValueError):
        verify_estimate(o, PartiteTuple.whole(8, 2).to_general(), 0, np.random.default_rng(0))


def test_query_budget():
    H = generate(GeneratorSpec("clique", 32, 2, clique=10))
    o = OracleHandle(H)
    gamma = 50
    coarse_estimate(o, PartiteTuple.whole(32, 2).to_general(), np.random.default_rng(1), gamma)
    L = 2 * 5 + 1
    assert o.snapshot().gpis2 <= L * gamma * L


def test_estimate_formula_and_reproducible():
    H = generate(GeneratorSpec("clique", 64, 2, clique=16))
    t = PartiteTuple.whole(64, 2).to_general()
    a = coarse_estimate(OracleHandle(H), t, np.random.default_rng(4))
    b = coarse_estimate(OracleHandle(H), t, np.random.default_rng(4))
    assert a == b
    assert a.estimate == Fraction(a.accepted_r, 4)


def test_window_practical_gamma():
    H = generate(GeneratorSpec("clique", 64, 2, clique=16))
    t = PartiteTuple.whole(64, 2).to_general()
    mo = brute_ordered_count(H, t)
    assert mo == 240
    lo, hi = coarse_window(mo, 64, 2)
    inside = sum(lo <= coarse_estimate(OracleHandle(H), t, np.random.default_rng(s)).estimate <= hi
                 for s in range(100))
    assert inside >= 99


def test_d1_counts_directly():
    rng = np.random.default_rng(0)
    for s in range(50):
        n = int(rng.integers(2, 30))
        H = generate(GeneratorSpec("random", n, 1, int(rng.integers(0, n + 1)), s))
        t = PartiteTuple.whole(n, 1).to_general()
        est = coarse_estimate(OracleHandle(H), t, rng).estimate
        mo = H.m
        assert est == mo
        assert (mo == 0 and est == 0) or mo / 2 <= est <= 2 * mo


def test_low_guess_accept_frequency():
    H = generate(GeneratorSpec("clique", 16, 2, clique=8))
    t = PartiteTuple.whole(16, 2).to_general()
    mo = brute_ordered_count(H, t)
    R = mo / (4 * 2 * math.log2(16))
    assert R >= 1
    hits = verify_trials(OracleHandle(H), t, 1, 1000, np.random.default_rng(0))
    assert hits / 1000 >= 1 / 4 - 0.02
