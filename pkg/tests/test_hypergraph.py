import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperest.hypergraph import (GeneratorSpec, Hypergraph, HypergraphError, PartiteTuple,
                                 brute_count, brute_ordered_count, generate, ordered_count,
                                 read_hypergraph, write_hypergraph)

from conftest import slow_count, slow_ordered


def test_edges_are_canonical():
    H = Hypergraph(6, 3, [(4, 1, 2), (0, 5, 3)])
    assert H.edges.tolist() == [[0, 3, 5], [1, 2, 4]]
    assert H == Hypergraph(6, 3, [(0, 3, 5), (1, 2, 4)])
    assert not H.edges.flags.writeable


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 9)], [(0, 1, 2)]])
def test_bad_edges_rejected(edges):
    with pytest.raises(HypergraphError):
        Hypergraph(4, 2, edges)


def test_brute_count_basics():
    assert brute_count(Hypergraph(5, 3), PartiteTuple.general([[0], [1], [2]])) == 0
    H = Hypergraph(5, 3, [(0, 1, 2)])
    assert brute_count(H, PartiteTuple.general([[0], [1], [2]])) == 1
    assert brute_count(H, PartiteTuple.general([[0], [1], [3]])) == 0


def test_brute_count_matches_second_enumerator():
    H = generate(GeneratorSpec("random", 10, 3, 20, 7))
    slots = [range(0, 5), range(5, 8), range(8, 10)]
    t = PartiteTuple.general([list(s) for s in slots])
    assert brute_count(H, t) == slow_count(H, slots)


def test_range_check():
    H = Hypergraph(4, 2, [(0, 1)])
    with pytest.raises(HypergraphError):
        brute_count(H, PartiteTuple.general([[0], [7]]))
    with pytest.raises(HypergraphError):
        brute_count(H, PartiteTuple.general([[0], [1], [2]]))


@pytest.mark.parametrize("m,mults,expected", [(2, (3,), 12), (5, (1, 1, 1), 5), (3, (2, 2), 12)])
def test_ordered_count(m, mults, expected):
    assert ordered_count(m, mults) == expected


def test_ordered_count_rejects_bad_multiplicity():
    with pytest.raises(HypergraphError):
        ordered_count(1, (0, 2))


def test_singleton_tuples_detect_edges_exhaustively():
    H = generate(GeneratorSpec("random", 7, 3, 12, 2))
    edges = H.edge_set()
    for vs in itertools.permutations(range(7), 3):
        t = PartiteTuple.general([[v] for v in vs])
        assert brute_count(H, t) == (tuple(sorted(vs)) in edges)


def test_ordered_count_of_compact_tuple():
    H = generate(GeneratorSpec("random", 8, 3, 15, 4))
    t = PartiteTuple(([0, 1, 2, 3, 4], [5, 6, 7]), (2, 1))
    assert brute_ordered_count(H, t) == ordered_count(brute_count(H, t), t.mults)
    assert brute_ordered_count(H, t) == slow_ordered(H, t.slots())


def test_whole_tuple_counts_d_factorial_m():
    H = generate(GeneratorSpec("random", 9, 3, 30, 5))
    assert brute_ordered_count(H, PartiteTuple.whole(9, 3)) == 6 * 30


def test_partite_tuple_validation():
    with pytest.raises(HypergraphError):
        PartiteTuple(([0, 1], [1, 2]), (1, 1))
    with pytest.raises(HypergraphError):
        PartiteTuple(([0, 1],), (2,), weight=Fraction(1, 2))
    t = PartiteTuple.general([[0, 1], [0, 1], [5]], weight=3)
    c = t.to_compact()
    assert c.mults == (2, 1) and c.weight == 3
    assert c.to_general() == t


def test_generators():
    assert generate(GeneratorSpec("empty", 16, 3)).m == 0
    assert generate(GeneratorSpec("clique", 20, 3, clique=6)).m == math.comb(6, 3)
    a = generate(GeneratorSpec("random", 10, 2, 5, 1))
    assert a == generate(GeneratorSpec("random", 10, 2, 5, 1)) and a.m == 5
    s = generate(GeneratorSpec("sunflower", 30, 3, 40, 2, core=1))
    core = set.intersection(*(set(e) for e in s.edges.tolist()))
    assert s.m == 40 and len(core) >= 1
    with pytest.raises(HypergraphError):
        generate(GeneratorSpec("random", 5, 2, 11, 0))


def test_large_sparse_generation_is_cheap():
    H = generate(GeneratorSpec("random", 8192, 2, 4 * 8192, 3))
    assert H.m == 4 * 8192


def test_file_roundtrip(tmp_path):
    H = generate(GeneratorSpec("random", 12, 3, 25, 9))
    p = tmp_path / "h.txt"
    write_hypergraph(H, p)
    assert read_hypergraph(p) == H
    assert p.read_text().splitlines()[0] == "12 3 25"


def test_file_small(tmp_path):
    p = tmp_path / "h.txt"
    p.write_text("4 2 1\n0 1\n")
    assert read_hypergraph(p) == Hypergraph(4, 2, [(0, 1)])


@pytest.mark.parametrize("body", ["4 2 1\n0 0\n", "4 2 1\n0 1 2\n", "4 2\n", "4 2 2\n0 1\n0 1\n",
                                  "4 2 1\n0 9\n"])
def test_file_errors(tmp_path, body):
    p = tmp_path / "bad.txt"
    p.write_text(body)
    with pytest.raises(HypergraphError):
        read_hypergraph(p)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 8), st.integers(1, 3), st.integers(0, 10**6), st.data())
def test_ordered_identity_property(n, d, seed, data):
    m = data.draw(st.integers(0, math.comb(n, d)))
    H = generate(GeneratorSpec("random", n, d, m, seed))
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 3, size=n)
    sets = [np.nonzero(labels == j)[0] for j in range(3)]
    mults = data.draw(st.sampled_from([c for c in itertools.product(range(4), repeat=3) if sum(c) == d]))
    keep = [(s, a) for s, a in zip(sets, mults) if a > 0]
    t = PartiteTuple(tuple(s for s, _ in keep), tuple(a for _, a in keep))
    assert brute_ordered_count(H, t) == ordered_count(brute_count(H, t), t.mults)
    assert brute_ordered_count(H, t) == slow_ordered(H, t.slots())
