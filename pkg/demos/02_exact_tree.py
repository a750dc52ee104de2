"""Exact counting by recursive splitting, and the threshold exit."""

from hyperest import (GeneratorSpec, OracleHandle, PartiteTuple, brute_ordered_count,
                      exact_count_or_exceeds, generate)

H = generate(GeneratorSpec("random", 64, 2, 120, seed=4))
t = PartiteTuple.whole(64, 2)
m_o = brute_ordered_count(H, t)
print(f"m = {H.m}, ordered count m_o = {m_o}")

for tau in (10 * m_o, m_o, m_o - 1, 20):
    o = OracleHandle(H)
    res = exact_count_or_exceeds(o, t, tau)
    print(f"tau={tau:5d}: {res!r:20s} nodes={res.nodes:5d} gpis1 queries={o.snapshot().gpis1}")
