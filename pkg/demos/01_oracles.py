"""The three subset-query oracles on a tiny hypergraph, direct and simulated."""

from hyperest import Hypergraph, OracleHandle

H = Hypergraph(6, 3, [(0, 1, 2), (1, 3, 5), (2, 4, 5)])
direct = OracleHandle(H)
simulated = OracleHandle(H, seed=1, simulate_gpis1=True, simulate_gpis2=True)

print("GPIS  {0,1} x {2,3} x {4,5}  ->", direct.gpis([[0, 1], [2, 3], [4, 5]]))
print("GPIS  {0} x {1} x {2}        ->", direct.gpis([[0], [1], [2]]))

# compact form: {0,1,2} used three times, i.e. is there an edge inside {0,1,2}?
print("GPIS1 {0,1,2}^[3]            ->", direct.gpis1([[0, 1, 2]], [3]))
print("GPIS1 {0,1,3,4}^[3]          ->", direct.gpis1([[0, 1, 3, 4]], [3]))

# general form: slots may overlap
sets = [[1, 2], [2, 3, 4], [4, 5]]
print("GPIS2 overlapping slots      ->", direct.gpis2(sets), "(simulated:", simulated.gpis2(sets), ")")

print("direct queries:   ", direct.snapshot().to_dict())
print("simulated queries:", simulated.snapshot().to_dict())
