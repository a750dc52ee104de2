"""One sparsification step followed by coarse estimates of each child."""

import numpy as np

from hyperest import GeneratorSpec, OracleHandle, PartiteTuple, coarse_estimate, generate, sparsify
from hyperest.hypergraph import _assignment_counts

H = generate(GeneratorSpec("random", 128, 2, 1500, seed=2))
root = PartiteTuple.whole(128, 2)
children = sparsify(root, k=4, hash_seed=11, color_seed=12)
o = OracleHandle(H)
rng = np.random.default_rng(0)

total = 0
print(f"{len(children)} children of weight {children[0].weight}")
for c in children:
    m_o = int(_assignment_counts(H, c).sum())
    est = coarse_estimate(o, c, rng)
    total += c.weight * m_o
    print(f"  sizes {[len(s) for s in c.sets]}  m_o={m_o:5d}  coarse={float(est.estimate):9.1f}")
# coarse estimates are only good to a polylog factor: here the window is
# [m_o / 448, 1120 * m_o], so 4096 for m_o near 200 is a valid answer
print(f"weighted total {total} vs ordered count {2 * H.m}")
print("queries:", o.snapshot().to_dict())
