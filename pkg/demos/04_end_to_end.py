"""Full estimator runs with a trace of the phases."""

from hyperest import ConstantsProfile, GeneratorSpec, OracleHandle, generate, run_estimator

H = generate(GeneratorSpec("random", 512, 2, 6000, seed=3))

# default practical constants: the whole root fits under tau, so it is counted exactly
res = run_estimator(OracleHandle(H), H.n, H.d, 0.1, seed=1)
print(f"default profile: estimate {float(res.estimate):.0f} (true {H.m}), {res.iterations} iterations")

# shrink tau and N to force sparsify and coarse phases
prof = ConstantsProfile.practical(H.n, H.d, 0.1, tau=200, N=8)
o = OracleHandle(H)
res = run_estimator(o, H.n, H.d, 0.1, prof, seed=1)
for r in res.trace:
    print(f"  iter {r['iteration']}: {r['phase']:8s} tuples={r['tuples']:4d} psi={r['psi']}")
est = float(res.estimate)
print(f"small tau: estimate {est:.0f} (true {H.m}, rel err {abs(est - H.m) / H.m:.3f})")
print("queries:", o.snapshot().to_dict())
