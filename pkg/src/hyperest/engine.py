"""The estimation loop.

State is an accumulator psi (ordered-edge units) plus a list of weighted
tuples, starting from U^[d] with weight 1.  Each iteration:

1. counts every tuple exactly if it holds at most tau ordered edges
   (psi += w * count, tuple dropped);
2. stops if nothing is left;
3. otherwise sparsifies every tuple if there are at most N of them, or
   coarse-estimates each tuple and importance-samples down to N.

The answer is psi / d!.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .coarse import coarse_estimate, practical_gamma, theoretical_gamma
from .exact import exact_count_or_exceeds
from .hypergraph import Hypergraph, PartiteTuple, _assignment_counts
from .importance import WeightedEstimate, importance_sample
from .oracles import OracleHandle, default_gpis1_reps
from .sparsify import sparsify

PHASES = {"exact": 1, "sparsify": 2, "coarse": 3, "sample": 4}


@dataclass(frozen=True)
class ConstantsProfile:
    mode: str
    n: int
    d: int
    eps: float
    k: int
    theta: float
    tau: int
    N: int
    gamma: int
    lam: float
    alpha: float
    delta: float
    kappa: float
    gpis1_reps: int
    brute_force: bool
    max_iterations: int

    @classmethod
    def theoretical(cls, n: int, d: int, eps: float, **overrides) -> "ConstantsProfile":
        _check_eps(eps)
        lg = math.log2(max(n, 2))
        k, theta, kappa = overrides.pop("k", 4), overrides.pop("theta", 2 * d), overrides.pop("kappa", 1.0)
        tau = k ** 2 * 4 ** (2 * d) * theta ** (2 * d) * 16 * d * d * math.factorial(d) * lg ** (d + 2) / eps ** 2
        base = dict(
            mode="theoretical", n=n, d=d, eps=eps, k=k, theta=theta, kappa=kappa,
            tau=math.ceil(tau),
            N=math.ceil(kappa * lg ** (4 * d) / eps ** 2),
            gamma=theoretical_gamma(n, d),
            lam=eps / (4 * d * lg),
            alpha=20 * 2 ** d * d ** (d - 1) * lg ** (d - 1),
            delta=float(n) ** (-6 * d),
            gpis1_reps=default_gpis1_reps(n, d),
            brute_force=eps <= (n ** (-d) * lg ** (5 * d + 5)) ** 0.25,
            max_iterations=_iteration_cap(n, d),
        )
        base.update(overrides)
        return cls(**base)

    @classmethod
    def practical(cls, n: int, d: int, eps: float, **overrides) -> "ConstantsProfile":
        _check_eps(eps)
        lg = math.log2(max(n, 2))
        tau = math.ceil(16 * lg ** 2 / eps ** 2)
        base = dict(
            mode="practical", n=n, d=d, eps=eps, k=4, theta=2 * d, kappa=1.0,
            tau=tau,
            N=math.ceil(8 * lg ** 2 / eps ** 2),
            gamma=practical_gamma(n),
            lam=eps / (4 * d * lg),
            alpha=20 * 2 ** d * d ** (d - 1) * lg ** (d - 1),
            delta=1e-3,
            gpis1_reps=default_gpis1_reps(n, d),
            max_iterations=_iteration_cap(n, d),
        )
        base.update(overrides)
        base.setdefault("brute_force", n ** d <= base["tau"])
        return cls(**base)

    def to_dict(self) -> dict:
        return {f: getattr(self, f) for f in self.__dataclass_fields__}


def make_profile(name: str, n: int, d: int, eps: float, **overrides) -> ConstantsProfile:
    if name == "theoretical":
        return ConstantsProfile.theoretical(n, d, eps, **overrides)
    if name == "practical":
        return ConstantsProfile.practical(n, d, eps, **overrides)
    raise ValueError(f"unknown profile {name!r}")


def _check_eps(eps):
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")


def _iteration_cap(n: int, d: int) -> int:
    return 4 * (2 * d * math.ceil(math.log2(max(n, 2))) + 2)


def iteration_bound(n: int, d: int) -> float:
    return 2 * d * math.log2(max(n, 2)) + 2


def substream(seed: int, phase: str, iteration: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), PHASES[phase], iteration, index]))


def _subseed(seed: int, phase: str, iteration: int, index: int, which: int) -> int:
    ss = np.random.SeedSequence([int(seed), PHASES[phase], iteration, index, which])
    return int(ss.generate_state(2, dtype=np.uint64)[0] >> np.uint64(1))


@dataclass
class EstimatorState:
    psi: Fraction = Fraction(0)
    tuples: list = field(default_factory=list)
    iteration: int = 0
    trace: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @classmethod
    def initial(cls, n: int, d: int) -> "EstimatorState":
        return cls(tuples=[PartiteTuple.whole(n, d)])


@dataclass
class EstimateResult:
    estimate: Fraction
    psi: Fraction
    iterations: int
    brute_force: bool
    profile: ConstantsProfile
    trace: list
    errors: list


def _delta(o: OracleHandle, before) -> dict:
    diff = o.snapshot() - before
    return {"gpis": diff.gpis, "gpis1": diff.gpis1, "gpis2": diff.gpis2}


def run_exact_phase(state: EstimatorState, o: OracleHandle, tau: int) -> EstimatorState:
    keep = []
    for t in state.tuples:
        res = exact_count_or_exceeds(o, t, tau)
        if res.exceeds:
            keep.append(t)
        else:
            state.psi += t.weight * res.count
    state.tuples = keep
    return state


def run_sparsify_phase(state: EstimatorState, k: int, seed: int = 0) -> EstimatorState:
    out = []
    for idx, t in enumerate(state.tuples):
        hs = _subseed(seed, "sparsify", state.iteration, idx, 0)
        cs = _subseed(seed, "sparsify", state.iteration, idx, 1)
        out.extend(sparsify(t, k, hs, cs))
    state.tuples = out
    return state


def run_coarse_phase(state: EstimatorState, o: OracleHandle, profile: ConstantsProfile,
                     seed: int = 0) -> EstimatorState:
    entries = []
    for idx, t in enumerate(state.tuples):
        g = t.to_general() if t.compact else t
        res = coarse_estimate(o, g, substream(seed, "coarse", state.iteration, idx), profile.gamma)
        if res.failed:
            res = coarse_estimate(o, g, substream(seed, "coarse", state.iteration, idx + (1 << 20)),
                                  profile.gamma)
            if res.failed:
                state.errors.append({"iteration": state.iteration, "tuple": idx,
                                     "error": "coarse estimate returned 0 twice"})
        entries.append(WeightedEstimate(t, t.weight, max(res.estimate, Fraction(1))))
    M = Fraction(profile.n) ** profile.d * max((t.weight for t in state.tuples), default=1)
    kept = importance_sample(entries, profile.lam, profile.delta, profile.alpha, M, profile.N,
                             substream(seed, "sample", state.iteration, 0))
    state.tuples = [x.tuple for x in kept]
    return state


def audit_state(state: EstimatorState, H: Hypergraph) -> tuple:
    """(EST, ACT): psi plus the weighted ordered count still held, and the unweighted count."""
    act = 0
    est = state.psi
    for t in state.tuples:
        c = int(_assignment_counts(H, t).sum())
        act += c
        est += t.weight * c
    return est, act


def brute_force_count(o: OracleHandle, chunk: int = 1 << 20) -> int:
    """m(H) by one GPIS query per increasing d-tuple of singletons."""
    n, d = o.n, o.d
    root = [np.arange(n, dtype=np.int64)]
    slot_root = np.zeros(d, dtype=np.int64)
    combos = itertools.combinations(range(n), d)
    total = 0
    while True:
        block = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, chunk)),
                            dtype=np.int64).reshape(-1, d)
        if not len(block):
            return total
        total += int(o.gpis_blocks(root, slot_root, block, block + 1).sum())


def run_estimator(o: OracleHandle, n: int, d: int, eps: float, profile: ConstantsProfile | None = None,
                  seed: int = 0, observer: Callable | None = None) -> EstimateResult:
    _check_eps(eps)
    if (n, d) != (o.n, o.d):
        raise ValueError("n and d must match the oracle")
    profile = profile or ConstantsProfile.practical(n, d, eps)
    state = EstimatorState.initial(n, d)
    if profile.brute_force:
        before = o.snapshot()
        m = brute_force_count(o)
        state.psi = Fraction(m * math.factorial(d))
        state.tuples = []
        state.trace.append({"iteration": 0, "phase": "brute", "tuples": 0, "psi": str(state.psi),
                            "queries": _delta(o, before)})
        return EstimateResult(Fraction(m), state.psi, 0, True, profile, state.trace, state.errors)
    if observer:
        observer(state)
    while True:
        if state.iteration >= profile.max_iterations:
            state.errors.append({"iteration": state.iteration, "error": "iteration cap reached"})
            break
        before = o.snapshot()
        n_in = len(state.tuples)
        run_exact_phase(state, o, profile.tau)
        rec = {"iteration": state.iteration + 1, "tuples_in": n_in,
               "tuples_after_exact": len(state.tuples), "exact_queries": _delta(o, before)}
        if not state.tuples:
            phase = "done"
        elif len(state.tuples) <= profile.N:
            phase = "sparsify"
            mid = o.snapshot()
            run_sparsify_phase(state, profile.k, seed)
            rec["phase_queries"] = _delta(o, mid)
        else:
            phase = "coarse"
            mid = o.snapshot()
            run_coarse_phase(state, o, profile, seed)
            rec["phase_queries"] = _delta(o, mid)
        state.iteration += 1
        rec.update(phase=phase, tuples=len(state.tuples), psi=str(state.psi), queries=_delta(o, before))
        state.trace.append(rec)
        if observer:
            observer(state)
        if phase == "done":
            break
    return EstimateResult(state.psi / math.factorial(d), state.psi, state.iteration, False, profile,
                          state.trace, state.errors)


def estimate_hyperedges(o: OracleHandle, n: int, d: int, eps: float,
                        profile: ConstantsProfile | None = None, seed: int = 0) -> Fraction:
    return run_estimator(o, n, d, eps, profile, seed).estimate
