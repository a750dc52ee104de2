"""Command-line harness: generate | estimate | brute | sweep."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .engine import make_profile, run_estimator
from .hypergraph import (KINDS, GeneratorSpec, Hypergraph, HypergraphError, PartiteTuple,
                         brute_count, generate, read_hypergraph, write_hypergraph)
from .oracles import OracleHandle

SWEEP_HEADER = ["n", "d", "eps", "seed", "profile", "oracle_mode", "gpis", "gpis1", "gpis2",
                "estimate", "true_m", "rel_err", "wall_ms"]
BRUTE_BUDGET = 10 ** 8


@dataclass
class RunReport:
    n: int
    d: int
    eps: float
    profile: str
    oracle_mode: str
    seed: int
    estimate: float
    estimate_exact: str
    true_m: int | None
    rel_err: float | None
    queries: dict
    constants: dict
    brute_force: bool
    iterations: int
    trace: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    wall_ms: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))


def ground_truth(H: Hypergraph, budget: int = BRUTE_BUDGET) -> int | None:
    """Brute-force m(H) over U^[d], or None when C(n, d) exceeds the budget."""
    if math.comb(H.n, H.d) > budget:
        return None
    return brute_count(H, PartiteTuple.whole(H.n, H.d))


def make_oracle(H: Hypergraph, mode: str, seed: int) -> OracleHandle:
    sim = mode == "simulated"
    oseed = int(np.random.SeedSequence([int(seed), 0x0C]).generate_state(1)[0])
    return OracleHandle(H, oseed, simulate_gpis1=sim, simulate_gpis2=sim)


def run_once(H: Hypergraph, eps: float, profile: str, mode: str, seed: int,
             budget: int = BRUTE_BUDGET, overrides: dict | None = None) -> RunReport:
    prof = make_profile(profile, H.n, H.d, eps, **(overrides or {}))
    o = make_oracle(H, mode, seed)
    t0 = time.perf_counter()
    res = run_estimator(o, H.n, H.d, eps, prof, seed=seed)
    wall = (time.perf_counter() - t0) * 1000.0
    true_m = ground_truth(H, budget)
    rel = None
    if true_m:
        rel = float(abs(res.estimate - true_m) / true_m)
    q = o.snapshot()
    return RunReport(
        n=H.n, d=H.d, eps=eps, profile=profile, oracle_mode=mode, seed=seed,
        estimate=float(res.estimate), estimate_exact=str(res.estimate), true_m=true_m, rel_err=rel,
        queries={"gpis": q.gpis, "gpis1": q.gpis1, "gpis2": q.gpis2, "total": q.total},
        constants=prof.to_dict(), brute_force=res.brute_force, iterations=res.iterations,
        trace=res.trace, errors=res.errors, wall_ms=round(wall, 3),
    )


def _parse_overrides(items) -> dict:
    out = {}
    for item in items or []:
        key, _, val = item.partition("=")
        if not _:
            raise ValueError(f"expected key=value, got {item!r}")
        out[key] = int(val) if val.lstrip("-").isdigit() else float(val)
    return out


def _load(args) -> Hypergraph:
    if args.file:
        return read_hypergraph(args.file)
    if args.n is None or args.d is None:
        raise ValueError("give a hypergraph file or --n and --d generator flags")
    return generate(GeneratorSpec(args.kind, args.n, args.d, args.m, args.gen_seed,
                                  core=args.core, clique=args.clique))


def _pool_map(fn, jobs_args, jobs: int):
    if jobs <= 1:
        return [fn(*a) for a in jobs_args]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        futs = [ex.submit(fn, *a) for a in jobs_args]
        return [f.result() for f in futs]


# commands -------------------------------------------------------------------

def cmd_generate(args) -> int:
    H = generate(GeneratorSpec(args.kind, args.n, args.d, args.m, args.seed,
                               core=args.core, clique=args.clique))
    write_hypergraph(H, args.output)
    print(f"wrote {H} to {args.output}", file=sys.stderr)
    return 0


def cmd_estimate(args) -> int:
    H = _load(args)
    over = _parse_overrides(args.set)
    jobs = [(H, args.eps, args.profile, args.oracle_mode, args.seed + r, args.brute_budget, over)
            for r in range(args.repeat)]
    for rep in _pool_map(run_once, jobs, args.jobs):
        print(rep.to_json())
    return 0


def cmd_brute(args) -> int:
    H = read_hypergraph(args.file)
    print(brute_count(H, PartiteTuple.whole(H.n, H.d)))
    return 0


def sweep_rows(d: int, exps, eps_list, density: float, kind: str, repeat: int, seed: int,
               profile: str, mode: str, jobs: int = 1, budget: int = BRUTE_BUDGET) -> list:
    points = []
    for a in exps:
        n = 2 ** a
        m = min(int(density * n), math.comb(n, d))
        H = generate(GeneratorSpec(kind, n, d, m, seed))
        for eps in eps_list:
            for r in range(repeat):
                points.append((H, eps, profile, mode, seed + r, budget))
    rows = []
    for rep in _pool_map(run_once, points, jobs):
        rows.append({"n": rep.n, "d": rep.d, "eps": rep.eps, "seed": rep.seed, "profile": rep.profile,
                     "oracle_mode": rep.oracle_mode, "gpis": rep.queries["gpis"],
                     "gpis1": rep.queries["gpis1"], "gpis2": rep.queries["gpis2"],
                     "estimate": rep.estimate, "true_m": rep.true_m, "rel_err": rep.rel_err,
                     "wall_ms": rep.wall_ms})
    return rows


def growth_ratios(rows) -> list:
    """Per-doubling ratio of mean total queries, in increasing n."""
    by_n: dict = {}
    for r in rows:
        by_n.setdefault(int(r["n"]), []).append(int(r["gpis"]) + int(r["gpis1"]) + int(r["gpis2"]))
    ns = sorted(by_n)
    means = [float(np.mean(by_n[n])) for n in ns]
    return [(ns[i + 1], means[i + 1] / means[i]) for i in range(len(ns) - 1)]


def cmd_sweep(args) -> int:
    if args.n_max_exp < args.n_min_exp:
        raise ValueError("empty n range")
    rows = sweep_rows(args.d, range(args.n_min_exp, args.n_max_exp + 1), args.eps, args.density,
                      args.kind, args.repeat, args.seed, args.profile, args.oracle_mode, args.jobs,
                      args.brute_budget)
    w = csv.DictWriter(sys.stdout, fieldnames=SWEEP_HEADER, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if v is None else v) for k, v in r.items()})
    for n, ratio in growth_ratios(rows):
        flag = "ok" if ratio <= args.ceiling else "above ceiling"
        print(f"growth n={n}: x{ratio:.3f} ({flag})", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--profile", choices=["theoretical", "practical"], default="practical")
    common.add_argument("--oracle-mode", choices=["simulated", "direct"], default="direct")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--brute-budget", type=int, default=BRUTE_BUDGET)

    gen = argparse.ArgumentParser(add_help=False)
    gen.add_argument("--kind", choices=KINDS, default="random")
    gen.add_argument("--n", type=int)
    gen.add_argument("--d", type=int)
    gen.add_argument("--m", type=int, default=0)
    gen.add_argument("--core", type=int, default=1)
    gen.add_argument("--clique", type=int, default=0)

    p = argparse.ArgumentParser(prog="hyperest", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", parents=[gen], help="write a generated hypergraph")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("estimate", parents=[common, gen], help="estimate m(H), JSON report per run")
    e.add_argument("file", nargs="?")
    e.add_argument("--eps", type=float, default=0.1)
    e.add_argument("--repeat", type=int, default=1)
    e.add_argument("--gen-seed", type=int, default=0)
    e.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a profile constant")
    e.set_defaults(func=cmd_estimate)

    b = sub.add_parser("brute", help="exact m(H) by enumeration")
    b.add_argument("file")
    b.set_defaults(func=cmd_brute)

    s = sub.add_parser("sweep", parents=[common], help="query counts over n = 2^a..2^b, CSV")
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--n-min-exp", type=int, default=8)
    s.add_argument("--n-max-exp", type=int, default=10)
    s.add_argument("--eps", type=float, nargs="+", default=[0.2])
    s.add_argument("--density", type=float, default=4.0, help="m = density * n")
    s.add_argument("--kind", choices=["random", "sunflower"], default="random")
    s.add_argument("--repeat", type=int, default=1)
    s.add_argument("--ceiling", type=float, default=2.0)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HypergraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
