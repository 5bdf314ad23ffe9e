"""Compare the compiled and numpy kernel backends.

Times each kernel on a large synthetic problem and then the whole pipeline
with every kernel swapped to one backend. Results are checked for agreement
before timing.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--dms 600]
"""
import argparse
import time

import numpy as np

from lingdist import kernels, magdm
from lingdist.linguistic import LinguisticScale
from lingdist.magdm import DecisionMaker, DecisionProblem, KnownWeights
from lingdist.multigranular import _split_table


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def synthetic_problem(rng, q, n, m):
    scales = (LinguisticScale(5), LinguisticScale(7), LinguisticScale(9))
    dms = tuple(DecisionMaker(f"d{l}", l % 3) for l in range(q))
    alts = tuple(f"A{i}" for i in range(n))
    attrs = tuple(f"C{j}" for j in range(m))
    terms = {
        (d.id, a, c): int(rng.integers(scales[d.scale].granularity))
        for d in dms for a in alts for c in attrs
    }
    return DecisionProblem(alts, attrs, scales, dms, assessments=terms,
                           weight_mode=KnownWeights(tuple(np.full(m, 1 / m))))


def use_backend(mod):
    kernels.fuse_counts = mod.fuse_counts
    kernels.deviation_sums = mod.deviation_sums
    kernels.rebin = mod.rebin


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--dms", type=int, default=600, help="decision makers")
    ap.add_argument("--alternatives", type=int, default=40)
    ap.add_argument("--attributes", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = dict(kernels.BACKENDS)
    if len(backends) < 2:
        print("compiled backend not built; only the numpy fallback is available")
    rng = np.random.default_rng(args.seed)
    q, n, m, g = args.dms, args.alternatives, args.attributes, 9

    choices = rng.integers(0, g, (q, n, m))
    weights = rng.random(q) + 0.01
    expect = rng.random((4 * n, 4 * m)) * 24
    lower, theta = _split_table(25, g)
    rows = rng.dirichlet(np.full(25, 0.5), size=n * m * 20)

    cases = {
        f"fuse_counts q={q} n={n} m={m}": lambda k: k.fuse_counts(choices, weights, g),
        f"deviation_sums {expect.shape[0]}x{expect.shape[1]}": lambda k: k.deviation_sums(expect),
        f"rebin {rows.shape[0]} rows 25->9": lambda k: k.rebin(rows, lower, theta, g),
    }
    names = sorted(backends)
    print(f"{'kernel':<36}" + "".join(f"{b:>12}" for b in names) + f"{'speedup':>10}")
    for label, fn in cases.items():
        ref = fn(backends["python"])
        for b in names:
            np.testing.assert_allclose(fn(backends[b]), ref, atol=1e-10)
        t = {b: best_of(lambda: fn(backends[b]), args.repeat) for b in names}
        speed = t["python"] / t["cython"] if "cython" in t else float("nan")
        print(f"{label:<36}" + "".join(f"{t[b] * 1e3:>10.2f}ms" for b in names) + f"{speed:>9.1f}x")

    prob = synthetic_problem(rng, q, n, m)
    saved = (kernels.fuse_counts, kernels.deviation_sums, kernels.rebin)
    t = {}
    try:
        for b in names:
            use_backend(backends[b])
            t[b] = best_of(lambda: magdm.solve(prob), max(1, args.repeat // 2))
    finally:
        kernels.fuse_counts, kernels.deviation_sums, kernels.rebin = saved
    speed = t["python"] / t["cython"] if "cython" in t else float("nan")
    label = f"solve (end to end, {q} dms)"
    print(f"{label:<36}" + "".join(f"{t[b] * 1e3:>10.2f}ms" for b in names) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
