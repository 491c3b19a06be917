"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat R] [--seed S]

Times the weighted reachability score and the brute-force orientation sweep
on random mixed graphs with both backends, checks that they agree, and prints
the speedup.
"""

import argparse
import random
import sys
import timeit

from reachorient import kernels


def random_case(rng, n, m_edges, m_arcs):
    pair = lambda: tuple(rng.sample(range(n), 2))
    edges = [pair() for _ in range(m_edges)]
    arcs = [pair() for _ in range(m_arcs)]
    w = [rng.randint(0, 5) for _ in range(n)]
    return edges, arcs, w


def bench(label, fn, repeat):
    out = {}
    for name in ("python", "compiled"):
        kernels.use_backend(name)
        result = fn()
        t = min(timeit.repeat(fn, number=1, repeat=repeat))
        out[name] = (t, result)
    kernels.use_backend(None)
    (tp, rp), (tc, rc) = out["python"], out["compiled"]
    assert rp == rc, f"{label}: backends disagree ({rp} vs {rc})"
    print(f"{label:<34} python {tp * 1e3:9.2f} ms   compiled {tc * 1e3:8.2f} ms   x{tp / tc:6.1f}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    if "compiled" not in kernels.available():
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    rng = random.Random(args.seed)
    for n in (50, 200, 800):
        _, arcs, w = random_case(rng, n, 0, 3 * n)
        bench(f"score_arcs n={n} arcs={len(arcs)}", lambda: kernels.score_arcs(n, arcs, w), args.repeat)
    for n, m in ((8, 10), (10, 14), (12, 16)):
        edges, arcs, w = random_case(rng, n, m, 3)
        bench(f"brute_force n={n} edges={m}", lambda: kernels.brute_force_best(n, edges, arcs, w), args.repeat)
    return 0


if __name__ == "__main__":
    sys.exit(main())
