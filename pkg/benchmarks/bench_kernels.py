"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import random
import time

from commvar import kernels
from commvar.liealg import build_algebra, principal_triple
from commvar.varieties import _kernel_form, fiber_equations


def rank_inputs(seed=0):
    rng = random.Random(seed)
    p = 2147483629
    out = []
    for n in (60, 120, 240):
        m = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        out.append((f"rank {n}x{n} mod p", (m, p)))
    return out


def count_inputs():
    out = []
    for spec, q in (("A1", 31), ("A2", 3), ("A2", 5)):
        g = build_algebra(spec)
        xi = principal_triple(g)[0]
        eqs = [f.reduce(q) for f in fiber_equations(g, xi)]
        eqs = [f for f in eqs if f.terms]
        out.append((f"fiber count {spec} q={q}", (_kernel_form(eqs, g.dim), g.dim, q)))
    return out


def best_of(fn, args, repeat):
    best, val = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        val = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, val


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    found = kernels.backends()
    names = sorted(found)
    print(f"backends: {', '.join(names)} (default {kernels.BACKEND})")
    print(f"{'case':<24}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    cases = [("rank_mod_p", c) for c in rank_inputs()] + [("count_zeros", c) for c in count_inputs()]
    for fname, (label, fargs) in cases:
        times, vals = {}, set()
        for n in names:
            t, v = best_of(getattr(found[n], fname), fargs, args.repeat)
            times[n] = t
            vals.add(v)
        if len(vals) != 1:
            raise SystemExit(f"{label}: backends disagree {vals}")
        speed = times["python"] / times["cython"] if "cython" in times else 1.0
        print(f"{label:<24}" + "".join(f"{times[n]:>11.4f}s" for n in names) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
