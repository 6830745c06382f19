"""Compiled vs pure-Python modular kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--size 120]

Prints best-of-N wall times for each kernel and backend, and checks that both
backends return identical results on the same random inputs.
"""

import argparse
import random
import timeit

from diagkit import _kernels_py as py

try:
    from diagkit import _kernels as cy
except ImportError:
    cy = None

P = 2147483629


def _inputs(size, seed):
    rng = random.Random(seed)
    mat = [[rng.randrange(P) for _ in range(size + 8)] for _ in range(size)]
    a = [rng.randrange(P) for _ in range(4 * size)]
    b = [rng.randrange(P) for _ in range(4 * size)]
    return mat, a, b


def _cases(mod, mat, a, b):
    return {
        "rref_mod_p": lambda: mod.rref_mod_p(mat, P),
        "rank_mod_p": lambda: mod.rank_mod_p(mat, P),
        "conv_mod_p": lambda: mod.conv_mod_p(a, b, P, len(a) - 1),
    }


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=120)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    mat, a, b = _inputs(args.size, args.seed)
    backends = [("python", py)] + ([("cython", cy)] if cy else [])
    if cy is None:
        print("compiled extension not built; timing the Python fallback only")

    results = {}
    for name, mod in backends:
        for kernel, fn in _cases(mod, mat, a, b).items():
            t = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            results[(kernel, name)] = (t, fn())

    print("%-12s %12s %12s %9s" % ("kernel", "python (s)", "cython (s)", "speedup"))
    for kernel in ("rref_mod_p", "rank_mod_p", "conv_mod_p"):
        tp, rp = results[(kernel, "python")]
        if cy is None:
            print("%-12s %12.4f %12s %9s" % (kernel, tp, "-", "-"))
            continue
        tc, rc = results[(kernel, "cython")]
        same = "" if rp == rc else "  MISMATCH"
        print("%-12s %12.4f %12.4f %8.1fx%s" % (kernel, tp, tc, tp / tc, same))


if __name__ == "__main__":
    main()
