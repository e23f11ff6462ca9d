"""Compare the compiled and pure-Python scalar multiplication kernels.

    python3 benchmarks/bench_ec.py [--reps N]
"""

import argparse
import random
import timeit

from rde import _ecpy
from rde.group import BRAINPOOL_P256R1, BRAINPOOL_P320R1

try:
    from rde import _ecfast
except ImportError:
    _ecfast = None


def bench(kernel, params, scalars, reps):
    G = params.G
    def run():
        for k in scalars:
            kernel.mul(k, G.x, G.y, params.p, params.a)
    return min(timeit.repeat(run, number=1, repeat=reps)) / len(scalars)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--count", type=int, default=50)
    args = ap.parse_args()
    rng = random.Random(1)
    kernels = [_ecpy] + ([_ecfast] if _ecfast is not None else [])
    if _ecfast is None:
        print("compiled kernel not built; showing the Python kernel only")
    for params in (BRAINPOOL_P256R1, BRAINPOOL_P320R1):
        scalars = [rng.randrange(1, params.q) for _ in range(args.count)]
        ref = [_ecpy.mul(k, params.G.x, params.G.y, params.p, params.a) for k in scalars[:5]]
        times = {}
        for kernel in kernels:
            assert [kernel.mul(k, params.G.x, params.G.y, params.p, params.a) for k in scalars[:5]] == ref
            times[kernel.NAME] = bench(kernel, params, scalars, args.reps)
        line = "  ".join(f"{name}: {t * 1e3:7.3f} ms" for name, t in times.items())
        if len(times) == 2:
            line += f"  speedup x{times['python'] / times[_ecfast.NAME]:.1f}"
        print(f"{params.curve_id.short_name}  {line}")


if __name__ == "__main__":
    main()
