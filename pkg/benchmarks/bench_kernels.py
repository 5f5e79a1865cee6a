"""Compare the compiled and pure-Python finite-field kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times raw powmod on residue fields of the sizes the ray class oracle
builds, then a full oracle run under each backend (the second in a
subprocess with TAMELAMBDA_PURE=1).
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from tamelambda import _kernels_py
from tamelambda.ffield import make_cyclotomic_ctx

try:
    from tamelambda import _kernels
except ImportError:
    _kernels = None

CASES = [(7, 3, 2), (61, 3, 2), (7, 3, 3), (61, 3, 3), (17, 2, 4), (11, 5, 2)]

ORACLE_SNIPPET = (
    "import time; from tamelambda.ray_class import ray_class_group; "
    "t=time.perf_counter(); "
    "[ray_class_group(3, [l], n) for l in (7, 13, 31, 43, 61) for n in range(4)]; "
    "[ray_class_group(3, [7, 13], n) for n in range(4)]; "
    "print(time.perf_counter()-t)"
)


def bench_powmod(repeat: int) -> None:
    print(f"{'field':<16}{'d':>4}  {'python ms':>10}  {'cython ms':>10}  {'speedup':>8}")
    for ell, p, n in CASES:
        ctx = make_cyclotomic_ctx(ell, p, n)
        rng = random.Random(ell * 1000 + n)
        a = [rng.randrange(ell) for _ in range(ctx.d)]
        mod = list(ctx.modulus)
        e = ctx.q - 2
        py = min(timeit.repeat(lambda: _kernels_py.powmod(a, e, mod, ell),
                               number=1, repeat=repeat))
        label = f"F_{ell}^{ctx.d}"
        if _kernels is None:
            print(f"{label:<16}{ctx.d:>4}  {py * 1e3:>10.2f}  {'n/a':>10}")
            continue
        if _kernels.powmod(a, e, mod, ell) != _kernels_py.powmod(a, e, mod, ell):
            raise SystemExit(f"backends disagree on {label}")
        cy = min(timeit.repeat(lambda: _kernels.powmod(a, e, mod, ell),
                               number=1, repeat=repeat))
        print(f"{label:<16}{ctx.d:>4}  {py * 1e3:>10.2f}  {cy * 1e3:>10.2f}  {py / cy:>7.1f}x")


def bench_oracle() -> None:
    for pure in ("0", "1"):
        env = dict(os.environ, TAMELAMBDA_PURE=pure)
        out = subprocess.run([sys.executable, "-c", ORACLE_SNIPPET], env=env,
                             capture_output=True, text=True, check=True)
        name = "python" if pure == "1" else "default"
        print(f"ray class oracle, {name} backend: {float(out.stdout):.3f} s")


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    bench_powmod(args.repeat)
    bench_oracle()


if __name__ == "__main__":
    main()
