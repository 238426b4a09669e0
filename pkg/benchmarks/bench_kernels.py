"""Compare the compiled fusion kernel against the numpy fallback.

Times ``fuse_or`` on random dense layers and a full ``bounded_language``
evaluation with each backend swapped in.

    python benchmarks/bench_kernels.py --repeat 5
"""

import argparse
import random
import sys
import timeit
from pathlib import Path

import numpy as np

from katcheck import _kernels_py, semantics
from katcheck.semantics import bounded_language, layer_size
from katcheck.syntax import Signature
from katcheck.textual import parse_expr

try:
    from katcheck import _kernels
except ImportError:
    _kernels = None

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))


def bench_fuse(fuse, n_atoms, n_letters, i, j, density, repeat):
    rng = np.random.default_rng(0)
    left = (rng.random(layer_size(n_atoms, n_letters, i)) < density).astype(np.uint8)
    right = (rng.random(layer_size(n_atoms, n_letters, j)) < density).astype(np.uint8)
    out = np.zeros(layer_size(n_atoms, n_letters, i + j), dtype=np.uint8)
    return min(timeit.repeat(lambda: fuse(out, left, right, n_atoms), number=1, repeat=repeat))


def bench_oracle(fuse, exprs, sig, k, repeat):
    saved = semantics.fuse_or
    semantics.fuse_or = fuse
    try:
        return min(
            timeit.repeat(
                lambda: [bounded_language(x, sig, k) for x in exprs], number=1, repeat=repeat
            )
        )
    finally:
        semantics.fuse_or = saved


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--bound", type=int, default=6, help="letters for the oracle benchmark")
    ap.add_argument("--exprs", type=int, default=40, help="random expressions per oracle run")
    args = ap.parse_args(argv)

    backends = {"numpy": _kernels_py.fuse_or}
    if _kernels is not None:
        backends["cython"] = _kernels.fuse_or
    else:
        print("compiled kernels not built; timing the fallback only")

    print("fuse_or (atoms, letters, i, j, density):")
    for n_atoms, n_letters, i, j, density in [
        (4, 2, 3, 3, 0.05),
        (4, 2, 3, 3, 0.5),
        (16, 2, 2, 2, 0.3),
        (4, 4, 2, 2, 0.3),
    ]:
        row = [f"  ({n_atoms}, {n_letters}, {i}, {j}, {density})"]
        for name, fuse in backends.items():
            t = bench_fuse(fuse, n_atoms, n_letters, i, j, density, args.repeat)
            row.append(f"{name} {t * 1e3:9.3f} ms")
        print("  ".join(row))

    from helpers import random_expr

    sig = Signature(("a", "b"), ("p", "q"))
    rng = random.Random(0)
    exprs = [random_expr(rng, 8) for _ in range(args.exprs)]
    exprs.append(parse_expr("(p+q)*;[a];(p;[b]+q)*", sig))
    print(f"bounded_language, {len(exprs)} expressions, k={args.bound}:")
    for name, fuse in backends.items():
        t = bench_oracle(fuse, exprs, sig, args.bound, args.repeat)
        print(f"  {name:7s} {t:8.3f} s")


if __name__ == "__main__":
    main()
