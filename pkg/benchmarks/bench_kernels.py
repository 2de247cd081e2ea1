"""Compare the compiled and pure-Python orbit kernels.

    python benchmarks/bench_kernels.py [--size 512] [--repeat 3]

Times raw orbit generation for both maps and a full 512x512x3 encryption
under each available backend, and checks that both produce identical
output.
"""
import argparse
import time

import numpy as np

from chaocrypt import _backend, _pykernels
from chaocrypt.cipher import MasterKey, encrypt


def best_of(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=512)
    ap.add_argument("--block", type=int, default=32)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = _backend.available()
    n = args.size * args.size * 3
    rng = np.random.default_rng(1)
    image = rng.integers(0, 256, (args.size, args.size, 3), dtype=np.uint8)
    key = MasterKey(0.3, 0.4, 0.45, 0.55)

    print(f"backends available: {', '.join(backends)}")
    print(f"{'backend':<10}{'logistic':>12}{'duffing':>12}{'encrypt':>12}   (seconds, best of {args.repeat})")
    outputs = {}
    for name in backends:
        _backend.use(name)
        k = _backend.kernels
        t_log, xs = best_of(lambda: k.logistic_orbit(0.3, 3.99, n, 1000), args.repeat)
        t_duf, ys = best_of(lambda: k.duffing_orbit(0.1, -0.2, 2.75, 0.2, n, 1000)[0], args.repeat)
        t_enc, env = best_of(lambda: encrypt(image, key, args.block), args.repeat)
        outputs[name] = (xs, ys, env)
        print(f"{name:<10}{t_log:>12.4f}{t_duf:>12.4f}{t_enc:>12.4f}")

    if len(outputs) == 2:
        (xa, ya, ea), (xb, yb, eb) = outputs.values()
        same = np.array_equal(xa, xb) and np.array_equal(ya, yb) and ea == eb
        print(f"outputs bit-identical across backends: {same}")
    elif _backend.kernels is _pykernels:
        print("compiled extension not built; only the Python fallback was timed")


if __name__ == "__main__":
    main()
