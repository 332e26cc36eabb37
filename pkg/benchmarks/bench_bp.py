"""Time the compiled and numpy belief-propagation kernels on the same frames.

    python3 benchmarks/bench_bp.py [--m 1024] [--p 0.05] [--frames 200]
"""
import argparse
import time
from fractions import Fraction

import numpy as np

from blockpec.ldpc.bp import BACKENDS, bp_decode_arrays, channel_llr
from blockpec.ldpc.codec import build_codec


def run(matrix, frames, p, backend):
    iters = 0
    t0 = time.perf_counter()
    for y, z in frames:
        bits, ok, it = bp_decode_arrays(matrix, matrix.syndrome(y), channel_llr(z, p), backend=backend)
        iters += it
    return time.perf_counter() - t0, iters


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=1024)
    ap.add_argument("--rate", default="1/2")
    ap.add_argument("--p", type=float, default=0.05)
    ap.add_argument("--frames", type=int, default=200)
    args = ap.parse_args()

    codec = build_codec(args.m, Fraction(args.rate))
    rng = np.random.default_rng(0)
    frames = []
    for _ in range(args.frames):
        y = rng.integers(0, 2, args.m, dtype=np.uint8)
        frames.append((y, y ^ (rng.random(args.m) < args.p).astype(np.uint8)))

    print(f"m={args.m} rate={args.rate} p={args.p} frames={args.frames}")
    timings = {}
    for name in BACKENDS:
        secs, iters = run(codec.matrix, frames, args.p, name)
        timings[name] = secs
        print(f"{name:>7}: {secs:8.3f} s  {iters:6d} iterations  {1e6 * secs / max(iters, 1):8.1f} us/iteration")
    if len(timings) == 2:
        print(f"speedup: {timings['python'] / timings['cython']:.1f}x")
    else:
        print("compiled backend not built; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
