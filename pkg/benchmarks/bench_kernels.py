"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--sizes 4,6,8] [--repeat 5]
"""
import argparse
import time

import numpy as np

from propalg import kernels


def best_of(fn, repeat):
    fn()  # warm-up (jit compile or cache load)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(n, rng):
    # an equivalence on pairs has no chain violation, so the whole 6-tuple space is swept
    cls = rng.integers(0, 3, size=n * n)
    per = (cls[:, None] == cls[None, :]).reshape(n, n, n, n)
    full = np.ones((n, n, n, n), dtype=bool)
    R = rng.random((n, n, n, n)) < 0.5
    blocks = np.arange(n, dtype=np.int64) // 2
    tabs = rng.integers(0, n, size=(200, n)).astype(np.int64)
    f = rng.integers(0, n, size=n).astype(np.int64)
    return {
        "chain (full sweep)": lambda m: m.first_chain_violation(per, per),
        "saturation": lambda m: m.first_saturation_violation(full, blocks, blocks),
        "witness tensor": lambda m: m.witness_tensor(tabs, tabs),
        "pullback": lambda m: m.pullback(R, f),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="4,6,8,10")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if kernels.jit_impl is None:
        print("numba unavailable (or PROPALG_NO_JIT set); nothing to compare")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20} {'n':>3} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n in (int(x) for x in args.sizes.split(",")):
        for name, call in cases(n, rng).items():
            t_np = best_of(lambda: call(kernels.numpy_impl), args.repeat)
            t_nb = best_of(lambda: call(kernels.jit_impl), args.repeat)
            print(f"{name:<20} {n:>3} {t_np:>10.5f} {t_nb:>10.5f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
