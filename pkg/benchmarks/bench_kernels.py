"""Compare the compiled and NumPy kernel backends.

Times each amplitude kernel on a random state and one full protocol run,
under every backend that was built. Usage::

    python benchmarks/bench_kernels.py [--qubits 20] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from qmatops import kernels
from qmatops.protocols import run_multiplication


def kernel_cases(q):
    top, mid, low = 1 << (q - 1), 1 << (q // 2), 1
    return {
        "controlled_x": lambda a: kernels.controlled_x(a, mid, top | low, top),
        "controlled_swap": lambda a: kernels.controlled_swap(a, mid, low, top, top),
        "hadamard": lambda a: kernels.hadamard(a, mid),
        "masked_norm2": lambda a: kernels.masked_norm2(a, top, top),
    }


def bench(q, repeat, seed):
    rng = np.random.default_rng(seed)
    amp = rng.normal(size=1 << q) + 1j * rng.normal(size=1 << q)
    amp /= np.linalg.norm(amp)
    A1 = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    A2 = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    results = {}
    for name in sorted(kernels.BACKENDS):
        kernels.use_backend(name)
        row = {}
        for label, fn in kernel_cases(q).items():
            row[label] = min(timeit.repeat(lambda: fn(amp), number=1, repeat=repeat))
        row["matmul 8x8 run"] = min(timeit.repeat(lambda: run_multiplication(A1, A2), number=1, repeat=repeat))
        results[name] = row
    return results


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)
    previous = kernels.BACKEND
    try:
        results = bench(args.qubits, args.repeat, args.seed)
    finally:
        kernels.use_backend(previous)
    names = sorted(results)
    labels = list(next(iter(results.values())))
    print(f"{args.qubits} qubits, best of {args.repeat} (ms)")
    print(f"{'case':<18}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label in labels:
        cells = "".join(f"{results[n][label] * 1e3:>12.2f}" for n in names)
        if "cython" in results and "python" in results:
            cells += f"{results['python'][label] / results['cython'][label]:>11.1f}x"
        print(f"{label:<18}{cells}")


if __name__ == "__main__":
    main()
