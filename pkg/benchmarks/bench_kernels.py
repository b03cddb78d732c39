#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the three hot paths (GLCM pair counting, LBP code maps, SMO
training sweeps) on synthetic inputs and prints the speedup.  Both
backends must produce identical outputs; this also asserts that.

Usage: python benchmarks/bench_kernels.py [--repeats N] [--image-size N]
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from weedsvm import _kernels_py  # noqa: E402

try:
    from weedsvm import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

from weedsvm.features.lbp import THRESHOLD_SLACK, _sample_table  # noqa: E402
from weedsvm.svm.core import KernelSpec, kernel_matrix  # noqa: E402


def best_of(repeats, fn, *args):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_glcm(backend, image, repeats):
    return best_of(repeats, backend.glcm_counts, image, 256, 0, 1)


def bench_lbp(backend, image, repeats):
    cols, weights = _sample_table(8, 1.0)
    args = (image, 1,
            cols["y00"], cols["x00"], cols["y01"], cols["x01"],
            cols["y10"], cols["x10"], cols["y11"], cols["x11"],
            weights["w00"], weights["w01"], weights["w10"], weights["w11"],
            THRESHOLD_SLACK)
    return best_of(repeats, backend.lbp_code_map, *args)


def bench_smo(backend, k_matrix, y, repeats):
    return best_of(repeats, backend.smo_optimize, k_matrix, y, 1.0, 1e-3, 10, 300_000, 42)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--image-size", type=int, default=256)
    parser.add_argument("--svm-samples", type=int, default=280)
    args = parser.parse_args()

    if _kernels_c is None:
        print("compiled extension not built (python setup.py build_ext --inplace); "
              "benchmarking the fallback only")

    rng = np.random.default_rng(7)
    gray_int = rng.integers(0, 256, (args.image_size, args.image_size)).astype(np.int32)
    gray_f = gray_int.astype(np.float64)

    x = np.vstack([
        center + rng.normal(0, 1.5, (args.svm_samples // 2, 31))
        for center in (rng.normal(0, 2, 31), rng.normal(0, 2, 31))
    ])
    y = np.array([1.0] * (args.svm_samples // 2) + [-1.0] * (args.svm_samples // 2))
    k_matrix = np.ascontiguousarray(kernel_matrix(KernelSpec.linear(), x, x))

    rows = []
    cases = [
        ("glcm counts", bench_glcm, gray_int),
        ("lbp code map", bench_lbp, gray_f),
        ("smo training", bench_smo, None),
    ]
    for name, fn, payload in cases:
        if name == "smo training":
            py_time, py_out = fn(_kernels_py, k_matrix, y, args.repeats)
            if _kernels_c is not None:
                c_time, c_out = fn(_kernels_c, k_matrix, y, args.repeats)
                assert np.array_equal(py_out[0], c_out[0]), "backends disagree"
        else:
            py_time, py_out = fn(_kernels_py, payload, args.repeats)
            if _kernels_c is not None:
                c_time, c_out = fn(_kernels_c, payload, args.repeats)
                assert np.array_equal(py_out, c_out), "backends disagree"
        if _kernels_c is not None:
            rows.append((name, py_time, c_time, py_time / c_time))
        else:
            rows.append((name, py_time, None, None))

    header = f"{'kernel':16s} {'python':>12s} {'compiled':>12s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for name, py_time, c_time, speedup in rows:
        if c_time is None:
            print(f"{name:16s} {py_time * 1e3:>10.3f}ms {'-':>12s} {'-':>9s}")
        else:
            print(f"{name:16s} {py_time * 1e3:>10.3f}ms {c_time * 1e3:>10.3f}ms {speedup:>8.1f}x")
    print("\noutputs verified identical across backends")


if __name__ == "__main__":
    main()
