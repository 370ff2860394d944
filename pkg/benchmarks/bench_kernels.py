#!/usr/bin/env python3
"""Benchmark the compiled signal kernels against the numpy fallback.

Runs the three hot kernels on realistic workloads (diphone-sized voiced
clips and frame plans) and a full synthesis pass with each backend.

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from diphonetts import kernels, signal_ops
from diphonetts.signal_ops import ShiftSpec


def timeit(fn, repeats=200):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_case(n_pulses=40, rate=48000):
    rng = np.random.default_rng(0)
    peaks = np.cumsum(rng.integers(380, 580, n_pulses)).astype(np.int64)
    gaps = np.diff(peaks).astype(np.float64)
    bounds = np.empty(len(peaks))
    bounds[0] = peaks[0]
    bounds[1:] = peaks[0] + np.cumsum(gaps * 1.3)
    steps = gaps / 1.5
    wav = rng.standard_normal(int(peaks[-1]) + 500) * 0.3
    return wav, peaks, bounds, steps


def bench_kernels():
    wav, peaks, bounds, steps = make_case()
    durs = np.random.default_rng(1).uniform(0.4, 2.5, 60)
    backends = {"cython": kernels, "python": kernels.python_kernels()}
    if kernels.BACKEND != "cython":
        backends.pop("cython")
        print("compiled kernels unavailable; benchmarking fallback only")
    results = {}
    for name, impl in backends.items():
        placements, indices = impl.psola_place(float(peaks[0]), bounds, steps)
        out_len = int(placements.max()) + 1000

        def run_place():
            impl.psola_place(float(peaks[0]), bounds, steps)

        def run_ola():
            out = np.zeros(out_len)
            impl.overlap_add(out, wav, peaks, placements, indices)

        def run_usds():
            impl.usds_plan(durs)

        results[name] = {
            "psola_place": timeit(run_place),
            "overlap_add": timeit(run_ola),
            "usds_plan": timeit(run_usds),
        }
    header = f"{'kernel':<14}" + "".join(f"{n:>12}" for n in results)
    if len(results) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for kernel in ("psola_place", "overlap_add", "usds_plan"):
        row = f"{kernel:<14}"
        for name in results:
            row += f"{results[name][kernel] * 1e6:>10.1f}us"
        if len(results) == 2:
            ratio = results["python"][kernel] / results["cython"][kernel]
            row += f"{ratio:>9.1f}x"
        print(row)


def bench_synthesis():
    from diphonetts.fixture_bank import build_fixture_bank
    from diphonetts.pipeline import Engine, Resources
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        bank = build_fixture_bank(tmp)
    res = Resources.bundled()
    engine = Engine(res, bank)
    text = ("The birch canoe slid on the smooth planks. "
            "Glue the sheet to the dark blue background.")
    engine.synthesize(text, seed=0)  # warm up

    import diphonetts.kernels as K

    saved = (K.psola_place, K.overlap_add, K.usds_plan, K.BACKEND)
    variants = {"active (%s)" % K.BACKEND: None}
    if K.BACKEND == "cython":
        variants["python fallback"] = K.python_kernels()
    print(f"\n{'synthesis':<20}{'wall':>10}{'rtf':>10}")
    for label, impl in variants.items():
        if impl is not None:
            K.psola_place = impl.psola_place
            K.overlap_add = impl.overlap_add
            K.usds_plan = impl.usds_plan
        try:
            t0 = time.perf_counter()
            wav, report = engine.synthesize(text, seed=0)
            wall = time.perf_counter() - t0
        finally:
            K.psola_place, K.overlap_add, K.usds_plan, K.BACKEND = saved
        print(f"{label:<20}{wall * 1e3:>8.1f}ms"
              f"{wall / report.audio_seconds:>10.4f}")


if __name__ == "__main__":
    print(f"active backend: {kernels.BACKEND}\n")
    bench_kernels()
    bench_synthesis()
