"""Kernel dispatch: compiled extension when built, numpy fallback otherwise.

Both implementations share signatures and semantics; `BACKEND` reports which
one is active and `python_kernels()` exposes the fallback explicitly for
benchmarking and equivalence tests.
"""

from __future__ import annotations

import numpy as np


def _psola_place_py(first_pos: float, range_bounds: np.ndarray,
                    steps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(range_bounds)
    positions = [first_pos]
    indices = [0]
    if n == 1:
        return np.asarray(positions), np.asarray(indices, dtype=np.int64)
    if n >= 2 and np.min(steps) <= 0:
        raise ValueError("non-positive placement step")
    max_iters = int((range_bounds[n - 2] - first_pos) / np.min(steps) + 4 * n + 16)
    pos = first_pos
    k = 0
    bounds = range_bounds
    it = 0
    while k < n - 1 and it < max_iters:
        it += 1
        pos += steps[k]
        k = int(np.searchsorted(bounds, pos, side="left"))
        if k > n - 1:
            k = n - 1
        positions.append(pos)
        indices.append(k)
    return np.asarray(positions), np.asarray(indices, dtype=np.int64)


def _overlap_add_py(out: np.ndarray, wav: np.ndarray, peaks: np.ndarray,
                    placements: np.ndarray, indices: np.ndarray) -> None:
    n = len(peaks)
    L = len(wav)
    out_len = len(out)
    for j in range(len(placements)):
        k = int(indices[j])
        origin = int(round(placements[j])) - int(peaks[k])
        lo = 0 if k == 0 else int(peaks[k - 1]) + 1
        hi = L - 1 if k == n - 1 else int(peaks[k + 1]) - 1
        s = np.arange(lo, hi + 1)
        w = np.ones(len(s))
        left = s < peaks[k]
        right = s > peaks[k]
        if k > 0:
            span = peaks[k] - peaks[k - 1]
            t = (s[left] - peaks[k - 1]) / span
            w[left] = 0.5 - 0.5 * np.cos(np.pi * t)
        if k < n - 1:
            span = peaks[k + 1] - peaks[k]
            t = (s[right] - peaks[k]) / span
            w[right] = 0.5 + 0.5 * np.cos(np.pi * t)
        o = origin + s
        valid = (o >= 0) & (o < out_len)
        np.add.at(out, o[valid], w[valid] * wav[s[valid]])


def _usds_plan_py(durs: np.ndarray) -> np.ndarray:
    count = 0.0
    plan: list[int] = []
    for i, d in enumerate(durs):
        count += d - 1.0
        if count <= -1.0:
            count += 1.0
            continue
        plan.append(i)
        while count >= 1.0:
            plan.append(i)
            count -= 1.0
    return np.asarray(plan, dtype=np.int64)


class _PythonKernels:
    BACKEND = "python"
    psola_place = staticmethod(_psola_place_py)
    overlap_add = staticmethod(_overlap_add_py)
    usds_plan = staticmethod(_usds_plan_py)


def python_kernels() -> type[_PythonKernels]:
    return _PythonKernels


try:
    from . import _kernels as _ext

    BACKEND = "cython"

    def psola_place(first_pos, range_bounds, steps):
        return _ext.psola_place(
            float(first_pos),
            np.ascontiguousarray(range_bounds, dtype=np.float64),
            np.ascontiguousarray(steps, dtype=np.float64),
        )

    def overlap_add(out, wav, peaks, placements, indices):
        _ext.overlap_add(
            out,
            np.ascontiguousarray(wav, dtype=np.float64),
            np.ascontiguousarray(peaks, dtype=np.int64),
            np.ascontiguousarray(placements, dtype=np.float64),
            np.ascontiguousarray(indices, dtype=np.int64),
        )

    def usds_plan(durs):
        return _ext.usds_plan(np.ascontiguousarray(durs, dtype=np.float64))

except ImportError:  # pragma: no cover - depends on build environment
    BACKEND = "python"
    psola_place = _psola_place_py
    overlap_add = _overlap_add_py
    usds_plan = _usds_plan_py
