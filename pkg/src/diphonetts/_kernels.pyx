# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops for time-domain synthesis.

The sequential excitation-placement walk, the overlap-add of windowed
glottal pulses, and the duration-shift accumulator are the inner loops that
dominate synthesis time; everything else stays in numpy.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, llround

cnp.import_array()

M_PI = 3.141592653589793
cdef double PI = 3.141592653589793


def psola_place(double first_pos,
                cnp.float64_t[::1] range_bounds,
                cnp.float64_t[::1] steps):
    """Walk excitation placements.

    range_bounds[k] is the scaled position of excitation k (right-closed
    range boundaries); steps[k] is the placement step to take after placing
    excitation k (original gap over pitch multiplier). Returns (positions,
    source indices); placement ends once the last excitation's range is
    reached.
    """
    cdef Py_ssize_t n = range_bounds.shape[0]
    cdef double pos = first_pos
    cdef Py_ssize_t k = 0
    cdef Py_ssize_t lo, hi, mid
    cdef double min_step = 1e300
    cdef Py_ssize_t i
    for i in range(n - 1):
        if steps[i] < min_step:
            min_step = steps[i]
    if min_step <= 0:
        raise ValueError("non-positive placement step")
    cdef long long max_iters = <long long> (
        (range_bounds[n - 2] - first_pos) / min_step + 4 * n + 16
    ) if n >= 2 else 1
    positions = []
    indices = []
    positions.append(pos)
    indices.append(0)
    if n == 1:
        return (np.asarray(positions, dtype=np.float64),
                np.asarray(indices, dtype=np.int64))
    cdef long long it = 0
    while k < n - 1 and it < max_iters:
        it += 1
        pos += steps[k]
        # First k' with range_bounds[k'] >= pos, else the last excitation.
        lo = 0
        hi = n - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if range_bounds[mid] >= pos:
                hi = mid
            else:
                lo = mid + 1
        k = lo
        positions.append(pos)
        indices.append(k)
    return (np.asarray(positions, dtype=np.float64),
            np.asarray(indices, dtype=np.int64))


def overlap_add(cnp.float64_t[::1] out,
                cnp.float64_t[::1] wav,
                cnp.int64_t[::1] peaks,
                cnp.float64_t[::1] placements,
                cnp.int64_t[::1] indices):
    """Add asymmetric raised-cosine windowed pulses into `out`.

    Pulse k spans (peaks[k-1], peaks[k+1]); the first pulse's left side and
    the last pulse's right side are flat so the windows sum to one across
    the whole waveform.
    """
    cdef Py_ssize_t n = peaks.shape[0]
    cdef Py_ssize_t L = wav.shape[0]
    cdef Py_ssize_t out_len = out.shape[0]
    cdef Py_ssize_t j, k, s, lo, hi, origin, o
    cdef double w, t, span
    for j in range(placements.shape[0]):
        k = indices[j]
        origin = llround(placements[j]) - peaks[k]
        lo = 0 if k == 0 else peaks[k - 1] + 1
        hi = L - 1 if k == n - 1 else peaks[k + 1] - 1
        for s in range(lo, hi + 1):
            o = origin + s
            if o < 0 or o >= out_len:
                continue
            if s < peaks[k]:
                if k == 0:
                    w = 1.0
                else:
                    span = peaks[k] - peaks[k - 1]
                    t = (s - peaks[k - 1]) / span
                    w = 0.5 - 0.5 * cos(PI * t)
            elif s > peaks[k]:
                if k == n - 1:
                    w = 1.0
                else:
                    span = peaks[k + 1] - peaks[k]
                    t = (s - peaks[k]) / span
                    w = 0.5 + 0.5 * cos(PI * t)
            else:
                w = 1.0
            out[o] += w * wav[s]


def usds_plan(cnp.float64_t[::1] durs):
    """Frame emission plan for unvoiced duration shifting.

    Per frame the accumulator gains (dur - 1); at or below -1 the frame is
    dropped (accumulator += 1), at or above +1 the frame repeats until the
    accumulator falls under 1.
    """
    cdef double count = 0.0
    cdef Py_ssize_t i
    plan = []
    for i in range(durs.shape[0]):
        count += durs[i] - 1.0
        if count <= -1.0:
            count += 1.0
            continue
        plan.append(i)
        while count >= 1.0:
            plan.append(i)
            count -= 1.0
    return np.asarray(plan, dtype=np.int64)
