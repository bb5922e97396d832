# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops.  Signatures mirror :mod:`flatstat._pykernels`."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp
from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t

cnp.import_array()


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _popcount64(uint64_t x) noexcept nogil:
    return __builtin_popcountll(x)


def fold_histogram(const uint8_t[::1] ind, const int64_t[:, ::1] bases,
                   const int64_t[::1] pivmasks, int64_t[::1] hist):
    """Accumulate coset-intersection counts of every subspace into ``hist``."""
    cdef Py_ssize_t N = ind.shape[0]
    cdef Py_ssize_t M = bases.shape[0]
    cdef Py_ssize_t d = bases.shape[1]
    cdef Py_ssize_t m, j
    cdef int64_t x, y, b, pm, notpm
    cdef int32_t v
    if hist.shape[0] != (1 << d) + 1:
        raise ValueError("histogram length must be 2^d + 1")
    cdef int32_t[::1] t = np.empty(N, dtype=np.int32)
    with nogil:
        for m in range(M):
            for x in range(N):
                t[x] = ind[x]
            for j in range(d):
                b = bases[m, j]
                for x in range(N):
                    y = x ^ b
                    if x < y:
                        v = t[x] + t[y]
                        t[x] = v
                        t[y] = v
            pm = pivmasks[m]
            notpm = ~pm
            x = 0
            while x < N:
                hist[t[x]] += 1
                x = ((x | pm) + 1) & notpm
                if x == 0:
                    break


def mask_profiles(const uint64_t[::1] masks, const uint64_t[::1] flats, int width):
    """Row i = intersection-size histogram of set ``masks[i]`` over ``flats``."""
    cdef Py_ssize_t S = masks.shape[0]
    cdef Py_ssize_t F = flats.shape[0]
    cdef Py_ssize_t i, f
    cdef uint64_t a
    cdef int c
    out_arr = np.zeros((S, width), dtype=np.int32)
    cdef int32_t[:, ::1] out = out_arr
    with nogil:
        for i in range(S):
            a = masks[i]
            for f in range(F):
                c = _popcount64(a & flats[f])
                if c < width:
                    out[i, c] += 1
    return out_arr


def anneal_run(const int32_t[:, ::1] incidence, uint8_t[::1] state,
               int32_t[::1] counts, int s, const int32_t[::1] proposals,
               const double[::1] uniforms, const double[::1] temps):
    """Single-flip annealing on the number of flats meeting the set in ``s`` points.

    ``state`` and ``counts`` are updated in place to the final walk state.
    Returns ``(best_hits, best_state, n_improvements_trace)`` where the trace
    is a list of ``(step, hits)`` pairs at which the best value rose.
    """
    cdef Py_ssize_t T = proposals.shape[0]
    cdef Py_ssize_t R = incidence.shape[1]
    cdef Py_ssize_t P = state.shape[0]
    cdef Py_ssize_t t, r, q
    cdef int p, f, c, step, delta
    cdef int64_t hits = 0, best
    for f in range(counts.shape[0]):
        if counts[f] == s:
            hits += 1
    best = hits
    best_arr = np.array(state, dtype=np.uint8)
    cdef uint8_t[::1] best_state = best_arr
    trace = [(0, int(hits))]
    cdef int smaller
    for t in range(T):
        p = proposals[t]
        step = -1 if state[p] else 1
        delta = 0
        for r in range(R):
            c = counts[incidence[p, r]]
            if c == s:
                delta -= 1
            elif c + step == s:
                delta += 1
        if delta < 0 and not (uniforms[t] < exp(delta / temps[t])):
            continue
        for r in range(R):
            counts[incidence[p, r]] += step
        state[p] ^= 1
        hits += delta
        if hits > best:
            best = hits
            best_state[:] = state
            trace.append((t + 1, int(hits)))
        elif hits == best:
            smaller = 0
            for q in range(P - 1, -1, -1):
                if state[q] != best_state[q]:
                    smaller = state[q] < best_state[q]
                    break
            if smaller:
                best_state[:] = state
    return int(best), best_arr, trace
