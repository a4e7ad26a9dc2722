# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled backward-iteration modulator and 8-state PSP Viterbi kernels.

Must stay bit-for-bit identical to the numpy fallback in ``_kernels_py``.
"""
import numpy as np

cdef enum:
    NSTATES = 8


def modulate_rails(const signed char[:, ::1] symbols, double x0, double a,
                   const double[::1] levels):
    cdef Py_ssize_t nrows = symbols.shape[0], nsym = symbols.shape[1]
    cdef Py_ssize_t b, k
    cdef double x
    out = np.empty((nrows, nsym), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for b in range(nrows):
            x = x0
            for k in range(nsym):
                x = a * x + levels[symbols[b, k]]
                o[b, k] = x
    return out


def viterbi_rails(const double[:, ::1] received, double x0, double a,
                  const double[::1] levels):
    cdef Py_ssize_t nrows = received.shape[0], nsym = received.shape[1]
    cdef Py_ssize_t b, k, i, j, bj
    cdef double cost[NSTATES]
    cdef double ncost[NSTATES]
    cdef double xs[NSTATES]
    cdef double nxs[NSTATES]
    cdef double r, d, c, t, best, bx

    symbols = np.empty((nrows, nsym), dtype=np.int8)
    costs = np.empty(nrows, dtype=np.float64)
    backptr = np.empty((max(nsym, 1), NSTATES), dtype=np.int8)
    cdef signed char[:, ::1] sym = symbols
    cdef double[::1] fc = costs
    cdef signed char[:, ::1] bp = backptr

    with nogil:
        for b in range(nrows):
            r = received[b, 0]
            for i in range(NSTATES):
                xs[i] = a * x0 + levels[i]
                d = r - xs[i]
                cost[i] = d * d
            for k in range(1, nsym):
                r = received[b, k]
                for i in range(NSTATES):
                    c = a * xs[0] + levels[i]
                    d = r - c
                    best = cost[0] + d * d
                    bj = 0
                    bx = c
                    for j in range(1, NSTATES):
                        c = a * xs[j] + levels[i]
                        d = r - c
                        t = cost[j] + d * d
                        if t < best:
                            best = t
                            bj = j
                            bx = c
                    ncost[i] = best
                    nxs[i] = bx
                    bp[k, i] = <signed char>bj
                for i in range(NSTATES):
                    cost[i] = ncost[i]
                    xs[i] = nxs[i]
            i = 0
            for j in range(1, NSTATES):
                if cost[j] < cost[i]:
                    i = j
            fc[b] = cost[i]
            for k in range(nsym - 1, 0, -1):
                sym[b, k] = <signed char>i
                i = bp[k, i]
            sym[b, 0] = <signed char>i
    return symbols, costs
