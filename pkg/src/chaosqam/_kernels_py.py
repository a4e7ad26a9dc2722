"""Numpy fallback for the compiled kernels in ``_kernels.pyx``.

Vectorised over frames and trellis states; the loop over time stays in
Python.  Arithmetic is ordered exactly as in the compiled version so both
backends return identical bits.
"""
import numpy as np

NSTATES = 8


def modulate_rails(symbols, x0, a, levels):
    symbols = np.asarray(symbols)
    out = np.empty(symbols.shape, dtype=np.float64)
    x = np.full(symbols.shape[0], float(x0))
    for k in range(symbols.shape[1]):
        x = a * x + levels[symbols[:, k]]
        out[:, k] = x
    return out


def viterbi_rails(received, x0, a, levels):
    received = np.asarray(received, dtype=np.float64)
    nrows, nsym = received.shape
    rows = np.arange(nrows)[:, None]
    dest = np.arange(NSTATES)[None, :]

    xs = np.broadcast_to(a * x0 + levels, (nrows, NSTATES))
    cost = (received[:, :1] - xs) ** 2
    backptr = np.zeros((nrows, max(nsym, 1), NSTATES), dtype=np.int8)
    for k in range(1, nsym):
        # cand[b, j, i]: sample reached from state j by emitting symbol i
        cand = a * xs[:, :, None] + levels[None, None, :]
        total = cost[:, :, None] + (received[:, k, None, None] - cand) ** 2
        best = np.argmin(total, axis=1)
        cost = total[rows, best, dest]
        xs = cand[rows, best, dest]
        backptr[:, k] = best

    state = np.argmin(cost, axis=1)
    final = cost[np.arange(nrows), state]
    symbols = np.empty((nrows, nsym), dtype=np.int8)
    for k in range(nsym - 1, 0, -1):
        symbols[:, k] = state
        state = backptr[np.arange(nrows), k, state]
    symbols[:, 0] = state
    return symbols, final
