"""Backend selection for the modulator/decoder inner loops.

The compiled Cython extension is used when it was built; otherwise, or when
``CHAOSQAM_PURE_PYTHON`` is set to a non-empty value other than ``0``, the
numpy fallback is used.  Both expose::

    modulate_rails(symbols[int8, (B, K)], x0, a, levels[float64, (8,)]) -> float64 (B, K)
    viterbi_rails(received[float64, (B, K)], x0, a, levels) -> (int8 (B, K), float64 (B,))
"""
import os

import numpy as np

from . import _kernels_py as fallback

_force_python = os.environ.get("CHAOSQAM_PURE_PYTHON", "") not in ("", "0")

compiled = None
if not _force_python:
    try:
        from . import _kernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else fallback
BACKEND = "cython" if compiled is not None else "python"


def modulate_rails(symbols, x0, a, levels, backend=None):
    impl = _pick(backend)
    symbols = np.ascontiguousarray(symbols, dtype=np.int8)
    if symbols.ndim != 2:
        raise ValueError("symbols must be a 2-D (frames, symbols) array")
    return impl.modulate_rails(symbols, float(x0), float(a), _levels(levels))


def viterbi_rails(received, x0, a, levels, backend=None):
    impl = _pick(backend)
    received = np.ascontiguousarray(received, dtype=np.float64)
    if received.ndim != 2 or received.shape[1] == 0:
        raise ValueError("received must be a non-empty 2-D (frames, samples) array")
    return impl.viterbi_rails(received, float(x0), float(a), _levels(levels))


def available_backends():
    return ["cython", "python"] if compiled is not None else ["python"]


def _levels(levels):
    levels = np.ascontiguousarray(levels, dtype=np.float64)
    if levels.shape != (8,):
        raise ValueError("levels must hold exactly 8 values")
    return levels


def _pick(backend):
    if backend is None:
        return _impl
    if backend == "python":
        return fallback
    if backend == "cython":
        if compiled is None:
            raise RuntimeError("compiled kernels are not built")
        return compiled
    raise ValueError(f"unknown backend {backend!r}")
