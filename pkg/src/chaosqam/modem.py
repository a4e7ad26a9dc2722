"""Bit framing, Gray labelling and the backward-iteration I/Q modulator."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .chaosmap import MapParams, invariant_bound

BITS_PER_RAIL = 3
BITS_PER_SYMBOL = 2 * BITS_PER_RAIL

# reflected Gray code: symbol s carries label s ^ (s >> 1), MSB first
GRAY_LABELS = tuple(s ^ (s >> 1) for s in range(8))
_LABEL_BITS = np.array(
    [[(g >> shift) & 1 for shift in (2, 1, 0)] for g in GRAY_LABELS], dtype=np.uint8
)
_SYMBOL_OF_LABEL = np.empty(8, dtype=np.int8)
_SYMBOL_OF_LABEL[list(GRAY_LABELS)] = np.arange(8)


class FramingError(ValueError):
    """Raised for bit or sample sequences that cannot form a frame."""


@dataclass(frozen=True, eq=False)
class SymbolFrame:
    rail_i: np.ndarray
    rail_q: np.ndarray
    source_bits: np.ndarray

    def __len__(self) -> int:
        return len(self.rail_i)


@dataclass(frozen=True, eq=False)
class IqFrame:
    """Complex baseband samples, one per symbol, plus the shared initial condition."""

    samples: np.ndarray
    x0: float
    map_p: float

    @property
    def i(self) -> np.ndarray:
        return self.samples.real

    @property
    def q(self) -> np.ndarray:
        return self.samples.imag

    def __len__(self) -> int:
        return len(self.samples)


def labels_to_symbols(triplets: np.ndarray) -> np.ndarray:
    """Map an ``(..., 3)`` array of bits to Gray-labelled symbols."""
    label = (triplets[..., 0] << 2) | (triplets[..., 1] << 1) | triplets[..., 2]
    return _SYMBOL_OF_LABEL[label]


def symbols_to_labels(symbols: np.ndarray) -> np.ndarray:
    return _LABEL_BITS[np.asarray(symbols, dtype=np.intp)]


def bits_to_symbols(bits) -> SymbolFrame:
    """Split each 6-bit group into 3 bits for rail I followed by 3 for rail Q."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 1:
        raise FramingError("bits must be a 1-D sequence")
    if len(bits) % BITS_PER_SYMBOL:
        raise FramingError(
            f"bit count {len(bits)} is not a multiple of {BITS_PER_SYMBOL}"
        )
    if np.any(bits > 1):
        raise FramingError("bits must be 0 or 1")
    groups = bits.reshape(-1, 2, BITS_PER_RAIL)
    symbols = labels_to_symbols(groups)
    return SymbolFrame(
        rail_i=np.ascontiguousarray(symbols[:, 0]),
        rail_q=np.ascontiguousarray(symbols[:, 1]),
        source_bits=bits.copy(),
    )


def symbols_to_bits(frame: SymbolFrame) -> np.ndarray:
    return rails_to_bits(frame.rail_i, frame.rail_q)


def rails_to_bits(rail_i, rail_q) -> np.ndarray:
    labels = np.stack([symbols_to_labels(rail_i), symbols_to_labels(rail_q)], axis=-2)
    return labels.reshape(-1)


def modulate_rail(symbols, x0: float, m: MapParams) -> np.ndarray:
    """Backward-iterate ``x[k] = f^{-1}_{s[k]}(x[k-1])`` from ``x[-1] = x0``."""
    _check_x0(x0, m)
    symbols = np.asarray(symbols, dtype=np.int8)
    if len(symbols) == 0:
        return np.empty(0)
    return kernels.modulate_rails(symbols[None, :], x0, m.contraction, m.levels)[0]


def modulate(bits, x0: float, m: MapParams) -> IqFrame:
    frame = bits_to_symbols(bits)
    _check_x0(x0, m)
    if len(frame) == 0:
        return IqFrame(np.empty(0, dtype=np.complex128), float(x0), m.p)
    rails = kernels.modulate_rails(
        np.stack([frame.rail_i, frame.rail_q]), x0, m.contraction, m.levels
    )
    return IqFrame(rails[0] + 1j * rails[1], float(x0), m.p)


def rail_power(m: MapParams) -> float:
    """Steady-state ``E[x^2]`` per rail for i.i.d. equiprobable symbols.

    The stationary sample is ``sum_n a^n L_n`` with independent zero-mean
    levels ``L_n``, so ``E[x^2] = E[L^2] / (1 - a^2)`` with ``E[L^2] = 21``.
    """
    mean_level_power = float(np.mean(m.levels**2))
    return mean_level_power / (1.0 - m.contraction**2)


def _check_x0(x0: float, m: MapParams) -> None:
    bound = invariant_bound(m)
    if not abs(x0) <= bound:
        raise ValueError(f"|x0| = {abs(x0)!r} exceeds the invariant bound {bound!r}")
