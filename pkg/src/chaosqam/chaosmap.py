"""Eight-branch piecewise-linear chaotic map and its symbol-indexed inverse.

The map partitions the real line into eight closed regions, one per symbol
``s`` in ``0..7``.  Region ``s`` is centred on ``c(s)/2 = 2s - 7`` and has
width ``1 - p``; neighbouring regions are separated by a guard gap of width
``1 + p``.  Each forward branch stretches its region onto ``[-1, 1]``; the
inverse branches are contractions with slope ``a = (1 - p)/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

NUM_REGIONS = 8
#: additive branch constants c(s) = 4s - 14
OFFSETS = tuple(4 * s - 14 for s in range(NUM_REGIONS))


class MapParameterError(ValueError):
    """Raised for a control parameter outside ``0 <= p <= 1``."""


class MapDomainError(ValueError):
    """Raised when the forward map is evaluated outside its regions."""

    def __init__(self, x: float, below: float | None, above: float | None):
        self.x = x
        self.below = below
        self.above = above
        super().__init__(
            f"x = {x!r} lies outside every region "
            f"(nearest region edges: {below!r} below, {above!r} above)"
        )


class UnsupportedParameterError(ValueError):
    """Raised when an operation is undefined for the given control parameter."""


@dataclass(frozen=True)
class Region:
    symbol: int
    lower: float
    upper: float

    def __contains__(self, x: float) -> bool:
        return self.lower <= x <= self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class MapParams:
    """Validated chaotic map definition.

    Use :func:`make_map` rather than constructing directly.
    """

    p: float
    num_regions: int = NUM_REGIONS
    contraction: float = field(init=False)
    offsets: tuple[int, ...] = field(init=False, default=OFFSETS)
    regions: tuple[Region, ...] = field(init=False, repr=False)

    def __post_init__(self):
        p = self.p
        if not math.isfinite(p):
            raise MapParameterError(f"p must be finite, got {p!r}")
        if p < 0:
            raise MapParameterError(f"p = {p!r} violates the lower bound 0 <= p (0 <= p <= 1)")
        if p > 1:
            raise MapParameterError(f"p = {p!r} violates the upper bound p <= 1 (0 <= p <= 1)")
        if self.num_regions != NUM_REGIONS:
            raise MapParameterError(f"num_regions is fixed at {NUM_REGIONS}")
        object.__setattr__(self, "p", float(p))
        object.__setattr__(self, "contraction", (1.0 - p) / 2.0)
        object.__setattr__(
            self,
            "regions",
            tuple(Region(s, (c - 1 + p) / 2.0, (c + 1 - p) / 2.0) for s, c in enumerate(OFFSETS)),
        )

    @property
    def levels(self) -> np.ndarray:
        """Region centres ``c(s)/2`` as a float64 array (the p = 1 PAM levels)."""
        return np.array(OFFSETS, dtype=np.float64) / 2.0


def make_map(p: float) -> MapParams:
    return MapParams(p)


def _check_symbol(s: int) -> int:
    s = int(s)
    if not 0 <= s < NUM_REGIONS:
        raise ValueError(f"symbol must be in 0..{NUM_REGIONS - 1}, got {s}")
    return s


def inverse_map(x: float, s: int, m: MapParams) -> float:
    """Inverse branch ``f_s^{-1}(x) = a*x + c(s)/2``.

    No clamping is applied; the result may lie outside region ``s`` when
    ``|x| > 1``.
    """
    s = _check_symbol(s)
    return m.contraction * x + OFFSETS[s] / 2.0


def region_of(x: float, m: MapParams) -> int | None:
    """Symbol whose closed region contains ``x``, or ``None`` for a gap."""
    # regions are ordered and disjoint, so at most one can match
    for region in m.regions:
        if x < region.lower:
            return None
        if x <= region.upper:
            return region.symbol
    return None


def forward_map(x: float, m: MapParams) -> float:
    if m.p >= 1.0:
        raise UnsupportedParameterError("forward map has slope 2/(1-p), undefined at p = 1")
    s = region_of(x, m)
    if s is None:
        below = max((r.upper for r in m.regions if r.upper < x), default=None)
        above = min((r.lower for r in m.regions if r.lower > x), default=None)
        raise MapDomainError(x, below, above)
    return (2.0 * x - OFFSETS[s]) / (1.0 - m.p)


def invariant_bound(m: MapParams) -> float:
    """Fixed point of ``|x| -> a|x| + 7``: backward orbits never leave ``±14/(1+p)``."""
    return 14.0 / (1.0 + m.p)
