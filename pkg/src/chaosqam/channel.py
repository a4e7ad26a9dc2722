"""Calibrated AWGN channel with reproducible, splittable random streams."""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .chaosmap import MapParams, make_map
from .modem import BITS_PER_SYMBOL, IqFrame, rail_power

_SEED_MASK = (1 << 64) - 1


def derive_seed(master_seed: int, *keys: int) -> int:
    """Deterministic 64-bit child seed for the stream labelled ``keys``.

    Distinct key tuples give statistically independent Philox streams, so
    work units can be scheduled in any order.
    """
    entropy = [int(master_seed) & _SEED_MASK, *(int(k) & _SEED_MASK for k in keys)]
    words = np.random.SeedSequence(entropy).generate_state(2, dtype=np.uint32)
    return int(words[0]) | (int(words[1]) << 32)


def float_key(value: float) -> int:
    """IEEE-754 bit pattern of ``value``, for use as a stream key."""
    return struct.unpack("<Q", struct.pack("<d", float(value)))[0]


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed) & _SEED_MASK))


@dataclass(frozen=True)
class ChannelConfig:
    ebn0_db: float
    seed: int
    map_p: float

    def __post_init__(self):
        if not math.isfinite(self.ebn0_db):
            raise ValueError(f"ebn0_db must be finite, got {self.ebn0_db!r}")


@dataclass(frozen=True, eq=False)
class ReceivedFrame:
    samples: np.ndarray
    config: ChannelConfig
    x0: float

    @property
    def i(self) -> np.ndarray:
        return self.samples.real

    @property
    def q(self) -> np.ndarray:
        return self.samples.imag

    def __len__(self) -> int:
        return len(self.samples)


def bit_energy(m: MapParams) -> float:
    """Average energy per information bit, ``2 * rail_power / 6``."""
    return 2.0 * rail_power(m) / BITS_PER_SYMBOL


def noise_sigma(config: ChannelConfig, m: MapParams) -> float:
    """Per-dimension noise standard deviation ``sqrt(N0/2)``."""
    n0 = bit_energy(m) / 10.0 ** (config.ebn0_db / 10.0)
    return math.sqrt(n0 / 2.0)


def gaussian_noise(seed: int, shape, sigma: float) -> np.ndarray:
    return sigma * generator(seed).standard_normal(shape)


def apply_awgn(frame: IqFrame, config: ChannelConfig) -> ReceivedFrame:
    if config.map_p != frame.map_p:
        raise ValueError(
            f"channel calibrated for p = {config.map_p!r} but frame was built with p = {frame.map_p!r}"
        )
    sigma = noise_sigma(config, make_map(config.map_p))
    noise = gaussian_noise(config.seed, (2, len(frame)), sigma)
    samples = frame.samples + (noise[0] + 1j * noise[1])
    return ReceivedFrame(samples, config, frame.x0)
