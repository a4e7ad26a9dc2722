"""Eight-state per-survivor Viterbi receiver and a brute-force ML oracle.

Trellis state ``j`` means "the last emitted symbol was ``j``".  Because the
true encoder state is the continuous chaotic sample, every state also keeps
the sample ``x~_j`` reconstructed along its own survivor path (per-survivor
processing).  Extending state ``j`` by symbol ``i`` predicts
``f_i^{-1}(x~_j)`` and costs its squared distance to the received sample.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .chaosmap import MapParams, inverse_map
from .channel import ReceivedFrame
from .modem import FramingError, rails_to_bits

NUM_STATES = 8
MAX_BRUTE_FORCE_LENGTH = 8


class ResourceError(ValueError):
    """Raised when an exhaustive search would be too large."""


class TrellisNode(NamedTuple):
    cost: float
    survivor_sample: float
    backpointer: int


@dataclass(frozen=True, eq=False)
class DecodeResult:
    symbols: tuple[np.ndarray, np.ndarray]
    bits: np.ndarray
    final_cost: float
    rail_costs: tuple[float, float]


def branch_metric(received: float, candidate: float) -> float:
    d = received - candidate
    return d * d


def _as_rail(received) -> np.ndarray:
    received = np.asarray(received, dtype=np.float64)
    if received.ndim != 1 or len(received) == 0:
        raise FramingError("received rail must be a non-empty 1-D sequence")
    return received


def viterbi_decode_rail(received, x0: float, m: MapParams) -> np.ndarray:
    symbols, _ = viterbi_decode_rail_with_cost(received, x0, m)
    return symbols


def viterbi_decode_rail_with_cost(received, x0: float, m: MapParams) -> tuple[np.ndarray, float]:
    received = _as_rail(received)
    symbols, costs = kernels.viterbi_rails(received[None, :], x0, m.contraction, m.levels)
    return symbols[0], float(costs[0])


def trellis_trace(received, x0: float, m: MapParams, perturb: tuple[int, float] | None = None):
    """Reference decoder that keeps every :class:`TrellisNode`.

    Slow, but written step by step for inspection.  ``perturb=(k, delta)``
    adds ``delta`` to the survivor sample of every state right after step
    ``k`` is computed.  Returns ``(symbols, nodes)`` where ``nodes[k][i]`` is
    the record of state ``i`` at step ``k``.
    """
    received = _as_rail(received)
    layer = []
    for j in range(NUM_STATES):
        x = inverse_map(x0, j, m)
        layer.append(TrellisNode(branch_metric(received[0], x), x, -1))
    nodes = [layer]
    if perturb is not None and perturb[0] == 0:
        nodes[0] = [n._replace(survivor_sample=n.survivor_sample + perturb[1]) for n in nodes[0]]

    for k in range(1, len(received)):
        prev = nodes[-1]
        layer = []
        for i in range(NUM_STATES):
            best = None
            for j, node in enumerate(prev):
                cand = inverse_map(node.survivor_sample, i, m)
                total = node.cost + branch_metric(received[k], cand)
                if best is None or total < best.cost:
                    best = TrellisNode(total, cand, j)
            layer.append(best)
        if perturb is not None and perturb[0] == k:
            layer = [n._replace(survivor_sample=n.survivor_sample + perturb[1]) for n in layer]
        nodes.append(layer)

    state = min(range(NUM_STATES), key=lambda i: (nodes[-1][i].cost, i))
    symbols = np.empty(len(received), dtype=np.int8)
    for k in range(len(received) - 1, -1, -1):
        symbols[k] = state
        state = nodes[k][state].backpointer
    return symbols, nodes


def path_cost(received, symbols, x0: float, m: MapParams) -> float:
    """Total squared distance between ``received`` and the modulated ``symbols``."""
    x = x0
    total = 0.0
    for r, s in zip(received, symbols):
        x = inverse_map(x, int(s), m)
        total += branch_metric(r, x)
    return total


def brute_force_ml(received, x0: float, m: MapParams) -> np.ndarray:
    """Exhaustive minimum-distance sequence search over all ``8**K`` sequences.

    Sequences are enumerated in lexicographic order and ``argmin`` keeps the
    first minimum, so exact ties resolve to the lexicographically smallest
    sequence.
    """
    received = _as_rail(received)
    K = len(received)
    if K > MAX_BRUTE_FORCE_LENGTH:
        raise ResourceError(
            f"brute force over 8**{K} sequences refused (K <= {MAX_BRUTE_FORCE_LENGTH})"
        )
    a = m.contraction
    levels = np.array([inverse_map(0.0, s, m) for s in range(NUM_STATES)])
    # grow the prefix tree one symbol at a time; index = base-8 prefix, MSB first
    samples = np.array([float(x0)])
    cost = np.zeros(1)
    for r in received:
        samples = (a * samples[:, None] + levels[None, :]).reshape(-1)
        cost = np.repeat(cost, NUM_STATES) + (r - samples) ** 2
    index = int(np.argmin(cost))
    digits = []
    for _ in range(K):
        index, s = divmod(index, NUM_STATES)
        digits.append(s)
    return np.array(digits[::-1], dtype=np.int8)


def demodulate(received: ReceivedFrame, m: MapParams) -> DecodeResult:
    if len(received) == 0:
        raise FramingError("cannot demodulate an empty frame")
    rails = np.stack([received.i, received.q])
    symbols, costs = kernels.viterbi_rails(rails, received.x0, m.contraction, m.levels)
    return DecodeResult(
        symbols=(symbols[0], symbols[1]),
        bits=rails_to_bits(symbols[0], symbols[1]),
        final_cost=float(costs[0] + costs[1]),
        rail_costs=(float(costs[0]), float(costs[1])),
    )
