"""Monte Carlo BER sweeps over (p, Eb/N0) and constellation dumps.

Every frame draws its bits and noise from its own Philox stream keyed by
``(master_seed, p, Eb/N0, frame index)``, and the stopping rule is checked
after each frame in order.  Totals therefore do not depend on batch sizes or
on how points are spread across worker threads.
"""
from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analysis, kernels
from .channel import ChannelConfig, derive_seed, float_key, gaussian_noise, generator, noise_sigma
from .chaosmap import MapParameterError, MapParams, invariant_bound, make_map
from .modem import BITS_PER_RAIL, BITS_PER_SYMBOL, GRAY_LABELS, labels_to_symbols

CSV_HEADER = ("p", "ebn0_db", "bits", "errors", "ber", "ci95",
              "theory_eq12", "theory_eq13", "theory_textbook")
CONSTELLATION_HEADER = ("i", "q")

DEFAULT_P_VALUES = (0.1, 0.5, 1.0)
DEFAULT_EBN0_GRID = (0.0, 2.0, 16.0)
DEFAULT_MIN_BITS = 100_000
DEFAULT_MIN_ERRORS = 100
DEFAULT_MAX_BITS = 10_000_000
DEFAULT_FRAME_SYMBOLS = 1000
DEFAULT_SEED = 1
Z95 = 1.959963984540054

_MAX_BATCH_FRAMES = 256
# bit errors between Gray labels of transmitted and decided symbols
_LABEL_DISTANCE = np.array(
    [[bin(GRAY_LABELS[t] ^ GRAY_LABELS[d]).count("1") for d in range(8)] for t in range(8)],
    dtype=np.int64,
)


class ExperimentError(ValueError):
    pass


def ebn0_grid(start: float, step: float, stop: float) -> list[float]:
    """Points ``start, start+step, ...`` up to and including ``stop`` if it lands on the grid."""
    if not all(math.isfinite(v) for v in (start, step, stop)):
        raise ExperimentError("Eb/N0 grid values must be finite")
    if step <= 0:
        raise ExperimentError(f"Eb/N0 grid step must be positive, got {step!r}")
    if stop < start:
        raise ExperimentError(f"Eb/N0 grid stop {stop!r} is below start {start!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


@dataclass(frozen=True)
class Experiment:
    p_values: tuple[float, ...] = DEFAULT_P_VALUES
    ebn0_grid_db: tuple[float, float, float] = DEFAULT_EBN0_GRID
    min_bits: int = DEFAULT_MIN_BITS
    min_errors: int = DEFAULT_MIN_ERRORS
    max_bits: int = DEFAULT_MAX_BITS
    frame_symbols: int = DEFAULT_FRAME_SYMBOLS
    master_seed: int = DEFAULT_SEED
    x0: float = 0.0
    ebn0_values: tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))
        if not self.p_values:
            raise ExperimentError("p: at least one value is required")
        for p in self.p_values:
            try:
                make_map(p)
            except MapParameterError as exc:
                raise ExperimentError(f"p: {exc}") from None
        object.__setattr__(self, "ebn0_values", tuple(ebn0_grid(*self.ebn0_grid_db)))
        if self.frame_symbols < 1:
            raise ExperimentError(f"frame: need at least 1 symbol per frame, got {self.frame_symbols}")
        if self.min_bits < BITS_PER_SYMBOL * self.frame_symbols:
            raise ExperimentError(
                f"bits: min_bits = {self.min_bits} is below one frame "
                f"({BITS_PER_SYMBOL * self.frame_symbols} bits)"
            )
        if self.max_bits < self.min_bits:
            raise ExperimentError(f"max-bits: cap {self.max_bits} is below min_bits {self.min_bits}")
        if self.min_errors < 0:
            raise ExperimentError("min-errors: must be non-negative")
        if not 0 <= self.master_seed < 2**64:
            raise ExperimentError("seed: must be a 64-bit unsigned integer")
        for p in self.p_values:
            bound = invariant_bound(make_map(p))
            if not abs(self.x0) <= bound:
                raise ExperimentError(f"x0: |x0| must not exceed {bound!r} for p = {p!r}")

    @property
    def frame_bits(self) -> int:
        return BITS_PER_SYMBOL * self.frame_symbols


@dataclass(frozen=True)
class BerRecord:
    p: float
    ebn0_db: float
    bits_simulated: int
    bit_errors: int
    ber_estimate: float
    ci95_halfwidth: float
    theory_eq12: float
    theory_eq13: float
    theory_textbook: float

    @property
    def gap_eq13(self) -> float:
        """Signed ``simulated - theory_eq13`` (diagnostic)."""
        return self.ber_estimate - self.theory_eq13

    def csv_row(self) -> list[str]:
        return [
            _fmt(self.p), _fmt(self.ebn0_db), str(self.bits_simulated), str(self.bit_errors),
            _fmt(self.ber_estimate), _fmt(self.ci95_halfwidth), _fmt(self.theory_eq12),
            _fmt(self.theory_eq13), _fmt(self.theory_textbook),
        ]


def _fmt(value: float) -> str:
    return repr(float(value))


def make_record(p: float, ebn0_db: float, bits: int, errors: int) -> BerRecord:
    ber = errors / bits
    t = analysis.theory_point(p, ebn0_db)
    clamp = analysis.clamp_probability
    return BerRecord(
        p=p,
        ebn0_db=ebn0_db,
        bits_simulated=bits,
        bit_errors=errors,
        ber_estimate=ber,
        ci95_halfwidth=Z95 * math.sqrt(ber * (1.0 - ber) / bits),
        theory_eq12=clamp(t.ber_qam),
        theory_eq13=clamp(t.ber_chaos),
        theory_textbook=clamp(t.ber_textbook),
    )


def frame_seeds(point_seed: int, frame: int) -> tuple[int, int]:
    """(bit stream seed, noise seed) for one frame of a BER point."""
    return derive_seed(point_seed, frame, 0), derive_seed(point_seed, frame, 1)


def point_seed(master_seed: int, p: float, ebn0_db: float) -> int:
    return derive_seed(master_seed, float_key(p), float_key(ebn0_db))


def frame_bits(seed: int, nbits: int) -> np.ndarray:
    return generator(seed).integers(0, 2, nbits, dtype=np.uint8)


def simulate_frames(m: MapParams, sigma: float, seed: int, frames: range,
                    frame_symbols: int, x0: float = 0.0) -> np.ndarray:
    """Bit-error count of each frame in ``frames``; frames are batched through the kernels."""
    nframes = len(frames)
    K = frame_symbols
    tx = np.empty((nframes, 2, K), dtype=np.int8)
    noise = np.empty((nframes, 2, K))
    for n, f in enumerate(frames):
        bit_seed, noise_seed = frame_seeds(seed, f)
        bits = frame_bits(bit_seed, BITS_PER_SYMBOL * K)
        # (K, rail, 3) -> (rail, K)
        tx[n] = labels_to_symbols(bits.reshape(K, 2, BITS_PER_RAIL)).T
        noise[n] = gaussian_noise(noise_seed, (2, K), sigma)
    rails = tx.reshape(2 * nframes, K)
    clean = kernels.modulate_rails(rails, x0, m.contraction, m.levels)
    received = clean + noise.reshape(2 * nframes, K)
    decided, _ = kernels.viterbi_rails(received, x0, m.contraction, m.levels)
    errors = _LABEL_DISTANCE[rails, decided]
    return errors.reshape(nframes, -1).sum(axis=1)


def run_ber_point(p: float, ebn0_db: float, exp: Experiment) -> BerRecord:
    m = make_map(p)
    sigma = noise_sigma(ChannelConfig(ebn0_db, 0, p), m)
    seed = point_seed(exp.master_seed, p, ebn0_db)
    bits = errors = 0
    next_frame = 0
    batch = 8
    while True:
        counts = simulate_frames(m, sigma, seed, range(next_frame, next_frame + batch),
                                 exp.frame_symbols, exp.x0)
        for count in counts:
            bits += exp.frame_bits
            errors += int(count)
            if bits >= exp.min_bits and (errors >= exp.min_errors or bits >= exp.max_bits):
                return make_record(p, ebn0_db, bits, errors)
        next_frame += batch
        batch = min(2 * batch, _MAX_BATCH_FRAMES)


def run_experiment(exp: Experiment, workers: int = 1, progress=None) -> list[BerRecord]:
    """All ``p x Eb/N0`` points, sorted by ``(p, ebn0_db)``.

    ``progress`` is called with each finished record, in completion order.
    """
    points = sorted((p, e) for p in exp.p_values for e in exp.ebn0_values)

    def one(point):
        record = run_ber_point(point[0], point[1], exp)
        if progress is not None:
            progress(record)
        return record

    if workers <= 1:
        records = [one(pt) for pt in points]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, points))
    return sorted(records, key=lambda r: (r.p, r.ebn0_db))


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in records:
        writer.writerow(record.csv_row())
    return buf.getvalue()


def dump_constellation(p: float, num_symbols: int, seed: int, x0: float = 0.0) -> np.ndarray:
    """``(num_symbols, 2)`` array of ``(i, q)`` samples for uniformly random symbols."""
    if num_symbols < 1:
        raise ExperimentError(f"symbols: need at least 1, got {num_symbols}")
    m = make_map(p)
    symbols = generator(seed).integers(0, 8, (2, num_symbols), dtype=np.int8)
    rails = kernels.modulate_rails(symbols, x0, m.contraction, m.levels)
    return np.ascontiguousarray(rails.T)


def constellation_to_csv(points: np.ndarray) -> str:
    lines = [",".join(CONSTELLATION_HEADER)]
    lines.extend(f"{_fmt(i)},{_fmt(q)}" for i, q in points)
    return "\n".join(lines) + "\n"


def write_atomic(path: str | os.PathLike, data: str | bytes) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def render_ber_plot(records, path: str | os.PathLike) -> None:
    """SVG of simulated points with 95% error bars over the three theory curves."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    records = list(records)
    p_values = sorted({r.p for r in records})
    lo = min(r.ebn0_db for r in records)
    hi = max(r.ebn0_db for r in records)
    dense = np.linspace(lo, hi, 200)

    fig, ax = plt.subplots(figsize=(7, 5))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for n, p in enumerate(p_values):
        color = colors[n % len(colors)]
        pts = [r for r in records if r.p == p and r.bit_errors > 0]
        if pts:
            ax.errorbar(
                [r.ebn0_db for r in pts],
                [r.ber_estimate for r in pts],
                yerr=[min(r.ci95_halfwidth, 0.999 * r.ber_estimate) for r in pts],
                fmt="o", color=color, capsize=3, label=f"simulated p={p:g}",
            )
        w = analysis.w_min_closed_form(p)
        ax.semilogy(dense, [analysis.clamp_probability(analysis.ber_chaos_theory(e, w_min=w))
                            for e in dense],
                    "--", color=color, label=f"eq13 w_min={w:.3f} (p={p:g})")
    ax.semilogy(dense, [analysis.clamp_probability(analysis.ber_qam_theory(e)) for e in dense],
                "k:", label="eq12 (n=3)")
    ax.semilogy(dense, [analysis.ber_qam_gray_textbook(e) for e in dense],
                "k-", lw=1, label="Gray 64-QAM textbook")
    ax.set_xlabel("Eb/N0 [dB]")
    ax.set_ylabel("BER")
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    write_atomic(path, buf.getvalue())
