"""Quick end-to-end checks used by ``chaosqam selftest``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import ChannelConfig, apply_awgn, derive_seed, gaussian_noise, generator, noise_sigma
from .chaosmap import make_map
from .modem import modulate, modulate_rail
from .receiver import brute_force_ml, demodulate, path_cost, viterbi_decode_rail_with_cost


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def noiseless_roundtrip(p: float, nbits: int, seed: int) -> CheckResult:
    m = make_map(p)
    bits = generator(seed).integers(0, 2, nbits, dtype=np.uint8)
    frame = modulate(bits, 0.0, m)
    rx = apply_awgn(frame, ChannelConfig(300.0, seed, p))
    decoded = demodulate(rx, m).bits
    errors = int(np.count_nonzero(decoded != bits))
    return CheckResult(f"noiseless p={p:g}", errors == 0, f"{errors} bit errors in {nbits}")


def oracle_equivalence(p: float, ebn0_db: float, trials: int, seed: int, length: int = 6) -> CheckResult:
    """Compare the 8-state decoder with exhaustive ML on short noisy frames."""
    m = make_map(p)
    sigma = noise_sigma(ChannelConfig(ebn0_db, 0, p), m)
    agree = 0
    worst_gap = 0.0
    suboptimal_ml = 0
    for t in range(trials):
        rng = generator(derive_seed(seed, t, 0))
        symbols = rng.integers(0, 8, length, dtype=np.int8)
        received = modulate_rail(symbols, 0.0, m) + gaussian_noise(derive_seed(seed, t, 1), length, sigma)
        vit, vit_cost = viterbi_decode_rail_with_cost(received, 0.0, m)
        ml = brute_force_ml(received, 0.0, m)
        ml_cost = path_cost(received, ml, 0.0, m)
        if np.array_equal(vit, ml):
            agree += 1
        else:
            worst_gap = max(worst_gap, vit_cost - ml_cost)
        if vit_cost < ml_cost - 1e-9:
            suboptimal_ml += 1
    detail = f"{agree}/{trials} identical"
    if agree < trials:
        detail += f", largest decoder excess cost {worst_gap:.4g}"
    if suboptimal_ml:
        detail += f", oracle beaten {suboptimal_ml}x"
    return CheckResult(f"viterbi == ML  p={p:g} Eb/N0={ebn0_db:g} dB", agree == trials, detail)


def backend_parity(seed: int) -> CheckResult:
    if len(kernels.available_backends()) < 2:
        return CheckResult("backend parity", True, "only the python backend is available")
    rng = generator(seed)
    m = make_map(0.3)
    symbols = rng.integers(0, 8, (16, 300), dtype=np.int8)
    clean = {b: kernels.modulate_rails(symbols, 0.0, m.contraction, m.levels, backend=b)
             for b in ("cython", "python")}
    received = clean["python"] + 3.0 * rng.standard_normal(clean["python"].shape)
    decoded = {b: kernels.viterbi_rails(received, 0.0, m.contraction, m.levels, backend=b)
               for b in ("cython", "python")}
    same = (np.array_equal(clean["cython"], clean["python"])
            and np.array_equal(decoded["cython"][0], decoded["python"][0])
            and np.array_equal(decoded["cython"][1], decoded["python"][1]))
    return CheckResult("backend parity", same, "cython and python kernels bit-identical" if same
                       else "cython and python kernels disagree")


def run_selftest(trials: int = 200, seed: int = 2024, report=print) -> bool:
    results = [backend_parity(seed)]
    for p in (0.0, 0.4, 0.8, 1.0):
        results.append(noiseless_roundtrip(p, 60_000, seed))
    for p in (0.1, 0.5, 0.9):
        for ebn0 in (0.0, 6.0, 12.0):
            results.append(oracle_equivalence(p, ebn0, trials, derive_seed(seed, int(p * 10), int(ebn0))))
    for r in results:
        report(r.line())
    return all(r.passed for r in results)
