"""Analytical BER curves and the minimum-code-distance parameter ``w_min``.

Three curves are provided:

* :func:`ber_qam_theory` - ``2(1 - 1/sqrt(M)) erfc(sqrt(3 n Eb / (2 (M-1) N0)))``
  with the published ``n = 3`` for ``M = 64``;
* :func:`ber_chaos_theory` - the same with ``Eb`` scaled by ``w_min``;
* :func:`ber_qam_gray_textbook` - the usual Gray-coded square M-QAM bit error
  approximation, ``(2/log2 M)(1 - 1/sqrt(M)) erfc(sqrt(3 log2(M) Eb / (2 (M-1) N0)))``.

The first two are evaluated verbatim and can exceed 1 at low SNR; clamp at
the reporting layer with :func:`clamp_probability`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

M_QAM = 64
N_PUBLISHED = 3


class AnalysisParameterError(ValueError):
    pass


def erfc(x: float) -> float:
    return math.erfc(x)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def ber_qam_theory(ebn0_db: float, M: int = M_QAM, n: int = N_PUBLISHED) -> float:
    return ber_chaos_theory(ebn0_db, M, n, 1.0)


def ber_chaos_theory(ebn0_db: float, M: int = M_QAM, n: int = N_PUBLISHED, w_min: float = 1.0) -> float:
    if not 0.0 < w_min <= 1.0:
        raise AnalysisParameterError(f"w_min must lie in (0, 1], got {w_min!r}")
    _check_order(M, n)
    gamma = db_to_linear(ebn0_db)
    return 2.0 * (1.0 - 1.0 / math.sqrt(M)) * erfc(
        math.sqrt(w_min * 3.0 * n * gamma / (2.0 * (M - 1)))
    )


def ber_qam_gray_textbook(ebn0_db: float, M: int = M_QAM) -> float:
    _check_order(M, 1)
    k = math.log2(M)
    gamma = db_to_linear(ebn0_db)
    return (2.0 / k) * (1.0 - 1.0 / math.sqrt(M)) * erfc(
        math.sqrt(3.0 * k * gamma / (2.0 * (M - 1)))
    )


def w_min_closed_form(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise AnalysisParameterError(f"p must satisfy 0 <= p <= 1, got {p!r}")
    return math.sqrt((1.0 + p) / 2.0)


def w_min_ml_estimate(distances) -> float:
    """ML estimate ``sqrt(sum(d**2) / (2K))`` from ``K`` observed distances."""
    d = [float(v) for v in distances]
    if not d:
        raise AnalysisParameterError("need at least one distance")
    if any(v < 0 for v in d):
        raise AnalysisParameterError("distances must be non-negative")
    return math.sqrt(math.fsum(v * v for v in d) / (2 * len(d)))


def clamp_probability(value: float) -> float:
    return min(max(value, 0.0), 1.0)


@dataclass(frozen=True)
class TheoryPoint:
    ebn0_db: float
    p: float
    w_min: float
    ber_qam: float
    ber_chaos: float
    ber_textbook: float
    M: int = M_QAM
    n: int = N_PUBLISHED


def theory_point(p: float, ebn0_db: float) -> TheoryPoint:
    w = w_min_closed_form(p)
    return TheoryPoint(
        ebn0_db=ebn0_db,
        p=p,
        w_min=w,
        ber_qam=ber_qam_theory(ebn0_db),
        ber_chaos=ber_chaos_theory(ebn0_db, w_min=w),
        ber_textbook=ber_qam_gray_textbook(ebn0_db),
    )


def _check_order(M: int, n: int) -> None:
    if M < 2 or M & (M - 1):
        raise AnalysisParameterError(f"M must be a power of two, got {M!r}")
    if n < 1:
        raise AnalysisParameterError(f"n must be at least 1, got {n!r}")
