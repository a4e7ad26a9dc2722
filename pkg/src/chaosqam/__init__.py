"""Chaos-based 64-QAM modem built on symbolic dynamics.

A piecewise-linear eight-branch chaotic map is iterated backwards, driven by
Gray-labelled symbols, on independent I and Q rails.  The receiver is an
eight-state per-survivor Viterbi decoder.
"""
from .analysis import (
    ber_chaos_theory,
    ber_qam_gray_textbook,
    ber_qam_theory,
    erfc,
    w_min_closed_form,
    w_min_ml_estimate,
)
from .channel import ChannelConfig, ReceivedFrame, apply_awgn, noise_sigma
from .chaosmap import (
    MapDomainError,
    MapParameterError,
    MapParams,
    Region,
    forward_map,
    invariant_bound,
    inverse_map,
    make_map,
    region_of,
)
from .harness import BerRecord, Experiment, dump_constellation, run_ber_point, run_experiment
from .kernels import BACKEND
from .modem import (
    FramingError,
    IqFrame,
    SymbolFrame,
    bits_to_symbols,
    modulate,
    modulate_rail,
    rail_power,
    symbols_to_bits,
)
from .receiver import (
    DecodeResult,
    TrellisNode,
    branch_metric,
    brute_force_ml,
    demodulate,
    viterbi_decode_rail,
)

__version__ = "0.1.0"
