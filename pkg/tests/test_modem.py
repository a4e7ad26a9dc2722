import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chaosqam.chaosmap import invariant_bound, make_map
from chaosqam.modem import (
    FramingError,
    GRAY_LABELS,
    bits_to_symbols,
    modulate,
    modulate_rail,
    rail_power,
    symbols_to_bits,
)


def bits(text):
    return np.array([int(c) for c in text.replace(" ", "")], dtype=np.uint8)


def test_declared_gray_table():
    table = {"000": 0, "001": 1, "011": 2, "010": 3, "110": 4, "111": 5, "101": 6, "100": 7}
    for label, s in table.items():
        frame = bits_to_symbols(bits(label + label))
        assert frame.rail_i.tolist() == [s]
        assert frame.rail_q.tolist() == [s]


@pytest.mark.parametrize("text, i, q", [("000 000", 0, 0), ("100 110", 7, 4)])
def test_bits_to_symbols_examples(text, i, q):
    frame = bits_to_symbols(bits(text))
    assert frame.rail_i.tolist() == [i]
    assert frame.rail_q.tolist() == [q]
    assert symbols_to_bits(frame).tolist() == bits(text).tolist()


@pytest.mark.parametrize("n", [1, 5, 7, 13])
def test_bits_to_symbols_framing_error(n):
    with pytest.raises(FramingError):
        bits_to_symbols(np.zeros(n, dtype=np.uint8))


def test_gray_adjacency():
    for s in range(7):
        assert bin(GRAY_LABELS[s] ^ GRAY_LABELS[s + 1]).count("1") == 1


def test_round_trip_many_frames():
    rng = np.random.default_rng(11)
    for _ in range(10_000):
        b = rng.integers(0, 2, 6 * rng.integers(1, 5), dtype=np.uint8)
        assert np.array_equal(symbols_to_bits(bits_to_symbols(b)), b)


@pytest.mark.parametrize(
    "syms, p, expected",
    [
        ([7], 0.0, [7.0]),
        # second step (7 + 14) / 2 by hand
        ([7, 7], 0.0, [7.0, 10.5]),
        ([4, 0, 6], 1.0, [1.0, -7.0, 5.0]),
    ],
)
def test_modulate_rail_examples(syms, p, expected):
    assert modulate_rail(syms, 0.0, make_map(p)).tolist() == expected


def test_modulate_rail_rejects_large_x0():
    with pytest.raises(ValueError):
        modulate_rail([0], 7.5, make_map(1.0))


def test_modulate_zero_bits_p1():
    frame = modulate(np.zeros(6, dtype=np.uint8), 0.0, make_map(1.0))
    assert frame.samples.tolist() == [complex(-7, -7)]


def test_modulate_p1_lattice():
    rng = np.random.default_rng(3)
    frame = modulate(rng.integers(0, 2, 6 * 10_000, dtype=np.uint8), 0.0, make_map(1.0))
    lattice = {-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0}
    assert set(frame.i.tolist()) <= lattice
    assert set(frame.q.tolist()) <= lattice


def test_modulate_p04_clouds_bounded():
    m = make_map(0.4)
    rng = np.random.default_rng(4)
    b = rng.integers(0, 2, 6 * 20_000, dtype=np.uint8)
    frame = modulate(b, 0.0, m)
    assert np.max(np.abs(frame.i)) <= 10.0 and np.max(np.abs(frame.q)) <= 10.0
    # eight clouds per rail, one per symbol, each centred on its level
    rail_i = bits_to_symbols(b).rail_i
    for s in range(8):
        cloud = frame.i[rail_i == s]
        assert abs(np.mean(cloud) - (2 * s - 7)) < 0.1
        assert np.ptp(cloud) <= 2 * m.contraction * 10.0 + 1e-12


def test_modulate_matches_pure_recursion():
    m = make_map(0.37)
    rng = np.random.default_rng(5)
    b = rng.integers(0, 2, 600, dtype=np.uint8)
    frame = modulate(b, 1.25, m)
    syms = bits_to_symbols(b)
    x = 1.25
    for k, s in enumerate(syms.rail_i):
        x = m.contraction * x + (4 * int(s) - 14) / 2
        assert frame.i[k] == x


def test_rail_independence():
    m = make_map(0.2)
    rng = np.random.default_rng(6)
    b = rng.integers(0, 2, 600, dtype=np.uint8)
    b2 = b.reshape(-1, 2, 3).copy()
    b2[:, 1] = rng.integers(0, 2, b2[:, 1].shape)
    f1 = modulate(b, 0.0, m)
    f2 = modulate(b2.reshape(-1), 0.0, m)
    assert np.array_equal(f1.i, f2.i)


def test_determinism():
    m = make_map(0.6)
    b = np.random.default_rng(8).integers(0, 2, 6000, dtype=np.uint8)
    assert np.array_equal(modulate(b, 0.0, m).samples, modulate(b, 0.0, m).samples)


@pytest.mark.parametrize("p", [0.0, 0.3, 0.7, 1.0])
def test_initial_condition_forgetting(p):
    m = make_map(p)
    syms = np.random.default_rng(9).integers(0, 8, 60)
    bound = invariant_bound(m)
    x_a = modulate_rail(syms, 0.0, m)
    x_b = modulate_rail(syms, bound, m)
    k = np.arange(60)
    assert np.allclose(np.abs(x_b - x_a), m.contraction ** (k + 1) * bound, rtol=1e-9, atol=1e-13)
    assert np.all(np.abs(x_b - x_a)[49:] < 1e-12)


@pytest.mark.parametrize("p, expected", [(1.0, 21.0), (0.0, 28.0), (0.4, 21 / 0.91)])
def test_rail_power_analytic(p, expected):
    assert rail_power(make_map(p)) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("p", [0.0, 0.4])
def test_rail_power_monte_carlo(p):
    # oracle: long-run empirical second moment of the modulated rail
    m = make_map(p)
    syms = np.random.default_rng(10).integers(0, 8, 1_000_000)
    x = modulate_rail(syms, 0.0, m)
    assert np.mean(x**2) == pytest.approx(rail_power(m), rel=0.01)
    assert abs(np.mean(x)) < 0.05


@settings(max_examples=50)
@given(st.lists(st.integers(0, 7), min_size=1, max_size=40), st.floats(0.0, 1.0))
def test_samples_stay_bounded(syms, p):
    m = make_map(p)
    assert np.all(np.abs(modulate_rail(syms, 0.0, m)) <= invariant_bound(m))
