import numpy as np
import pytest

from chaosqam.channel import ChannelConfig, apply_awgn, noise_sigma
from chaosqam.chaosmap import make_map
from chaosqam.modem import FramingError, modulate, modulate_rail
from chaosqam.receiver import (
    ResourceError,
    branch_metric,
    brute_force_ml,
    demodulate,
    path_cost,
    trellis_trace,
    viterbi_decode_rail,
    viterbi_decode_rail_with_cost,
)


def noisy_rail(p, ebn0, K, seed):
    m = make_map(p)
    rng = np.random.default_rng(seed)
    syms = rng.integers(0, 8, K)
    sigma = noise_sigma(ChannelConfig(ebn0, 0, p), m)
    return m, syms, modulate_rail(syms, 0.0, m) + sigma * rng.standard_normal(K)


@pytest.mark.parametrize(
    "received, candidate, expected",
    [(2.5, 2.5, 0.0), (3.0, 1.0, 4.0), (-1.5, 2 * 3 - 7, 0.25)],
)
def test_branch_metric(received, candidate, expected):
    assert branch_metric(received, candidate) == expected


def test_viterbi_noiseless_p1():
    m = make_map(1.0)
    rx = modulate_rail([4, 0, 6], 0.0, m)
    assert viterbi_decode_rail(rx, 0.0, m).tolist() == [4, 0, 6]


@pytest.mark.parametrize("p", [0.0, 0.4, 0.8])
def test_viterbi_noiseless_random(p):
    m = make_map(p)
    rng = np.random.default_rng(int(p * 10))
    for _ in range(20):
        syms = rng.integers(0, 8, 100)
        decoded, cost = viterbi_decode_rail_with_cost(modulate_rail(syms, 0.0, m), 0.0, m)
        assert np.array_equal(decoded, syms)
        assert cost == 0.0


def test_viterbi_rejects_empty():
    with pytest.raises(FramingError):
        viterbi_decode_rail([], 0.0, make_map(0.5))


def test_brute_force_single_symbol():
    assert brute_force_ml([6.9], 0.0, make_map(1.0)).tolist() == [7]


def test_brute_force_noiseless():
    m = make_map(0.3)
    syms = [5, 1, 1, 6]
    rx = modulate_rail(syms, 0.0, m)
    decoded = brute_force_ml(rx, 0.0, m)
    assert decoded.tolist() == syms
    assert path_cost(rx, decoded, 0.0, m) == 0.0


def test_brute_force_refuses_long_frames():
    with pytest.raises(ResourceError):
        brute_force_ml(np.zeros(9), 0.0, make_map(0.5))


def test_tie_rules():
    # midway between the levels of symbols 3 and 4
    m = make_map(1.0)
    assert brute_force_ml([0.0], 0.0, m).tolist() == [3]
    assert viterbi_decode_rail([0.0], 0.0, m).tolist() == [3]


def test_brute_force_matches_enumeration_by_hand():
    # oracle: itertools enumeration with an explicit recursion
    import itertools

    m, _, rx = noisy_rail(0.3, 3.0, 3, seed=1)
    best = min(
        itertools.product(range(8), repeat=3),
        key=lambda seq: path_cost(rx, seq, 0.0, m),
    )
    assert brute_force_ml(rx, 0.0, m).tolist() == list(best)


@pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("ebn0", [0.0, 6.0, 12.0])
def test_oracle_never_beaten(p, ebn0):
    for seed in range(30):
        m, _, rx = noisy_rail(p, ebn0, 6, seed)
        vit, vit_cost = viterbi_decode_rail_with_cost(rx, 0.0, m)
        ml = brute_force_ml(rx, 0.0, m)
        assert vit_cost == pytest.approx(path_cost(rx, vit, 0.0, m), abs=1e-9)
        assert path_cost(rx, ml, 0.0, m) <= vit_cost + 1e-9


def test_viterbi_is_exact_ml_at_p1():
    for seed in range(200):
        m, _, rx = noisy_rail(1.0, 3.0, 6, seed)
        assert np.array_equal(viterbi_decode_rail(rx, 0.0, m), brute_force_ml(rx, 0.0, m))


def test_p1_reduces_to_slicing():
    m, _, rx = noisy_rail(1.0, 4.0, 2000, seed=2)
    sliced = np.clip(np.round((rx + 7) / 2), 0, 7).astype(int)
    assert np.array_equal(viterbi_decode_rail(rx, 0.0, m), sliced)


@pytest.mark.parametrize("p", [0.0, 0.5, 1.0])
def test_sign_symmetry(p):
    m, _, rx = noisy_rail(p, 5.0, 300, seed=3)
    assert np.array_equal(viterbi_decode_rail(-rx, 0.0, m), 7 - viterbi_decode_rail(rx, 0.0, m))


@pytest.mark.parametrize("p", [0.0, 0.35, 1.0])
def test_reference_trellis_matches_kernel(p):
    m, _, rx = noisy_rail(p, 4.0, 80, seed=4)
    ref, nodes = trellis_trace(rx, 0.0, m)
    fast, cost = viterbi_decode_rail_with_cost(rx, 0.0, m)
    assert np.array_equal(ref, fast)
    assert min(n.cost for n in nodes[-1]) == cost


def test_path_cost_monotone():
    m, _, rx = noisy_rail(0.2, 2.0, 60, seed=5)
    _, nodes = trellis_trace(rx, 0.0, m)
    for prev, layer in zip(nodes, nodes[1:]):
        floor = min(n.cost for n in prev)
        for node in layer:
            assert node.cost >= floor
            assert node.cost >= prev[node.backpointer].cost
    assert all(n.cost >= 0 for layer in nodes for n in layer)


@pytest.mark.parametrize("p", [0.0, 0.4, 0.8])
@pytest.mark.parametrize("ebn0", [0.0, 8.0])
def test_survivor_memory_decay(p, ebn0):
    k = 20
    for seed in range(10):
        m, _, rx = noisy_rail(p, ebn0, 100, seed)
        base, _ = trellis_trace(rx, 0.0, m)
        for delta in (1.0, -1.0):
            hit, _ = trellis_trace(rx, 0.0, m, perturb=(k, delta))
            assert np.array_equal(base[k + 40:], hit[k + 40:])


@pytest.mark.parametrize("p", [0.0, 0.4, 0.8, 1.0])
def test_demodulate_noiseless(p):
    m = make_map(p)
    rng = np.random.default_rng(12)
    for _ in range(2500):
        bits = rng.integers(0, 2, 6 * rng.integers(1, 12), dtype=np.uint8)
        rx = apply_awgn(modulate(bits, 0.0, m), ChannelConfig(300.0, 0, p))
        result = demodulate(rx, m)
        assert np.array_equal(result.bits, bits)
        assert len(result.bits) == 6 * len(result.symbols[0])


def test_demodulate_reports_costs():
    m = make_map(0.5)
    bits = np.random.default_rng(1).integers(0, 2, 600, dtype=np.uint8)
    rx = apply_awgn(modulate(bits, 0.0, m), ChannelConfig(4.0, 9, 0.5))
    result = demodulate(rx, m)
    assert result.final_cost == pytest.approx(sum(result.rail_costs))
    assert result.rail_costs[0] == pytest.approx(path_cost(rx.i, result.symbols[0], 0.0, m))
