import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from halfhex.enumeration import enumerate_states
from halfhex.rng import BitStream, FixedBits
from halfhex.shuffle import (MAX_VERIFY_ORDER, forward_distribution, forward_probability,
                             reverse_distribution, reverse_probability, sample, sample_array,
                             sample_many, sample_reference, shuffle_forward, shuffle_reverse,
                             state_from_codes, trajectory, transition_matrix,
                             verify_adjointness, verify_uniform_preservation)
from halfhex.tableau import StaircaseTableau, validate


def T(*rows):
    return StaircaseTableau(rows)


def all_bit_outcomes(t, reverse=False):
    """Oracle: run the shuffle under every assignment of the coins it could read."""
    n = t.order
    cells = [(i, j) for i in range(n + 1) for j in range(i + 1)] if not reverse else \
        [(i, j) for i in range(n) for j in range(i + 1)]
    out = Counter()
    for values in itertools.product((0, 1), repeat=len(cells)):
        bits = FixedBits(dict(zip(cells, values)))
        s = shuffle_reverse(t, bits) if reverse else shuffle_forward(t, bits)
        out[s] += Fraction(1, 2 ** len(cells))
    return dict(out)


def test_forward_examples():
    assert shuffle_forward(T((1,)), FixedBits({(0, 0): 1})) == T((2,), (1, 3))
    assert shuffle_forward(T((1,)), FixedBits({(0, 0): 0})) == T((1,), (1, 3))
    bits = FixedBits({(0, 0): 1, (1, 0): 0})
    assert shuffle_forward(T((2,), (1, 3)), bits) == T((3,), (1, 4), (1, 3, 5))
    assert (1, 1) not in bits.used  # forced push: g(1,1) = 3 equals the new g(0,0)


def test_reverse_examples():
    assert shuffle_reverse(T((3,), (1, 4), (1, 3, 5)), FixedBits({})) == T((2,), (1, 3))
    for b in (0, 1):
        assert shuffle_reverse(T((1,), (1, 3)), FixedBits({}, default=b)) == T((1,))
    with pytest.raises(ValueError):
        shuffle_reverse(T((1,)), FixedBits({}))


def test_probability_examples():
    assert forward_probability(T((2,), (1, 3)), T((3,), (1, 4), (1, 3, 5))) == Fraction(1, 4)
    assert reverse_probability(T((3,), (1, 4), (1, 3, 5)), T((2,), (1, 3))) == 1
    # adjointness on this pair: 1/4 = 2**-2 * 1
    assert forward_probability(T((2,), (1, 3)), T((3,), (1, 4), (1, 3, 5))) == \
        Fraction(1, 4) * reverse_probability(T((3,), (1, 4), (1, 3, 5)), T((2,), (1, 3)))


@pytest.mark.parametrize("n, stride", [(0, 1), (1, 1), (2, 1), (3, 7)])
def test_distributions_match_coin_enumeration(n, stride):
    for t in enumerate_states(n)[::stride]:
        assert forward_distribution(t) == all_bit_outcomes(t)
    for t in enumerate_states(n + 1)[::stride]:
        assert reverse_distribution(t) == all_bit_outcomes(t, reverse=True)


@pytest.mark.parametrize("n", range(0, 4))
def test_forward_output_valid_exhaustive(n):
    # every reachable output up to order 4
    targets = set(enumerate_states(n + 1))
    for t in enumerate_states(n):
        for s in forward_distribution(t):
            assert s in targets


def test_support_symmetry():
    for n in range(1, 4):
        for t in enumerate_states(n - 1):
            for s in enumerate_states(n):
                assert (forward_probability(t, s) > 0) == (reverse_probability(s, t) > 0)


@pytest.mark.parametrize("n", range(1, MAX_VERIFY_ORDER + 1))
def test_adjointness(n):
    v = verify_adjointness(n)
    assert v, v.detail


@pytest.mark.parametrize("n", range(1, MAX_VERIFY_ORDER + 1))
def test_uniform_preservation(n):
    v = verify_uniform_preservation(n)
    assert v, v.detail
    assert v.data["ratio"] == 2 ** n


def test_uniform_n1_explicit():
    m = transition_matrix(1)
    assert m.left_multiply([Fraction(1)]) == [Fraction(1, 2), Fraction(1, 2)]
    assert verify_uniform_preservation(4).data["derived_count"] == 1024


def test_verifier_range():
    with pytest.raises(ValueError):
        verify_adjointness(MAX_VERIFY_ORDER + 1)
    with pytest.raises(ValueError):
        verify_uniform_preservation(0)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 30), seed=st.integers(0, 2 ** 64 - 1), stream=st.integers(0, 10 ** 6))
def test_random_shuffles_stay_valid(n, seed, stream):
    t = sample(n, seed, stream)
    assert validate(t)
    s = shuffle_forward(t, BitStream(seed ^ 1, stream))
    assert validate(s) and s.order == n + 1
    assert validate(shuffle_reverse(s, BitStream(seed, stream)))


def test_sample_examples():
    assert sample(0, 5) == T((1,))
    # a seed whose first coin is 0 gives the minimal order-1 state
    seed = next(s for s in range(100) if BitStream(s).bit(0, 0, 0) == 0)
    assert sample(1, seed) == T((1,), (1, 3))
    seed = next(s for s in range(100) if BitStream(s).bit(0, 0, 0) == 1)
    assert sample(1, seed) == T((2,), (1, 3))


@pytest.mark.parametrize("n", [1, 5, 17, 64, 70])
def test_kernel_matches_reference(n):
    for seed in (0, 1, 2024):
        assert sample(n, seed, stream=3) == sample_reference(n, BitStream(seed, 3))


def test_sample_many_uses_consecutive_streams():
    codes = sample_many(4, 5, seed=9, first_stream=2)
    assert codes.shape[0] == 5
    for m in range(5):
        assert state_from_codes(codes[m], 4) == sample(4, 9, stream=2 + m)


def test_sample_array_layout():
    G = sample_array(3, 1)
    assert G.shape == (4, 4)
    assert list(G[3]) == [1, 3, 5, 7]


def test_trajectory_orders():
    states = list(trajectory(5, BitStream(3)))
    assert [s.order for s in states] == list(range(6))
    assert states[-1] == sample(5, 3)


def test_negative_order():
    with pytest.raises(ValueError):
        sample(-1, 0)
