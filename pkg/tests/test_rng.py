import numpy as np
import pytest

from halfhex import _kernels
from halfhex.rng import GOLDEN, RNG_NAME, BitStream, FixedBits, StepBits, mix64, stream_key, word


def test_mix64_matches_reference_splitmix64():
    # first outputs of the published SplitMix64 generator started at state 0
    state, outs = 0, []
    for _ in range(3):
        state = (state + GOLDEN) & (2 ** 64 - 1)
        outs.append(mix64(state))
    assert outs == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_contract_name():
    assert RNG_NAME == "splitmix64-addr/v1"


def test_bits_are_addressable_and_repeatable():
    a, b = BitStream(42), BitStream(42)
    addrs = [(3, 1, 0), (3, 1, 70), (0, 0, 0), (9, 4, 63)]
    assert [a.bit(*x) for x in addrs] == [b.bit(*x) for x in reversed(addrs)][::-1]
    w = word(stream_key(42, 0), 3, 1, 1)
    assert a.bit(3, 1, 70) == (w >> 6) & 1


def test_streams_differ():
    x = [BitStream(1, s).bit(0, 0, c) for s in range(2) for c in range(64)]
    assert x[:64] != x[64:]


def test_bits_roughly_fair():
    b = BitStream(7)
    ones = sum(b.bit(s, r, c) for s in range(20) for r in range(10) for c in range(100))
    assert abs(ones / 20000 - 0.5) < 0.02


def test_kernel_word_matches_python():
    key = stream_key(123, 4)
    for addr in [(0, 0, 0), (5, 3, 2), (999, 998, 15)]:
        assert int(_kernels._word(np.uint64(key), *addr)) == word(key, *addr)


def test_seed_range():
    with pytest.raises(ValueError):
        BitStream(-1)
    BitStream(2 ** 64 - 1)


def test_fixed_bits_records_and_fails_loudly():
    f = FixedBits({(0, 0): 1})
    assert f.bit(5, 0, 0) == 1
    assert f.used == [(0, 0)]
    with pytest.raises(KeyError):
        f.bit(0, 1, 0)
    assert FixedBits({}, default=0).bit(0, 3, 3) == 0
    assert StepBits({(1, 0, 0): 1}).bit(1, 0, 0) == 1
