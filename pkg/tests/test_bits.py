import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sdnkit.bits import (
    BitSequence,
    PopcountTable,
    PrefixSumTable,
    build_popcount_table,
    build_prefixsum_table,
    build_rank_select,
    copy_bits,
    zero_fill,
)

from oracles import frame_sum_oracle, popcount_oracle, rank_oracle, select_oracle


def bits_from_string(s):
    b = BitSequence(len(s))
    for i, ch in enumerate(s):
        if ch == "1":
            b.set(i)
    return b


def to_string(b):
    return "".join(str(b.get(i)) for i in range(b.len_bits))


class TestBitSequence:
    def test_zero_fill_boundaries(self):
        assert zero_fill(0).len_bits == 0
        one = zero_fill(1)
        assert one.len_bits == 1 and one.get(0) == 0
        b = zero_fill(130)
        assert b.len_bits == 130
        assert all(b.get(i) == 0 for i in range(130))
        assert len(b.words) == 3 and b.words[2] == 0

    def test_set_get_roundtrip(self):
        b = BitSequence(200)
        for i in range(0, 200, 7):
            b.set(i)
            assert b.get(i) == 1
            b.set(i, 0)
            assert b.get(i) == 0

    def test_read_write_cross_word(self):
        b = BitSequence(256)
        b.write(60, 10, 0b1011001110)
        assert b.read(60, 10) == 0b1011001110
        assert b.read(0, 60) == 0
        b.write(100, 64, (1 << 64) - 3)
        assert b.read(100, 64) == (1 << 64) - 3

    def test_wide_fields(self):
        b = BitSequence(1024)
        value = random.Random(1).getrandbits(700)
        b.write(31, 700, value)
        assert b.read(31, 700) == value

    @given(st.integers(0, 1 << 64), st.integers(0, 120), st.integers(1, 64))
    @settings(max_examples=200, deadline=None)
    def test_field_roundtrip(self, value, pos, width):
        b = BitSequence(256)
        value &= (1 << width) - 1
        b.write(pos, width, value)
        assert b.read(pos, width) == value

    def test_bytes_roundtrip_msb_first(self):
        b = bits_from_string("10110100" + "001")
        raw = b.to_bytes()
        assert raw[0] == 0b10110100
        again = BitSequence.from_bytes(raw, 11)
        assert to_string(again) == "10110100001"

    def test_copy_bits(self):
        rng = random.Random(5)
        src = BitSequence(500)
        for i in range(500):
            if rng.random() < 0.5:
                src.set(i)
        dst = BitSequence(500)
        copy_bits(dst, 13, src, 200, 250)
        for i in range(250):
            assert dst.get(13 + i) == src.get(200 + i)


class TestRankSelect:
    def test_worked_example(self):
        # B = 101101 over bits 1..6: three ones among the first four
        rs = build_rank_select(bits_from_string("101101"))
        assert rs.rank(4) == 3
        assert rs.select1(3) == 4
        assert rs.select(3) == 3

    def test_all_zeros(self):
        rs = build_rank_select(BitSequence(77))
        for j in (0, 1, 50, 77):
            assert rs.rank(j) == 0
        with pytest.raises(ValueError):
            rs.select(1)

    def test_empty(self):
        rs = build_rank_select(BitSequence(0))
        assert rs.rank(0) == 0 and rs.total_ones == 0

    def test_random_against_linear_scan(self):
        rng = random.Random(99)
        s = "".join(rng.choice("01") for _ in range(4096))
        rs = build_rank_select(bits_from_string(s))
        ones = s.count("1")
        for _ in range(200):
            j = rng.randrange(4097)
            assert rs.rank(j) == rank_oracle(s, j)
            if ones:
                k = rng.randrange(1, ones + 1)
                assert rs.select(k) == select_oracle(s, k)

    def test_index_memory_within_budget(self):
        for nbits in (64, 4096, 100_000):
            rs = build_rank_select(BitSequence(nbits))
            assert rs._charged <= 0.5 * nbits + 64

    def test_rank_select_inverse(self):
        rng = random.Random(7)
        s = "".join(rng.choice("01") for _ in range(1500))
        rs = build_rank_select(bits_from_string(s))
        for k in range(1, rs.total_ones + 1):
            pos = rs.select(k)
            assert rs.rank(pos + 1) == k
            assert rs.select(rs.rank(pos + 1)) == pos

    @given(st.lists(st.booleans(), min_size=1, max_size=300))
    @settings(max_examples=100, deadline=None)
    def test_rank_steps_match_bits(self, flags):
        s = "".join("1" if f else "0" for f in flags)
        rs = build_rank_select(bits_from_string(s))
        for j in range(1, len(s) + 1):
            step = rs.rank(j) - rs.rank(j - 1)
            assert step == (1 if s[j - 1] == "1" else 0)


class TestTables:
    def test_popcount_basics(self):
        t = build_popcount_table(16)
        assert t.entries[0] == 0
        assert t.entries[0b1011] == 3

    def test_popcount_exhaustive_8bit(self):
        t = PopcountTable(8)
        for z in range(256):
            assert t.entries[z] == popcount_oracle(z)

    def test_popcount_sampled_16bit(self):
        t = PopcountTable(16)
        rng = random.Random(3)
        for _ in range(10_000):
            z = rng.randrange(1 << 16)
            assert t.entries[z] == popcount_oracle(z)

    def test_cap_enforced(self):
        with pytest.raises(ValueError):
            PopcountTable(17)
        with pytest.raises(ValueError):
            build_prefixsum_table(40)

    def test_prefixsum_known_entries(self):
        t = PrefixSumTable(6)
        # two codewords for value one, back to back
        assert t.entries[0b101101] == 2
        # all-zero frame: six zero-valued codewords
        assert t.entries[0] == 0

    def test_prefixsum_exhaustive_8bit(self):
        t = PrefixSumTable(8)
        for e in range(256):
            assert t.entries[e] == frame_sum_oracle(e, 8)

    def test_prefixsum_sampled_16bit(self):
        t = PrefixSumTable(16)
        rng = random.Random(4)
        for _ in range(10_000):
            e = rng.randrange(1 << 16)
            assert t.entries[e] == frame_sum_oracle(e, 16)
