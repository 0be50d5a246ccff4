"""Chromosome codec tests: Gray code, round trips, clamping, randomness."""

import random

import pytest

from evochess.genome import (
    CHROMOSOME_BITS, FIELD_WIDTHS, PARAM_RANGES, Chromosome,
    gray_encode, gray_decode, encode, decode, random_chromosome,
    field_window,
)
from evochess.search import SearchParams


# ---------------------------------------------------------------------------
# layout
# ---------------------------------------------------------------------------

class TestLayout:
    def test_seventy_bits_total(self):
        assert CHROMOSOME_BITS == 70
        assert sum(w for _, w in FIELD_WIDTHS) == 70

    def test_every_param_has_a_window(self):
        assert [n for n, _ in FIELD_WIDTHS] == list(PARAM_RANGES)

    def test_windows_cover_each_range(self):
        for name, width in FIELD_WIDTHS:
            lo, hi = PARAM_RANGES[name]
            assert lo == 0
            assert hi <= (1 << width) - 1

    def test_field_windows_partition_the_string(self):
        pos = 0
        for name, width in FIELD_WIDTHS:
            assert field_window(name) == (pos, width)
            pos += width
        assert pos == CHROMOSOME_BITS

    def test_unknown_field_rejected(self):
        with pytest.raises(KeyError):
            field_window("nonsense")


# ---------------------------------------------------------------------------
# Gray code
# ---------------------------------------------------------------------------

class TestGrayCode:
    def test_round_trip(self):
        for n in range(1024):
            assert gray_decode(gray_encode(n)) == n

    def test_known_values(self):
        # the classic 3-bit sequence
        assert [gray_encode(n) for n in range(8)] == \
            [0b000, 0b001, 0b011, 0b010, 0b110, 0b111, 0b101, 0b100]

    def test_adjacency_at_every_field_width(self):
        """Consecutive values differ in exactly one bit: a single mutation
        can always step the decoded value by one."""
        for _, width in FIELD_WIDTHS:
            for n in range((1 << width) - 1):
                diff = gray_encode(n) ^ gray_encode(n + 1)
                assert bin(diff).count("1") == 1

    def test_gray_is_a_permutation(self):
        for width in {w for _, w in FIELD_WIDTHS}:
            seen = {gray_encode(n) for n in range(1 << width)}
            assert seen == set(range(1 << width))


# ---------------------------------------------------------------------------
# chromosome type
# ---------------------------------------------------------------------------

class TestChromosome:
    def test_valid_bits_accepted(self):
        c = Chromosome("01" * 35)
        assert str(c) == "01" * 35
        assert list(c)[:2] == ["0", "1"]

    @pytest.mark.parametrize("bits", ["0" * 69, "0" * 71, "0" * 69 + "2",
                                      "x" * 70, ""])
    def test_bad_bits_rejected(self, bits):
        with pytest.raises(ValueError):
            Chromosome(bits)

    def test_equality_and_hash(self):
        assert Chromosome("0" * 70) == Chromosome("0" * 70)
        assert len({Chromosome("0" * 70), Chromosome("0" * 70)}) == 1

    def test_hamming(self):
        a = Chromosome("0" * 70)
        b = Chromosome("1" + "0" * 68 + "1")
        assert a.hamming(b) == 2
        assert a.hamming(a) == 0


# ---------------------------------------------------------------------------
# codec
# ---------------------------------------------------------------------------

def random_params(rng: random.Random) -> SearchParams:
    return SearchParams(**{name: rng.randint(lo, hi)
                           for name, (lo, hi) in PARAM_RANGES.items()})


class TestCodec:
    def test_default_params_round_trip(self):
        p = SearchParams()
        assert decode(encode(p)) == p

    def test_disabled_params_round_trip(self):
        p = SearchParams.all_disabled()
        assert decode(encode(p)) == p

    def test_random_round_trips(self):
        rng = random.Random(99)
        for _ in range(500):
            p = random_params(rng)
            assert decode(encode(p)) == p

    def test_extreme_values_round_trip(self):
        lows = SearchParams(**{n: lo for n, (lo, _) in PARAM_RANGES.items()})
        highs = SearchParams(**{n: hi for n, (_, hi) in PARAM_RANGES.items()})
        assert decode(encode(lows)) == lows
        assert decode(encode(highs)) == highs

    def test_every_bitstring_decodes(self):
        rng = random.Random(7)
        for _ in range(300):
            c = Chromosome("".join(rng.choice("01") for _ in range(70)))
            p = decode(c)  # must not raise
            for name, (lo, hi) in PARAM_RANGES.items():
                assert lo <= getattr(p, name) <= hi

    def test_decode_clamps_overfull_windows(self):
        # a 3-bit extension window can hold 0..7 but the field caps at 4
        base = encode(SearchParams())
        off, width = field_window("ext_check")
        bits = list(base.bits)
        bits[off:off + width] = format(gray_encode(7), f"0{width}b")
        assert decode(Chromosome("".join(bits))).ext_check == 4

    def test_single_window_isolation(self):
        """Rewriting one field's window never disturbs the others."""
        base = encode(SearchParams())
        off, width = field_window("futility_threshold_2")
        bits = list(base.bits)
        bits[off:off + width] = format(gray_encode(777), f"0{width}b")
        got = decode(Chromosome("".join(bits)))
        want = SearchParams().replace(futility_threshold_2=777)
        assert got == want


# ---------------------------------------------------------------------------
# random chromosomes
# ---------------------------------------------------------------------------

class TestRandomChromosome:
    def test_deterministic_per_seed(self):
        assert random_chromosome(42) == random_chromosome(42)

    def test_seeds_differ(self):
        distinct = {random_chromosome(s).bits for s in range(20)}
        assert len(distinct) == 20

    def test_accepts_rng_instance(self):
        rng = random.Random(5)
        a = random_chromosome(rng)
        b = random_chromosome(rng)
        assert a != b  # the stream advances
        assert random_chromosome(random.Random(5)) == a

    def test_bits_roughly_balanced(self):
        ones = sum(c.bits.count("1")
                   for c in (random_chromosome(s) for s in range(200)))
        mean = ones / (200 * 70)
        assert 0.42 <= mean <= 0.58

    def test_decodes_to_valid_params(self):
        for s in range(50):
            decode(random_chromosome(s))
