"""70-bit chromosome codec for the search parameters.

Each of the 18 fields occupies a fixed window of the bit string, Gray-coded
so a single mutation moves the decoded value by one step.  Decoding clamps
to the field's legal range, so every 70-bit string is a valid genotype and
crossover/mutation can never produce an invalid individual.
"""

import random
from dataclasses import dataclass

from .search import PARAM_RANGES, SearchParams

# (field, bits) in chromosome order; offsets follow cumulatively
FIELD_WIDTHS = (
    ("null_move_use", 1),
    ("null_move_reduction", 3),
    ("null_move_adaptive", 1),
    ("null_move_adaptivity_depth", 3),
    ("futility_depth", 2),
    ("futility_threshold_1", 10),
    ("futility_threshold_2", 10),
    ("futility_threshold_3", 10),
    ("multicut_use", 1),
    ("multicut_reduction", 3),
    ("multicut_depth", 3),
    ("multicut_move_num", 5),
    ("multicut_cut_num", 3),
    ("ext_check", 3),
    ("ext_one_reply", 3),
    ("ext_recapture", 3),
    ("ext_passed_pawn", 3),
    ("ext_mate_threat", 3),
)

CHROMOSOME_BITS = sum(w for _, w in FIELD_WIDTHS)
assert CHROMOSOME_BITS == 70


def gray_encode(n: int) -> int:
    return n ^ (n >> 1)


def gray_decode(g: int) -> int:
    n = g
    shift = 1
    while (n >> shift) > 0:
        n ^= n >> shift
        shift <<= 1
    return n


@dataclass(frozen=True)
class Chromosome:
    """Immutable 70-character string of '0'/'1', most significant bit first
    within each field window."""

    bits: str

    def __post_init__(self):
        if len(self.bits) != CHROMOSOME_BITS or set(self.bits) - {"0", "1"}:
            raise ValueError(
                f"chromosome must be {CHROMOSOME_BITS} chars of 0/1")

    def __str__(self) -> str:
        return self.bits

    def __iter__(self):
        return iter(self.bits)

    def hamming(self, other: "Chromosome") -> int:
        return sum(a != b for a, b in zip(self.bits, other.bits))


def encode(params: SearchParams) -> Chromosome:
    """Params -> chromosome.  Values are Gray-coded into their field windows."""
    out = []
    for name, width in FIELD_WIDTHS:
        v = getattr(params, name)
        lo, hi = PARAM_RANGES[name]
        if not lo <= v <= hi:
            raise ValueError(f"{name}={v} outside [{lo}, {hi}]")
        out.append(format(gray_encode(v), f"0{width}b"))
    return Chromosome("".join(out))


def decode(c: Chromosome) -> SearchParams:
    """Chromosome -> params, clamping each field into its legal range."""
    values = {}
    pos = 0
    for name, width in FIELD_WIDTHS:
        raw = gray_decode(int(c.bits[pos:pos + width], 2))
        lo, hi = PARAM_RANGES[name]
        values[name] = min(max(raw, lo), hi)
        pos += width
    return SearchParams(**values)


def random_chromosome(seed) -> Chromosome:
    """Uniform random chromosome; `seed` may be an int or a random.Random."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return Chromosome("".join("01"[rng.getrandbits(1)]
                              for _ in range(CHROMOSOME_BITS)))


def field_window(name: str) -> tuple:
    """(offset, width) of a field's bit window within the chromosome."""
    pos = 0
    for fname, width in FIELD_WIDTHS:
        if fname == name:
            return pos, width
        pos += width
    raise KeyError(name)
