"""Chess engine with search selectivity driven by an evolvable parameter set.

The package splits into a rules/search core (chesscore, evaluation, search),
a 70-bit genetic encoding of the search parameters (genome), an optimizer
that evolves them against tactical suites (evolve), and a harness measuring
suite performance and head-to-head strength (harness).  The hot kernel is
compiled when available, with a pure-Python fallback selected at import;
both produce bit-identical results.
"""

__version__ = "0.1.0"

from .kernel import BACKEND
from .chesscore import (EpdRecord, Move, Position, parse_epd, parse_fen,
                        perft)
from .evaluation import evaluate_static
from .genome import Chromosome, decode, encode, random_chromosome
from .search import (SearchBudget, SearchParams, SearchResult,
                     search_position)
from .evolve import GaConfig, run_evolution
from .harness import (elo_difference, play_game, run_match, run_suite,
                      solve_position)

__all__ = [
    "BACKEND", "__version__",
    "Position", "Move", "EpdRecord", "parse_fen", "parse_epd", "perft",
    "evaluate_static",
    "SearchParams", "SearchBudget", "SearchResult", "search_position",
    "Chromosome", "encode", "decode", "random_chromosome",
    "GaConfig", "run_evolution",
    "solve_position", "run_suite", "play_game", "run_match",
    "elo_difference",
]
