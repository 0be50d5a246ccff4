"""Static evaluation: material plus piece-square tables, side-to-move relative.

The arithmetic lives in the kernel so both backends share one definition; this
module exposes it on Position along with the score-space constants the search
relies on.
"""

from .chesscore import Position
from .kernel import core as _core

# score space: statics live inside (-EVAL_LIMIT, EVAL_LIMIT); mate scores are
# MATE_BOUND - ply and everything beyond MATE_LIMIT is treated as a mate score
MATE_BOUND = _core.MATE_BOUND
MATE_LIMIT = _core.MATE_LIMIT
EVAL_LIMIT = _core.EVAL_LIMIT
INF_SCORE = _core.INF_SCORE

PIECE_VALUES = {1: 100, 2: 320, 3: 330, 4: 500, 5: 900, 6: 0}


def evaluate_static(p: Position) -> int:
    """Score from the side to move's point of view, clamped to +-EVAL_LIMIT."""
    return p._board.static_eval()


def is_mate_score(score: int) -> bool:
    return score > MATE_LIMIT or score < -MATE_LIMIT


def mate_distance(score: int) -> int:
    """Plies to mate for a mate score; positive means the side to move wins."""
    if not is_mate_score(score):
        raise ValueError(f"{score} is not a mate score")
    return MATE_BOUND - score if score > 0 else -(MATE_BOUND + score)
