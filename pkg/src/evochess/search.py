"""Selective alpha-beta search driven by an 18-field parameter record.

SearchParams holds every knob the optimizer can touch: null-move pruning,
futility pruning, multi-cut, and five fractional extensions measured in
quarter-ply units.  search_position runs iterative deepening on a fresh
searcher and reports the principal move, score, and exact node count; given
the same position, params, and budget it returns the same result every time.
"""

import time
from dataclasses import dataclass, field, fields, replace
from typing import Callable, Optional

from .chesscore import Move, Position, _move_from_raw
from .kernel import core as _core

UNITS_PER_PLY = 4

# name -> (low, high) for every tunable field
PARAM_RANGES = {
    "null_move_use": (0, 1),
    "null_move_reduction": (0, 7),
    "null_move_adaptive": (0, 1),
    "null_move_adaptivity_depth": (0, 7),
    "futility_depth": (0, 3),
    "futility_threshold_1": (0, 1023),
    "futility_threshold_2": (0, 1023),
    "futility_threshold_3": (0, 1023),
    "multicut_use": (0, 1),
    "multicut_reduction": (0, 7),
    "multicut_depth": (0, 7),
    "multicut_move_num": (0, 31),
    "multicut_cut_num": (0, 7),
    "ext_check": (0, 4),
    "ext_one_reply": (0, 4),
    "ext_recapture": (0, 4),
    "ext_passed_pawn": (0, 4),
    "ext_mate_threat": (0, 4),
}


@dataclass(frozen=True)
class SearchParams:
    """The 18 search knobs.  Extensions are in quarter-ply units (4 = one ply)."""

    null_move_use: int = 1
    null_move_reduction: int = 2
    null_move_adaptive: int = 0
    null_move_adaptivity_depth: int = 0
    futility_depth: int = 3
    futility_threshold_1: int = 150
    futility_threshold_2: int = 400
    futility_threshold_3: int = 700
    multicut_use: int = 1
    multicut_reduction: int = 2
    multicut_depth: int = 3
    multicut_move_num: int = 10
    multicut_cut_num: int = 3
    ext_check: int = 2
    ext_one_reply: int = 4
    ext_recapture: int = 2
    ext_passed_pawn: int = 2
    ext_mate_threat: int = 2

    def __post_init__(self):
        for f in fields(self):
            lo, hi = PARAM_RANGES[f.name]
            v = getattr(self, f.name)
            if not isinstance(v, int) or isinstance(v, bool) or not lo <= v <= hi:
                raise ValueError(f"{f.name}={v!r} outside [{lo}, {hi}]")

    @staticmethod
    def all_disabled() -> "SearchParams":
        """Plain full-width alpha-beta: no pruning, no extensions."""
        return SearchParams(
            null_move_use=0, null_move_adaptive=0, futility_depth=0,
            multicut_use=0, ext_check=0, ext_one_reply=0, ext_recapture=0,
            ext_passed_pawn=0, ext_mate_threat=0)

    def astuple(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    def asdict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def replace(self, **kw) -> "SearchParams":
        return replace(self, **kw)


@dataclass(frozen=True)
class SearchBudget:
    """Stopping conditions.  max_seconds trades determinism for wall-clock
    control; everything else keeps results exactly reproducible."""

    max_nodes: int = 500_000
    max_depth: int = 64
    tt_cutoffs: bool = True
    early_stop: bool = False
    max_seconds: Optional[float] = None

    def __post_init__(self):
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be positive")


@dataclass(frozen=True)
class IterationInfo:
    depth: int
    best_move: Optional[Move]
    score: int
    nodes: int


@dataclass(frozen=True)
class SearchResult:
    best_move: Optional[Move]
    score: int
    nodes: int
    depth: int
    aborted: bool
    stats: dict = field(default_factory=dict)


def _make_searcher(p: Position, params: SearchParams, budget: SearchBudget):
    s = _core.Searcher(p._board.clone())
    s.set_params(*params.astuple())
    s.set_budget(budget.max_nodes, budget.max_depth, budget.tt_cutoffs,
                 budget.early_stop)
    if budget.max_seconds is not None:
        s.set_deadline(time.monotonic() + budget.max_seconds)
    return s


def search_position(p: Position, params: SearchParams = SearchParams(),
                    budget: SearchBudget = SearchBudget(),
                    on_iteration: Optional[Callable[[IterationInfo], bool]] = None,
                    ) -> SearchResult:
    """Search a position from scratch and return the final iteration's result.

    on_iteration fires after each completed depth; returning False stops the
    search there.  A partially searched depth never supplies the move."""
    searcher = _make_searcher(p, params, budget)

    cb = None
    if on_iteration is not None:
        def cb(depth, raw, score, nodes):
            mv = _move_from_raw(p._board, raw) if raw else None
            return on_iteration(IterationInfo(depth, mv, score, nodes))

    raw, score, nodes, depth, aborted = searcher.run(cb)
    best = _move_from_raw(p._board, raw) if raw else None
    return SearchResult(best, score, nodes, depth, bool(aborted), searcher.stats())


def quiescence_value(p: Position, alpha: int = -_core.INF_SCORE,
                     beta: int = _core.INF_SCORE,
                     params: SearchParams = SearchParams()) -> int:
    """Stand-alone quiescence score for the side to move."""
    searcher = _make_searcher(p, params, SearchBudget())
    return searcher.quiescence_value(alpha, beta)


# ---------------------------------------------------------------------------
# Pruning arithmetic, exposed for inspection and testing.  The kernel inlines
# the same rules; unit tests hold the two in lockstep.
# ---------------------------------------------------------------------------

def null_move_reduction(depth: int, params: SearchParams) -> int:
    """Effective null-move R at a node `depth` plies deep: adaptive mode
    drops R by one at or below the adaptivity depth."""
    r = params.null_move_reduction
    if params.null_move_adaptive and depth <= params.null_move_adaptivity_depth:
        r -= 1
    return r


def futility_margin(depth: int, params: SearchParams) -> Optional[int]:
    """Margin at a frontier depth (1..3 plies), or None when futility is off
    at that depth."""
    if depth < 1 or depth > params.futility_depth:
        return None
    return (params.futility_threshold_1, params.futility_threshold_2,
            params.futility_threshold_3)[depth - 1]


def futility_check(static_eval: int, alpha: int, depth: int,
                   params: SearchParams) -> bool:
    """True when a quiet move at this frontier node may be pruned: the static
    score plus the depth's margin still fails to reach alpha."""
    margin = futility_margin(depth, params)
    if margin is None:
        return False
    return static_eval + margin < alpha


@dataclass(frozen=True)
class ExtensionContext:
    """Facts about the node needed to size a move's extension."""

    gives_check: bool = False
    one_reply: bool = False
    is_recapture: bool = False
    passed_pawn_push: bool = False
    mate_threat: bool = False


def compute_extension(ctx: ExtensionContext, params: SearchParams) -> int:
    """Extension in quarter-ply units: applicable bonuses summed, then capped
    at one full ply per move."""
    units = 0
    if ctx.gives_check:
        units += params.ext_check
    if ctx.one_reply:
        units += params.ext_one_reply
    if ctx.is_recapture:
        units += params.ext_recapture
    if ctx.passed_pawn_push:
        units += params.ext_passed_pawn
    if ctx.mate_threat:
        units += params.ext_mate_threat
    return min(units, UNITS_PER_PLY)


def extension_context(p: Position, m: Move, prev_capture_square: int = -1,
                      mate_threat: bool = False) -> ExtensionContext:
    """Build the extension facts for playing m in p.

    one_reply is judged at positions already in check with a single legal
    move; recapture means m captures on the square just captured on."""
    gives_check = bool(p._board.gives_check(m.raw))
    one_reply = p.in_check() and len(p._board.legal_moves()) == 1
    is_recapture = m.is_capture and m.to_square == prev_capture_square
    passed = False
    if abs(m.piece) == 1 and not m.promotion:
        rel_rank = m.to_square >> 4 if m.piece > 0 else 7 - (m.to_square >> 4)
        if rel_rank == 6:
            token = p.apply(m)
            try:
                passed = p._board.is_passed_pawn(m.to_square,
                                                 1 if m.piece > 0 else -1)
            finally:
                p.unapply(token)
    return ExtensionContext(gives_check, one_reply, is_recapture, passed,
                            mate_threat)
