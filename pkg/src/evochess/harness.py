"""Suite solving and match play.

solve_position counts the nodes an engine configuration spends before its
root choice lands on a test position's best move; run_suite aggregates that
over an EPD suite.  play_game/run_match pit two configurations against each
other under per-move node budgets and report the score as W% and an Elo
difference.  Everything here is deterministic unless a wall-clock budget is
explicitly requested.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .chesscore import (EpdRecord, Position, is_insufficient_material,
                        move_to_san, parse_fen)
from .search import SearchBudget, SearchParams, search_position

NODE_CAP_DEFAULT = 500_000
MATCH_NODES_DEFAULT = 200_000
MAX_GAME_PLIES = 300


class SolveResult(NamedTuple):
    solved: bool
    nodes: int
    depth: int


@dataclass(frozen=True)
class SuiteRow:
    id: str
    solved: bool
    nodes: int
    depth: int


@dataclass(frozen=True)
class SuiteReport:
    rows: tuple
    solved_count: int
    total_nodes: int


@dataclass(frozen=True)
class GameRecord:
    result: str                  # "1-0" | "1/2-1/2" | "0-1"
    termination: str
    san_moves: tuple
    uci_moves: tuple
    opening_fen: str
    final_fen: str

    @property
    def plies(self) -> int:
        return len(self.san_moves)


@dataclass(frozen=True)
class GameSummary:
    opening_index: int
    a_is_white: bool
    record: GameRecord

    @property
    def a_points(self) -> float:
        if self.record.result == "1/2-1/2":
            return 0.5
        a_won = (self.record.result == "1-0") == self.a_is_white
        return 1.0 if a_won else 0.0


@dataclass(frozen=True)
class MatchResult:
    wins: int
    draws: int
    losses: int
    games: tuple

    @property
    def game_count(self) -> int:
        return self.wins + self.draws + self.losses

    @property
    def w_pct(self) -> float:
        return (self.wins + self.draws / 2) / self.game_count

    @property
    def rd(self):
        return elo_difference(self.w_pct)


# ---------------------------------------------------------------------------
# suite solving
# ---------------------------------------------------------------------------

def solve_position(rec: EpdRecord, params: SearchParams,
                   node_cap: int = NODE_CAP_DEFAULT) -> SolveResult:
    """Iterate depths until the root best move is one of the record's best
    moves.  Unsolved runs report exactly node_cap nodes."""
    if node_cap < 1:
        raise ValueError("node_cap must be >= 1")
    best_raws = rec.best_raws
    state = {"solved": False, "nodes": node_cap, "depth": 0}

    def on_iteration(info):
        state["depth"] = info.depth
        if info.best_move is not None and info.best_move.raw in best_raws:
            state["solved"] = True
            state["nodes"] = info.nodes
            return False
        return True

    budget = SearchBudget(max_nodes=node_cap, max_depth=99)
    search_position(rec.position, params, budget, on_iteration)
    if not state["solved"]:
        return SolveResult(False, node_cap, state["depth"])
    return SolveResult(True, state["nodes"], state["depth"])


def run_suite(records: Sequence[EpdRecord], params: SearchParams,
              node_cap: int = NODE_CAP_DEFAULT, jobs: int = 1,
              progress=None) -> SuiteReport:
    """Solve every record; totals do not depend on order or parallelism."""
    if not records:
        raise ValueError("suite is empty")
    if jobs > 1:
        specs = [_record_spec(r) for r in records]
        ptuple = params.astuple()
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_solve_task,
                                  [(s, ptuple, node_cap) for s in specs]))
    else:
        results = []
        for i, rec in enumerate(records):
            results.append(solve_position(rec, params, node_cap))
            if progress:
                progress(i + 1, len(records))
    rows = tuple(
        SuiteRow(rec.id or f"pos{i + 1}", r.solved, r.nodes, r.depth)
        for i, (rec, r) in enumerate(zip(records, results)))
    return SuiteReport(rows, sum(r.solved for r in rows),
                       sum(r.nodes for r in rows))


def _record_spec(rec: EpdRecord):
    return (rec.position.fen(), tuple(m.uci for m in rec.best_moves), rec.id)


def _record_from_spec(spec) -> EpdRecord:
    fen, ucis, rec_id = spec
    position = parse_fen(fen)
    by_uci = {m.uci: m for m in position.legal_moves()}
    return EpdRecord(position, tuple(by_uci[u] for u in ucis), rec_id)


def _solve_task(args) -> SolveResult:
    spec, ptuple, node_cap = args
    return solve_position(_record_from_spec(spec), SearchParams(*ptuple),
                          node_cap)


# ---------------------------------------------------------------------------
# game play
# ---------------------------------------------------------------------------

def play_game(white: SearchParams, black: SearchParams, opening: Position,
              nodes_per_move: int = MATCH_NODES_DEFAULT,
              max_plies: int = MAX_GAME_PLIES,
              move_seconds: Optional[float] = None) -> GameRecord:
    """One deterministic game from the opening position.

    Terminations: checkmate, stalemate, fifty-move, threefold, insufficient,
    move-limit.  A wall-clock per-move limit makes the game non-deterministic
    and is off by default."""
    p = opening.copy()
    opening_fen = opening.fen()
    budget = SearchBudget(max_nodes=nodes_per_move, max_depth=64,
                          early_stop=True, max_seconds=move_seconds)
    san_moves = []
    uci_moves = []

    while True:
        legal = p.legal_moves()
        if not legal:
            if p.in_check():
                result = "0-1" if p.side_to_move == 1 else "1-0"
                term = "checkmate"
            else:
                result, term = "1/2-1/2", "stalemate"
            break
        if p.halfmove_clock >= 100:
            result, term = "1/2-1/2", "fifty-move"
            break
        if p.repetition_count() >= 3:
            result, term = "1/2-1/2", "threefold"
            break
        if is_insufficient_material(p):
            result, term = "1/2-1/2", "insufficient"
            break
        if len(san_moves) >= max_plies:
            result, term = "1/2-1/2", "move-limit"
            break

        params = white if p.side_to_move == 1 else black
        res = search_position(p, params, budget)
        move = res.best_move if res.best_move is not None else legal[0]
        san_moves.append(move_to_san(p, move))
        uci_moves.append(move.uci)
        p.apply(move)

    return GameRecord(result, term, tuple(san_moves), tuple(uci_moves),
                      opening_fen, p.fen())


def run_match(a: SearchParams, b: SearchParams, openings: Sequence[Position],
              nodes_per_move: int = MATCH_NODES_DEFAULT, jobs: int = 1,
              move_seconds: Optional[float] = None,
              progress=None) -> MatchResult:
    """Each opening is played twice with colors swapped; scores are for A."""
    if not openings:
        raise ValueError("openings list is empty")
    tasks = []
    for i, opening in enumerate(openings):
        fen = opening.fen()
        tasks.append((i, True, a.astuple(), b.astuple(), fen))
        tasks.append((i, False, b.astuple(), a.astuple(), fen))

    if jobs > 1:
        args = [(w, bl, fen, nodes_per_move, move_seconds)
                for _, _, w, bl, fen in tasks]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            records = list(ex.map(_game_task, args))
    else:
        records = []
        for n, (_, _, w, bl, fen) in enumerate(tasks):
            records.append(_game_task((w, bl, fen, nodes_per_move,
                                       move_seconds)))
            if progress:
                progress(n + 1, len(tasks))

    games = tuple(GameSummary(idx, a_white, rec)
                  for (idx, a_white, _, _, _), rec in zip(tasks, records))
    wins = sum(1 for g in games if g.a_points == 1.0)
    draws = sum(1 for g in games if g.a_points == 0.5)
    losses = sum(1 for g in games if g.a_points == 0.0)
    return MatchResult(wins, draws, losses, games)


def _game_task(args) -> GameRecord:
    white_t, black_t, fen, nodes_per_move, move_seconds = args
    return play_game(SearchParams(*white_t), SearchParams(*black_t),
                     parse_fen(fen), nodes_per_move,
                     move_seconds=move_seconds)


# ---------------------------------------------------------------------------
# rating
# ---------------------------------------------------------------------------

def elo_difference(w: float):
    """Elo gap for a score fraction: 400*log10(w/(1-w)), rounded.  The exact
    antisymmetry RD(w) = -RD(1-w) is kept by folding onto min(w, 1-w).
    Returns signed math.inf at w = 0 or 1."""
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"score fraction {w} outside [0, 1]")
    if w == 0.0:
        return -math.inf
    if w == 1.0:
        return math.inf
    m = min(w, 1.0 - w)
    rd = round(400.0 * math.log10((1.0 - m) / m))
    return rd if w >= 0.5 else -rd


def format_rd(rd) -> str:
    """Display form: infinities capped at +-1000, explicit sign."""
    if rd == math.inf:
        return "+1000"
    if rd == -math.inf:
        return "-1000"
    return f"{rd:+d}"


# ---------------------------------------------------------------------------
# PGN export
# ---------------------------------------------------------------------------

_STARTPOS_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


def game_to_pgn(record: GameRecord, round_no: int = 1, white: str = "white",
                black: str = "black", event: str = "match") -> str:
    tags = [
        ("Event", event),
        ("Site", "local"),
        ("Date", "????.??.??"),
        ("Round", str(round_no)),
        ("White", white),
        ("Black", black),
        ("Result", record.result),
        ("Termination", record.termination),
    ]
    if record.opening_fen != _STARTPOS_FEN:
        tags.append(("SetUp", "1"))
        tags.append(("FEN", record.opening_fen))
    lines = [f'[{k} "{v}"]' for k, v in tags]
    lines.append("")

    opening = parse_fen(record.opening_fen)
    number = opening.fullmove_number
    tokens = []
    black_first = opening.side_to_move == -1
    for i, san in enumerate(record.san_moves):
        if i == 0 and black_first:
            tokens.append(f"{number}... {san}")
            number += 1
        elif (i + black_first) % 2 == 0:
            tokens.append(f"{number}. {san}")
        else:
            tokens.append(san)
            number += 1
    tokens.append(record.result)

    text, line = [], ""
    for tok in tokens:
        if line and len(line) + 1 + len(tok) > 79:
            text.append(line)
            line = tok
        else:
            line = f"{line} {tok}" if line else tok
    if line:
        text.append(line)
    lines.extend(text)
    lines.append("")
    return "\n".join(lines)


def match_to_pgn(result: MatchResult, a_label: str = "A",
                 b_label: str = "B") -> str:
    """All match games as one PGN document, in played order."""
    chunks = []
    for n, g in enumerate(result.games, 1):
        white = a_label if g.a_is_white else b_label
        black = b_label if g.a_is_white else a_label
        chunks.append(game_to_pgn(g.record, n, white, black,
                                  event=f"{a_label} vs {b_label}"))
    return "\n".join(chunks)


def load_openings(path) -> list:
    """FEN-per-line opening file; blank and '#' comment lines are skipped."""
    openings = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                openings.append(parse_fen(line))
            except ValueError as e:
                raise ValueError(f"{path}:{lineno}: {e}") from None
    return openings
