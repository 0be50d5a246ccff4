"""Generate the bundled tactical suite.

Random seeded playouts produce middlegame positions; an engine probe flags
candidates scoring as forced mates, and an independent full-width mate prover
then certifies each one: the flagged move forces mate in exactly n moves, no
move mates faster, and no other move mates as fast.  Only certified positions
with a unique best move are written, as EPD with bm and id opcodes.

Usage: python3 tools/make_suite.py [--seed 2024] [--out src/evochess/data/suite50.epd]
"""

import argparse
import random
import sys

from evochess import chesscore as cc
from evochess.evaluation import MATE_BOUND, MATE_LIMIT
from evochess.harness import solve_position
from evochess.search import SearchBudget, SearchParams, search_position


class ProofBudgetExceeded(Exception):
    pass


class MateProver:
    """Full-width forced-mate prover over the raw board.

    Independent of the tunable search: no pruning, no evaluation, no
    transposition table; just exhaustive and/or recursion with a node budget
    so pathological candidates get skipped instead of hanging the tool."""

    def __init__(self, board, budget: int = 4_000_000):
        self.bd = board
        self.budget = budget
        self.used = 0

    def _tick(self):
        self.used += 1
        if self.used > self.budget:
            raise ProofBudgetExceeded

    def can_mate(self, plies: int) -> bool:
        """Side to move can force mate within `plies` plies."""
        if plies <= 0:
            return False
        self._tick()
        moves = self.bd.legal_moves()
        # checking moves first: mates usually start with check, and any
        # success short-circuits
        moves.sort(key=lambda m: 0 if self.bd.gives_check(m) else 1)
        for raw in moves:
            self.bd.make(raw)
            try:
                if self.forced_loss(plies - 1):
                    return True
            finally:
                self.bd.unmake()
        return False

    def forced_loss(self, plies: int) -> bool:
        """Side to move is mated now, or cannot avoid mate within `plies`."""
        self._tick()
        moves = self.bd.legal_moves()
        if not moves:
            return bool(self.bd.in_check())
        if plies <= 0:
            return False
        for raw in moves:
            self.bd.make(raw)
            try:
                if not self.can_mate(plies - 1):
                    return False
            finally:
                self.bd.unmake()
        return True

    def move_forces_mate(self, raw: int, plies: int) -> bool:
        self.bd.make(raw)
        try:
            return self.forced_loss(plies - 1)
        finally:
            self.bd.unmake()


def certify_mate(p: cc.Position, mate_moves: int):
    """Return the unique move forcing mate in exactly `mate_moves`, or None."""
    plies = 2 * mate_moves - 1
    prover = MateProver(p._board.clone())
    try:
        if mate_moves >= 2 and prover.can_mate(plies - 2):
            return None  # a faster mate exists
        winners = [m for m in p.legal_moves()
                   if prover.move_forces_mate(m.raw, plies)]
    except ProofBudgetExceeded:
        return None
    if len(winners) != 1:
        return None
    return winners[0]


def random_playout(seed: int, max_plies: int = 160):
    """Positions along one random game, from ply 6 on."""
    rng = random.Random(seed)
    p = cc.Position.startpos()
    out = []
    for ply in range(max_plies):
        legal = p.legal_moves()
        if not legal or p.halfmove_clock >= 100 or p.repetition_count() >= 3:
            break
        if cc.is_insufficient_material(p):
            break
        if ply >= 6:
            out.append(p.fen())
        p.apply(rng.choice(legal))
    return out


def probe_mate_score(p: cc.Position, nodes: int = 25_000):
    """Quick engine probe; returns mate-in-N moves when the score says mate."""
    res = search_position(p, SearchParams(),
                          SearchBudget(max_nodes=nodes, early_stop=True))
    if res.score > MATE_LIMIT:
        return (MATE_BOUND - res.score + 1) // 2
    return None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--mate2", type=int, default=30, help="target mate-in-2s")
    ap.add_argument("--out", default="src/evochess/data/suite50.epd")
    args = ap.parse_args()

    want_m2 = args.mate2
    want_m3 = args.count - args.mate2
    have = {2: [], 3: []}
    seen = set()
    game = 0
    while (len(have[2]) < want_m2 or len(have[3]) < want_m3) and game < 4000:
        game += 1
        picks_this_game = 0
        for fen in random_playout(args.seed * 100_000 + game):
            if picks_this_game >= 1:
                break
            p = cc.parse_fen(fen)
            key = cc.position_hash(p)
            if key in seen:
                continue
            n = probe_mate_score(p)
            if n not in (2, 3) or len(have[n]) >= {2: want_m2, 3: want_m3}[n]:
                continue
            seen.add(key)
            best = certify_mate(p, n)
            if best is None:
                continue
            san = cc.move_to_san(p, best)
            have[n].append((fen, san, n))
            picks_this_game += 1
            total = len(have[2]) + len(have[3])
            print(f"[{total:3d}/{args.count}] game {game} mate-in-{n} "
                  f"bm {san}  {fen}", file=sys.stderr)

    records = have[2] + have[3]
    if len(records) < args.count:
        print(f"only {len(records)} certified positions found", file=sys.stderr)
        return 1

    lines = ["# 50 tactical positions: forced mates certified by a "
             "full-width prover; every bm is the unique fastest mate."]
    for i, (fen, san, n) in enumerate(records, 1):
        fields = fen.split()
        epd = " ".join(fields[:4])
        lines.append(f'{epd} bm {san}; id "mate{n}.{i:03d}";')
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(records)} positions to {args.out}", file=sys.stderr)

    # round-trip + solvability sanity over the file we just wrote
    suite = cc.load_epd_file(args.out)
    assert len(suite) == len(records)
    solved = 0
    total_nodes = 0
    for rec in suite:
        r = solve_position(rec, SearchParams(), 100_000)
        solved += r.solved
        total_nodes += r.nodes
    print(f"default params @100k cap: {solved}/{len(suite)} solved, "
          f"{total_nodes} total nodes", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
