"""Generate the bundled opening set: 50 balanced early-middlegame positions.

Seeded random playouts of 6-10 plies produce candidates; each is kept only
if a reference search calls it near-equal (|score| <= 50 cp), no material is
missing, and it is not a transposition of an earlier pick.  Both colors get
playable, roughly level starts for engine matches.

Usage: python3 tools/make_openings.py [--seed 77] [--out src/evochess/data/openings50.fen]
"""

import argparse
import random
import sys

from evochess import chesscore as cc
from evochess.search import SearchBudget, SearchParams, search_position


def playout(seed: int, plies: int):
    rng = random.Random(seed)
    p = cc.Position.startpos()
    for _ in range(plies):
        legal = p.legal_moves()
        if not legal:
            return None
        p.apply(rng.choice(legal))
    return p


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=77)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--balance-cp", type=int, default=50)
    ap.add_argument("--out", default="src/evochess/data/openings50.fen")
    args = ap.parse_args()

    params = SearchParams()
    budget = SearchBudget(max_nodes=40_000)
    picks = []
    seen = set()
    trial = 0
    while len(picks) < args.count and trial < 5000:
        trial += 1
        plies = 6 + 2 * (trial % 3)  # 6, 8, 10
        p = playout(args.seed * 10_000 + trial, plies)
        if p is None or p.in_check():
            continue
        if len(p.pieces()) < 30:
            continue  # no early material grabs
        key = cc.position_hash(p)
        if key in seen:
            continue
        res = search_position(p, params, budget)
        if abs(res.score) > args.balance_cp:
            continue
        seen.add(key)
        picks.append((p.fen(), res.score, plies))
        print(f"[{len(picks):3d}/{args.count}] {plies} plies "
              f"score {res.score:+4d}  {p.fen()}", file=sys.stderr)

    if len(picks) < args.count:
        print(f"only {len(picks)} balanced openings found", file=sys.stderr)
        return 1

    lines = [f"# {args.count} balanced opening positions "
             f"(|eval| <= {args.balance_cp} cp at a 40k-node reference search)"]
    lines += [fen for fen, _, _ in picks]
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(picks)} openings to {args.out}", file=sys.stderr)

    reloaded = [pos.fen() for pos in
                __import__("evochess.harness", fromlist=["load_openings"])
                .load_openings(args.out)]
    assert reloaded == [fen for fen, _, _ in picks]
    return 0


if __name__ == "__main__":
    sys.exit(main())
