"""Command-line entry points: evolve, bench, match, search, perft, elo,
decode, and a backend benchmark.

Exit codes: 0 success, 1 input/usage error, 2 internal invariant violation.
Input validation happens before any output file is opened, so a failed run
never leaves partial output behind.  Output files begin with a header line
recording version, seed, and the effective configuration.
"""

import argparse
import json
import math
import sys
import time
import traceback

from . import __version__
from .chesscore import (FenError, EpdError, Position, load_epd_file,
                        move_to_san, parse_fen, perft)
from .evolve import (GaConfig, read_log, run_evolution, write_log_header)
from .genome import CHROMOSOME_BITS, Chromosome, decode
from .harness import (MATCH_NODES_DEFAULT, NODE_CAP_DEFAULT, elo_difference,
                      format_rd, load_openings, match_to_pgn, run_match,
                      run_suite)
from .search import SearchBudget, SearchParams, search_position
from .evaluation import is_mate_score, mate_distance

STARTPOS = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


class UsageError(Exception):
    pass


class InvariantError(RuntimeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage()}")


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _params_arg(text: str) -> SearchParams:
    """'default', 'disabled', or a 70-char chromosome bit string."""
    if text == "default":
        return SearchParams()
    if text == "disabled":
        return SearchParams.all_disabled()
    if set(text) <= {"0", "1"}:
        if len(text) != CHROMOSOME_BITS:
            raise ValueError(
                f"chromosome must be {CHROMOSOME_BITS} bits, got {len(text)}")
        return decode(Chromosome(text))
    raise ValueError(f"params must be 'default', 'disabled', or a "
                     f"{CHROMOSOME_BITS}-bit string, got {text!r}")


def _position_arg(fen: str) -> Position:
    return parse_fen(STARTPOS if fen == "startpos" else fen)


def _score_str(score: int) -> str:
    if is_mate_score(score):
        d = mate_distance(score)
        return f"mate {(d + 1) // 2}" if d > 0 else f"mate {-((-d + 1) // 2)}"
    return f"cp {score}"


def _print_params(params: SearchParams, out=None):
    out = out if out is not None else sys.stdout
    for name, value in params.asdict().items():
        out.write(f"  {name} = {value}\n")


def _file_header(seed, config: dict) -> str:
    return (f"# version={__version__} seed={seed} "
            f"config={json.dumps(config, sort_keys=True)}\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_evolve(args) -> int:
    suite = load_epd_file(args.suite)
    config = GaConfig(population_size=args.population,
                      crossover_rate=args.crossover_rate,
                      mutation_rate=args.mutation_rate,
                      generations=args.generations,
                      elitism_count=args.elitism,
                      seed=args.seed, node_cap=args.node_cap)

    resume_records = None
    if args.resume:
        if not args.log:
            raise ValueError("--resume requires --log")
        header, records = read_log(args.log)
        if not records:
            raise ValueError(f"resume log {args.log} has no generations")
        if header is not None:
            fixed = dict(config.asdict())
            old = dict(header)
            fixed.pop("generations", None)
            old.pop("generations", None)
            if fixed != old:
                raise ValueError("resume log was produced with a different "
                                 "configuration")
        resume_records = records

    print(f"evochess {__version__} evolve seed={config.seed}")
    print(f"config {json.dumps(config.asdict(), sort_keys=True)}")
    print(f"suite {args.suite} ({len(suite)} positions) jobs={args.jobs}")
    if resume_records:
        print(f"resuming after generation {resume_records[-1].generation}")

    fh = None
    writer = None
    if args.log:
        fh = open(args.log, "a" if args.resume else "w", encoding="utf-8")
        if not args.resume:
            write_log_header(fh, args.format, config, __version__)

        def writer(rec):
            fh.write((rec.as_json() if args.format == "json"
                      else rec.as_csv()) + "\n")
            fh.flush()

    def progress(rec):
        print(f"gen {rec.generation:3d}  best={rec.best_nodes}  "
              f"mean={rec.mean_nodes:.1f}  solved={rec.best_solved}"
              f"/{len(suite)}  {rec.best_chromosome}")

    try:
        result = run_evolution(config, suite, jobs=args.jobs,
                               log_writer=writer,
                               resume_from=resume_records,
                               progress=progress)
    finally:
        if fh:
            fh.close()

    first, last = result.log[0], result.log[-1]
    print(f"generation 0 best {first.best_nodes} nodes, "
          f"{first.best_solved} solved")
    print(f"final best {last.best_nodes} nodes, {last.best_solved} solved")
    print(f"best chromosome {result.best_chromosome}")
    _print_params(result.best_params)
    return 0


def cmd_bench(args) -> int:
    suite = load_epd_file(args.suite)
    params = _params_arg(args.params)
    config = {"suite": args.suite, "node_cap": args.node_cap,
              "params": params.asdict()}

    report = run_suite(suite, params, args.node_cap, jobs=args.jobs)
    if report.total_nodes != sum(r.nodes for r in report.rows):
        raise InvariantError("suite totals do not match their rows")

    print(f"evochess {__version__} bench")
    print(f"suite {args.suite} ({len(suite)} positions) "
          f"node-cap {args.node_cap}")
    for row in report.rows:
        mark = "solved" if row.solved else "FAILED"
        print(f"  {row.id:24s} {mark}  nodes={row.nodes}  depth={row.depth}")
    print(f"solved {report.solved_count}/{len(suite)}  "
          f"total nodes {report.total_nodes}")

    if args.out:
        with open(args.out, "w", encoding="utf-8") as out:
            if args.format == "json":
                doc = {"header": {"version": __version__, "seed": None,
                                  "config": config},
                       "rows": [{"id": r.id, "solved": r.solved,
                                 "nodes": r.nodes, "depth": r.depth}
                                for r in report.rows],
                       "solved": report.solved_count,
                       "total_nodes": report.total_nodes}
                out.write(json.dumps(doc, indent=2) + "\n")
            else:
                out.write(_file_header(None, config))
                out.write("id,solved,nodes,depth\n")
                for r in report.rows:
                    out.write(f"{r.id},{int(r.solved)},{r.nodes},{r.depth}\n")
                out.write(f"total,{report.solved_count},"
                          f"{report.total_nodes},\n")
    return 0


def cmd_match(args) -> int:
    openings = load_openings(args.openings)
    a = _params_arg(args.a)
    b = _params_arg(args.b)
    config = {"openings": args.openings, "nodes_per_move": args.nodes,
              "move_seconds": args.move_seconds,
              "a": args.a, "b": args.b}
    if args.move_seconds is not None:
        print("note: wall-clock per-move budget makes results "
              "non-deterministic", file=sys.stderr)

    result = run_match(a, b, openings, args.nodes, jobs=args.jobs,
                       move_seconds=args.move_seconds)
    if result.game_count != 2 * len(openings):
        raise InvariantError("match game count != 2 x openings")

    print(f"evochess {__version__} match: A={args.a[:16]} B={args.b[:16]}")
    print(f"openings {args.openings} ({len(openings)}), "
          f"{args.nodes} nodes/move")
    print(f"A score: +{result.wins} ={result.draws} -{result.losses}  "
          f"W%={result.w_pct * 100:.1f}  RD={format_rd(result.rd)}")

    if args.out:
        with open(args.out, "w", encoding="utf-8") as out:
            if args.format == "json":
                doc = {"header": {"version": __version__, "seed": None,
                                  "config": config},
                       "wins": result.wins, "draws": result.draws,
                       "losses": result.losses,
                       "w_pct": result.w_pct,
                       "rd": (None if math.isinf(result.rd)
                              else result.rd),
                       "rd_display": format_rd(result.rd),
                       "games": [{"opening": g.opening_index,
                                  "a_color": "white" if g.a_is_white
                                  else "black",
                                  "result": g.record.result,
                                  "termination": g.record.termination,
                                  "plies": g.record.plies}
                                 for g in result.games]}
                out.write(json.dumps(doc, indent=2) + "\n")
            else:
                out.write(_file_header(None, config))
                out.write("game,opening,a_color,result,termination,plies\n")
                for n, g in enumerate(result.games, 1):
                    color = "white" if g.a_is_white else "black"
                    out.write(f"{n},{g.opening_index},{color},"
                              f"{g.record.result},{g.record.termination},"
                              f"{g.record.plies}\n")
    if args.pgn:
        with open(args.pgn, "w", encoding="utf-8") as out:
            out.write(match_to_pgn(result, a_label=f"A:{args.a[:12]}",
                                   b_label=f"B:{args.b[:12]}"))
    return 0


def cmd_search(args) -> int:
    p = _position_arg(args.fen)
    params = _params_arg(args.params)
    budget = SearchBudget(max_nodes=args.nodes, max_depth=args.depth,
                          tt_cutoffs=not args.no_tt_cutoffs,
                          max_seconds=args.seconds)

    def on_iteration(info):
        mv = info.best_move.uci if info.best_move else "(none)"
        print(f"depth {info.depth:2d}  score {_score_str(info.score):>10s}  "
              f"nodes {info.nodes:>10d}  best {mv}")
        return True

    res = search_position(p, params, budget, on_iteration)
    if res.best_move is None:
        print("no move available")
        return 0
    san = move_to_san(p, res.best_move)
    flag = " (aborted)" if res.aborted else ""
    print(f"bestmove {res.best_move.uci} ({san})  "
          f"score {_score_str(res.score)}  depth {res.depth}  "
          f"nodes {res.nodes}{flag}")
    stats = res.stats
    print(f"stats null={stats['null_cutoffs']} "
          f"futility={stats['futility_prunes']} "
          f"multicut={stats['multicut_cutoffs']} tt={stats['tt_cutoffs']} "
          f"iid={stats['iid_searches']} ext_units={stats['extension_units']}")
    return 0


def cmd_perft(args) -> int:
    p = _position_arg(args.fen)
    t0 = time.perf_counter()
    n = perft(p, args.depth)
    dt = time.perf_counter() - t0
    print(n)
    if args.timing:
        rate = n / dt if dt > 0 else float("inf")
        print(f"# {dt:.3f}s, {rate:,.0f} leaves/s", file=sys.stderr)
    return 0


def cmd_elo(args) -> int:
    if not 0.0 <= args.wpct <= 100.0:
        raise ValueError(f"--wpct must be in [0, 100], got {args.wpct}")
    print(format_rd(elo_difference(args.wpct / 100.0)))
    return 0


def cmd_decode(args) -> int:
    params = _params_arg(args.chromosome)
    _print_params(params)
    return 0


def cmd_backends(args) -> int:
    from .kernel import BACKEND, load_pure
    mods = []
    try:
        from .kernel import load_compiled
        mods.append(("compiled", load_compiled()))
    except ImportError as e:
        print(f"compiled backend unavailable: {e}", file=sys.stderr)
    mods.append(("pure", load_pure()))

    p = _position_arg(args.fen)
    pieces = [0] * 128
    for sq, piece in p.pieces():
        pieces[sq] = piece
    state = (pieces, p.side_to_move, p._board.rights(),
             p._board.ep_square(), p.halfmove_clock, p.fullmove_number)

    print(f"evochess {__version__} backend benchmark (active: {BACKEND})")
    print(f"position {args.fen}  perft depth {args.depth}  "
          f"search budget {args.nodes} nodes")
    rows = []
    for name, mod in mods:
        board = mod.Board()
        board.load(*state)
        t0 = time.perf_counter()
        leaves = board.perft(args.depth)
        t_perft = time.perf_counter() - t0

        board2 = mod.Board()
        board2.load(*state)
        searcher = mod.Searcher(board2)
        searcher.set_params(*SearchParams().astuple())
        searcher.set_budget(args.nodes, 64)
        t0 = time.perf_counter()
        _, score, nodes, depth, _ = searcher.run()
        t_search = time.perf_counter() - t0
        rows.append((name, leaves, t_perft, nodes, t_search, score, depth))
        print(f"  {name:9s} perft={leaves} in {t_perft:.3f}s "
              f"({leaves / max(t_perft, 1e-9):,.0f} leaves/s)   "
              f"search {nodes} nodes in {t_search:.3f}s "
              f"({nodes / max(t_search, 1e-9):,.0f} nps) "
              f"depth {depth} score {score}")

    if len(rows) == 2:
        if rows[0][1] != rows[1][1] or rows[0][3] != rows[1][3]:
            raise InvariantError("backends disagree on node counts")
        speedup = rows[1][4] / max(rows[0][4], 1e-9)
        print(f"  compiled speedup: {speedup:.1f}x on search")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="evochess", description=__doc__)
    parser.add_argument("--version", action="version",
                        version=f"evochess {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="run the genetic algorithm")
    p.add_argument("--suite", required=True, help="EPD suite path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--population", type=int, default=10)
    p.add_argument("--generations", type=int, default=50)
    p.add_argument("--crossover-rate", type=float, default=0.75)
    p.add_argument("--mutation-rate", type=float, default=0.05)
    p.add_argument("--elitism", type=int, default=1)
    p.add_argument("--node-cap", type=int, default=NODE_CAP_DEFAULT)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--log", help="per-generation log file")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--resume", action="store_true",
                   help="continue from the last generation in --log")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("bench", help="run a suite with fixed params")
    p.add_argument("--suite", required=True)
    p.add_argument("--params", default="default",
                   help="'default', 'disabled', or 70-bit chromosome")
    p.add_argument("--node-cap", type=int, default=NODE_CAP_DEFAULT)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="report file")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("match", help="play two configurations against "
                                     "each other")
    p.add_argument("--openings", required=True, help="FEN-per-line file")
    p.add_argument("--a", default="default")
    p.add_argument("--b", default="default")
    p.add_argument("--nodes", type=int, default=MATCH_NODES_DEFAULT)
    p.add_argument("--move-seconds", type=float, default=None,
                   help="wall-clock per-move budget (non-deterministic)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="summary file")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--pgn", help="PGN export path")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("search", help="search one position")
    p.add_argument("--fen", default="startpos")
    p.add_argument("--params", default="default")
    p.add_argument("--depth", type=int, default=64)
    p.add_argument("--nodes", type=int, default=NODE_CAP_DEFAULT)
    p.add_argument("--seconds", type=float, default=None)
    p.add_argument("--no-tt-cutoffs", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("perft", help="count leaf nodes to a depth")
    p.add_argument("--fen", default="startpos")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_perft)

    p = sub.add_parser("elo", help="Elo difference for a winning percentage")
    p.add_argument("--wpct", type=float, required=True,
                   help="winning percentage, 0-100")
    p.set_defaults(func=cmd_elo)

    p = sub.add_parser("decode", help="chromosome -> parameter listing")
    p.add_argument("--chromosome", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("backends", help="compare compiled and pure backends")
    p.add_argument("--fen", default="startpos")
    p.add_argument("--depth", type=int, default=4, help="perft depth")
    p.add_argument("--nodes", type=int, default=300_000,
                   help="search node budget")
    p.set_defaults(func=cmd_backends)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"evochess: {e}", file=sys.stderr)
        return 1
    except (FenError, EpdError, OSError, ValueError) as e:
        print(f"evochess: error: {e}", file=sys.stderr)
        return 1
    except InvariantError as e:
        print(f"evochess: internal invariant violated: {e}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
