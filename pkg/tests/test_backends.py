"""Compiled and interpreted kernels must be interchangeable bit for bit."""

import os
import subprocess
import sys

import pytest

from oracles import random_positions
from evochess.chesscore import parse_fen, perft
from evochess.genome import decode, random_chromosome
from evochess.kernel import BACKEND, load_compiled, load_pure
from evochess.search import SearchParams

KIWIPETE = ("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/"
            "R3K2R w KQkq - 0 1")
MIDDLEGAME = ("r1bqk2r/pp2bppp/2n1pn2/3p4/3P4/2NBPN2/PP3PPP/"
              "R1BQK2R w KQkq - 0 8")


def kernel_board(mod, fen):
    p = parse_fen(fen)
    pieces = [0] * 128
    for sq, piece in p.pieces():
        pieces[sq] = piece
    b = mod.Board()
    b.load(pieces, p.side_to_move, p._board.rights(), p._board.ep_square(),
           p.halfmove_clock, p.fullmove_number)
    return b


def run_search(mod, fen, params, max_nodes, tt_cutoffs=True):
    s = mod.Searcher(kernel_board(mod, fen))
    s.set_params(*params.astuple())
    s.set_budget(max_nodes, 64, tt_cutoffs)
    result = s.run()
    return result, s.stats()


class TestSelection:
    def test_compiled_backend_is_active(self):
        assert BACKEND == "compiled"
        assert load_compiled().IS_COMPILED
        assert not load_pure().IS_COMPILED

    def test_exported_constants_agree(self):
        pure, comp = load_pure(), load_compiled()
        assert pure.EXPORTS == comp.EXPORTS

    @pytest.mark.parametrize("forced,expect", [
        ("pure", "pure"),
        ("compiled", "compiled"),
    ])
    def test_env_var_forces_backend(self, forced, expect):
        out = subprocess.run(
            [sys.executable, "-c",
             "from evochess.kernel import BACKEND; print(BACKEND)"],
            env={**os.environ, "EVOCHESS_BACKEND": forced},
            capture_output=True, text=True, check=True)
        assert out.stdout.strip() == expect

    def test_env_var_unknown_value_fails_loud(self):
        out = subprocess.run(
            [sys.executable, "-c", "import evochess.kernel"],
            env={**os.environ, "EVOCHESS_BACKEND": "puer"},
            capture_output=True, text=True)
        assert out.returncode != 0
        assert "unknown EVOCHESS_BACKEND value 'puer'" in out.stderr


class TestBoardIdentity:
    @pytest.mark.parametrize("fen,depth", [
        ("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1", 3),
        (KIWIPETE, 3),
    ])
    def test_perft(self, fen, depth):
        pure, comp = load_pure(), load_compiled()
        n_pure = kernel_board(pure, fen).perft(depth)
        n_comp = kernel_board(comp, fen).perft(depth)
        assert n_pure == n_comp == perft(parse_fen(fen), depth)

    def test_eval_keys_and_moves_on_random_positions(self):
        pure, comp = load_pure(), load_compiled()
        for fen in random_positions(30, seed=414):
            a = kernel_board(pure, fen)
            b = kernel_board(comp, fen)
            assert a.static_eval() == b.static_eval()
            assert a.key() == b.key()
            assert list(a.legal_moves()) == list(b.legal_moves())


class TestSearchIdentity:
    def check(self, fen, params, max_nodes, tt_cutoffs=True):
        ra, sa = run_search(load_pure(), fen, params, max_nodes, tt_cutoffs)
        rb, sb = run_search(load_compiled(), fen, params, max_nodes,
                            tt_cutoffs)
        assert ra == rb
        assert sa == sb
        return ra

    def test_default_params(self):
        result = self.check(MIDDLEGAME, SearchParams(), 30_000)
        assert result[3] >= 4                      # reaches useful depth

    def test_all_disabled_without_tt(self):
        self.check(MIDDLEGAME, SearchParams.all_disabled(), 20_000,
                   tt_cutoffs=False)

    def test_random_parameter_vectors(self):
        for seed in (1, 2, 3):
            params = decode(random_chromosome(seed))
            self.check(KIWIPETE, params, 15_000)
