"""Static evaluation tests against the independent mailbox evaluator."""

import pytest

from oracles import OPos, oracle_eval, random_positions
from evochess.chesscore import Position, parse_fen, mirror_position
from evochess.evaluation import (
    MATE_BOUND, MATE_LIMIT, EVAL_LIMIT, PIECE_VALUES,
    evaluate_static, is_mate_score, mate_distance,
)


class TestEvaluateStatic:
    def test_startpos_is_balanced(self):
        assert evaluate_static(Position.startpos()) == 0

    def test_matches_oracle_on_random_positions(self):
        for fen in random_positions(80, seed=21):
            assert evaluate_static(parse_fen(fen)) == \
                oracle_eval(OPos.from_fen(fen)), fen

    def test_side_to_move_relative(self):
        # white is a queen up; the sign follows whoever moves
        up = "4k3/8/8/8/8/8/8/3QK3 {} - - 0 1"
        w = evaluate_static(parse_fen(up.format("w")))
        b = evaluate_static(parse_fen(up.format("b")))
        assert w > 0
        assert b < 0
        assert w == -b

    def test_mirror_invariance(self):
        """Color-flipping the board leaves the mover-relative score alone."""
        for fen in random_positions(40, seed=22):
            p = parse_fen(fen)
            assert evaluate_static(mirror_position(p)) == evaluate_static(p)

    def test_clamped_to_eval_limit(self):
        lopsided = "7k/6pp/8/8/8/QQQQQQ2/QQQQQQ2/K7 {} - - 0 1"
        assert evaluate_static(parse_fen(lopsided.format("w"))) == EVAL_LIMIT
        assert evaluate_static(parse_fen(lopsided.format("b"))) == -EVAL_LIMIT

    def test_piece_values(self):
        assert PIECE_VALUES == {1: 100, 2: 320, 3: 330, 4: 500, 5: 900, 6: 0}


class TestMateScores:
    def test_static_scores_are_never_mate_scores(self):
        assert EVAL_LIMIT < MATE_LIMIT < MATE_BOUND
        assert not is_mate_score(EVAL_LIMIT)
        assert not is_mate_score(-EVAL_LIMIT)
        assert not is_mate_score(0)

    def test_mate_score_recognition(self):
        assert is_mate_score(MATE_BOUND - 1)
        assert is_mate_score(-(MATE_BOUND - 4))
        assert is_mate_score(MATE_LIMIT + 1)
        assert not is_mate_score(MATE_LIMIT)

    @pytest.mark.parametrize("ply", [1, 2, 5, 40])
    def test_mate_distance_round_trip(self, ply):
        assert mate_distance(MATE_BOUND - ply) == ply
        assert mate_distance(-(MATE_BOUND - ply)) == -ply

    def test_mate_distance_rejects_ordinary_scores(self):
        with pytest.raises(ValueError):
            mate_distance(150)
