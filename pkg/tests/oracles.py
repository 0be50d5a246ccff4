"""Independent reference implementations used only by tests.

Everything here is deliberately written against different representations
than the package: a 10x12 mailbox board with one-character piece symbols
and plain fail-soft alpha-beta.  Agreement between these and the engine is
evidence of correctness, not shared code.
"""

import random

MATE = 30000
EVAL_CLAMP = 2999
INF = 31000

# 10x12 mailbox: a1 = 21, h1 = 28, a8 = 91, h8 = 98; None padding offboard
N_OFF = (-21, -19, -12, -8, 8, 12, 19, 21)
K_OFF = (-11, -10, -9, -1, 1, 9, 10, 11)
B_OFF = (-11, -9, 9, 11)
R_OFF = (-10, -1, 1, 10)

PIECE_VALUE = {"P": 100, "N": 320, "B": 330, "R": 500, "Q": 900, "K": 0}

_VICTIM = {"P": 1, "N": 3, "B": 3, "R": 5, "Q": 9, "K": 0}

_CASTLE_CLEAR = ((25, "KQ"), (21, "Q"), (28, "K"),
                 (95, "kq"), (91, "q"), (98, "k"))

# piece-square tables, white's point of view, rank 1 first (row index =
# rank - 1); black uses the rank-mirrored square
PST = {
    "P": (
        (0, 0, 0, 0, 0, 0, 0, 0),
        (5, 10, 10, -20, -20, 10, 10, 5),
        (5, -5, -10, 0, 0, -10, -5, 5),
        (0, 0, 0, 20, 20, 0, 0, 0),
        (5, 5, 10, 25, 25, 10, 5, 5),
        (10, 10, 20, 30, 30, 20, 10, 10),
        (50, 50, 50, 50, 50, 50, 50, 50),
        (0, 0, 0, 0, 0, 0, 0, 0),
    ),
    "N": (
        (-50, -40, -30, -30, -30, -30, -40, -50),
        (-40, -20, 0, 5, 5, 0, -20, -40),
        (-30, 5, 10, 15, 15, 10, 5, -30),
        (-30, 0, 15, 20, 20, 15, 0, -30),
        (-30, 5, 15, 20, 20, 15, 5, -30),
        (-30, 0, 10, 15, 15, 10, 0, -30),
        (-40, -20, 0, 0, 0, 0, -20, -40),
        (-50, -40, -30, -30, -30, -30, -40, -50),
    ),
    "B": (
        (-20, -10, -10, -10, -10, -10, -10, -20),
        (-10, 5, 0, 0, 0, 0, 5, -10),
        (-10, 10, 10, 10, 10, 10, 10, -10),
        (-10, 0, 10, 10, 10, 10, 0, -10),
        (-10, 5, 5, 10, 10, 5, 5, -10),
        (-10, 0, 5, 10, 10, 5, 0, -10),
        (-10, 0, 0, 0, 0, 0, 0, -10),
        (-20, -10, -10, -10, -10, -10, -10, -20),
    ),
    "R": (
        (0, 0, 0, 5, 5, 0, 0, 0),
        (-5, 0, 0, 0, 0, 0, 0, -5),
        (-5, 0, 0, 0, 0, 0, 0, -5),
        (-5, 0, 0, 0, 0, 0, 0, -5),
        (-5, 0, 0, 0, 0, 0, 0, -5),
        (-5, 0, 0, 0, 0, 0, 0, -5),
        (5, 10, 10, 10, 10, 10, 10, 5),
        (0, 0, 0, 0, 0, 0, 0, 0),
    ),
    "Q": (
        (-20, -10, -10, -5, -5, -10, -10, -20),
        (-10, 0, 5, 0, 0, 0, 0, -10),
        (-10, 5, 5, 5, 5, 5, 0, -10),
        (0, 0, 5, 5, 5, 5, 0, -5),
        (-5, 0, 5, 5, 5, 5, 0, -5),
        (-10, 0, 5, 5, 5, 5, 0, -10),
        (-10, 0, 0, 0, 0, 0, 0, -10),
        (-20, -10, -10, -5, -5, -10, -10, -20),
    ),
    "K": (
        (20, 30, 10, 0, 0, 10, 30, 20),
        (20, 20, 0, 0, 0, 0, 20, 20),
        (-10, -20, -20, -20, -20, -20, -20, -10),
        (-20, -30, -30, -40, -40, -30, -30, -20),
        (-30, -40, -40, -50, -50, -40, -40, -30),
        (-30, -40, -40, -50, -50, -40, -40, -30),
        (-30, -40, -40, -50, -50, -40, -40, -30),
        (-30, -40, -40, -50, -50, -40, -40, -30),
    ),
}

STARTPOS = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


def sq_index(file, rank):
    return 21 + 10 * rank + file


def sq_name(i):
    return chr(ord("a") + (i - 21) % 10) + str((i - 21) // 10 + 1)


def name_to_index(name):
    return sq_index(ord(name[0]) - ord("a"), int(name[1]) - 1)


class OPos:
    """Mailbox position with in-place do/undo; make() returns a copy."""

    __slots__ = ("sq", "white_to_move", "castling", "ep", "halfmove",
                 "fullmove", "wk", "bk")

    def __init__(self, sq, white_to_move, castling, ep, halfmove, fullmove):
        self.sq = sq
        self.white_to_move = white_to_move
        self.castling = castling  # subset of "KQkq"
        self.ep = ep              # mailbox index or None
        self.halfmove = halfmove
        self.fullmove = fullmove
        self.wk = sq.index("K")
        self.bk = sq.index("k")

    @staticmethod
    def from_fen(fen):
        board, side, castle, ep, half, full = fen.split()
        sq = [None] * 120
        for r in range(8):
            for f in range(8):
                sq[sq_index(f, r)] = "."
        rank = 7
        file = 0
        for ch in board:
            if ch == "/":
                rank -= 1
                file = 0
            elif ch.isdigit():
                file += int(ch)
            else:
                sq[sq_index(file, rank)] = ch
                file += 1
        return OPos(sq, side == "w", "" if castle == "-" else castle,
                    None if ep == "-" else name_to_index(ep),
                    int(half), int(full))

    def copy(self):
        c = OPos.__new__(OPos)
        c.sq = list(self.sq)
        c.white_to_move = self.white_to_move
        c.castling = self.castling
        c.ep = self.ep
        c.halfmove = self.halfmove
        c.fullmove = self.fullmove
        c.wk = self.wk
        c.bk = self.bk
        return c

    def theirs(self, ch):
        return ch != "." and ch is not None and \
            (ch.isupper() != self.white_to_move)

    def attacked_by(self, i, by_white):
        """Is square i attacked by the given color?"""
        sq = self.sq
        pawn = "P" if by_white else "p"
        step = -10 if by_white else 10  # attacker sits one rank behind i
        if sq[i + step - 1] == pawn or sq[i + step + 1] == pawn:
            return True
        knight = "N" if by_white else "n"
        for d in N_OFF:
            if sq[i + d] == knight:
                return True
        king = "K" if by_white else "k"
        for d in K_OFF:
            if sq[i + d] == king:
                return True
        bishop, rook, queen = ("B", "R", "Q") if by_white else ("b", "r", "q")
        for d in B_OFF:
            j = i + d
            while sq[j] is not None:
                if sq[j] != ".":
                    if sq[j] == bishop or sq[j] == queen:
                        return True
                    break
                j += d
        for d in R_OFF:
            j = i + d
            while sq[j] is not None:
                if sq[j] != ".":
                    if sq[j] == rook or sq[j] == queen:
                        return True
                    break
                j += d
        return False

    def in_check(self):
        white = self.white_to_move
        return self.attacked_by(self.wk if white else self.bk, not white)

    # moves are tuples (frm, to, promo, kind); promo is "QRBN" or "";
    # kind in {"n", "d", "e", "c"}
    def pseudo_moves(self, captures_only=False):
        out = []
        sq = self.sq
        white = self.white_to_move
        fwd = 10 if white else -10
        start_rank = 1 if white else 6
        promo_rank = 7 if white else 0
        for i in range(21, 99):
            ch = sq[i]
            if ch is None or ch == "." or (ch.isupper() != white):
                continue
            kind = ch.upper()
            if kind == "P":
                t = i + fwd
                if sq[t] == ".":
                    if (t - 21) // 10 == promo_rank:
                        for pr in "QRBN":
                            out.append((i, t, pr, "n"))
                    elif not captures_only:
                        out.append((i, t, "", "n"))
                        t2 = t + fwd
                        if (i - 21) // 10 == start_rank and sq[t2] == ".":
                            out.append((i, t2, "", "d"))
                for d in (fwd - 1, fwd + 1):
                    t = i + d
                    if sq[t] is None:
                        continue
                    if self.theirs(sq[t]):
                        if (t - 21) // 10 == promo_rank:
                            for pr in "QRBN":
                                out.append((i, t, pr, "n"))
                        else:
                            out.append((i, t, "", "n"))
                    elif self.ep is not None and t == self.ep:
                        out.append((i, t, "", "e"))
            elif kind == "N" or kind == "K":
                for d in (N_OFF if kind == "N" else K_OFF):
                    t = i + d
                    if sq[t] is None:
                        continue
                    if sq[t] == ".":
                        if not captures_only:
                            out.append((i, t, "", "n"))
                    elif self.theirs(sq[t]):
                        out.append((i, t, "", "n"))
            else:
                dirs = ()
                if kind != "R":
                    dirs += B_OFF
                if kind != "B":
                    dirs += R_OFF
                for d in dirs:
                    t = i + d
                    while sq[t] is not None:
                        if sq[t] == ".":
                            if not captures_only:
                                out.append((i, t, "", "n"))
                        else:
                            if self.theirs(sq[t]):
                                out.append((i, t, "", "n"))
                            break
                        t += d
        if not captures_only and not self.in_check():
            out.extend(self._castles())
        return out

    def _castles(self):
        out = []
        sq = self.sq
        if self.white_to_move:
            if "K" in self.castling and sq[25] == "K" and sq[28] == "R" \
                    and sq[26] == "." and sq[27] == "." \
                    and not self.attacked_by(26, False) \
                    and not self.attacked_by(27, False):
                out.append((25, 27, "", "c"))
            if "Q" in self.castling and sq[25] == "K" and sq[21] == "R" \
                    and sq[22] == "." and sq[23] == "." and sq[24] == "." \
                    and not self.attacked_by(24, False) \
                    and not self.attacked_by(23, False):
                out.append((25, 23, "", "c"))
        else:
            if "k" in self.castling and sq[95] == "k" and sq[98] == "r" \
                    and sq[96] == "." and sq[97] == "." \
                    and not self.attacked_by(96, True) \
                    and not self.attacked_by(97, True):
                out.append((95, 97, "", "c"))
            if "q" in self.castling and sq[95] == "k" and sq[91] == "r" \
                    and sq[92] == "." and sq[93] == "." and sq[94] == "." \
                    and not self.attacked_by(94, True) \
                    and not self.attacked_by(93, True):
                out.append((95, 93, "", "c"))
        return out

    def _do(self, move):
        frm, to, promo, kind = move
        sq = self.sq
        piece = sq[frm]
        white = self.white_to_move
        diff = [(frm, piece), (to, sq[to])]
        captured = sq[to] != "." or kind == "e"
        undo = (diff, self.castling, self.ep, self.halfmove, self.fullmove,
                self.wk, self.bk)

        sq[frm] = "."
        if promo:
            sq[to] = promo if white else promo.lower()
        else:
            sq[to] = piece
        if piece == "K":
            self.wk = to
        elif piece == "k":
            self.bk = to
        if kind == "e":
            cap = to + (-10 if white else 10)
            diff.append((cap, sq[cap]))
            sq[cap] = "."
        elif kind == "c":
            if to > frm:  # short: rook from the h-file to beside the king
                diff.append((to - 1, sq[to - 1]))
                diff.append((to + 1, sq[to + 1]))
                sq[to - 1] = sq[to + 1]
                sq[to + 1] = "."
            else:
                diff.append((to + 1, sq[to + 1]))
                diff.append((to - 2, sq[to - 2]))
                sq[to + 1] = sq[to - 2]
                sq[to - 2] = "."

        if self.castling:
            castling = self.castling
            for square, flags in _CASTLE_CLEAR:
                if frm == square or to == square:
                    for f in flags:
                        castling = castling.replace(f, "")
            self.castling = castling
        self.ep = (frm + to) // 2 if kind == "d" else None
        self.halfmove = 0 if captured or piece in "Pp" else self.halfmove + 1
        if not white:
            self.fullmove += 1
        self.white_to_move = not white
        return undo

    def _undo(self, undo):
        (diff, self.castling, self.ep, self.halfmove, self.fullmove,
         self.wk, self.bk) = undo
        sq = self.sq
        for i, ch in diff:
            sq[i] = ch
        self.white_to_move = not self.white_to_move

    def make(self, move):
        child = self.copy()
        child._do(move)
        return child

    def legal_moves(self, captures_only=False):
        out = []
        white = self.white_to_move
        for m in self.pseudo_moves(captures_only):
            u = self._do(m)
            if not self.attacked_by(self.wk if white else self.bk,
                                    not white):
                out.append(m)
            self._undo(u)
        return out

    def key(self):
        """Position identity as the engine's repetition hashing sees it:
        the ep square counts only when a pawn of the side to move could
        capture onto it."""
        ep = None
        if self.ep is not None:
            pawn = "P" if self.white_to_move else "p"
            behind = -10 if self.white_to_move else 10
            for d in (behind - 1, behind + 1):
                if self.sq[self.ep + d] == pawn:
                    ep = self.ep
                    break
        return (tuple(self.sq), self.white_to_move, self.castling, ep)

    def fen(self):
        rows = []
        for r in range(7, -1, -1):
            row, run = "", 0
            for f in range(8):
                ch = self.sq[sq_index(f, r)]
                if ch == ".":
                    run += 1
                else:
                    if run:
                        row += str(run)
                        run = 0
                    row += ch
            if run:
                row += str(run)
            rows.append(row)
        return " ".join([
            "/".join(rows), "w" if self.white_to_move else "b",
            self.castling or "-",
            sq_name(self.ep) if self.ep is not None else "-",
            str(self.halfmove), str(self.fullmove)])

    def move_uci(self, move):
        frm, to, promo, _ = move
        return sq_name(frm) + sq_name(to) + promo.lower()


# ---------------------------------------------------------------------------
# reference perft
# ---------------------------------------------------------------------------

def oracle_perft(pos: OPos, depth: int) -> int:
    if depth == 0:
        return 1
    moves = pos.legal_moves()
    if depth == 1:
        return len(moves)
    total = 0
    for m in moves:
        u = pos._do(m)
        total += oracle_perft(pos, depth - 1)
        pos._undo(u)
    return total


# ---------------------------------------------------------------------------
# reference evaluation
# ---------------------------------------------------------------------------

def oracle_eval(pos: OPos) -> int:
    """Material + PST from the side to move's view, clamped like the engine."""
    total = 0
    for i in range(21, 99):
        ch = pos.sq[i]
        if ch is None or ch == ".":
            continue
        f, r = (i - 21) % 10, (i - 21) // 10
        kind = ch.upper()
        if ch.isupper():
            total += PIECE_VALUE[kind] + PST[kind][r][f]
        else:
            total -= PIECE_VALUE[kind] + PST[kind][7 - r][f]
    v = total if pos.white_to_move else -total
    return max(-EVAL_CLAMP, min(EVAL_CLAMP, v))


# ---------------------------------------------------------------------------
# reference search: full-width alpha-beta + the same quiescence tree the
# engine searches when every selective mechanism is disabled.  Move order
# (captures first) only affects speed, never the returned minimax value.
# ---------------------------------------------------------------------------

def _order(pos, moves):
    sq = pos.sq

    def prio(m):
        frm, to, promo, kind = m
        v = 0
        t = sq[to]
        if t != ".":
            v = 10 * _VICTIM[t.upper()]
        elif kind == "e":
            v = 10
        if promo == "Q":
            v += 9
        return -v

    return sorted(moves, key=prio)


def _qsearch(pos, alpha, beta, ply):
    if pos.in_check():
        moves = pos.legal_moves()
        if not moves:
            return -(MATE - ply)
        best = -INF
        for m in _order(pos, moves):
            u = pos._do(m)
            v = -_qsearch(pos, -beta, -alpha, ply + 1)
            pos._undo(u)
            if v > best:
                best = v
                if v > alpha:
                    alpha = v
                    if v >= beta:
                        break
        return best

    best = oracle_eval(pos)
    if best >= beta:
        return best
    if best > alpha:
        alpha = best
    for m in _order(pos, pos.legal_moves(captures_only=True)):
        u = pos._do(m)
        v = -_qsearch(pos, -beta, -alpha, ply + 1)
        pos._undo(u)
        if v > best:
            best = v
            if v > alpha:
                alpha = v
                if v >= beta:
                    break
    return best


def _repeated(pos, path):
    span = min(pos.halfmove, len(path))
    if span < 2:
        return False
    key = pos.key()
    for back in range(2, span + 1, 2):
        if path[-back] == key:
            return True
    return False


def _ab(pos, depth, alpha, beta, ply, path):
    if depth == 0:
        return _qsearch(pos, alpha, beta, ply)
    if pos.halfmove >= 100:
        if pos.in_check() and not pos.legal_moves():
            return -(MATE - ply)
        return 0
    if _repeated(pos, path):
        return 0
    moves = pos.legal_moves()
    if not moves:
        return -(MATE - ply) if pos.in_check() else 0
    best = -INF
    path.append(pos.key())
    for m in _order(pos, moves):
        u = pos._do(m)
        v = -_ab(pos, depth - 1, -beta, -alpha, ply + 1, path)
        pos._undo(u)
        if v > best:
            best = v
            if v > alpha:
                alpha = v
                if v >= beta:
                    break
    path.pop()
    return best


def oracle_root_score(fen: str, depth: int) -> int:
    """Root minimax score of a full-width fixed-depth search with quiescence
    at the leaves; mirrors the engine with all selectivity off."""
    pos = OPos.from_fen(fen)
    moves = pos.legal_moves()
    if not moves:
        return -MATE if pos.in_check() else 0
    best = -INF
    alpha = -INF
    path = [pos.key()]
    for m in _order(pos, moves):
        u = pos._do(m)
        v = -_ab(pos, depth - 1, -INF, -alpha, 1, path)
        pos._undo(u)
        if v > best:
            best = v
            if v > alpha:
                alpha = v
    return best


# ---------------------------------------------------------------------------
# deterministic random positions (generated with the oracle's own movegen,
# so test inputs never depend on the code under test)
# ---------------------------------------------------------------------------

def random_positions(count, seed, min_plies=4, max_plies=60):
    """FENs from seeded random playouts; includes quiet and sharp spots."""
    out = []
    rng = random.Random(seed)
    while len(out) < count:
        pos = OPos.from_fen(STARTPOS)
        plies = rng.randrange(min_plies, max_plies + 1)
        ok = True
        for _ in range(plies):
            moves = pos.legal_moves()
            if not moves or pos.halfmove >= 100:
                ok = False
                break
            pos._do(rng.choice(moves))
        if ok and pos.legal_moves():
            out.append(pos.fen())
    return out
