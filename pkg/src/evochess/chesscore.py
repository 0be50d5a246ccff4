"""Chess rules layer: positions, moves, FEN/EPD parsing, SAN, and perft.

This module is the public face of the engine core.  Positions wrap the hot
kernel board; moves are small immutable records carrying both the decoded
fields and the kernel's packed representation.  All move lists come back in
a deterministic order for a given position.
"""

from dataclasses import dataclass
from typing import Optional

from .kernel import core as _core

WHITE = 1
BLACK = -1

PAWN, KNIGHT, BISHOP, ROOK, QUEEN, KING = 1, 2, 3, 4, 5, 6

PIECE_SYMBOLS = {
    PAWN: "P", KNIGHT: "N", BISHOP: "B", ROOK: "R", QUEEN: "Q", KING: "K",
    -PAWN: "p", -KNIGHT: "n", -BISHOP: "b", -ROOK: "r", -QUEEN: "q", -KING: "k",
}
SYMBOL_PIECES = {v: k for k, v in PIECE_SYMBOLS.items()}

_CASTLE_FLAGS = {"K": 1, "Q": 2, "k": 4, "q": 8}

MATE_BOUND = _core.MATE_BOUND


class FenError(ValueError):
    """Raised for malformed FEN input; the message names the offending field."""


class EpdError(ValueError):
    """Raised for malformed EPD input."""


def square(file: int, rank: int) -> int:
    """0x88 square index from 0-based file and rank."""
    return rank * 16 + file


def square_file(sq: int) -> int:
    return sq & 7


def square_rank(sq: int) -> int:
    return sq >> 4


def square_name(sq: int) -> str:
    return chr(ord("a") + (sq & 7)) + str((sq >> 4) + 1)


def parse_square(name: str) -> int:
    if len(name) != 2 or not ("a" <= name[0] <= "h") or not ("1" <= name[1] <= "8"):
        raise ValueError(f"bad square name {name!r}")
    return (ord(name[0]) - ord("a")) + 16 * (int(name[1]) - 1)


@dataclass(frozen=True)
class Move:
    """One legal move, with decoded fields and the kernel encoding in `raw`."""

    from_square: int
    to_square: int
    piece: int
    captured: int = 0
    promotion: int = 0
    is_castle: bool = False
    is_en_passant: bool = False
    is_double_push: bool = False
    raw: int = 0

    @property
    def is_capture(self) -> bool:
        return self.captured != 0

    @property
    def uci(self) -> str:
        s = square_name(self.from_square) + square_name(self.to_square)
        if self.promotion:
            s += PIECE_SYMBOLS[self.promotion].lower()
        return s

    def __str__(self) -> str:
        return self.uci


def _move_from_raw(board, raw: int) -> Move:
    frm = raw & 127
    to = (raw >> 7) & 127
    promo = (raw >> 14) & 7
    is_castle = bool(raw & _core.FLAG_CASTLE)
    is_ep = bool(raw & _core.FLAG_EP)
    is_dbl = bool(raw & _core.FLAG_DBL)
    piece = board.piece_at(frm)
    if is_ep:
        captured = -PAWN if piece > 0 else PAWN
    else:
        captured = board.piece_at(to)
    return Move(frm, to, piece, captured, promo * (1 if piece > 0 else -1) if promo else 0,
                is_castle, is_ep, is_dbl, raw)


class Position:
    """Complete game state.

    Mutation happens only through apply_move/unapply_move, which form a strict
    LIFO pair.  Construct with parse_fen, parse_epd, or startpos().
    """

    __slots__ = ("_board",)

    def __init__(self, board):
        self._board = board

    # -- constructors -------------------------------------------------------

    @staticmethod
    def startpos() -> "Position":
        return parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1")

    def copy(self) -> "Position":
        return Position(self._board.clone())

    # -- accessors ----------------------------------------------------------

    @property
    def side_to_move(self) -> int:
        return self._board.side()

    @property
    def castling_rights(self) -> str:
        r = self._board.rights()
        s = "".join(ch for ch, bit in _CASTLE_FLAGS.items() if r & bit)
        return s or "-"

    @property
    def en_passant(self) -> Optional[int]:
        ep = self._board.ep_square()
        return None if ep < 0 else ep

    @property
    def halfmove_clock(self) -> int:
        return self._board.clock()

    @property
    def fullmove_number(self) -> int:
        return self._board.move_number()

    @property
    def ply_count(self) -> int:
        """Reversible plies recorded in the repetition stack."""
        return self._board.ply_count()

    def piece_at(self, sq: int) -> int:
        return self._board.piece_at(sq)

    def king_square(self, side: int) -> int:
        return self._board.king_square(side)

    def in_check(self) -> bool:
        return bool(self._board.in_check())

    def repetition_count(self) -> int:
        """Times the current position has occurred, itself included."""
        return self._board.repetition_count()

    def pieces(self):
        """(square, piece) pairs in square order."""
        out = []
        for rank in range(8):
            for file in range(8):
                sq = rank * 16 + file
                p = self._board.piece_at(sq)
                if p:
                    out.append((sq, p))
        return out

    # -- core operations ------------------------------------------------------

    def legal_moves(self):
        return [_move_from_raw(self._board, raw) for raw in self._board.legal_moves()]

    def apply(self, m: Move):
        """Make the move; returns a token for unapply.  m must be legal."""
        if __debug__:
            if m.raw not in self._board.legal_moves():
                raise ValueError(f"illegal move {m.uci} in {self.fen()}")
        token = self._board.ply_count()
        self._board.make(m.raw)
        return token

    def unapply(self, token) -> None:
        if self._board.ply_count() != token + 1:
            raise ValueError("unapply out of order")
        self._board.unmake()

    def fen(self) -> str:
        rows = []
        for rank in range(7, -1, -1):
            row = ""
            run = 0
            for file in range(8):
                p = self._board.piece_at(rank * 16 + file)
                if p == 0:
                    run += 1
                else:
                    if run:
                        row += str(run)
                        run = 0
                    row += PIECE_SYMBOLS[p]
            if run:
                row += str(run)
            rows.append(row)
        ep = self.en_passant
        return " ".join([
            "/".join(rows),
            "w" if self.side_to_move == WHITE else "b",
            self.castling_rights,
            square_name(ep) if ep is not None else "-",
            str(self.halfmove_clock),
            str(self.fullmove_number),
        ])

    def __repr__(self) -> str:
        return f"Position({self.fen()!r})"


# ---------------------------------------------------------------------------
# FEN
# ---------------------------------------------------------------------------

def parse_fen(text: str, prior_hashes=()) -> Position:
    """Parse a 6-field FEN string into a validated Position."""
    fields = text.split()
    if len(fields) != 6:
        raise FenError(f"FEN needs 6 fields, got {len(fields)}")
    placement, side_f, castle_f, ep_f, half_f, full_f = fields

    ranks = placement.split("/")
    if len(ranks) != 8:
        raise FenError("piece placement: need 8 ranks")
    pieces = [0] * 128
    kings = {WHITE: 0, BLACK: 0}
    for i, row in enumerate(ranks):
        rank = 7 - i
        file = 0
        for ch in row:
            if ch.isdigit():
                step = int(ch)
                if not 1 <= step <= 8:
                    raise FenError(f"piece placement: bad digit {ch!r}")
                file += step
            elif ch in SYMBOL_PIECES:
                if file > 7:
                    raise FenError(f"piece placement: rank {rank + 1} overflows")
                p = SYMBOL_PIECES[ch]
                if abs(p) == PAWN and rank in (0, 7):
                    raise FenError("piece placement: pawn on back rank")
                pieces[square(file, rank)] = p
                if p == KING:
                    kings[WHITE] += 1
                elif p == -KING:
                    kings[BLACK] += 1
                file += 1
            else:
                raise FenError(f"piece placement: bad char {ch!r}")
        if file != 8:
            raise FenError(f"piece placement: rank {rank + 1} has {file} files")
    if kings[WHITE] != 1 or kings[BLACK] != 1:
        raise FenError("piece placement: need exactly one king per side")

    if side_f == "w":
        stm = WHITE
    elif side_f == "b":
        stm = BLACK
    else:
        raise FenError(f"side to move: {side_f!r}")

    castling = 0
    if castle_f != "-":
        for ch in castle_f:
            bit = _CASTLE_FLAGS.get(ch)
            if bit is None or castling & bit:
                raise FenError(f"castling: {castle_f!r}")
            castling |= bit
    # rights only survive with king and rook on their home squares
    if pieces[4] != KING:
        castling &= ~(_CASTLE_FLAGS["K"] | _CASTLE_FLAGS["Q"])
    if pieces[7] != ROOK:
        castling &= ~_CASTLE_FLAGS["K"]
    if pieces[0] != ROOK:
        castling &= ~_CASTLE_FLAGS["Q"]
    if pieces[116] != -KING:
        castling &= ~(_CASTLE_FLAGS["k"] | _CASTLE_FLAGS["q"])
    if pieces[119] != -ROOK:
        castling &= ~_CASTLE_FLAGS["k"]
    if pieces[112] != -ROOK:
        castling &= ~_CASTLE_FLAGS["q"]

    if ep_f == "-":
        ep = -1
    else:
        try:
            ep = parse_square(ep_f)
        except ValueError:
            raise FenError(f"en passant: {ep_f!r}") from None
        if square_rank(ep) not in (2, 5):
            raise FenError(f"en passant: {ep_f} not on rank 3 or 6")

    try:
        halfmove = int(half_f)
        if halfmove < 0:
            raise ValueError
    except ValueError:
        raise FenError(f"halfmove clock: {half_f!r}") from None
    try:
        fullmove = int(full_f)
        if fullmove < 1:
            raise ValueError
    except ValueError:
        raise FenError(f"fullmove number: {full_f!r}") from None

    board = _core.Board()
    board.load(pieces, stm, castling, ep, halfmove, fullmove, prior_hashes)
    if board.square_attacked(board.king_square(-stm), stm):
        raise FenError("side to move: side not to move is in check")
    return Position(board)


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def generate_legal_moves(p: Position):
    return p.legal_moves()


def apply_move(p: Position, m: Move):
    return p.apply(m)


def unapply_move(p: Position, token) -> None:
    p.unapply(token)


def position_hash(p: Position) -> int:
    return p._board.key()


def perft(p: Position, depth: int) -> int:
    if depth < 0:
        raise ValueError("perft depth must be >= 0")
    return p._board.perft(depth)


def is_checkmate(p: Position) -> bool:
    return p.in_check() and not p._board.legal_moves()


def is_stalemate(p: Position) -> bool:
    return not p.in_check() and not p._board.legal_moves()


def is_insufficient_material(p: Position) -> bool:
    """Neither side can ever deliver mate: bare kings, a lone minor, or
    same-colored single bishops."""
    minors = []
    bishops = []
    for sq, piece in p.pieces():
        kind = abs(piece)
        if kind == KING:
            continue
        if kind in (PAWN, ROOK, QUEEN):
            return False
        minors.append(piece)
        if kind == BISHOP:
            bishops.append(sq)
    if len(minors) <= 1:
        return True
    if len(minors) == 2 and len(bishops) == 2 and minors[0] * minors[1] < 0:
        color0 = (square_file(bishops[0]) + square_rank(bishops[0])) & 1
        color1 = (square_file(bishops[1]) + square_rank(bishops[1])) & 1
        return color0 == color1
    return False


def mirror_position(p: Position) -> Position:
    """Color-mirror: flip ranks, swap piece colors, swap side and rights."""
    pieces = [0] * 128
    for sq, piece in p.pieces():
        pieces[sq ^ 0x70] = -piece
    rights = p._board.rights()
    new_rights = ((rights & 3) << 2) | ((rights >> 2) & 3)
    ep = p._board.ep_square()
    new_ep = -1 if ep < 0 else ep ^ 0x70
    board = _core.Board()
    board.load(pieces, -p.side_to_move, new_rights, new_ep,
               p.halfmove_clock, p.fullmove_number)
    return Position(board)


# ---------------------------------------------------------------------------
# SAN
# ---------------------------------------------------------------------------

def move_to_san(p: Position, m: Move) -> str:
    """Standard algebraic notation with minimal disambiguation and +/# suffix."""
    if m.is_castle:
        core = "O-O" if m.to_square > m.from_square else "O-O-O"
    else:
        kind = abs(m.piece)
        target = square_name(m.to_square)
        if kind == PAWN:
            core = ""
            if m.is_capture:
                core += square_name(m.from_square)[0] + "x"
            core += target
            if m.promotion:
                core += "=" + PIECE_SYMBOLS[abs(m.promotion)]
        else:
            core = PIECE_SYMBOLS[kind]
            rivals = [o for o in p.legal_moves()
                      if o.piece == m.piece and o.to_square == m.to_square
                      and o.from_square != m.from_square]
            if rivals:
                same_file = any(square_file(o.from_square) == square_file(m.from_square)
                                for o in rivals)
                same_rank = any(square_rank(o.from_square) == square_rank(m.from_square)
                                for o in rivals)
                if not same_file:
                    core += square_name(m.from_square)[0]
                elif not same_rank:
                    core += square_name(m.from_square)[1]
                else:
                    core += square_name(m.from_square)
            if m.is_capture:
                core += "x"
            core += target

    token = p.apply(m)
    try:
        if p.in_check():
            core += "#" if not p._board.legal_moves() else "+"
    finally:
        p.unapply(token)
    return core


def san_to_move(p: Position, san: str) -> Move:
    """Resolve a SAN token against the position's legal moves."""
    wanted = san.strip().rstrip("+#").replace("0", "O")
    if not wanted:
        raise ValueError("empty SAN token")
    for m in p.legal_moves():
        if move_to_san(p, m).rstrip("+#") == wanted:
            return m
    raise ValueError(f"SAN move {san!r} is illegal or unknown in {p.fen()}")


# ---------------------------------------------------------------------------
# EPD
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpdRecord:
    position: Position
    best_moves: tuple
    id: Optional[str] = None

    @property
    def best_raws(self):
        return frozenset(m.raw for m in self.best_moves)


def parse_epd(line: str) -> EpdRecord:
    """Parse one EPD line: 4 FEN fields plus `bm` (required) and `id` opcodes.

    Lines carrying full 6-field FENs before the opcodes are accepted too."""
    tokens = line.strip().split()
    if len(tokens) < 5:
        raise EpdError(f"EPD line needs 4 FEN fields plus opcodes: {line!r}")
    if len(tokens) >= 6 and tokens[4].isdigit() and tokens[5].isdigit():
        fen = " ".join(tokens[:6])
        ops = " ".join(tokens[6:])
    else:
        fen = " ".join(tokens[:4]) + " 0 1"
        ops = " ".join(tokens[4:])
    position = parse_fen(fen)

    best_moves = []
    rec_id = None
    for op in ops.split(";"):
        op = op.strip()
        if not op:
            continue
        name, _, rest = op.partition(" ")
        if name == "bm":
            for token in rest.split():
                try:
                    best_moves.append(san_to_move(position, token))
                except ValueError as e:
                    raise EpdError(str(e)) from None
        elif name == "id":
            rec_id = rest.strip().strip('"')
    if not best_moves:
        raise EpdError(f"EPD line lacks a bm opcode: {line!r}")
    return EpdRecord(position, tuple(best_moves), rec_id)


def load_epd_file(path) -> list:
    """EPD records from a file; blank and '#' comment lines are skipped."""
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                records.append(parse_epd(line))
            except (EpdError, FenError) as e:
                raise EpdError(f"{path}:{lineno}: {e}") from None
    return records
