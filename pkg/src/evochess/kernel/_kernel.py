# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, nonecheck=False
"""Hot engine core: board, move generation, evaluation, and the selective searcher.

This module is written in Cython "pure Python" style.  When the package is
built, it is compiled to a C extension and the import machinery picks up the
.so; without a compiler the very same file runs interpreted.  Everything here
must therefore behave identically in both modes: integer work stays within
C ranges, 64-bit hash math uses xor/shift only, and no negative indexing.

Board representation is a 0x88 mailbox with signed piece codes (white > 0,
black < 0).  Moves are packed ints.  The Searcher owns all per-search state
(transposition table, killers, history, node counter), so independent
searches never share mutable state.
"""

import cython

import time
from array import array

IS_COMPILED = cython.compiled

# cython.declare makes these C globals in the compiled build; module-level
# annotations would be ignored and leave them as boxed module attributes
EMPTY = cython.declare(cython.int, 0)
PAWN = cython.declare(cython.int, 1)
KNIGHT = cython.declare(cython.int, 2)
BISHOP = cython.declare(cython.int, 3)
ROOK = cython.declare(cython.int, 4)
QUEEN = cython.declare(cython.int, 5)
KING = cython.declare(cython.int, 6)

WHITE = cython.declare(cython.int, 1)
BLACK = cython.declare(cython.int, -1)

# castling right bits
CR_WK = cython.declare(cython.int, 1)
CR_WQ = cython.declare(cython.int, 2)
CR_BK = cython.declare(cython.int, 4)
CR_BQ = cython.declare(cython.int, 8)

# score limits
MATE_BOUND = cython.declare(cython.int, 30000)
MATE_LIMIT = cython.declare(cython.int, 29000)   # |score| > this means forced mate
EVAL_LIMIT = cython.declare(cython.int, 2999)    # static evaluations clamp inside this
INF_SCORE = cython.declare(cython.int, 31000)

UNITS_PER_PLY = cython.declare(cython.int, 4)    # 4 units = 1 ply of depth
MAX_EXT_PER_MOVE = cython.declare(cython.int, 4)

MAX_PLY = cython.declare(cython.int, 224)
MOVES_CAP = cython.declare(cython.int, 256)
HIST_CAP = cython.declare(cython.int, 4096)

TT_EXACT = cython.declare(cython.int, 0)
TT_LOWER = cython.declare(cython.int, 1)
TT_UPPER = cython.declare(cython.int, 2)

# move int layout: from(7) | to(7) | promo(3) | castle(1) | ep(1) | dblpush(1)
FLAG_CASTLE = cython.declare(cython.int, 1 << 17)
FLAG_EP = cython.declare(cython.int, 1 << 18)
FLAG_DBL = cython.declare(cython.int, 1 << 19)


def _izeros(n):
    return array("i", bytes(4 * n))


def _qzeros(n):
    return array("Q", bytes(8 * n))


def move_from(m):
    return m & 127


def move_to(m):
    return (m >> 7) & 127


def move_promo(m):
    return (m >> 14) & 7


def encode_move(frm, to, promo=0, castle=False, ep=False, dbl=False):
    m = frm | (to << 7) | (promo << 14)
    if castle:
        m |= FLAG_CASTLE
    if ep:
        m |= FLAG_EP
    if dbl:
        m |= FLAG_DBL
    return m


# ---------------------------------------------------------------------------
# static tables
# ---------------------------------------------------------------------------

PIECE_VALUE = (0, 100, 320, 330, 500, 900, 0)

# piece-square tables, printed from white's side with rank 8 on top
_PST_8X8 = {
    PAWN: (
        0, 0, 0, 0, 0, 0, 0, 0,
        50, 50, 50, 50, 50, 50, 50, 50,
        10, 10, 20, 30, 30, 20, 10, 10,
        5, 5, 10, 25, 25, 10, 5, 5,
        0, 0, 0, 20, 20, 0, 0, 0,
        5, -5, -10, 0, 0, -10, -5, 5,
        5, 10, 10, -20, -20, 10, 10, 5,
        0, 0, 0, 0, 0, 0, 0, 0,
    ),
    KNIGHT: (
        -50, -40, -30, -30, -30, -30, -40, -50,
        -40, -20, 0, 0, 0, 0, -20, -40,
        -30, 0, 10, 15, 15, 10, 0, -30,
        -30, 5, 15, 20, 20, 15, 5, -30,
        -30, 0, 15, 20, 20, 15, 0, -30,
        -30, 5, 10, 15, 15, 10, 5, -30,
        -40, -20, 0, 5, 5, 0, -20, -40,
        -50, -40, -30, -30, -30, -30, -40, -50,
    ),
    BISHOP: (
        -20, -10, -10, -10, -10, -10, -10, -20,
        -10, 0, 0, 0, 0, 0, 0, -10,
        -10, 0, 5, 10, 10, 5, 0, -10,
        -10, 5, 5, 10, 10, 5, 5, -10,
        -10, 0, 10, 10, 10, 10, 0, -10,
        -10, 10, 10, 10, 10, 10, 10, -10,
        -10, 5, 0, 0, 0, 0, 5, -10,
        -20, -10, -10, -10, -10, -10, -10, -20,
    ),
    ROOK: (
        0, 0, 0, 0, 0, 0, 0, 0,
        5, 10, 10, 10, 10, 10, 10, 5,
        -5, 0, 0, 0, 0, 0, 0, -5,
        -5, 0, 0, 0, 0, 0, 0, -5,
        -5, 0, 0, 0, 0, 0, 0, -5,
        -5, 0, 0, 0, 0, 0, 0, -5,
        -5, 0, 0, 0, 0, 0, 0, -5,
        0, 0, 0, 5, 5, 0, 0, 0,
    ),
    QUEEN: (
        -20, -10, -10, -5, -5, -10, -10, -20,
        -10, 0, 0, 0, 0, 0, 0, -10,
        -10, 0, 5, 5, 5, 5, 0, -10,
        -5, 0, 5, 5, 5, 5, 0, -5,
        0, 0, 5, 5, 5, 5, 0, -5,
        -10, 5, 5, 5, 5, 5, 0, -10,
        -10, 0, 5, 0, 0, 0, 0, -10,
        -20, -10, -10, -5, -5, -10, -10, -20,
    ),
    KING: (
        -30, -40, -40, -50, -50, -40, -40, -30,
        -30, -40, -40, -50, -50, -40, -40, -30,
        -30, -40, -40, -50, -50, -40, -40, -30,
        -30, -40, -40, -50, -50, -40, -40, -30,
        -20, -30, -30, -40, -40, -30, -30, -20,
        -10, -20, -20, -20, -20, -20, -20, -10,
        20, 20, 0, 0, 0, 0, 20, 20,
        20, 30, 10, 0, 0, 10, 30, 20,
    ),
}


def _expand_pst():
    # 6 x 128 table indexed [ (kind-1)*128 + sq ] for white; black mirrors via sq^0x70
    out = _izeros(6 * 128)
    for kind in range(1, 7):
        tbl = _PST_8X8[kind]
        for rank in range(8):
            for file in range(8):
                sq = rank * 16 + file
                out[(kind - 1) * 128 + sq] = tbl[(7 - rank) * 8 + file]
    return out


PST_TABLE = _expand_pst()

# typed as memoryviews so the compiled generators index them at C speed
KNIGHT_OFFS = cython.declare(cython.int[:], array("i", [33, 31, 18, 14, -14, -18, -31, -33]))
KING_OFFS = cython.declare(cython.int[:], array("i", [17, 16, 15, 1, -1, -15, -16, -17]))
BISHOP_DIRS = cython.declare(cython.int[:], array("i", [17, 15, -15, -17]))
ROOK_DIRS = cython.declare(cython.int[:], array("i", [16, 1, -1, -16]))


def _castle_masks():
    masks = array("i", [15] * 128)
    masks[4] = 15 - (CR_WK | CR_WQ)     # e1
    masks[0] = 15 - CR_WQ               # a1
    masks[7] = 15 - CR_WK               # h1
    masks[116] = 15 - (CR_BK | CR_BQ)   # e8
    masks[112] = 15 - CR_BQ             # a8
    masks[119] = 15 - CR_BK             # h8
    return masks


CASTLE_MASK = cython.declare(cython.int[:], _castle_masks())


def _make_zobrist():
    # splitmix64 stream with a fixed seed; explicit masking keeps the
    # interpreted and compiled variants bit-identical
    mask = (1 << 64) - 1
    state = 0x9E3779B97F4A7C15

    def nxt():
        nonlocal state
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        return z ^ (z >> 31)

    piece = _qzeros(12 * 128)
    for i in range(12 * 128):
        piece[i] = nxt()
    castle = _qzeros(16)
    for i in range(16):
        castle[i] = nxt()
    ep_file = _qzeros(8)
    for i in range(8):
        ep_file[i] = nxt()
    side = nxt()
    return piece, castle, ep_file, side


_Z = _make_zobrist()
Z_PIECE = _Z[0]
Z_CASTLE = _Z[1]
Z_EP = _Z[2]
Z_SIDE = _Z[3]


# ---------------------------------------------------------------------------
# board
# ---------------------------------------------------------------------------

@cython.cclass
class Board:
    """0x88 board with incremental hash and incremental evaluation terms."""

    sq: cython.int[:]
    stm: cython.int                 # +1 white to move, -1 black
    castling: cython.int
    ep: cython.int                  # 0x88 square or -1
    halfmove: cython.int
    fullmove: cython.int
    wking: cython.int
    bking: cython.int
    hash: cython.ulonglong
    acc: cython.int                 # material + pst from white's view
    np_w: cython.int                # non-pawn, non-king piece counts
    np_b: cython.int
    histn: cython.int
    hist: cython.ulonglong[:]

    u_move: cython.int[:]
    u_capt: cython.int[:]
    u_cast: cython.int[:]
    u_ep: cython.int[:]
    u_half: cython.int[:]
    u_acc: cython.int[:]
    u_hash: cython.ulonglong[:]

    pst: cython.int[:]
    val: cython.int[:]
    zp: cython.ulonglong[:]
    zc: cython.ulonglong[:]
    zep: cython.ulonglong[:]
    zside: cython.ulonglong

    pbuf: cython.int[:]             # scratch move stack for perft/legal listing

    def __init__(self):
        self.sq = _izeros(128)
        self.stm = WHITE
        self.castling = 0
        self.ep = -1
        self.halfmove = 0
        self.fullmove = 1
        self.wking = -1
        self.bking = -1
        self.hash = 0
        self.acc = 0
        self.np_w = 0
        self.np_b = 0
        self.histn = 0
        self.hist = _qzeros(HIST_CAP)
        self.u_move = _izeros(HIST_CAP)
        self.u_capt = _izeros(HIST_CAP)
        self.u_cast = _izeros(HIST_CAP)
        self.u_ep = _izeros(HIST_CAP)
        self.u_half = _izeros(HIST_CAP)
        self.u_acc = _izeros(HIST_CAP)
        self.u_hash = _qzeros(HIST_CAP)
        self.pst = PST_TABLE
        self.val = array("i", PIECE_VALUE)
        self.zp = Z_PIECE
        self.zc = Z_CASTLE
        self.zep = Z_EP
        self.zside = Z_SIDE
        self.pbuf = _izeros(72 * MOVES_CAP)

    # -- setup ------------------------------------------------------------

    def load(self, pieces, stm, castling, ep, halfmove, fullmove, prior_hashes=()):
        """Install a position.  `pieces` is a 128-entry iterable of signed codes."""
        i: cython.int
        for i in range(128):
            self.sq[i] = 0
        self.wking = -1
        self.bking = -1
        for i, p in enumerate(pieces):
            if p:
                self.sq[i] = p
                if p == KING:
                    self.wking = i
                elif p == -KING:
                    self.bking = i
        if self.wking < 0 or self.bking < 0:
            raise ValueError("board needs both kings")
        self.stm = stm
        self.castling = castling
        self.ep = ep
        self.halfmove = halfmove
        self.fullmove = fullmove
        self.histn = 0
        for h in prior_hashes:
            self.hist[self.histn] = h
            self.histn += 1
        self.recompute()

    @cython.ccall
    def recompute(self):
        """Recompute hash, evaluation accumulator, and piece counts from scratch."""
        s: cython.int
        p: cython.int
        h: cython.ulonglong = 0
        acc: cython.int = 0
        npw: cython.int = 0
        npb: cython.int = 0
        for s in range(128):
            if s & 0x88:
                continue
            p = self.sq[s]
            if p == 0:
                continue
            h ^= self.zp[self.pidx(p) * 128 + s]
            if p > 0:
                acc += self.val[p] + self.pst[(p - 1) * 128 + s]
                if p != PAWN and p != KING:
                    npw += 1
            else:
                acc -= self.val[-p] + self.pst[(-p - 1) * 128 + (s ^ 0x70)]
                if p != -PAWN and p != -KING:
                    npb += 1
        if self.stm == BLACK:
            h ^= self.zside
        h ^= self.zc[self.castling]
        h ^= self.ep_hash(self.ep, self.stm)
        self.hash = h
        self.acc = acc
        self.np_w = npw
        self.np_b = npb

    @cython.ccall
    def clone(self):
        b: Board = Board()
        b.sq[:] = self.sq
        b.stm = self.stm
        b.castling = self.castling
        b.ep = self.ep
        b.halfmove = self.halfmove
        b.fullmove = self.fullmove
        b.wking = self.wking
        b.bking = self.bking
        b.hash = self.hash
        b.acc = self.acc
        b.np_w = self.np_w
        b.np_b = self.np_b
        b.histn = self.histn
        b.hist[:] = self.hist
        return b

    # -- small helpers ----------------------------------------------------

    @cython.cfunc
    def pidx(self, p: cython.int) -> cython.int:
        if p > 0:
            return p - 1
        return 5 - p

    @cython.cfunc
    def ep_hash(self, ep: cython.int, stm: cython.int) -> cython.ulonglong:
        # the en-passant file enters the hash only when a capture is possible,
        # so transpositions with a dead ep square compare equal
        if ep < 0:
            return 0
        if stm == WHITE:
            if not ((ep - 15) & 0x88) and self.sq[ep - 15] == PAWN:
                return self.zep[ep & 7]
            if not ((ep - 17) & 0x88) and self.sq[ep - 17] == PAWN:
                return self.zep[ep & 7]
        else:
            if not ((ep + 15) & 0x88) and self.sq[ep + 15] == -PAWN:
                return self.zep[ep & 7]
            if not ((ep + 17) & 0x88) and self.sq[ep + 17] == -PAWN:
                return self.zep[ep & 7]
        return 0

    @cython.cfunc
    def add_piece(self, p: cython.int, s: cython.int):
        self.sq[s] = p
        self.hash ^= self.zp[self.pidx(p) * 128 + s]
        if p > 0:
            self.acc += self.val[p] + self.pst[(p - 1) * 128 + s]
            if p != PAWN and p != KING:
                self.np_w += 1
        else:
            self.acc -= self.val[-p] + self.pst[(-p - 1) * 128 + (s ^ 0x70)]
            if p != -PAWN and p != -KING:
                self.np_b += 1

    @cython.cfunc
    def remove_piece(self, p: cython.int, s: cython.int):
        self.sq[s] = 0
        self.hash ^= self.zp[self.pidx(p) * 128 + s]
        if p > 0:
            self.acc -= self.val[p] + self.pst[(p - 1) * 128 + s]
            if p != PAWN and p != KING:
                self.np_w -= 1
        else:
            self.acc += self.val[-p] + self.pst[(-p - 1) * 128 + (s ^ 0x70)]
            if p != -PAWN and p != -KING:
                self.np_b -= 1

    @cython.cfunc
    def attacked(self, s: cython.int, by: cython.int) -> cython.bint:
        """True when side `by` attacks square `s`."""
        i: cython.int
        t: cython.int
        d: cython.int
        p: cython.int
        if by == WHITE:
            if not ((s - 15) & 0x88) and self.sq[s - 15] == PAWN:
                return True
            if not ((s - 17) & 0x88) and self.sq[s - 17] == PAWN:
                return True
        else:
            if not ((s + 15) & 0x88) and self.sq[s + 15] == -PAWN:
                return True
            if not ((s + 17) & 0x88) and self.sq[s + 17] == -PAWN:
                return True
        for i in range(8):
            t = s + KNIGHT_OFFS[i]
            if not (t & 0x88) and self.sq[t] * by == KNIGHT:
                return True
        for i in range(8):
            t = s + KING_OFFS[i]
            if not (t & 0x88) and self.sq[t] * by == KING:
                return True
        for i in range(4):
            d = BISHOP_DIRS[i]
            t = s + d
            while not (t & 0x88):
                p = self.sq[t]
                if p:
                    p *= by
                    if p == BISHOP or p == QUEEN:
                        return True
                    break
                t += d
        for i in range(4):
            d = ROOK_DIRS[i]
            t = s + d
            while not (t & 0x88):
                p = self.sq[t]
                if p:
                    p *= by
                    if p == ROOK or p == QUEEN:
                        return True
                    break
                t += d
        return False

    @cython.cfunc
    def king_of(self, side: cython.int) -> cython.int:
        if side == WHITE:
            return self.wking
        return self.bking

    @cython.cfunc
    def in_check_side(self, side: cython.int) -> cython.bint:
        return self.attacked(self.king_of(side), -side)

    @cython.ccall
    def in_check(self) -> cython.bint:
        return self.in_check_side(self.stm)

    @cython.cfunc
    def passed_pawn(self, s: cython.int, side: cython.int) -> cython.bint:
        """No enemy pawn ahead of `s` on the same or adjacent file."""
        step: cython.int = 16 if side == WHITE else -16
        enemy_pawn: cython.int = -side * PAWN
        t: cython.int = s + step
        while not (t & 0x88):
            if self.sq[t] == enemy_pawn:
                return False
            if not ((t - 1) & 0x88) and self.sq[t - 1] == enemy_pawn:
                return False
            if not ((t + 1) & 0x88) and self.sq[t + 1] == enemy_pawn:
                return False
            t += step
        return True

    # -- make / unmake ----------------------------------------------------

    @cython.ccall
    def make(self, m: cython.int):
        """Apply a pseudo-legal move; caller handles legality via in_check."""
        frm: cython.int = m & 127
        to: cython.int = (m >> 7) & 127
        promo: cython.int = (m >> 14) & 7
        mover: cython.int = self.stm
        piece: cython.int = self.sq[frm]
        captured: cython.int = 0
        n: cython.int = self.histn

        self.hist[n] = self.hash
        self.u_move[n] = m
        self.u_cast[n] = self.castling
        self.u_ep[n] = self.ep
        self.u_half[n] = self.halfmove
        self.u_acc[n] = self.acc
        self.u_hash[n] = self.hash
        self.histn = n + 1

        self.hash ^= self.ep_hash(self.ep, mover)

        if m & FLAG_EP:
            captured = -mover * PAWN
            self.remove_piece(captured, to - 16 * mover)
        elif self.sq[to] != 0:
            captured = self.sq[to]
            self.remove_piece(captured, to)
        self.u_capt[n] = captured

        self.remove_piece(piece, frm)
        if promo:
            self.add_piece(promo * mover, to)
        else:
            self.add_piece(piece, to)

        if piece == KING:
            self.wking = to
        elif piece == -KING:
            self.bking = to

        if m & FLAG_CASTLE:
            if to == frm + 2:
                self.remove_piece(ROOK * mover, frm + 3)
                self.add_piece(ROOK * mover, frm + 1)
            else:
                self.remove_piece(ROOK * mover, frm - 4)
                self.add_piece(ROOK * mover, frm - 1)

        old_cast: cython.int = self.castling
        self.castling = old_cast & CASTLE_MASK[frm] & CASTLE_MASK[to]
        if self.castling != old_cast:
            self.hash ^= self.zc[old_cast] ^ self.zc[self.castling]

        if m & FLAG_DBL:
            self.ep = frm + 16 * mover
        else:
            self.ep = -1

        if piece == PAWN or piece == -PAWN or captured != 0:
            self.halfmove = 0
        else:
            self.halfmove += 1
        if mover == BLACK:
            self.fullmove += 1

        self.stm = -mover
        self.hash ^= self.zside
        self.hash ^= self.ep_hash(self.ep, self.stm)

    @cython.ccall
    def unmake(self):
        n: cython.int = self.histn - 1
        self.histn = n
        m: cython.int = self.u_move[n]
        frm: cython.int = m & 127
        to: cython.int = (m >> 7) & 127
        promo: cython.int = (m >> 14) & 7
        captured: cython.int = self.u_capt[n]
        mover: cython.int = -self.stm
        piece: cython.int = PAWN * mover if promo else self.sq[to]

        self.sq[frm] = piece
        self.sq[to] = 0
        if m & FLAG_EP:
            self.sq[to - 16 * mover] = -mover * PAWN
        elif captured:
            self.sq[to] = captured
        if m & FLAG_CASTLE:
            if to == frm + 2:
                self.sq[frm + 3] = ROOK * mover
                self.sq[frm + 1] = 0
            else:
                self.sq[frm - 4] = ROOK * mover
                self.sq[frm - 1] = 0
        if piece == KING:
            self.wking = frm
        elif piece == -KING:
            self.bking = frm

        if promo:
            # counts changed by promotion/capture; rebuild the two deltas
            if promo != PAWN:
                if mover == WHITE:
                    self.np_w -= 1
                else:
                    self.np_b -= 1
        if captured and captured != PAWN and captured != -PAWN and captured != KING and captured != -KING:
            if captured > 0:
                self.np_w += 1
            else:
                self.np_b += 1

        self.stm = mover
        if mover == BLACK:
            self.fullmove -= 1
        self.castling = self.u_cast[n]
        self.ep = self.u_ep[n]
        self.halfmove = self.u_half[n]
        self.acc = self.u_acc[n]
        self.hash = self.u_hash[n]

    @cython.ccall
    def make_null(self):
        n: cython.int = self.histn
        self.hist[n] = self.hash
        self.u_move[n] = 0
        self.u_capt[n] = 0
        self.u_cast[n] = self.castling
        self.u_ep[n] = self.ep
        self.u_half[n] = self.halfmove
        self.u_acc[n] = self.acc
        self.u_hash[n] = self.hash
        self.histn = n + 1
        self.hash ^= self.ep_hash(self.ep, self.stm)
        self.ep = -1
        self.halfmove += 1
        self.stm = -self.stm
        self.hash ^= self.zside

    @cython.ccall
    def unmake_null(self):
        n: cython.int = self.histn - 1
        self.histn = n
        self.stm = -self.stm
        self.castling = self.u_cast[n]
        self.ep = self.u_ep[n]
        self.halfmove = self.u_half[n]
        self.acc = self.u_acc[n]
        self.hash = self.u_hash[n]

    # -- repetition / draws -------------------------------------------------

    @cython.cfunc
    def repeats(self, need: cython.int) -> cython.bint:
        """True when the current position occurred >= `need` times before,
        looking back only across reversible plies."""
        span: cython.int = self.halfmove
        if span > self.histn:
            span = self.histn
        count: cython.int = 0
        k: cython.int = 2
        while k <= span:
            if self.hist[self.histn - k] == self.hash:
                count += 1
                if count >= need:
                    return True
            k += 2
        return False

    @cython.ccall
    def repetition_count(self) -> cython.int:
        """Occurrences of the current position in the reversible window, itself included."""
        span: cython.int = self.halfmove
        if span > self.histn:
            span = self.histn
        count: cython.int = 1
        k: cython.int = 2
        while k <= span:
            if self.hist[self.histn - k] == self.hash:
                count += 1
            k += 2
        return count

    # -- move generation ----------------------------------------------------

    @cython.cfunc
    def gen_pseudo(self, buf: cython.int[:], base: cython.int, captures_only: cython.bint) -> cython.int:
        """Write pseudo-legal moves into buf[base:]; returns the count.
        Square-ascending scan with fixed offset order keeps output deterministic."""
        n: cython.int = base
        side: cython.int = self.stm
        s: cython.int
        t: cython.int
        i: cython.int
        d: cython.int
        p: cython.int
        fwd: cython.int = 16 * side
        last_rank: cython.int = 7 if side == WHITE else 0
        dbl_rank: cython.int = 1 if side == WHITE else 6

        for s in range(128):
            if s & 0x88:
                continue
            p = self.sq[s]
            if p == 0 or (p > 0) != (side == WHITE):
                continue
            p *= side
            if p == PAWN:
                t = s + fwd
                if not (t & 0x88) and self.sq[t] == 0:
                    if (t >> 4) == last_rank:
                        for d in range(QUEEN, PAWN, -1):   # Q, R, B, N
                            buf[n] = s | (t << 7) | (d << 14)
                            n += 1
                    elif not captures_only:
                        buf[n] = s | (t << 7)
                        n += 1
                        if (s >> 4) == dbl_rank and self.sq[t + fwd] == 0:
                            buf[n] = s | ((t + fwd) << 7) | FLAG_DBL
                            n += 1
                for i in range(2):
                    t = s + fwd + (1 if i == 0 else -1)
                    if t & 0x88:
                        continue
                    if self.sq[t] != 0 and (self.sq[t] > 0) != (side == WHITE):
                        if (t >> 4) == last_rank:
                            for d in range(QUEEN, PAWN, -1):
                                buf[n] = s | (t << 7) | (d << 14)
                                n += 1
                        else:
                            buf[n] = s | (t << 7)
                            n += 1
                    elif t == self.ep:
                        buf[n] = s | (t << 7) | FLAG_EP
                        n += 1
            elif p == KNIGHT:
                for i in range(8):
                    t = s + KNIGHT_OFFS[i]
                    if t & 0x88:
                        continue
                    if self.sq[t] == 0:
                        if not captures_only:
                            buf[n] = s | (t << 7)
                            n += 1
                    elif (self.sq[t] > 0) != (side == WHITE):
                        buf[n] = s | (t << 7)
                        n += 1
            elif p == KING:
                for i in range(8):
                    t = s + KING_OFFS[i]
                    if t & 0x88:
                        continue
                    if self.sq[t] == 0:
                        if not captures_only:
                            buf[n] = s | (t << 7)
                            n += 1
                    elif (self.sq[t] > 0) != (side == WHITE):
                        buf[n] = s | (t << 7)
                        n += 1
            else:
                if p == BISHOP or p == QUEEN:
                    for i in range(4):
                        d = BISHOP_DIRS[i]
                        t = s + d
                        while not (t & 0x88):
                            if self.sq[t] == 0:
                                if not captures_only:
                                    buf[n] = s | (t << 7)
                                    n += 1
                            else:
                                if (self.sq[t] > 0) != (side == WHITE):
                                    buf[n] = s | (t << 7)
                                    n += 1
                                break
                            t += d
                if p == ROOK or p == QUEEN:
                    for i in range(4):
                        d = ROOK_DIRS[i]
                        t = s + d
                        while not (t & 0x88):
                            if self.sq[t] == 0:
                                if not captures_only:
                                    buf[n] = s | (t << 7)
                                    n += 1
                            else:
                                if (self.sq[t] > 0) != (side == WHITE):
                                    buf[n] = s | (t << 7)
                                    n += 1
                                break
                            t += d

        if not captures_only and not self.in_check_side(side):
            n = self.gen_castles(buf, n)
        return n - base

    @cython.cfunc
    def gen_castles(self, buf: cython.int[:], n: cython.int) -> cython.int:
        k: cython.int = 4 if self.stm == WHITE else 116
        opp: cython.int = -self.stm
        if self.stm == WHITE:
            if (self.castling & CR_WK) and self.sq[5] == 0 and self.sq[6] == 0 \
                    and not self.attacked(5, opp) and not self.attacked(6, opp):
                buf[n] = k | ((k + 2) << 7) | FLAG_CASTLE
                n += 1
            if (self.castling & CR_WQ) and self.sq[3] == 0 and self.sq[2] == 0 and self.sq[1] == 0 \
                    and not self.attacked(3, opp) and not self.attacked(2, opp):
                buf[n] = k | ((k - 2) << 7) | FLAG_CASTLE
                n += 1
        else:
            if (self.castling & CR_BK) and self.sq[117] == 0 and self.sq[118] == 0 \
                    and not self.attacked(117, opp) and not self.attacked(118, opp):
                buf[n] = k | ((k + 2) << 7) | FLAG_CASTLE
                n += 1
            if (self.castling & CR_BQ) and self.sq[115] == 0 and self.sq[114] == 0 and self.sq[113] == 0 \
                    and not self.attacked(115, opp) and not self.attacked(114, opp):
                buf[n] = k | ((k - 2) << 7) | FLAG_CASTLE
                n += 1
        return n

    @cython.cfunc
    def gen_legal(self, buf: cython.int[:], base: cython.int) -> cython.int:
        """Pseudo-generation followed by a make/unmake legality filter."""
        n: cython.int = self.gen_pseudo(buf, base, False)
        mover: cython.int = self.stm
        kept: cython.int = base
        i: cython.int
        for i in range(base, base + n):
            self.make(buf[i])
            if not self.in_check_side(mover):
                buf[kept] = buf[i]
                kept += 1
            self.unmake()
        return kept - base

    def legal_moves(self):
        """Python-level list of legal move ints, in deterministic order."""
        n = self.gen_legal(self.pbuf, 0)
        return [self.pbuf[i] for i in range(n)]

    def pseudo_moves(self, captures_only=False):
        n = self.gen_pseudo(self.pbuf, 0, captures_only)
        return [self.pbuf[i] for i in range(n)]

    @cython.cfunc
    def perft_inner(self, depth: cython.int, base: cython.int) -> cython.longlong:
        n: cython.int = self.gen_pseudo(self.pbuf, base, False)
        total: cython.longlong = 0
        mover: cython.int = self.stm
        i: cython.int
        for i in range(base, base + n):
            self.make(self.pbuf[i])
            if not self.in_check_side(mover):
                if depth == 1:
                    total += 1
                else:
                    total += self.perft_inner(depth - 1, base + n)
            self.unmake()
        return total

    @cython.ccall
    def perft(self, depth: cython.int) -> cython.longlong:
        if depth <= 0:
            return 1
        return self.perft_inner(depth, 0)

    # -- evaluation ---------------------------------------------------------

    @cython.ccall
    def static_eval(self) -> cython.int:
        """Material + piece-square score, side-to-move relative, clamped."""
        v: cython.int = self.acc if self.stm == WHITE else -self.acc
        if v > EVAL_LIMIT:
            return EVAL_LIMIT
        if v < -EVAL_LIMIT:
            return -EVAL_LIMIT
        return v

    # -- Python-facing getters (compiled attributes are C-private) ----------

    def side(self):
        return self.stm

    def rights(self):
        return self.castling

    def ep_square(self):
        return self.ep

    def clock(self):
        return self.halfmove

    def move_number(self):
        return self.fullmove

    def key(self):
        return self.hash

    def piece_at(self, s):
        return self.sq[s]

    def king_square(self, side):
        return self.wking if side == WHITE else self.bking

    def ply_count(self):
        return self.histn

    def history_keys(self):
        return [self.hist[i] for i in range(self.histn)]

    def eval_accumulator(self):
        return self.acc

    def nonpawn_count(self, side):
        return self.np_w if side == WHITE else self.np_b

    def gives_check(self, m):
        """True when move `m` checks the opponent; board restored afterwards."""
        self.make(m)
        chk = self.in_check_side(self.stm)
        self.unmake()
        return bool(chk)

    def square_attacked(self, s, by):
        return bool(self.attacked(s, by))

    def is_passed_pawn(self, s, side):
        return bool(self.passed_pawn(s, side))


# ---------------------------------------------------------------------------
# searcher
# ---------------------------------------------------------------------------

@cython.cclass
class Searcher:
    """One search instance: parameterized selective search over a private board.

    All selectivity is driven by the 18 tunable values handed to set_params.
    Depth is tracked in quarter-ply units so extensions can accumulate
    fractionally.  The node counter advances exactly once per entered node,
    and the budget is tested on entry before counting, so the counter never
    exceeds max_nodes.
    """

    bd: Board

    # tunables
    p_nm_use: cython.int
    p_nm_r: cython.int
    p_nm_adapt: cython.int
    p_nm_adepth: cython.int
    p_fut_depth: cython.int
    p_fut_t: cython.int[:]          # indexed 1..3
    p_mc_use: cython.int
    p_mc_r: cython.int
    p_mc_depth: cython.int
    p_mc_m: cython.int
    p_mc_c: cython.int
    p_ext_check: cython.int
    p_ext_onereply: cython.int
    p_ext_recap: cython.int
    p_ext_passed: cython.int
    p_ext_mate: cython.int

    # budget / modes
    max_nodes: cython.longlong
    max_depth: cython.int
    use_tt_cutoffs: cython.bint
    early_stop: cython.bint
    deadline: cython.double         # wall-clock cutoff (non-deterministic mode); 0 = off

    # state
    nodes: cython.longlong
    aborted: cython.bint
    nominal_depth: cython.int

    tt_mask: cython.longlong
    tt_key: cython.ulonglong[:]
    tt_data: cython.ulonglong[:]

    moves: cython.int[:]
    scores: cython.int[:]
    killers: cython.int[:]
    history: cython.longlong[:]
    cap_sq: cython.int[:]
    ext_used: cython.int[:]

    root_moves: cython.int[:]
    n_root: cython.int
    root_best: cython.int

    # stats
    st_null_cut: cython.longlong
    st_futile: cython.longlong
    st_mc_cut: cython.longlong
    st_tt_cut: cython.longlong
    st_iid: cython.longlong
    st_ext_units: cython.longlong

    def __init__(self, board: Board, tt_log2: cython.int = 20):
        self.bd = board
        self.tt_mask = (1 << tt_log2) - 1
        self.tt_key = _qzeros(1 << tt_log2)
        self.tt_data = _qzeros(1 << tt_log2)
        self.moves = _izeros(MAX_PLY * MOVES_CAP)
        self.scores = _izeros(MAX_PLY * MOVES_CAP)
        self.killers = _izeros(2 * MAX_PLY)
        self.history = array("q", bytes(8 * 12 * 128))
        self.cap_sq = _izeros(MAX_PLY + 2)
        self.ext_used = _izeros(MAX_PLY + 2)
        self.root_moves = _izeros(MOVES_CAP)
        self.p_fut_t = _izeros(4)
        self.set_params(1, 2, 1, 5, 3, 150, 400, 700, 1, 2, 3, 10, 3, 2, 2, 2, 2, 2)
        self.set_budget(1 << 62, 64)
        self.nodes = 0
        self.aborted = False
        self.deadline = 0.0
        self.nominal_depth = 1
        self.n_root = 0
        self.root_best = 0
        self.reset_stats()

    def set_params(self, nm_use, nm_r, nm_adapt, nm_adepth, fut_depth, fut_t1, fut_t2, fut_t3,
                   mc_use, mc_r, mc_depth, mc_m, mc_c,
                   ext_check, ext_onereply, ext_recap, ext_passed, ext_mate):
        self.p_nm_use = nm_use
        self.p_nm_r = nm_r
        self.p_nm_adapt = nm_adapt
        self.p_nm_adepth = nm_adepth
        self.p_fut_depth = fut_depth
        self.p_fut_t[1] = fut_t1
        self.p_fut_t[2] = fut_t2
        self.p_fut_t[3] = fut_t3
        self.p_mc_use = mc_use
        self.p_mc_r = mc_r
        self.p_mc_depth = mc_depth
        self.p_mc_m = mc_m
        self.p_mc_c = mc_c
        self.p_ext_check = ext_check
        self.p_ext_onereply = ext_onereply
        self.p_ext_recap = ext_recap
        self.p_ext_passed = ext_passed
        self.p_ext_mate = ext_mate

    def set_budget(self, max_nodes, max_depth, use_tt_cutoffs=True, early_stop=False):
        self.max_nodes = max_nodes
        self.max_depth = max_depth if max_depth < 100 else 100
        self.use_tt_cutoffs = use_tt_cutoffs
        self.early_stop = early_stop

    def set_deadline(self, deadline):
        """Absolute time.monotonic() limit; makes the search non-deterministic."""
        self.deadline = deadline

    # -- transposition table ------------------------------------------------

    @cython.cfunc
    def tt_probe(self, ply: cython.int) -> cython.longlong:
        """Packed hit: move | bound<<20 | depth<<22 | (score+32768)<<32, or -1."""
        slot: cython.longlong = cython.cast(cython.longlong, self.bd.hash & cython.cast(cython.ulonglong, self.tt_mask))
        if self.tt_key[slot] != self.bd.hash:
            return -1
        data: cython.ulonglong = self.tt_data[slot]
        score: cython.int = cython.cast(cython.int, (data >> 32) & 0xFFFF) - 32768
        if score > MATE_LIMIT:
            score -= ply
        elif score < -MATE_LIMIT:
            score += ply
        data = (data & 0xFFFFFFFF) | (cython.cast(cython.ulonglong, score + 32768) << 32)
        return cython.cast(cython.longlong, data)

    @cython.cfunc
    def tt_store(self, depth_u: cython.int, score: cython.int, bound: cython.int,
                 move: cython.int, ply: cython.int):
        slot: cython.longlong = cython.cast(cython.longlong, self.bd.hash & cython.cast(cython.ulonglong, self.tt_mask))
        if depth_u < 0:
            depth_u = 0
        elif depth_u > 1023:
            depth_u = 1023
        old_depth: cython.int = cython.cast(cython.int, (self.tt_data[slot] >> 22) & 1023)
        if self.tt_key[slot] != 0 and self.tt_key[slot] != self.bd.hash and old_depth > depth_u:
            return                  # depth-preferred replacement
        if score > MATE_LIMIT:
            score += ply
        elif score < -MATE_LIMIT:
            score -= ply
        self.tt_key[slot] = self.bd.hash
        self.tt_data[slot] = (cython.cast(cython.ulonglong, move)
                              | (cython.cast(cython.ulonglong, bound) << 20)
                              | (cython.cast(cython.ulonglong, depth_u) << 22)
                              | (cython.cast(cython.ulonglong, score + 32768) << 32))

    # -- move ordering --------------------------------------------------------

    @cython.cfunc
    def score_moves(self, base: cython.int, n: cython.int, tt_move: cython.int, ply: cython.int):
        i: cython.int
        m: cython.int
        sc: cython.int
        to: cython.int
        victim: cython.int
        att: cython.int
        promo: cython.int
        k0: cython.int = self.killers[2 * ply]
        k1: cython.int = self.killers[2 * ply + 1]
        for i in range(base, base + n):
            m = self.moves[i]
            to = (m >> 7) & 127
            promo = (m >> 14) & 7
            if m == tt_move:
                sc = 1 << 30
            elif self.bd.sq[to] != 0 or (m & FLAG_EP):
                victim = PAWN if (m & FLAG_EP) else (self.bd.sq[to] if self.bd.sq[to] > 0 else -self.bd.sq[to])
                att = self.bd.sq[m & 127]
                if att < 0:
                    att = -att
                sc = (1 << 28) + victim * 1024 - att + promo * 16
            elif promo:
                sc = (1 << 28) + promo * 1024 - 6
            elif m == k0:
                sc = 1 << 27
            elif m == k1:
                sc = (1 << 27) - 1
            else:
                sc = cython.cast(cython.int, self.history[self.bd.pidx(self.bd.sq[m & 127]) * 128 + to])
            self.scores[i] = sc

    @cython.cfunc
    def pick_next(self, base: cython.int, i: cython.int, n: cython.int) -> cython.int:
        """Selection step: swap the highest-scored remaining move into slot i."""
        best: cython.int = i
        j: cython.int
        for j in range(i + 1, base + n):
            if self.scores[j] > self.scores[best]:
                best = j
        if best != i:
            tm: cython.int = self.moves[i]
            ts: cython.int = self.scores[i]
            self.moves[i] = self.moves[best]
            self.scores[i] = self.scores[best]
            self.moves[best] = tm
            self.scores[best] = ts
        return self.moves[i]

    @cython.cfunc
    def gen_evasions(self, base: cython.int) -> cython.int:
        """Legal-filtered move list for an in-check node; count is exact."""
        n: cython.int = self.bd.gen_pseudo(self.moves, base, False)
        mover: cython.int = self.bd.stm
        kept: cython.int = base
        i: cython.int
        for i in range(base, base + n):
            self.bd.make(self.moves[i])
            if not self.bd.in_check_side(mover):
                self.moves[kept] = self.moves[i]
                kept += 1
            self.bd.unmake()
        return kept - base

    # -- quiescence -----------------------------------------------------------

    @cython.cfunc
    def qsearch(self, alpha: cython.int, beta: cython.int, ply: cython.int,
                in_chk: cython.bint) -> cython.int:
        if self.nodes >= self.max_nodes:
            self.aborted = True
            return 0
        self.nodes += 1
        if (self.nodes & 4095) == 0:
            self.check_deadline()

        if ply >= MAX_PLY - 4:
            return self.bd.static_eval()

        base: cython.int = ply * MOVES_CAP
        best: cython.int = -INF_SCORE
        n: cython.int
        i: cython.int
        m: cython.int
        v: cython.int
        mover: cython.int = self.bd.stm
        gives: cython.bint

        if in_chk:
            n = self.gen_evasions(base)
            if n == 0:
                return -(MATE_BOUND - ply)
            self.score_moves(base, n, 0, ply)
            for i in range(base, base + n):
                m = self.pick_next(base, i, n)
                self.bd.make(m)
                gives = self.bd.in_check_side(self.bd.stm)
                v = -self.qsearch(-beta, -alpha, ply + 1, gives)
                self.bd.unmake()
                if self.aborted:
                    return 0
                if v > best:
                    best = v
                    if v > alpha:
                        alpha = v
                        if v >= beta:
                            break
            return best

        best = self.bd.static_eval()
        if best >= beta:
            return best
        if best > alpha:
            alpha = best

        n = self.bd.gen_pseudo(self.moves, base, True)
        self.score_moves(base, n, 0, ply)
        for i in range(base, base + n):
            m = self.pick_next(base, i, n)
            self.bd.make(m)
            if self.bd.in_check_side(mover):
                self.bd.unmake()
                continue
            gives = self.bd.in_check_side(self.bd.stm)
            v = -self.qsearch(-beta, -alpha, ply + 1, gives)
            self.bd.unmake()
            if self.aborted:
                return 0
            if v > best:
                best = v
                if v > alpha:
                    alpha = v
                    if v >= beta:
                        break
        return best

    @cython.cfunc
    def check_deadline(self):
        if self.deadline > 0.0 and time.monotonic() >= self.deadline:
            self.aborted = True

    # -- main search ------------------------------------------------------------

    @cython.cfunc
    def negamax(self, depth_u: cython.int, alpha: cython.int, beta: cython.int,
                ply: cython.int, last_null: cython.bint, in_chk: cython.bint) -> cython.int:
        if self.nodes >= self.max_nodes:
            self.aborted = True
            return 0
        if depth_u < UNITS_PER_PLY:
            return self.qsearch(alpha, beta, ply, in_chk)
        self.nodes += 1
        if (self.nodes & 4095) == 0:
            self.check_deadline()
        if ply >= MAX_PLY - 8:
            return self.bd.static_eval()

        base: cython.int = ply * MOVES_CAP
        d: cython.int = depth_u >> 2
        n: cython.int = 0

        # fifty-move and repetition draws (any recurrence within the
        # reversible window scores zero inside the search)
        if self.bd.halfmove >= 100:
            if in_chk and self.gen_evasions(base) == 0:
                return -(MATE_BOUND - ply)
            return 0
        if self.bd.repeats(1):
            return 0

        orig_alpha: cython.int = alpha
        tt_move: cython.int = 0
        tt_bound: cython.int = -1
        hit: cython.longlong = self.tt_probe(ply)
        if hit >= 0:
            tt_move = cython.cast(cython.int, hit & 0xFFFFF)
            tt_bound = cython.cast(cython.int, (hit >> 20) & 3)
            if self.use_tt_cutoffs and cython.cast(cython.int, (hit >> 22) & 1023) >= depth_u:
                tt_score: cython.int = cython.cast(cython.int, (hit >> 32) & 0xFFFF) - 32768
                if tt_bound == TT_EXACT:
                    self.st_tt_cut += 1
                    return tt_score
                if tt_bound == TT_LOWER and tt_score >= beta:
                    self.st_tt_cut += 1
                    return tt_score
                if tt_bound == TT_UPPER and tt_score <= alpha:
                    self.st_tt_cut += 1
                    return tt_score

        pv: cython.bint = (beta - alpha) > 1
        best: cython.int = -INF_SCORE
        best_move: cython.int = 0
        mate_threat: cython.bint = False
        v: cython.int
        r: cython.int

        # null move: pass the turn and scout with a zero window at reduced
        # depth; a fail-high prunes the node.  The scout's fail-low value is
        # only an upper bound, so it must not raise alpha; a mate score in it
        # still flags a mate threat for the extension logic.
        if self.p_nm_use and not in_chk and not last_null and ply > 0:
            if (self.bd.stm == WHITE and self.bd.np_w > 0) or (self.bd.stm == BLACK and self.bd.np_b > 0):
                r = self.p_nm_r
                if self.p_nm_adapt and d <= self.p_nm_adepth:
                    r -= 1
                self.bd.make_null()
                self.cap_sq[ply + 1] = -1
                self.ext_used[ply + 1] = self.ext_used[ply]
                v = -self.negamax((d - 1 - r) * UNITS_PER_PLY, -beta, -(beta - 1),
                                  ply + 1, True, False)
                self.bd.unmake_null()
                if self.aborted:
                    return 0
                if v >= beta:
                    self.st_null_cut += 1
                    return v
                if v > MATE_LIMIT or v < -MATE_LIMIT:
                    mate_threat = True

        # futility: hopeless shallow nodes fall through to quiescence
        if not in_chk and 1 <= d <= 3 and d <= self.p_fut_depth:
            if self.bd.static_eval() + self.p_fut_t[d] < alpha:
                self.st_futile += 1
                return self.qsearch(alpha, beta, ply, False)

        if in_chk:
            n = self.gen_evasions(base)
            if n == 0:
                return -(MATE_BOUND - ply)
        else:
            n = self.bd.gen_pseudo(self.moves, base, False)
        self.score_moves(base, n, tt_move, ply)

        mover: cython.int = self.bd.stm
        i: cython.int
        m: cython.int
        gives: cython.bint

        # multi-cut: at likely cut-nodes, several reduced fail-highs prune
        # outright.  Skipped when beta sits in the mate range: the hard beta
        # return would fabricate mate-adjacent bounds out of reduced probes.
        if self.p_mc_use and d >= self.p_mc_depth and tt_bound == TT_LOWER \
                and -MATE_LIMIT < beta < MATE_LIMIT:
            if self.p_mc_c == 0:
                self.st_mc_cut += 1
                return beta
            cuts: cython.int = 0
            probed: cython.int = 0
            for i in range(base, base + n):
                if probed >= self.p_mc_m:
                    break
                m = self.pick_next(base, i, n)
                self.bd.make(m)
                if not in_chk and self.bd.in_check_side(mover):
                    self.bd.unmake()
                    continue
                probed += 1
                gives = self.bd.in_check_side(self.bd.stm)
                self.cap_sq[ply + 1] = -1
                self.ext_used[ply + 1] = self.ext_used[ply]
                v = -self.negamax((d - 1 - self.p_mc_r) * UNITS_PER_PLY, -beta, -(beta - 1),
                                  ply + 1, False, gives)
                self.bd.unmake()
                if self.aborted:
                    return 0
                if v >= beta:
                    cuts += 1
                    if cuts >= self.p_mc_c:
                        self.st_mc_cut += 1
                        return beta

        # internal iterative deepening for PV nodes lacking a table move
        if pv and tt_move == 0 and d >= 4:
            self.st_iid += 1
            self.negamax(depth_u - 2 * UNITS_PER_PLY, alpha, beta, ply, last_null, in_chk)
            if self.aborted:
                return 0
            hit = self.tt_probe(ply)
            if hit >= 0:
                tt_move = cython.cast(cython.int, hit & 0xFFFFF)
                if tt_move:
                    for i in range(base, base + n):
                        if self.moves[i] == tt_move:
                            self.scores[i] = 1 << 30
                            break

        legal: cython.int = 0
        first: cython.bint = True
        ext: cython.int
        allowed: cython.int
        child_d: cython.int
        to: cython.int
        is_cap: cython.bint

        for i in range(base, base + n):
            m = self.pick_next(base, i, n)
            to = (m >> 7) & 127
            is_cap = self.bd.sq[to] != 0 or (m & FLAG_EP) != 0
            self.bd.make(m)
            if not in_chk and self.bd.in_check_side(mover):
                self.bd.unmake()
                continue
            legal += 1
            gives = self.bd.in_check_side(self.bd.stm)

            ext = 0
            if gives:
                ext += self.p_ext_check
            if in_chk and n == 1:
                ext += self.p_ext_onereply
            if is_cap and to == self.cap_sq[ply]:
                ext += self.p_ext_recap
            if self.bd.sq[to] == PAWN * mover and (to >> 4) == (6 if mover == WHITE else 1) \
                    and self.bd.passed_pawn(to, mover):
                ext += self.p_ext_passed
            if mate_threat:
                ext += self.p_ext_mate
            if ext > MAX_EXT_PER_MOVE:
                ext = MAX_EXT_PER_MOVE
            # a line may at most double the nominal depth
            allowed = self.nominal_depth * UNITS_PER_PLY - self.ext_used[ply]
            if ext > allowed:
                ext = allowed if allowed > 0 else 0
            self.st_ext_units += ext
            self.ext_used[ply + 1] = self.ext_used[ply] + ext
            self.cap_sq[ply + 1] = to if is_cap else -1
            child_d = depth_u - UNITS_PER_PLY + ext

            if first:
                v = -self.negamax(child_d, -beta, -alpha, ply + 1, False, gives)
                first = False
            else:
                v = -self.negamax(child_d, -(alpha + 1), -alpha, ply + 1, False, gives)
                if not self.aborted and alpha < v < beta:
                    v = -self.negamax(child_d, -beta, -alpha, ply + 1, False, gives)
            self.bd.unmake()
            if self.aborted:
                return 0

            if v > best:
                best = v
                best_move = m
                if v > alpha:
                    alpha = v
                    if v >= beta:
                        if not is_cap and (m >> 14) & 7 == 0:
                            if self.killers[2 * ply] != m:
                                self.killers[2 * ply + 1] = self.killers[2 * ply]
                                self.killers[2 * ply] = m
                            hidx: cython.int = self.bd.pidx(self.bd.sq[m & 127]) * 128 + to
                            # cap keeps ordering scores inside 32 bits in both backends
                            if self.history[hidx] < (1 << 26):
                                self.history[hidx] += d * d
                        break

        if legal == 0:
            return -(MATE_BOUND - ply) if in_chk else 0

        bound: cython.int = TT_EXACT
        if best <= orig_alpha:
            bound = TT_UPPER
        elif best >= beta:
            bound = TT_LOWER
        self.tt_store(depth_u, best, bound, best_move, ply)
        return best

    # -- root ---------------------------------------------------------------

    @cython.cfunc
    def search_root(self, depth: cython.int) -> cython.int:
        if self.nodes >= self.max_nodes:
            self.aborted = True
            return 0
        self.nodes += 1
        self.nominal_depth = depth

        in_chk: cython.bint = self.bd.in_check_side(self.bd.stm)
        alpha: cython.int = -INF_SCORE
        beta: cython.int = INF_SCORE
        best: cython.int = -INF_SCORE
        best_i: cython.int = 0
        mover: cython.int = self.bd.stm
        self.cap_sq[0] = -1
        self.ext_used[0] = 0

        i: cython.int
        m: cython.int
        v: cython.int
        ext: cython.int
        to: cython.int
        is_cap: cython.bint
        gives: cython.bint

        for i in range(self.n_root):
            m = self.root_moves[i]
            to = (m >> 7) & 127
            is_cap = self.bd.sq[to] != 0 or (m & FLAG_EP) != 0
            self.bd.make(m)
            gives = self.bd.in_check_side(self.bd.stm)

            ext = 0
            if gives:
                ext += self.p_ext_check
            if in_chk and self.n_root == 1:
                ext += self.p_ext_onereply
            if self.bd.sq[to] == PAWN * mover and (to >> 4) == (6 if mover == WHITE else 1) \
                    and self.bd.passed_pawn(to, mover):
                ext += self.p_ext_passed
            if ext > MAX_EXT_PER_MOVE:
                ext = MAX_EXT_PER_MOVE
            self.ext_used[1] = ext
            self.cap_sq[1] = to if is_cap else -1
            child_d: cython.int = depth * UNITS_PER_PLY - UNITS_PER_PLY + ext

            if i == 0:
                v = -self.negamax(child_d, -beta, -alpha, 1, False, gives)
            else:
                v = -self.negamax(child_d, -(alpha + 1), -alpha, 1, False, gives)
                if not self.aborted and v > alpha:
                    v = -self.negamax(child_d, -beta, -alpha, 1, False, gives)
            self.bd.unmake()
            if self.aborted:
                return 0
            if v > best:
                best = v
                best_i = i
                if v > alpha:
                    alpha = v

        self.root_best = self.root_moves[best_i]
        # rotate the best move to the front for the next iteration
        if best_i > 0:
            m = self.root_moves[best_i]
            for i in range(best_i, 0, -1):
                self.root_moves[i] = self.root_moves[i - 1]
            self.root_moves[0] = m
        self.tt_store(depth * UNITS_PER_PLY, best, TT_EXACT, self.root_best, 0)
        return best

    def prepare_root(self):
        """Generate and order the root move list; returns the legal move count."""
        n: cython.int = self.bd.gen_legal(self.moves, 0)
        i: cython.int
        self.score_moves(0, n, 0, 0)
        for i in range(n):
            self.pick_next(0, i, n)
        for i in range(n):
            self.root_moves[i] = self.moves[i]
        self.n_root = n
        return n

    def run(self, on_iteration=None):
        """Iterative deepening driver.

        Returns (move, score, nodes, depth_completed, aborted).  on_iteration
        is called after every completed depth with (depth, move, score, nodes)
        and may return False to stop early.  A partially searched iteration
        never contributes a result.
        """
        self.nodes = 0
        self.aborted = False
        n = self.prepare_root()
        if n == 0:
            return (0, -MATE_BOUND if self.bd.in_check() else 0, 0, 0, False)
        best_move = 0
        best_score = 0
        completed = 0
        for depth in range(1, self.max_depth + 1):
            score = self.search_root(depth)
            if self.aborted:
                break
            best_move = self.root_best
            best_score = score
            completed = depth
            if on_iteration is not None:
                if on_iteration(depth, best_move, best_score, self.nodes) is False:
                    break
            if self.early_stop:
                if self.n_root == 1:
                    break
                if best_score >= MATE_BOUND - depth or best_score <= -(MATE_BOUND - depth):
                    break
        if completed == 0:
            best_move = self.root_moves[0]
        return (best_move, best_score, self.nodes, completed, bool(self.aborted))

    def node_count(self):
        return self.nodes

    def stats(self):
        return {
            "null_cutoffs": self.st_null_cut,
            "futility_prunes": self.st_futile,
            "multicut_cutoffs": self.st_mc_cut,
            "tt_cutoffs": self.st_tt_cut,
            "iid_searches": self.st_iid,
            "extension_units": self.st_ext_units,
        }

    def reset_stats(self):
        self.st_null_cut = 0
        self.st_futile = 0
        self.st_mc_cut = 0
        self.st_tt_cut = 0
        self.st_iid = 0
        self.st_ext_units = 0

    def quiescence_value(self, alpha, beta):
        """Quiescence search entry for callers outside the main search."""
        in_chk = self.bd.in_check_side(self.bd.stm)
        return self.qsearch(alpha, beta, 0, in_chk)


# constants re-exported for the wrapper layer; in compiled mode the typed
# globals above are C variables invisible to Python, so this dict is the
# one attribute surface both backends share
EXPORTS = {
    "WHITE": WHITE, "BLACK": BLACK,
    "PAWN": PAWN, "KNIGHT": KNIGHT, "BISHOP": BISHOP,
    "ROOK": ROOK, "QUEEN": QUEEN, "KING": KING,
    "MATE_BOUND": MATE_BOUND, "MATE_LIMIT": MATE_LIMIT,
    "EVAL_LIMIT": EVAL_LIMIT, "INF_SCORE": INF_SCORE,
    "UNITS_PER_PLY": UNITS_PER_PLY,
    "FLAG_CASTLE": FLAG_CASTLE, "FLAG_EP": FLAG_EP, "FLAG_DBL": FLAG_DBL,
}
