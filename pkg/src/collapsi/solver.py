"""Exact game solving: minimax with alpha-beta pruning, unlimited depth.

Score convention: a nonzero signed integer whose magnitude is the number of
face-up cards when the game ends and whose sign is positive for a red win.
Red maximizes, blue minimizes; this single ordering makes the winner end the
game as early as possible and the loser drag it out as long as possible.

The recursive kernels are numba-compiled (cached on disk after the first
compilation) over a packed state: a 16-bit face-up mask, two pawn cell
indices 0-15, and a per-deal step-allowance table. The side to move is
implicit in the negamax formulation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from . import engine
from .engine import CollapsiError, GameState, Move, Player, cell_index

# Flat path tables: for origin cell o and length L, entries
# _PDEST/_PMASK[_PSTART[4*o+L-1] : _PEND[4*o+L-1]] are the deduplicated
# (destination, entered-cells mask) pairs of all simple paths.


def _flat_tables() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    starts = np.zeros(64, np.int64)
    ends = np.zeros(64, np.int64)
    dests: list[int] = []
    masks: list[int] = []
    for origin in range(engine.CELLS):
        for li in range(4):
            idx = 4 * origin + li
            starts[idx] = len(dests)
            for dest, mask in sorted({(d, m) for d, m, _ in engine._PATHS[origin][li]}):
                dests.append(dest)
                masks.append(mask)
            ends[idx] = len(dests)
    return starts, ends, np.array(dests, np.int64), np.array(masks, np.int64)


_PSTART, _PEND, _PDEST, _PMASK = _flat_tables()

# 1 blocks mid-path crossings of the opponent's cell; kept as a kernel
# argument (not a baked-in constant) so flipping the engine rule switch
# cannot be defeated by a stale on-disk JIT cache.
_BLOCK_PASS = 0 if engine.OPPONENT_PASS_THROUGH else 1


@njit(cache=True, inline="always")
def _popcount16(x):
    x = x - ((x >> 1) & 0x5555)
    x = (x & 0x3333) + ((x >> 2) & 0x3333)
    x = (x + (x >> 4)) & 0x0F0F
    return (x + (x >> 8)) & 0x1F


@njit(cache=True, inline="always")
def _dest_set(face, mover, opp, allow, pstart, pend, pdest, pmask, block_pass):
    a = allow[mover]
    lo = 1 if a == 0 else a
    hi = 4 if a == 0 else a
    dests = 0
    for length in range(lo, hi + 1):
        base = 4 * mover + length - 1
        for k in range(pstart[base], pend[base]):
            m = pmask[k]
            if m & face != m:
                continue
            d = pdest[k]
            if d == opp:
                continue
            if block_pass != 0 and ((m ^ (1 << d)) >> opp) & 1 != 0:
                continue
            dests |= 1 << d
    return dests


@njit(cache=True)
def _negamax(face, mover, opp, alpha, beta, allow, order, pstart, pend, pdest, pmask, block_pass):
    dests = _dest_set(face, mover, opp, allow, pstart, pend, pdest, pmask, block_pass)
    if dests == 0:
        return -_popcount16(face)
    nface = face ^ (1 << mover)
    best = -17
    for i in range(16):
        d = order[i]
        if (dests >> d) & 1:
            v = -_negamax(nface, opp, d, -beta, -alpha, allow, order, pstart, pend, pdest, pmask, block_pass)
            if v > best:
                best = v
                if best > alpha:
                    alpha = best
                    if alpha >= beta:
                        break
    return best


@njit(cache=True)
def _wins(face, mover, opp, allow, order, pstart, pend, pdest, pmask, block_pass):
    dests = _dest_set(face, mover, opp, allow, pstart, pend, pdest, pmask, block_pass)
    if dests == 0:
        return False
    nface = face ^ (1 << mover)
    for i in range(16):
        d = order[i]
        if (dests >> d) & 1:
            if not _wins(nface, opp, d, allow, order, pstart, pend, pdest, pmask, block_pass):
                return True
    return False


@njit(cache=True)
def _count(face, mover, opp, allow, pstart, pend, pdest, pmask, block_pass):
    dests = _dest_set(face, mover, opp, allow, pstart, pend, pdest, pmask, block_pass)
    if dests == 0:
        return 1
    nface = face ^ (1 << mover)
    total = 0
    for d in range(16):
        if (dests >> d) & 1:
            total += _count(nface, opp, d, allow, pstart, pend, pdest, pmask, block_pass)
    return total


def _pack(state: GameState) -> tuple[int, int, int, np.ndarray, np.ndarray]:
    """Packed (face, mover_cell, opp_cell, allowance, child ordering)."""
    cards = state.deal.cards
    allow = np.zeros(engine.CELLS, np.int64)
    for i, card in enumerate(cards):
        allow[i] = 0 if card is engine.Card.JOKER else card.value
    # children explored highest destination card first, ties row-major
    order = np.array(sorted(range(engine.CELLS), key=lambda i: (-int(cards[i]), i)), np.int64)
    mover = cell_index(state.pawn(state.to_move))
    opp = cell_index(state.pawn(state.to_move.opponent()))
    return state.face_up, mover, opp, allow, order


@dataclass(frozen=True, slots=True)
class SolveResult:
    """Minimax value plus the deterministic best move and optional PV."""

    score: int
    best_move: Move | None
    principal_variation: tuple[Move, ...] | None = None


def _root_children(face: int, mover: int, opp: int, allow: np.ndarray) -> list[int]:
    dests = _dest_set(face, mover, opp, allow, _PSTART, _PEND, _PDEST, _PMASK, _BLOCK_PASS)
    return [d for d in range(engine.CELLS) if dests >> d & 1]


def solve_score(state: GameState, *, pv: bool = False) -> SolveResult:
    """Game-length-perfect minimax value of ``state`` with best move.

    Equal to unpruned full minimax. Ties between equal-scoring moves go to
    the smallest destination in row-major order; the witness path is the
    shortest, then lexicographically smallest.
    """
    face, mover, opp, allow, order = _pack(state)
    children = _root_children(face, mover, opp, allow)
    if not children:
        return SolveResult(score=engine.terminal_score(state), best_move=None)
    nface = face ^ (1 << mover)
    alpha, beta = -17, 17
    best_v = -18
    best_dest = -1
    for d in children:  # row-major order realizes the tie-break
        v = -int(_negamax(nface, opp, d, -beta, -alpha, allow, order,
                          _PSTART, _PEND, _PDEST, _PMASK, _BLOCK_PASS))
        if v > best_v:
            best_v, best_dest = v, d
            if v > alpha:
                alpha = v
    score = best_v if state.to_move is Player.RED else -best_v
    move = engine.move_to(state, engine.cell_coord(best_dest))
    variation = _principal_variation(state, move) if pv else None
    return SolveResult(score=score, best_move=move, principal_variation=variation)


def _principal_variation(state: GameState, first: Move) -> tuple[Move, ...]:
    line = [first]
    current = engine.apply_move(state, first)
    while True:
        result = solve_score(current)
        if result.best_move is None:
            return tuple(line)
        line.append(result.best_move)
        current = engine.apply_move(current, result.best_move)


def solve_win(state: GameState) -> tuple[bool, Move | None]:
    """Whether the side to move can force a win, with one winning move.

    A boolean win/loss alpha-beta search, cheaper than solve_score; the two
    always agree on the winner.
    """
    face, mover, opp, allow, order = _pack(state)
    children = _root_children(face, mover, opp, allow)
    nface = face ^ (1 << mover)
    for d in children:
        if not _wins(nface, opp, d, allow, order, _PSTART, _PEND, _PDEST, _PMASK, _BLOCK_PASS):
            return True, engine.move_to(state, engine.cell_coord(d))
    return False, None


def count_games(state: GameState) -> int:
    """Number of distinct complete games from ``state``, moves keyed by destination."""
    face, mover, opp, allow, _ = _pack(state)
    children = _root_children(face, mover, opp, allow)
    if not children:
        return 1
    nface = face ^ (1 << mover)
    return sum(
        int(_count(nface, opp, d, allow, _PSTART, _PEND, _PDEST, _PMASK, _BLOCK_PASS))
        for d in children
    )


def plies_to_end(initial: GameState, result: SolveResult) -> int:
    """Total plies of the perfectly played game from a fresh deal."""
    if initial.face_up_count != engine.CELLS:
        raise CollapsiError("plies_to_end requires a fresh deal (all 16 cards face-up)")
    return engine.CELLS - abs(result.score)


def warmup() -> None:
    """Compile (or load from cache) the search kernels."""
    deal = engine.parse_deal("JA2A/3JA4/2323/34A2")
    state = GameState(deal, face_up=0b0000_0000_0010_0011, red_pos=(0, 0),
                      blue_pos=(0, 1), to_move=Player.RED)
    solve_score(state)
    solve_win(state)
    count_games(state)
