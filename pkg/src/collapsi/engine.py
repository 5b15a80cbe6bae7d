"""Rules engine for Collapsi.

Board and movement:
- 16 cards (four aces, four 2s, four 3s, two 4s, two jokers) in a 4x4 grid,
  coordinates (row, col) from the top-left.
- The grid is toroidal: stepping off one edge re-enters from the opposite one.
- A pawn moves exactly as many orthogonal steps as the card it starts from
  (ace = 1); from a joker the player picks any length 1-4.
- Within one move no cell may be entered twice (the starting cell counts as
  already entered), every entered cell must be face-up, and the move may not
  END on the opponent's pawn (crossing it is allowed).
- After the move the starting card is turned face-down for good.
- A player with no legal move loses.

The two debatable rule readings live behind ``OPPONENT_PASS_THROUGH`` and
``ORIGIN_REENTRY`` so either can be flipped in one place.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterator

Coord = tuple[int, int]

N = 4
CELLS = N * N

# Rule switches (see module docstring). Defaults follow the rules as written:
# only the final cell is constrained by the opponent's pawn, and a pawn may
# never re-enter the cell it started its move from.
OPPONENT_PASS_THROUGH = True
ORIGIN_REENTRY = False


class CollapsiError(ValueError):
    """Base for all rule/format violations raised by this package."""


class MalformedTextError(CollapsiError):
    """Input text does not match the deal/state grammar."""


class MultisetError(CollapsiError):
    """Card multiset is not {A x4, 2 x4, 3 x4, 4 x2, J x2}."""


class FaceDownPawnError(CollapsiError):
    """A pawn sits on a face-down cell."""


class PawnOverlapError(CollapsiError):
    """Both pawns occupy the same cell."""


class ParityError(CollapsiError):
    """Face-down count and side to move disagree on plies played."""


class IllegalMoveError(CollapsiError):
    """Move is not legal in the given state."""


class NotTerminalError(CollapsiError):
    """Operation requires a terminal state."""


class Card(IntEnum):
    """Card values; the int order A < 2 < 3 < 4 < J is the sort order."""

    ACE = 1
    TWO = 2
    THREE = 3
    FOUR = 4
    JOKER = 5

    @property
    def letter(self) -> str:
        return "A234J"[self.value - 1]

    @property
    def steps(self) -> int | None:
        """Exact step count, or None for the joker's 1-4 choice."""
        return self.value if self.value <= 4 else None


_CARD_BY_LETTER = {c.letter: c for c in Card}

# The fixed 16-card multiset, as per-value counts.
_DECK_COUNTS = {Card.ACE: 4, Card.TWO: 4, Card.THREE: 4, Card.FOUR: 2, Card.JOKER: 2}


class Player(Enum):
    RED = "r"
    BLUE = "b"

    def opponent(self) -> "Player":
        return Player.BLUE if self is Player.RED else Player.RED


class Direction(Enum):
    UP = (-1, 0)
    DOWN = (1, 0)
    LEFT = (0, -1)
    RIGHT = (0, 1)


def torus_step(coord: Coord, direction: Direction) -> Coord:
    """Orthogonal neighbor with wraparound."""
    dr, dc = direction.value
    return (coord[0] + dr) % N, (coord[1] + dc) % N


def cell_index(coord: Coord) -> int:
    return N * coord[0] + coord[1]


def cell_coord(cell: int) -> Coord:
    return divmod(cell, N)


@dataclass(frozen=True, slots=True)
class Deal:
    """A 4x4 arrangement of the 16-card multiset, row-major from top-left."""

    cards: tuple[Card, ...]

    def __post_init__(self) -> None:
        if len(self.cards) != CELLS or any(
            self.cards.count(card) != n for card, n in _DECK_COUNTS.items()
        ):
            raise MultisetError(f"card multiset must be A x4, 2 x4, 3 x4, 4 x2, J x2")

    def card_at(self, coord: Coord) -> Card:
        return self.cards[cell_index(coord)]

    @property
    def jokers(self) -> tuple[Coord, Coord]:
        """The two joker cells in row-major order."""
        first, second = (i for i, c in enumerate(self.cards) if c is Card.JOKER)
        return cell_coord(first), cell_coord(second)


@dataclass(frozen=True, slots=True)
class GameState:
    """Deal plus face-up mask (bit 4*row+col), pawn positions and side to move.

    Construction does not validate; use validate_state() or parse_state() at
    trust boundaries. Solver and engine operations are total over any state
    whose pawns sit on distinct face-up cells.
    """

    deal: Deal
    face_up: int
    red_pos: Coord
    blue_pos: Coord
    to_move: Player

    @property
    def face_up_count(self) -> int:
        return self.face_up.bit_count()

    def is_face_up(self, coord: Coord) -> bool:
        return bool(self.face_up >> cell_index(coord) & 1)

    def pawn(self, player: Player) -> Coord:
        return self.red_pos if player is Player.RED else self.blue_pos


@dataclass(frozen=True, slots=True)
class Move:
    """A move to ``dest`` with one witness path (cells entered, in order)."""

    dest: Coord
    path: tuple[Coord, ...]

    @property
    def length(self) -> int:
        return len(self.path)


def validate_state(state: GameState, *, require_parity: bool = True) -> None:
    """Raise a named CollapsiError if a GameState invariant is broken."""
    if state.red_pos == state.blue_pos:
        raise PawnOverlapError(f"both pawns on {state.red_pos}")
    for who, pos in (("red", state.red_pos), ("blue", state.blue_pos)):
        if not state.is_face_up(pos):
            raise FaceDownPawnError(f"{who} pawn on face-down cell {pos}")
    if not 0 <= state.face_up < (1 << CELLS):
        raise MalformedTextError(f"face_up mask out of range: {state.face_up:#x}")
    plies_played = CELLS - state.face_up_count
    if require_parity and (plies_played % 2 == 0) != (state.to_move is Player.RED):
        raise ParityError(
            f"{plies_played} plies played but {state.to_move.value} to move"
        )


# ---------------------------------------------------------------------------
# Precomputed simple paths on the torus.
#
# _PATHS[origin][length] lists every no-revisit path of exactly that length,
# as (dest_cell, entered_mask, coord_path), sorted by coord_path so that the
# first valid entry per destination is the lexicographically smallest witness.
# ---------------------------------------------------------------------------

_STEP_DELTAS = tuple(d.value for d in Direction)


def _build_paths() -> tuple[tuple[tuple[tuple[int, int, tuple[Coord, ...]], ...], ...], ...]:
    table = []
    for origin in range(CELLS):
        per_len: dict[int, list[tuple[int, int, tuple[Coord, ...]]]] = {1: [], 2: [], 3: [], 4: []}

        def walk(cell: int, visited: int, path: list[int]) -> None:
            if path:
                coords = tuple(cell_coord(p) for p in path)
                per_len[len(path)].append((cell, sum(1 << p for p in path), coords))
            if len(path) == 4:
                return
            r, c = cell_coord(cell)
            for dr, dc in _STEP_DELTAS:
                nxt = N * ((r + dr) % N) + (c + dc) % N
                if visited >> nxt & 1:
                    continue
                path.append(nxt)
                walk(nxt, visited | 1 << nxt, path)
                path.pop()

        walk(origin, 0 if ORIGIN_REENTRY else 1 << origin, [])
        table.append(tuple(tuple(sorted(per_len[length], key=lambda e: e[2])) for length in (1, 2, 3, 4)))
    return tuple(table)


_PATHS = _build_paths()


def _move_lengths(state: GameState, origin: Coord) -> range:
    card = state.deal.card_at(origin)
    return range(1, 5) if card is Card.JOKER else range(card.value, card.value + 1)


def _iter_legal(state: GameState) -> Iterator[tuple[int, int, tuple[Coord, ...]]]:
    """Yield valid (dest_cell, mask, path) entries, shortest length first."""
    origin = state.pawn(state.to_move)
    opp = cell_index(state.pawn(state.to_move.opponent()))
    face = state.face_up
    for length in _move_lengths(state, origin):
        for dest, mask, path in _PATHS[cell_index(origin)][length - 1]:
            if mask & face != mask or dest == opp:
                continue
            if not OPPONENT_PASS_THROUGH and (mask ^ (1 << dest)) >> opp & 1:
                continue
            yield dest, mask, path


def legal_moves(state: GameState) -> list[Move]:
    """All legal moves, one per reachable destination, in row-major dest order.

    The retained witness path per destination is the shortest one, ties broken
    lexicographically on the coordinate sequence. Empty iff the mover has lost.
    """
    best: dict[int, tuple[Coord, ...]] = {}
    for dest, _mask, path in _iter_legal(state):
        if dest not in best:  # entries arrive shortest-then-lex first
            best[dest] = path
    return [Move(dest=cell_coord(d), path=best[d]) for d in sorted(best)]


def legal_destinations(state: GameState) -> list[Coord]:
    """Destinations of legal_moves, without materializing witness paths."""
    return [cell_coord(d) for d in sorted({dest for dest, _, _ in _iter_legal(state)})]


def move_to(state: GameState, dest: Coord) -> Move:
    """The canonical Move reaching ``dest``, or IllegalMoveError."""
    target = cell_index(dest)
    for d, _mask, path in _iter_legal(state):
        if d == target:
            return Move(dest=dest, path=path)
    raise IllegalMoveError(f"no legal move to {dest}")


def has_moves(state: GameState) -> bool:
    for _ in _iter_legal(state):
        return True
    return False


def is_terminal(state: GameState) -> bool:
    """True iff the side to move has no legal move (and has therefore lost)."""
    return not has_moves(state)


def terminal_score(state: GameState) -> int:
    """Signed face-up count: positive if red won (blue is stuck)."""
    if not is_terminal(state):
        raise NotTerminalError("state is not terminal")
    count = state.face_up_count
    return count if state.to_move is Player.BLUE else -count


def _check_move(state: GameState, move: Move) -> None:
    origin = state.pawn(state.to_move)
    opp = state.pawn(state.to_move.opponent())
    if not move.path or move.path[-1] != move.dest:
        raise IllegalMoveError("path must be non-empty and end at dest")
    card = state.deal.card_at(origin)
    if card is Card.JOKER:
        if not 1 <= move.length <= 4:
            raise IllegalMoveError("joker moves are 1-4 steps")
    elif move.length != card.value:
        raise IllegalMoveError(f"move must be exactly {card.value} steps from {card.letter}")
    seen = {origin} if not ORIGIN_REENTRY else set()
    prev = origin
    for coord in move.path:
        if coord in seen:
            raise IllegalMoveError(f"cell {coord} entered twice")
        if not state.is_face_up(coord):
            raise IllegalMoveError(f"cell {coord} is face-down")
        if ((coord[0] - prev[0]) % N, (coord[1] - prev[1]) % N) not in ((1, 0), (3, 0), (0, 1), (0, 3)):
            raise IllegalMoveError(f"{prev} -> {coord} is not one orthogonal step")
        if not OPPONENT_PASS_THROUGH and coord == opp and coord != move.dest:
            raise IllegalMoveError("path crosses the opponent's pawn")
        seen.add(coord)
        prev = coord
    if move.dest == opp:
        raise IllegalMoveError("move may not end on the opponent's pawn")


def apply_move(state: GameState, move: Move) -> GameState:
    """Apply a legal move: flip the origin face-down, advance pawn, pass turn."""
    _check_move(state, move)
    origin = state.pawn(state.to_move)
    face = state.face_up & ~(1 << cell_index(origin))
    if state.to_move is Player.RED:
        return GameState(state.deal, face, move.dest, state.blue_pos, Player.BLUE)
    return GameState(state.deal, face, state.red_pos, move.dest, Player.RED)


# ---------------------------------------------------------------------------
# Symmetries: translations composed with the 8 square symmetries. The board
# being toroidal, any row/column rotation leaves play unchanged, as does any
# dihedral reflection/rotation; together they form a group of 128 elements.
# ---------------------------------------------------------------------------


class Dihedral(IntEnum):
    IDENTITY = 0
    ROT90 = 1
    ROT180 = 2
    ROT270 = 3
    FLIP_H = 4  # columns mirrored
    FLIP_V = 5  # rows mirrored
    TRANSPOSE = 6  # x-y swap
    ANTITRANSPOSE = 7


_DIHEDRAL_FUNCS = {
    Dihedral.IDENTITY: lambda r, c: (r, c),
    Dihedral.ROT90: lambda r, c: (c, N - 1 - r),
    Dihedral.ROT180: lambda r, c: (N - 1 - r, N - 1 - c),
    Dihedral.ROT270: lambda r, c: (N - 1 - c, r),
    Dihedral.FLIP_H: lambda r, c: (r, N - 1 - c),
    Dihedral.FLIP_V: lambda r, c: (N - 1 - r, c),
    Dihedral.TRANSPOSE: lambda r, c: (c, r),
    Dihedral.ANTITRANSPOSE: lambda r, c: (N - 1 - c, N - 1 - r),
}


@dataclass(frozen=True, slots=True)
class Symmetry:
    """Translate by (row_shift, col_shift), then apply a dihedral map."""

    row_shift: int
    col_shift: int
    dihedral: Dihedral

    def apply(self, coord: Coord) -> Coord:
        r = (coord[0] + self.row_shift) % N
        c = (coord[1] + self.col_shift) % N
        return _DIHEDRAL_FUNCS[self.dihedral](r, c)

    def cell_map(self) -> tuple[int, ...]:
        """Cell permutation: entry i is where cell i lands."""
        return tuple(cell_index(self.apply(cell_coord(i))) for i in range(CELLS))

    def compose(self, other: "Symmetry") -> "Symmetry":
        """The symmetry acting as self after other."""
        om, sm = other.cell_map(), self.cell_map()
        return _SYM_BY_MAP[tuple(sm[om[i]] for i in range(CELLS))]

    def inverse(self) -> "Symmetry":
        m = self.cell_map()
        inv = [0] * CELLS
        for i, j in enumerate(m):
            inv[j] = i
        return _SYM_BY_MAP[tuple(inv)]

    @classmethod
    def identity(cls) -> "Symmetry":
        return cls(0, 0, Dihedral.IDENTITY)


def all_symmetries() -> tuple[Symmetry, ...]:
    """All 128 board symmetries, identity first."""
    return _ALL_SYMMETRIES


_ALL_SYMMETRIES = tuple(
    Symmetry(rs, cs, d) for d in Dihedral for rs in range(N) for cs in range(N)
)
# identity-first ordering: (0,0,IDENTITY) is already the first element
_SYM_BY_MAP = {t.cell_map(): t for t in _ALL_SYMMETRIES}


def transform_deal(deal: Deal, sym: Symmetry) -> Deal:
    cards = [Card.ACE] * CELLS
    for i, landing in enumerate(sym.cell_map()):
        cards[landing] = deal.cards[i]
    return Deal(tuple(cards))


def transform_state(state: GameState, sym: Symmetry) -> GameState:
    cmap = sym.cell_map()
    face = 0
    for i in range(CELLS):
        if state.face_up >> i & 1:
            face |= 1 << cmap[i]
    return GameState(
        deal=transform_deal(state.deal, sym),
        face_up=face,
        red_pos=sym.apply(state.red_pos),
        blue_pos=sym.apply(state.blue_pos),
        to_move=state.to_move,
    )


# Representative cells for the second joker, one per torus-distance class of
# the 15 possible placements relative to a joker pinned at (0,0).
JOKER_REPRESENTATIVES: tuple[Coord, ...] = ((0, 1), (0, 2), (1, 1), (1, 2), (2, 2))

_REP_CELLS = frozenset(cell_index(c) for c in JOKER_REPRESENTATIVES)


def canonicalize(deal: Deal) -> tuple[Deal, Symmetry]:
    """Lex-smallest symmetry image with jokers at (0,0) and a representative cell.

    Constant on symmetry orbits and idempotent. Returns the image and the
    symmetry that produces it.
    """
    best: tuple[Deal, Symmetry] | None = None
    for sym in _ALL_SYMMETRIES:
        img = transform_deal(deal, sym)
        if img.cards[0] is not Card.JOKER:
            continue
        second = next(i for i in range(1, CELLS) if img.cards[i] is Card.JOKER)
        if second not in _REP_CELLS:
            continue
        if best is None or img.cards < best[0].cards:
            best = (img, sym)
    assert best is not None  # every orbit contains a representative placement
    return best


# ---------------------------------------------------------------------------
# Text formats.
#
# Deal:  4 row-groups of 4 letters from {A,2,3,4,J}, '/'-separated, row 0 on top.
# State: "<deal> [mask:<4 hex>] r(<row>,<col>) b(<row>,<col>) <r|b>"
#        mask bit 4*row+col set = face-up; omitted mask means all face-up.
# ---------------------------------------------------------------------------

_DEAL_RE = re.compile(r"^([A234J]{4})/([A234J]{4})/([A234J]{4})/([A234J]{4})$")
_STATE_RE = re.compile(
    r"^(?P<deal>\S+)"
    r"(?:\s+mask:(?P<mask>[0-9a-fA-F]{4}))?"
    r"\s+r\((?P<rr>\d),(?P<rc>\d)\)"
    r"\s+b\((?P<br>\d),(?P<bc>\d)\)"
    r"\s+(?P<to_move>[rb])$"
)


def parse_deal(text: str) -> Deal:
    m = _DEAL_RE.match(text.strip())
    if not m:
        raise MalformedTextError(f"deal must be 4 '/'-separated groups of [A234J]: {text!r}")
    return Deal(tuple(_CARD_BY_LETTER[ch] for row in m.groups() for ch in row))


def format_deal(deal: Deal) -> str:
    rows = ["".join(c.letter for c in deal.cards[4 * r : 4 * r + 4]) for r in range(N)]
    return "/".join(rows)


def parse_state(text: str) -> GameState:
    m = _STATE_RE.match(text.strip())
    if not m:
        raise MalformedTextError(f"state does not match grammar: {text!r}")
    deal = parse_deal(m["deal"])
    face = int(m["mask"], 16) if m["mask"] else (1 << CELLS) - 1
    coords = [int(m[k]) for k in ("rr", "rc", "br", "bc")]
    if any(v >= N for v in coords):
        raise MalformedTextError(f"coordinates must be 0..3: {text!r}")
    state = GameState(
        deal=deal,
        face_up=face,
        red_pos=(coords[0], coords[1]),
        blue_pos=(coords[2], coords[3]),
        to_move=Player(m["to_move"]),
    )
    validate_state(state)
    return state


def format_state(state: GameState) -> str:
    mask = "" if state.face_up == (1 << CELLS) - 1 else f" mask:{state.face_up:04x}"
    return (
        f"{format_deal(state.deal)}{mask}"
        f" r({state.red_pos[0]},{state.red_pos[1]})"
        f" b({state.blue_pos[0]},{state.blue_pos[1]})"
        f" {state.to_move.value}"
    )
