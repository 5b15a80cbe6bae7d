"""Collapsi: a strongly-solving engine and analysis toolkit for the 4x4 card game."""

from .engine import (
    Card,
    CollapsiError,
    Deal,
    Direction,
    GameState,
    IllegalMoveError,
    Move,
    Player,
    Symmetry,
    apply_move,
    canonicalize,
    format_deal,
    format_state,
    is_terminal,
    legal_moves,
    parse_deal,
    parse_state,
    terminal_score,
    torus_step,
    transform_deal,
    transform_state,
)
from .solver import SolveResult, count_games, plies_to_end, solve_score, solve_win
from .deals import (
    DealIndex,
    deal_at,
    enumerate_deals,
    enumeration_total,
    initial_state,
    random_deal,
    weighted_total,
)

__version__ = "0.1.0"
