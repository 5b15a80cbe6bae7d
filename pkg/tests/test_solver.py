"""Solver tests: golden values, oracle equivalence, and minimax identities."""

import random

import pytest

from collapsi import deals, engine, solver
from collapsi.engine import GameState, Player, parse_deal, parse_state
from oracles import (
    plain_count,
    plain_minimax,
    random_playout_state,
    random_state_with_face_up,
)

FIG1 = "A223/4A2J/3A23/J3A4"
FIG3_START = "JA2A/3JA4/2323/34A2 r(0,0) b(1,1) r"


def mask_of(*coords):
    return sum(1 << (4 * r + c) for r, c in coords)


def test_fig3_red_wins_in_7_plies():
    state = parse_state(FIG3_START)
    result = solver.solve_score(state)
    assert result.score == 9
    assert solver.plies_to_end(state, result) == 7
    assert result.best_move in engine.legal_moves(state)
    # the chosen move must achieve the score
    child = engine.apply_move(state, result.best_move)
    assert solver.solve_score(child).score == 9


def test_fig3_solve_win():
    mover_wins, witness = solver.solve_win(parse_state(FIG3_START))
    assert mover_wins and witness is not None
    assert witness in engine.legal_moves(parse_state(FIG3_START))


def test_terminal_state_passthrough():
    deal = parse_deal(FIG1)  # ace at (0,0); its neighbors all face-down
    face = mask_of((0, 0), (2, 2), (1, 2), (2, 1), (3, 3), (1, 1))
    state = GameState(deal, face, (0, 0), (2, 2), Player.RED)
    result = solver.solve_score(state)
    assert result.score == -6
    assert result.best_move is None and result.principal_variation is None
    assert solver.solve_win(state) == (False, None)


def test_alpha_beta_equals_plain_minimax_on_small_states():
    rng = random.Random(4242)
    for _ in range(15):
        state = random_state_with_face_up(rng, 8)
        assert solver.solve_score(state).score == plain_minimax(state)
    for _ in range(10):  # larger trees for a stronger pruning check
        state = random_state_with_face_up(rng, 10)
        assert solver.solve_score(state).score == plain_minimax(state)


def test_solve_win_agrees_with_score_sign():
    rng = random.Random(2024)
    for _ in range(1000):
        state = random_playout_state(rng, rng.randrange(2, 12))
        result = solver.solve_score(state)
        mover_wins = (result.score > 0) == (state.to_move is Player.RED)
        assert solver.solve_win(state)[0] == mover_wins


def test_color_swap_negates_score():
    rng = random.Random(11)
    for _ in range(60):
        state = random_playout_state(rng, rng.randrange(0, 10))
        swapped = GameState(
            state.deal, state.face_up, state.blue_pos, state.red_pos,
            state.to_move.opponent(),
        )
        assert solver.solve_score(swapped).score == -solver.solve_score(state).score


def test_score_invariant_under_symmetry():
    rng = random.Random(12)
    for _ in range(20):
        deal = deals.random_deal(rng)
        base = solver.solve_score(deals.initial_state(deal)).score
        for sym in rng.sample(engine.all_symmetries(), 5):
            image = deals.initial_state(engine.transform_deal(deal, sym))
            assert solver.solve_score(image).score == base
            # the state-level transform must agree as well
            state_image = engine.transform_state(deals.initial_state(deal), sym)
            assert solver.solve_score(state_image).score == base


def test_fresh_deal_score_sign_matches_ply_parity():
    rng = random.Random(13)
    for _ in range(40):
        state = deals.initial_state(deals.random_deal(rng))
        result = solver.solve_score(state)
        plies = solver.plies_to_end(state, result)
        assert (result.score > 0) == (plies % 2 == 1)
        assert 2 <= abs(result.score) <= 16


def test_principal_variation_is_consistent():
    rng = random.Random(14)
    for _ in range(10):
        state = random_playout_state(rng, rng.randrange(0, 8))
        result = solver.solve_score(state, pv=True)
        current = state
        for move in result.principal_variation:
            assert solver.solve_score(current).score == result.score
            current = engine.apply_move(current, move)
        assert engine.is_terminal(current)
        assert engine.terminal_score(current) == result.score
        assert 16 - current.face_up_count - (16 - state.face_up_count) == len(
            result.principal_variation
        )


def test_best_move_tie_break_is_row_major_smallest():
    rng = random.Random(15)
    for _ in range(25):
        state = random_playout_state(rng, rng.randrange(0, 9))
        moves = engine.legal_moves(state)
        if not moves:
            continue
        parent = solver.solve_score(state)
        achieving = [
            m.dest
            for m in moves
            if solver.solve_score(engine.apply_move(state, m)).score == parent.score
        ]
        assert parent.best_move.dest == min(achieving)


def test_count_games_terminal_is_one():
    deal = parse_deal(FIG1)
    state = GameState(deal, mask_of((0, 0), (2, 2)), (0, 0), (2, 2), Player.RED)
    assert solver.count_games(state) == 1


def test_count_games_recursion_identity():
    rng = random.Random(16)
    for _ in range(10):
        state = random_playout_state(rng, rng.randrange(4, 10))
        total = sum(
            solver.count_games(engine.apply_move(state, m))
            for m in engine.legal_moves(state)
        )
        if total == 0:
            total = 1
        assert solver.count_games(state) == total


def test_count_games_matches_plain_count_on_small_states():
    rng = random.Random(17)
    for _ in range(10):
        state = random_state_with_face_up(rng, 9)
        assert solver.count_games(state) == plain_count(state)


def test_count_games_fig1_order_of_magnitude():
    # informally "around 900k" games from a typical deal; loose bracket only
    count = solver.count_games(deals.initial_state(parse_deal(FIG1)))
    assert 10**5 <= count < 10**7


def test_plies_to_end():
    state = parse_state(FIG3_START)
    assert solver.plies_to_end(state, solver.solve_score(state)) == 7
    assert solver.plies_to_end(state, solver.SolveResult(score=-2, best_move=None)) == 14
    midgame = random_playout_state(random.Random(18), 3)
    with pytest.raises(engine.CollapsiError):
        solver.plies_to_end(midgame, solver.SolveResult(score=-2, best_move=None))


def test_solve_is_deterministic():
    state = parse_state(FIG3_START)
    first = solver.solve_score(state, pv=True)
    second = solver.solve_score(state, pv=True)
    assert first == second
