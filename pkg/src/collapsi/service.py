"""Local HTTP analysis service for interactive play against perfect play.

Sessions are in-memory with LRU eviction (analysis is recomputable in
milliseconds, so durability buys nothing). Requests on one session are
serialized by a per-session lock; solver calls are stateless and run outside
any lock. Errors carry {code, message, legal_destinations?}.
"""

from __future__ import annotations

import random
import threading
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.requests import Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import deals, engine, solver
from .engine import CollapsiError, GameState, Move, Player

SESSION_CAP = 1024


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str,
                 legal_destinations: list[list[int]] | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.legal_destinations = legal_destinations


@dataclass
class GameSession:
    """One game: replaying history from its first state reproduces current."""

    id: str
    current: GameState
    history: list[tuple[GameState, Move]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, cap: int = SESSION_CAP):
        self._cap = cap
        self._lock = threading.Lock()
        self._sessions: OrderedDict[str, GameSession] = OrderedDict()

    def create(self, state: GameState) -> GameSession:
        session = GameSession(id=uuid.uuid4().hex, current=state)
        with self._lock:
            self._sessions[session.id] = session
            while len(self._sessions) > self._cap:
                self._sessions.popitem(last=False)
        return session

    def get(self, session_id: str) -> GameSession:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise ApiError(404, "unknown-session", f"no session {session_id!r}")
            self._sessions.move_to_end(session_id)
            return session


app = FastAPI(title="collapsi analysis service")
app.add_middleware(
    CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
)
sessions = SessionStore()


@app.exception_handler(ApiError)
async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
    body: dict = {"code": exc.code, "message": exc.message}
    if exc.legal_destinations is not None:
        body["legal_destinations"] = exc.legal_destinations
    return JSONResponse(status_code=exc.status, content=body)


class CreateGameRequest(BaseModel):
    deal: str | None = None
    seed: int | None = None


class MoveRequest(BaseModel):
    dest: tuple[int, int]
    path: list[tuple[int, int]] | None = None


def _move_payload(move: Move | None) -> dict | None:
    if move is None:
        return None
    return {"dest": list(move.dest), "path": [list(c) for c in move.path], "length": move.length}


def _game_payload(session: GameSession, state: GameState, history_length: int) -> dict:
    moves = engine.legal_moves(state)
    payload = {
        "id": session.id,
        "state": engine.format_state(state),
        "deal": engine.format_deal(state.deal),
        "mask": f"{state.face_up:04x}",
        "red": list(state.red_pos),
        "blue": list(state.blue_pos),
        "to_move": state.to_move.value,
        "face_up_count": state.face_up_count,
        "plies_played": engine.CELLS - state.face_up_count,
        "terminal": not moves,
        "legal_moves": [_move_payload(m) for m in moves],
        "history_length": history_length,
    }
    if not moves:
        payload["winner"] = state.to_move.opponent().value
        payload["final_score"] = engine.terminal_score(state)
    return payload


def _snapshot(session: GameSession) -> tuple[GameState, int]:
    with session.lock:
        return session.current, len(session.history)


@app.post("/games", status_code=201)
def create_game(body: CreateGameRequest) -> dict:
    if body.deal is not None:
        try:
            deal = engine.parse_deal(body.deal)
        except CollapsiError as exc:
            raise ApiError(422, "invalid-deal", str(exc))
    else:
        rng = random.Random(body.seed) if body.seed is not None else random.Random()
        deal = deals.random_deal(rng)
    session = sessions.create(deals.initial_state(deal))
    return _game_payload(session, session.current, 0)


@app.get("/games/{session_id}")
def get_game(session_id: str) -> dict:
    session = sessions.get(session_id)
    state, history_length = _snapshot(session)
    return _game_payload(session, state, history_length)


@app.post("/games/{session_id}/moves")
def play_move(session_id: str, body: MoveRequest) -> dict:
    session = sessions.get(session_id)
    with session.lock:
        state = session.current
        try:
            if body.path is not None:
                move = Move(dest=tuple(body.dest), path=tuple(tuple(c) for c in body.path))
                nxt = engine.apply_move(state, move)
            else:
                move = engine.move_to(state, tuple(body.dest))
                nxt = engine.apply_move(state, move)
        except CollapsiError as exc:
            raise ApiError(
                409, "illegal-move", str(exc),
                legal_destinations=[list(c) for c in engine.legal_destinations(state)],
            )
        session.history.append((state, move))
        session.current = nxt
        return _game_payload(session, nxt, len(session.history))


@app.post("/games/{session_id}/engine-move")
def engine_move(session_id: str) -> dict:
    session = sessions.get(session_id)
    with session.lock:
        state = session.current
        result = solver.solve_score(state)
        if result.best_move is None:
            raise ApiError(409, "terminal", "the game is over; no engine move")
        session.history.append((state, result.best_move))
        session.current = engine.apply_move(state, result.best_move)
        payload = _game_payload(session, session.current, len(session.history))
    payload["played"] = _move_payload(result.best_move)
    payload["score_before"] = result.score
    return payload


@app.post("/games/{session_id}/undo")
def undo(session_id: str) -> dict:
    session = sessions.get(session_id)
    with session.lock:
        if not session.history:
            raise ApiError(409, "empty-history", "nothing to undo")
        previous, _move = session.history.pop()
        session.current = previous
        return _game_payload(session, previous, len(session.history))


@app.get("/games/{session_id}/analysis")
def analysis(session_id: str) -> dict:
    """Perfect-play evaluation of every legal move; never mutates the session."""
    session = sessions.get(session_id)
    with session.lock:
        state = session.current
    overall = solver.solve_score(state)
    mover_is_red = state.to_move is Player.RED
    moves = []
    for move in engine.legal_moves(state):
        child = engine.apply_move(state, move)
        child_result = solver.solve_score(child)
        score = child_result.score
        moves.append(
            {
                "move": _move_payload(move),
                "score": score,
                "mover_wins": (score > 0) == mover_is_red,
                "plies_to_end": engine.CELLS - abs(score),
                "plies_remaining": child.face_up_count - abs(score),
                "best": overall.best_move is not None and move.dest == overall.best_move.dest,
            }
        )
    return {
        "state": engine.format_state(state),
        "to_move": state.to_move.value,
        "score": overall.score,
        "mover_wins": (overall.score > 0) == mover_is_red,
        "best_move": _move_payload(overall.best_move),
        "plies_to_end": engine.CELLS - abs(overall.score),
        "plies_remaining": state.face_up_count - abs(overall.score),
        "terminal": overall.best_move is None,
        "moves": moves,
    }
