"""HTTP analysis service: session lifecycle, move legality, analysis payloads."""

import random

import pytest
from fastapi.testclient import TestClient

from collapsi import engine, service

FIG3 = "JA2A/3JA4/2323/34A2"


@pytest.fixture()
def client():
    return TestClient(service.app)


def create(client, **body) -> dict:
    response = client.post("/games", json=body)
    assert response.status_code == 201, response.text
    return response.json()


def test_create_game_fig3(client):
    game = create(client, deal=FIG3)
    assert game["red"] == [0, 0] and game["blue"] == [1, 1]
    assert game["to_move"] == "r"
    assert game["state"] == f"{FIG3} r(0,0) b(1,1) r"
    assert len(game["legal_moves"]) == 14
    assert not game["terminal"]


def test_create_game_rejects_bad_multiset(client):
    response = client.post("/games", json={"deal": "AAAA/AAAA/AAAA/AAAA"})
    assert response.status_code == 422
    body = response.json()
    assert body["code"] == "invalid-deal" and "multiset" in body["message"]


def test_seeded_games_share_a_deal_but_not_an_id(client):
    first = create(client, seed=77)
    second = create(client, seed=77)
    assert first["deal"] == second["deal"]
    assert first["id"] != second["id"]


def test_unknown_session_is_404(client):
    assert client.get("/games/nope").status_code == 404
    assert client.get("/games/nope/analysis").status_code == 404
    assert client.post("/games/nope/undo").status_code == 404


def test_analysis_fig3(client):
    game = create(client, deal=FIG3)
    analysis = client.get(f"/games/{game['id']}/analysis").json()
    assert analysis["score"] == 9
    assert analysis["mover_wins"] is True
    assert analysis["plies_to_end"] == 7
    assert len(analysis["moves"]) == 14
    best = [m for m in analysis["moves"] if m["best"]]
    assert len(best) == 1
    assert best[0]["move"]["dest"] == analysis["best_move"]["dest"]
    assert best[0]["score"] == 9
    # minimax identity: red to move, so the parent score is the child max
    assert max(m["score"] for m in analysis["moves"]) == 9
    # analysis is side-effect free
    assert client.get(f"/games/{game['id']}").json()["state"] == game["state"]


def test_play_move_undo_round_trip(client):
    game = create(client, deal=FIG3)
    before = client.get(f"/games/{game['id']}").json()
    moved = client.post(f"/games/{game['id']}/moves", json={"dest": [2, 3]})
    assert moved.status_code == 200
    after = moved.json()
    assert after["to_move"] == "b" and after["plies_played"] == 1
    assert after["red"] == [2, 3]
    undone = client.post(f"/games/{game['id']}/undo")
    assert undone.status_code == 200
    assert undone.json()["state"] == before["state"]
    assert undone.json()["history_length"] == 0


def test_play_move_with_explicit_path(client):
    game = create(client, deal=FIG3)
    response = client.post(
        f"/games/{game['id']}/moves",
        json={"dest": [2, 3], "path": [[0, 3], [1, 3], [2, 3]]},
    )
    assert response.status_code == 200
    assert response.json()["red"] == [2, 3]


def test_illegal_move_lists_legal_destinations(client):
    game = create(client, deal=FIG3)
    response = client.post(f"/games/{game['id']}/moves", json={"dest": [1, 1]})
    assert response.status_code == 409
    body = response.json()
    assert body["code"] == "illegal-move"
    assert [0, 1] in body["legal_destinations"]
    assert [1, 1] not in body["legal_destinations"]
    assert len(body["legal_destinations"]) == 14


def test_undo_empty_history_is_409(client):
    game = create(client, deal=FIG3)
    assert client.post(f"/games/{game['id']}/undo").status_code == 409


def test_engine_move_plays_the_best_move(client):
    game = create(client, deal=FIG3)
    analysis = client.get(f"/games/{game['id']}/analysis").json()
    response = client.post(f"/games/{game['id']}/engine-move")
    assert response.status_code == 200
    body = response.json()
    assert body["played"] == analysis["best_move"]
    assert body["history_length"] == 1


def test_engine_move_never_gives_the_win_away(client):
    rng = random.Random(60)
    for seed in (rng.randrange(10_000) for _ in range(4)):
        game = create(client, seed=seed)
        gid = game["id"]
        while True:
            analysis = client.get(f"/games/{gid}/analysis").json()
            if analysis["terminal"]:
                break
            sign_before = analysis["score"] > 0
            client.post(f"/games/{gid}/engine-move")
            after = client.get(f"/games/{gid}/analysis").json()
            assert (after["score"] > 0) == sign_before  # perfect play keeps the value


def test_game_played_to_the_end_reports_winner(client):
    game = create(client, deal=FIG3)
    gid = game["id"]
    while not client.get(f"/games/{gid}").json()["terminal"]:
        client.post(f"/games/{gid}/engine-move")
    final = client.get(f"/games/{gid}").json()
    assert final["winner"] == "r"  # fig 3 is a red win
    assert final["final_score"] == 9
    assert final["plies_played"] == 7
    analysis = client.get(f"/games/{gid}/analysis").json()
    assert analysis["terminal"] and analysis["moves"] == []
    assert analysis["score"] == 9
    assert client.post(f"/games/{gid}/engine-move").status_code == 409


def test_session_replay_invariant(client):
    game = create(client, deal=FIG3)
    gid = game["id"]
    for _ in range(3):
        client.post(f"/games/{gid}/engine-move")
    session = service.sessions.get(gid)
    state = session.history[0][0]
    for previous, move in session.history:
        assert previous == state
        state = engine.apply_move(previous, move)
    assert state == session.current
