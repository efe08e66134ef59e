"""Live session server: HTTP lifecycle, stream protocol, replay parity."""
from dataclasses import replace

import pytest
from fastapi.testclient import TestClient
from starlette.websockets import WebSocketDisconnect

from tokenlab.agents import TokenAgent, derive_behavior
from tokenlab.config import default_config
from tokenlab.dataset import read_records_csv
from tokenlab.market.session import run_session
from tokenlab.rng import substream
from tokenlab.server import create_app
from tokenlab.tokens import build_token_set

STEPS = 40


@pytest.fixture()
def server(tmp_path):
    base = default_config()
    cfg = replace(
        base,
        out_dir=str(tmp_path),
        market=replace(base.market, steps=STEPS),
    )
    app = create_app(cfg, dataset_path=str(tmp_path / "sessions.csv"))
    with TestClient(app) as client:
        yield client, cfg, str(tmp_path / "sessions.csv")


def create_session(client, **overrides):
    payload = {"token_id": "T1", "seed": 1234, "fast_forward": True}
    payload.update(overrides)
    resp = client.post("/sessions", json=payload)
    assert resp.status_code == 201, resp.text
    return resp.json()


def read_until(ws, mtype, collected=None):
    while True:
        msg = ws.receive_json()
        if collected is not None:
            collected.append(msg)
        if msg["type"] == mtype:
            return msg


def send_order(ws, i, side, kind, quantity, price=None, step=None):
    msg = {
        "type": "order",
        "client_order_id": f"c{i}",
        "side": side,
        "kind": kind,
        "quantity": quantity,
    }
    if price is not None:
        msg["price"] = price
    if step is not None:
        msg["step"] = step
    ws.send_json(msg)
    reply = ws.receive_json()
    assert reply["client_order_id"] == f"c{i}"
    return reply


def test_health(server):
    client, _, _ = server
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok", "sessions": 0}
    create_session(client)
    assert client.get("/health").json()["sessions"] == 1


def test_unknown_token_rejected(server):
    client, _, _ = server
    resp = client.post("/sessions", json={"token_id": "T9"})
    assert resp.status_code == 400
    assert resp.json()["error"] == "unknown token_id: T9"


def test_bad_tick_seconds_rejected(server):
    client, _, _ = server
    resp = client.post("/sessions", json={"token_id": "T1", "tick_seconds": 0})
    assert resp.status_code == 400
    assert "tick_seconds" in resp.json()["error"]


def test_session_creation_payload(server):
    client, _, _ = server
    info = create_session(client, seed=77)
    assert info["session_id"] == "s000001"
    assert info["token_id"] == "T1"
    assert info["state"] == "lobby"
    assert info["seed"] == 77
    assert info["steps"] == STEPS
    # Without an explicit seed each session draws a distinct one.
    a = create_session(client, seed=None)
    b = create_session(client, seed=None)
    assert a["seed"] != b["seed"]


def test_session_info_lifecycle(server):
    client, _, _ = server
    assert client.get("/sessions/nope").status_code == 404
    sid = create_session(client)["session_id"]
    info = client.get(f"/sessions/{sid}").json()
    assert info["state"] == "lobby"
    assert info["step"] == 0
    assert info["record"] is None


def test_control_artifact_is_empty(server):
    client, _, _ = server
    sid = create_session(client, token_id="T7")["session_id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        first = ws.receive_json()
        assert first["type"] == "token_artifact"
        assert first["token_id"] == "T7"
        assert first["text"] == ""
        assert first["v"] == 1
        assert ws.receive_json()["type"] == "book_snapshot"


def test_informative_artifact_text(server):
    client, _, _ = server
    sid = create_session(client, token_id="T1")["session_id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        first = ws.receive_json()
        assert first["token_id"] == "T1"
        assert "rise" in first["text"]
        assert first["text"] != ""


def test_snapshot_sanity(server):
    client, _, _ = server
    sid = create_session(client)["session_id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        ws.receive_json()
        snap = ws.receive_json()
        assert snap["type"] == "book_snapshot"
        bids = snap["bids"]
        asks = snap["asks"]
        assert len(bids) == 5 and len(asks) == 5
        bid_prices = [p for p, _ in bids]
        ask_prices = [p for p, _ in asks]
        assert bid_prices == sorted(bid_prices, reverse=True)
        assert ask_prices == sorted(ask_prices)
        assert bid_prices[0] < ask_prices[0]
        assert all(q > 0 for _, q in bids + asks)


def test_full_scripted_run(server):
    client, _, csv_path = server
    sid = create_session(client)["session_id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        read_until(ws, "book_snapshot")
        assert send_order(ws, 0, "buy", "market", 10, step=5)["type"] == "order_accepted"
        assert send_order(ws, 1, "sell", "market", 4, step=12)["type"] == "order_accepted"
        bad = send_order(ws, 2, "buy", "market", 0, step=20)
        assert bad["type"] == "order_rejected"
        assert "positive integer" in bad["reason"]

        ws.send_json({"type": "start"})
        messages = []
        end = read_until(ws, "session_end", messages)

        ticks = [m for m in messages if m["type"] == "clock_tick"]
        assert [t["step"] for t in ticks] == list(range(STEPS))
        assert all(t["steps_total"] == STEPS for t in ticks)
        fills = [m for m in messages if m["type"] == "fill"]
        assert sum(f["quantity"] for f in fills if f["side"] == "buy") >= 10
        assert end["record_id"] == f"live-{sid}"

    info = client.get(f"/sessions/{sid}").json()
    assert info["state"] == "closed"
    assert info["record"]["net_profit"] == end["net_profit"]

    rows = read_records_csv(csv_path)
    assert len(rows) == 1
    assert rows[0].record_id == f"live-{sid}"
    assert rows[0].token_label == "T1"
    assert rows[0].net_profit == end["net_profit"]


def test_order_after_close_rejected(server):
    client, _, _ = server
    sid = create_session(client)["session_id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        read_until(ws, "book_snapshot")
        ws.send_json({"type": "start"})
        read_until(ws, "session_end")
        late = send_order(ws, 9, "buy", "market", 1)
        assert late["type"] == "order_rejected"
        assert late["reason"] == "closed"


def test_price_band(server):
    client, _, _ = server
    sid = create_session(client)["session_id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        read_until(ws, "book_snapshot")
        # Reference is the 10000 start price until something trades.
        wide = send_order(ws, 0, "buy", "limit", 5, price=12001)
        assert (wide["type"], wide["reason"]) == ("order_rejected", "price-band")
        low = send_order(ws, 1, "sell", "limit", 5, price=7999)
        assert (low["type"], low["reason"]) == ("order_rejected", "price-band")
        edge = send_order(ws, 2, "buy", "limit", 5, price=12000)
        assert edge["type"] == "order_accepted"


def test_market_order_price_is_stripped(server):
    client, _, _ = server
    sid = create_session(client)["session_id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        read_until(ws, "book_snapshot")
        reply = send_order(ws, 0, "buy", "market", 3, price=9999999)
        assert reply["type"] == "order_accepted"


def test_unknown_message_type(server):
    client, _, _ = server
    sid = create_session(client)["session_id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        read_until(ws, "book_snapshot")
        ws.send_json({"type": "dance"})
        msg = ws.receive_json()
        assert msg["type"] == "error"
        assert "unknown-message" in msg["reason"]


def test_same_seed_same_outcome(server):
    client, _, _ = server

    def run_one():
        sid = create_session(client, seed=4242)["session_id"]
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            read_until(ws, "book_snapshot")
            send_order(ws, 0, "buy", "market", 8, step=3)
            send_order(ws, 1, "sell", "market", 8, step=30)
            ws.send_json({"type": "start"})
            messages = []
            end = read_until(ws, "session_end", messages)
            fills = [
                (m["step"], m["side"], m["price"], m["quantity"])
                for m in messages
                if m["type"] == "fill"
            ]
            return end["net_profit"], end["closing_price"], fills

    assert run_one() == run_one()


def test_reconnect_replays_session_end(server):
    client, _, csv_path = server
    sid = create_session(client)["session_id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        read_until(ws, "book_snapshot")
        ws.send_json({"type": "start"})
        end = read_until(ws, "session_end")

    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        assert ws.receive_json()["type"] == "token_artifact"
        assert ws.receive_json()["type"] == "book_snapshot"
        again = ws.receive_json()
        assert again["type"] == "session_end"
        assert again["net_profit"] == end["net_profit"]
        assert again["record_id"] == end["record_id"]

    # Finalize ran once: still a single dataset row.
    assert len(read_records_csv(csv_path)) == 1


def test_second_stream_refused(server):
    client, _, _ = server
    sid = create_session(client, fast_forward=False)["session_id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as first:
        read_until(first, "book_snapshot")
        with client.websocket_connect(f"/sessions/{sid}/stream") as second:
            msg = second.receive_json()
            assert msg["type"] == "error"
            assert msg["reason"] == "stream already attached"
            with pytest.raises(WebSocketDisconnect) as exc:
                second.receive_json()
            assert exc.value.code == 4409


def test_stream_for_missing_session(server):
    client, _, _ = server
    with client.websocket_connect("/sessions/zzz/stream") as ws:
        msg = ws.receive_json()
        assert msg["type"] == "error"
        assert msg["reason"] == "no session zzz"
        with pytest.raises(WebSocketDisconnect) as exc:
            ws.receive_json()
        assert exc.value.code == 4404


def test_realtime_clock(server):
    client, _, _ = server
    sid = create_session(client, fast_forward=False, tick_seconds=0.005)["session_id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        read_until(ws, "book_snapshot")
        ws.send_json({"type": "start"})
        messages = []
        read_until(ws, "session_end", messages)
        ticks = [m for m in messages if m["type"] == "clock_tick"]
        assert [t["step"] for t in ticks] == list(range(STEPS))


class RecordingController:
    """Wraps a controller and logs every emitted (step, ticket)."""

    def __init__(self, inner):
        self.inner = inner
        self.emitted = []

    def __call__(self, view, step, rng):
        ticket = self.inner(view, step, rng)
        if ticket is not None:
            self.emitted.append((step, ticket))
        return ticket


def test_live_replay_matches_simulation(server):
    client, cfg, _ = server
    seed = 20260818

    # Offline reference: the same engine composition the server builds.
    market = replace(
        cfg.market,
        drift_low=cfg.virtue.magnitude_low,
        drift_high=cfg.virtue.magnitude_high,
    )
    token = {t.token_id: t for t in build_token_set(cfg.virtue)}["T1"]
    profile = derive_behavior(
        token, cfg.base_profile, substream(seed, "behavior"), cfg.behavior
    )
    recorder = RecordingController(TokenAgent(profile, cfg.behavior))
    offline = run_session(market, recorder, seed)
    assert recorder.emitted, "agent under T1 should trade within 40 steps"

    sid = create_session(client, seed=seed)["session_id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        read_until(ws, "book_snapshot")
        for i, (step, ticket) in enumerate(recorder.emitted):
            reply = send_order(
                ws, i, ticket.side, ticket.kind, ticket.quantity,
                price=ticket.price, step=step,
            )
            assert reply["type"] == "order_accepted"
            assert reply["step"] == step
        ws.send_json({"type": "start"})
        messages = []
        end = read_until(ws, "session_end", messages)

    assert end["net_profit"] == offline.net_profit
    assert end["closing_price"] == offline.closing_price

    subject = market.subject_id
    own_trades = [
        t for t in offline.trades if subject in (t.buyer_id, t.seller_id)
    ]
    fills = [m for m in messages if m["type"] == "fill"]
    assert [(f["price"], f["quantity"]) for f in fills] == [
        (t.price, t.quantity) for t in own_trades
    ]
    sides = ["buy" if t.buyer_id == subject else "sell" for t in own_trades]
    assert [f["side"] for f in fills] == sides
