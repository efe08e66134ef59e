#!/usr/bin/env python3
"""Rebuild the recorded fixtures under frontend/test/fixtures.

Run from the repository root with the tokenlab package installed:

    python3 frontend/tools/make_fixtures.py

Two files are produced:

  stream.json     every frame a scripted fast-forward session put on the
                  wire, in receive order. The console's fixture test folds
                  the whole stream through the view reducer.
  agent_log.json  a step-tagged order log taken from a simulated subject,
                  plus the session outcome the simulation produced. The
                  replay test feeds the log to a live server and expects
                  the same net profit.

Both sessions are driven through the ASGI test client against the same app
object `tokenlab serve` runs, so the recorded frames are exactly what a
deployed server would send.
"""
from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path
from tempfile import TemporaryDirectory

from fastapi.testclient import TestClient

from tokenlab.agents import TokenAgent, derive_behavior
from tokenlab.config import default_config
from tokenlab.market.session import run_session
from tokenlab.rng import substream
from tokenlab.server import create_app
from tokenlab.tokens import build_token_set

FIXTURES = Path(__file__).resolve().parent.parent / "test" / "fixtures"

STREAM_TOKEN = "T3"
STREAM_SEED = 7777
STREAM_STEPS = 600

AGENT_TOKEN = "T1"
AGENT_SEED = 424242
AGENT_STEPS = 40


def client_for(tmp: str, steps: int) -> TestClient:
    base = default_config()
    cfg = replace(base, out_dir=tmp, market=replace(base.market, steps=steps))
    return TestClient(create_app(cfg, dataset_path=str(Path(tmp) / "sessions.csv")))


def open_session(client: TestClient, token_id: str, seed: int) -> str:
    resp = client.post(
        "/sessions",
        json={"token_id": token_id, "seed": seed, "fast_forward": True},
    )
    assert resp.status_code == 201, resp.text
    return resp.json()["session_id"]


# Scripted activity for the stream recording: enough traffic to exercise
# fills, resting orders, and one deliberately bad ticket.
STREAM_ORDERS = [
    {"step": 5, "side": "buy", "kind": "market", "quantity": 12},
    {"step": 10, "side": "buy", "kind": "limit", "quantity": 0, "price": 10_000},
    {"step": 80, "side": "sell", "kind": "market", "quantity": 8},
    {"step": 100, "side": "buy", "kind": "limit", "quantity": 5, "price": 9_000},
    {"step": 160, "side": "buy", "kind": "market", "quantity": 10},
    {"step": 240, "side": "sell", "kind": "market", "quantity": 10},
    {"step": 300, "side": "sell", "kind": "limit", "quantity": 5, "price": 11_000},
    {"step": 320, "side": "buy", "kind": "market", "quantity": 6},
    {"step": 400, "side": "sell", "kind": "market", "quantity": 9},
    {"step": 480, "side": "buy", "kind": "market", "quantity": 7},
    {"step": 560, "side": "sell", "kind": "market", "quantity": 11},
]


def record_stream() -> dict:
    with TemporaryDirectory() as tmp, client_for(tmp, STREAM_STEPS) as client:
        sid = open_session(client, STREAM_TOKEN, STREAM_SEED)
        messages: list[dict] = []
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            while True:
                msg = ws.receive_json()
                messages.append(msg)
                if msg["type"] == "book_snapshot":
                    break
            for i, order in enumerate(STREAM_ORDERS):
                ws.send_json({"type": "order", "client_order_id": f"k{i}", **order})
                messages.append(ws.receive_json())
            ws.send_json({"type": "start"})
            while messages[-1]["type"] != "session_end":
                messages.append(ws.receive_json())

    accepted = sum(1 for m in messages if m["type"] == "order_accepted")
    rejected = sum(1 for m in messages if m["type"] == "order_rejected")
    assert accepted == len(STREAM_ORDERS) - 1, accepted
    assert rejected == 1, rejected
    assert len(messages) >= 1000, len(messages)
    return {
        "session": {"token_id": STREAM_TOKEN, "seed": STREAM_SEED, "steps": STREAM_STEPS},
        "messages": messages,
    }


class RecordingController:
    """Wraps a session controller and logs every emitted (step, ticket)."""

    def __init__(self, inner):
        self.inner = inner
        self.emitted = []

    def __call__(self, view, step, rng):
        ticket = self.inner(view, step, rng)
        if ticket is not None:
            self.emitted.append((step, ticket))
        return ticket


def build_agent_log() -> dict:
    base = default_config()
    cfg = replace(base, market=replace(base.market, steps=AGENT_STEPS))
    market = replace(
        cfg.market,
        drift_low=cfg.virtue.magnitude_low,
        drift_high=cfg.virtue.magnitude_high,
    )
    token = {t.token_id: t for t in build_token_set(cfg.virtue)}[AGENT_TOKEN]
    profile = derive_behavior(
        token, cfg.base_profile, substream(AGENT_SEED, "behavior"), cfg.behavior
    )
    recorder = RecordingController(TokenAgent(profile, cfg.behavior))
    outcome = run_session(market, recorder, AGENT_SEED)
    assert recorder.emitted, "the scripted subject placed no orders"

    orders = []
    for step, ticket in recorder.emitted:
        entry = {
            "step": step,
            "side": ticket.side,
            "kind": ticket.kind,
            "quantity": ticket.quantity,
        }
        if ticket.price is not None:
            entry["price"] = ticket.price
        orders.append(entry)

    # Replay the log against a live server before freezing it, so the
    # committed expectation is known to hold end to end.
    with TemporaryDirectory() as tmp, client_for(tmp, AGENT_STEPS) as client:
        sid = open_session(client, AGENT_TOKEN, AGENT_SEED)
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            while ws.receive_json()["type"] != "book_snapshot":
                pass
            for i, order in enumerate(orders):
                ws.send_json({"type": "order", "client_order_id": f"r{i}", **order})
                reply = ws.receive_json()
                assert reply["type"] == "order_accepted", reply
            ws.send_json({"type": "start"})
            while True:
                msg = ws.receive_json()
                if msg["type"] == "session_end":
                    break
    assert msg["net_profit"] == outcome.net_profit, (msg, outcome.net_profit)
    assert msg["closing_price"] == outcome.closing_price

    return {
        "token_id": AGENT_TOKEN,
        "seed": AGENT_SEED,
        "steps": AGENT_STEPS,
        "orders": orders,
        "expected_net_profit": outcome.net_profit,
        "expected_closing_price": outcome.closing_price,
    }


def write(path: Path, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {path} ({path.stat().st_size} bytes)")


def main() -> None:
    stream = record_stream()
    print(f"stream: {len(stream['messages'])} messages")
    write(FIXTURES / "stream.json", stream)

    log = build_agent_log()
    print(
        f"agent log: {len(log['orders'])} orders, "
        f"net profit {log['expected_net_profit']}"
    )
    write(FIXTURES / "agent_log.json", log)


if __name__ == "__main__":
    main()
