"""Live trading sessions over HTTP and WebSocket.

One server hosts many sessions; each session has exactly one controlled
participant, a token condition fixed at creation, and its own sequential
event loop. The stream protocol is line-oriented JSON documents: the
token artifact arrives first, the clock starts on the client's "start"
message, every order gets exactly one accepted/rejected answer, and a
single session_end closes the run. Finalized sessions append one row to
the server's dataset CSV in the standard schema.

A scripted client may request fast_forward at creation and pre-tag orders
with step numbers; the outcome then equals `run_session` driven by a
scripted controller with the same seed, which is what makes live play
auditable against the simulation.
"""
from __future__ import annotations

import asyncio
import csv
import os
import threading
from dataclasses import dataclass, field, replace
from typing import Any

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from .analytics.records import PerformanceRecord
from .config import ExperimentConfig, default_config
from .dataset import CSV_FIELDS
from .market.book import LIMIT, MARKET, Order, OrderError
from .market.session import MarketConfig, OrderTicket, SessionEngine
from .rng import derive_seed
from .tokens import InformationToken, build_token_set

__all__ = ["create_app", "PRICE_BAND", "SessionHandle"]

PRICE_BAND = 0.2  # limit prices accepted within +-20% of the reference
PROTOCOL_VERSION = 1


class CreateSessionBody(BaseModel):
    model_config = ConfigDict(extra="ignore")

    token_id: str
    seed: int | None = None
    fast_forward: bool = False
    tick_seconds: float = 1.0


@dataclass
class SessionHandle:
    session_id: str
    token: InformationToken
    seed: int
    engine: SessionEngine
    fast_forward: bool
    tick_seconds: float
    state: str = "lobby"  # lobby | running | closed
    scheduled: dict[int, list[OrderTicket]] = field(default_factory=dict)
    record: PerformanceRecord | None = None
    stream_busy: bool = False

    def snapshot_message(self) -> dict:
        bids, asks = self.engine.book.depth(5)
        return {
            "v": PROTOCOL_VERSION,
            "type": "book_snapshot",
            "step": self.engine.step,
            "bids": [[p, q] for p, q in bids],
            "asks": [[p, q] for p, q in asks],
            "last_trade": self.engine.view.last_trade_price,
        }


def _append_record(path: str, record: PerformanceRecord, lock: threading.Lock) -> None:
    with lock:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        fresh = not os.path.exists(path) or os.path.getsize(path) == 0
        with open(path, "a", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            if fresh:
                writer.writerow(CSV_FIELDS)
            writer.writerow(
                [record.record_id, record.subject_id, record.token_label, record.net_profit, record.seed]
            )


def create_app(config: ExperimentConfig | None = None, dataset_path: str | None = None) -> FastAPI:
    config = (config or default_config()).resolved()
    config.validate()
    tokens = {t.token_id: t for t in build_token_set(config.virtue)}
    market = replace(
        config.market,
        drift_low=config.virtue.magnitude_low,
        drift_high=config.virtue.magnitude_high,
    )
    if dataset_path is None:
        dataset_path = os.path.join(config.out_dir, "sessions.csv")

    app = FastAPI(title="tokenlab session server")
    # the browser console may be served from anywhere; session ids are the
    # only credential, so cross-origin lifecycle calls are safe to allow
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.sessions: dict[str, SessionHandle] = {}
    app.state.csv_lock = threading.Lock()
    app.state.counter = 0
    app.state.dataset_path = dataset_path
    app.state.market = market
    app.state.config = config

    def finalize(handle: SessionHandle) -> PerformanceRecord:
        """Mark to market, persist exactly one row; safe to call twice."""
        if handle.record is not None:
            return handle.record
        result = handle.engine.result()
        record = PerformanceRecord(
            record_id=f"live-{handle.session_id}",
            subject_id=f"live-{handle.session_id}",
            token_label=handle.token.token_id,
            net_profit=result.net_profit,
            seed=handle.seed,
        )
        _append_record(app.state.dataset_path, record, app.state.csv_lock)
        handle.record = record
        handle.state = "closed"
        return record

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "sessions": len(app.state.sessions)}

    @app.post("/sessions")
    def create_session(body: CreateSessionBody) -> JSONResponse:
        if body.token_id not in tokens:
            return JSONResponse(
                status_code=400, content={"error": f"unknown token_id: {body.token_id}"}
            )
        if body.tick_seconds <= 0:
            return JSONResponse(
                status_code=400, content={"error": "tick_seconds must be positive"}
            )
        app.state.counter += 1
        session_id = f"s{app.state.counter:06d}"
        seed = body.seed if body.seed is not None else derive_seed(
            config.master_seed, "live", app.state.counter
        )
        handle = SessionHandle(
            session_id=session_id,
            token=tokens[body.token_id],
            seed=seed,
            engine=SessionEngine(market, seed),
            fast_forward=body.fast_forward,
            tick_seconds=body.tick_seconds,
        )
        app.state.sessions[session_id] = handle
        return JSONResponse(
            status_code=201,
            content={
                "session_id": session_id,
                "token_id": body.token_id,
                "state": handle.state,
                "seed": seed,
                "steps": market.steps,
            },
        )

    @app.get("/sessions/{session_id}")
    def session_info(session_id: str) -> JSONResponse:
        handle = app.state.sessions.get(session_id)
        if handle is None:
            return JSONResponse(status_code=404, content={"error": f"no session {session_id}"})
        record = None
        if handle.record is not None:
            r = handle.record
            record = {
                "record_id": r.record_id,
                "subject_id": r.subject_id,
                "token_label": r.token_label,
                "net_profit": r.net_profit,
                "seed": r.seed,
            }
        return JSONResponse(
            content={
                "session_id": handle.session_id,
                "token_id": handle.token.token_id,
                "state": handle.state,
                "step": handle.engine.step,
                "steps": market.steps,
                "seed": handle.seed,
                "record": record,
            }
        )

    def validate_order(handle: SessionHandle, msg: dict) -> tuple[OrderTicket, int] | str:
        """Ticket and application step, or a rejection reason."""
        if handle.state == "closed":
            return "closed"
        side = msg.get("side")
        kind = msg.get("kind")
        quantity = msg.get("quantity")
        price = msg.get("price")
        if kind == MARKET:
            price = None
        ticket = OrderTicket(side=side, kind=kind, quantity=quantity, price=price)
        probe = Order(0, "client", side, kind, price, quantity, 0)
        try:
            probe.validate()
        except OrderError as err:
            return str(err)
        if kind == LIMIT:
            reference = handle.engine.view.last_trade_price or market.start_price
            if abs(price - reference) * 5 > reference:
                return "price-band"
        requested = msg.get("step")
        apply_at = handle.engine.step
        if isinstance(requested, int) and requested > apply_at:
            apply_at = requested
        return ticket, apply_at

    async def handle_message(handle: SessionHandle, ws: WebSocket, msg: Any) -> None:
        if not isinstance(msg, dict):
            await ws.send_json(
                {"v": PROTOCOL_VERSION, "type": "error", "reason": "not-an-object"}
            )
            return
        mtype = msg.get("type")
        if mtype == "start":
            if handle.state == "lobby":
                handle.state = "running"
            return
        if mtype == "order":
            client_order_id = msg.get("client_order_id")
            verdict = validate_order(handle, msg)
            if isinstance(verdict, str):
                await ws.send_json(
                    {
                        "v": PROTOCOL_VERSION,
                        "type": "order_rejected",
                        "client_order_id": client_order_id,
                        "reason": verdict,
                    }
                )
                return
            ticket, apply_at = verdict
            handle.scheduled.setdefault(apply_at, []).append(ticket)
            await ws.send_json(
                {
                    "v": PROTOCOL_VERSION,
                    "type": "order_accepted",
                    "client_order_id": client_order_id,
                    "step": apply_at,
                }
            )
            return
        await ws.send_json(
            {"v": PROTOCOL_VERSION, "type": "error", "reason": f"unknown-message: {mtype}"}
        )

    async def advance(handle: SessionHandle, ws: WebSocket) -> None:
        engine = handle.engine
        subject = engine.config.subject_id
        due = handle.scheduled.pop(engine.step, [])
        outcome = engine.step_once(due)
        for t in outcome.fills:
            await ws.send_json(
                {
                    "v": PROTOCOL_VERSION,
                    "type": "fill",
                    "step": outcome.step,
                    "side": "buy" if t.buyer_id == subject else "sell",
                    "price": t.price,
                    "quantity": t.quantity,
                }
            )
        await ws.send_json(
            {
                "v": PROTOCOL_VERSION,
                "type": "clock_tick",
                "step": outcome.step,
                "steps_total": engine.config.steps,
            }
        )
        await ws.send_json(handle.snapshot_message())
        if engine.done:
            record = finalize(handle)
            await ws.send_json(
                {
                    "v": PROTOCOL_VERSION,
                    "type": "session_end",
                    "net_profit": record.net_profit,
                    "closing_price": engine.closing_price(),
                    "record_id": record.record_id,
                }
            )

    @app.websocket("/sessions/{session_id}/stream")
    async def stream(ws: WebSocket, session_id: str) -> None:
        handle = app.state.sessions.get(session_id)
        await ws.accept()
        if handle is None:
            await ws.send_json(
                {"v": PROTOCOL_VERSION, "type": "error", "reason": f"no session {session_id}"}
            )
            await ws.close(code=4404)
            return
        if handle.stream_busy:
            await ws.send_json(
                {"v": PROTOCOL_VERSION, "type": "error", "reason": "stream already attached"}
            )
            await ws.close(code=4409)
            return

        handle.stream_busy = True
        recv_task: asyncio.Task | None = None
        try:
            await ws.send_json(
                {
                    "v": PROTOCOL_VERSION,
                    "type": "token_artifact",
                    "session_id": handle.session_id,
                    "token_id": handle.token.token_id,
                    "text": handle.token.artifact_text,
                }
            )
            await ws.send_json(handle.snapshot_message())
            if handle.state == "closed" and handle.record is not None:
                await ws.send_json(
                    {
                        "v": PROTOCOL_VERSION,
                        "type": "session_end",
                        "net_profit": handle.record.net_profit,
                        "closing_price": handle.engine.closing_price(),
                        "record_id": handle.record.record_id,
                    }
                )

            loop = asyncio.get_event_loop()
            recv_task = asyncio.create_task(ws.receive_json())
            deadline: float | None = None
            while True:
                if recv_task.done():
                    msg = recv_task.result()  # raises on disconnect
                    recv_task = asyncio.create_task(ws.receive_json())
                    await handle_message(handle, ws, msg)
                    continue
                if handle.state == "running" and not handle.engine.done:
                    if handle.fast_forward:
                        await advance(handle, ws)
                        await asyncio.sleep(0)
                        continue
                    now = loop.time()
                    if deadline is None:
                        deadline = now + handle.tick_seconds
                    if now >= deadline:
                        await advance(handle, ws)
                        deadline += handle.tick_seconds
                        continue
                    await asyncio.wait({recv_task}, timeout=deadline - now)
                    continue
                # Lobby or closed: nothing to do until the client speaks.
                await asyncio.wait({recv_task})
        except (WebSocketDisconnect, RuntimeError):
            # RuntimeError covers receive-after-close inside the test client.
            pass
        finally:
            handle.stream_busy = False
            if recv_task is not None:
                recv_task.cancel()

    return app
