"""One trading session: event loop, accounts, and the replayable log.

A session is strictly sequential. Every accepted order (initial book
seeding, background flow, controller orders) is appended to an order log
in submission order; matching is deterministic, so replaying that log
through a fresh book reproduces every trade and every account exactly.

`SessionEngine` exposes the loop one step at a time so a live server can
interleave network traffic with the clock; `run_session` drives the same
engine to completion in one call.

All money is integer ticks x shares; conversion to display currency only
happens at the reporting edge.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from ..rng import substream
from .book import LIMIT, MARKET, Order, OrderBook, OrderError, Trade
from .flow import FLOW_BUYER, FLOW_SELLER, FlowParams, generate_background_flow
from .fundamental import FundamentalPath, generate_fundamental

__all__ = [
    "MarketConfig",
    "OrderTicket",
    "ParticipantAccount",
    "SessionResult",
    "SessionEngine",
    "StepOutcome",
    "MarketView",
    "ScriptedController",
    "mark_to_market",
    "run_session",
    "replay_order_log",
    "write_trade_log_csv",
    "SEED_OWNER",
    "SUBJECT",
]

SEED_OWNER = "seed"
SUBJECT = "subject"


@dataclass(frozen=True)
class MarketConfig:
    steps: int = 390  # one "minute" per step, a single trading day
    start_price: int = 10_000  # ticks; tick = $0.01, so $100.00
    drift_mode: str = "fixed"  # "fixed" | "uniform" over [drift_low, drift_high]
    drift_target: float = 0.035
    drift_low: float = 0.02
    drift_high: float = 0.05
    volatility: float = 0.01
    flow: FlowParams = field(default_factory=FlowParams)
    initial_levels: int = 10  # standing book depth seeded at session start
    initial_level_qty: int = 15
    subject_id: str = SUBJECT

    def validate(self) -> None:
        if self.steps < 2:
            raise ValueError("steps must be >= 2")
        if self.drift_mode not in ("fixed", "uniform"):
            raise ValueError(f"unknown drift_mode: {self.drift_mode!r}")
        if self.start_price <= 0:
            raise ValueError("start_price must be positive")
        if self.initial_levels < 0 or self.initial_level_qty < 0:
            raise ValueError("initial book depth must be non-negative")
        self.flow.validate()


class OrderTicket(NamedTuple):
    side: str
    kind: str
    quantity: int
    price: int | None = None


@dataclass
class ParticipantAccount:
    owner_id: str
    cash: int = 0
    inventory: int = 0
    initial_cash: int = 0
    initial_inventory: int = 0


class MarketView:
    """What a decision source may observe mid-session."""

    __slots__ = ("_book", "_balances", "owner_id", "last_trade_price", "step")

    def __init__(self, book: OrderBook, balances: dict, owner_id: str):
        self._book = book
        self._balances = balances
        self.owner_id = owner_id
        self.last_trade_price: int | None = None
        self.step = 0

    def best_bid(self) -> int | None:
        return self._book.best_bid()

    def best_ask(self) -> int | None:
        return self._book.best_ask()

    def depth(self, levels: int = 5):
        return self._book.depth(levels)

    @property
    def position(self) -> int:
        bal = self._balances.get(self.owner_id)
        return bal[1] if bal else 0

    @property
    def cash(self) -> int:
        bal = self._balances.get(self.owner_id)
        return bal[0] if bal else 0


# A controller maps (view, step, rng) to nothing, one ticket, or several.
Controller = Callable[[MarketView, int, object], "OrderTicket | list[OrderTicket] | None"]


class ScriptedController:
    """Replays a fixed (step, ticket) schedule; the external-feed controller."""

    def __init__(self, schedule: list[tuple[int, OrderTicket]]):
        self._by_step: dict[int, list[OrderTicket]] = {}
        for step, ticket in schedule:
            self._by_step.setdefault(step, []).append(ticket)

    def __call__(self, view, step: int, rng) -> list[OrderTicket] | None:
        return self._by_step.get(step)


@dataclass
class SessionResult:
    seed: int
    orders: list[Order]
    trades: list[Trade]
    accounts: dict[str, ParticipantAccount]
    closing_price: int
    net_profit: int  # marked-to-market, for the controlled participant
    fundamental: FundamentalPath
    rejections: list[tuple[int, str]]  # (step, reason)
    exhausted_orders: int = 0


class StepOutcome(NamedTuple):
    step: int
    accepted: int
    fills: list[Trade]  # trades involving the controlled participant
    rejections: list[str]


def mark_to_market(account: ParticipantAccount, closing_price: int) -> int:
    """Realized cash change plus inventory change revalued at the close."""
    return (account.cash - account.initial_cash) + (
        account.inventory - account.initial_inventory
    ) * closing_price


def _apply_trades(balances: dict, trades: list[Trade]) -> None:
    for price, qty, buyer, seller, _seq in trades:
        value = price * qty
        b = balances.get(buyer)
        if b is None:
            b = balances[buyer] = [0, 0]
        s = balances.get(seller)
        if s is None:
            s = balances[seller] = [0, 0]
        b[0] -= value
        b[1] += qty
        s[0] += value
        s[1] -= qty


def _finalize_accounts(balances: dict) -> dict[str, ParticipantAccount]:
    return {
        owner: ParticipantAccount(owner_id=owner, cash=bal[0], inventory=bal[1])
        for owner, bal in balances.items()
    }


class SessionEngine:
    """The session event loop, advanced one step at a time.

    Construction prepares the whole deterministic environment (drift,
    fundamental path, background flow, standing book); each `step_once`
    injects that step's flow, then the caller's tickets, in that order.
    """

    def __init__(self, config: MarketConfig, seed: int):
        config.validate()
        self.config = config
        self.seed = seed

        if config.drift_mode == "uniform":
            self.drift = float(
                substream(seed, "drift").uniform(config.drift_low, config.drift_high)
            )
        else:
            self.drift = config.drift_target
        self.fundamental = generate_fundamental(
            seed, config.steps, self.drift, config.volatility, config.start_price
        )
        flow = generate_background_flow(seed, config.flow, self.fundamental)
        self._flow_by_step = flow.per_step(config.steps)
        self.agent_rng = substream(seed, "agent")

        self.book = OrderBook()
        self.balances: dict[str, list[int]] = {config.subject_id: [0, 0]}
        self.order_log: list[Order] = []
        self.trade_log: list[Trade] = []
        self.rejections: list[tuple[int, str]] = []
        self.exhausted = 0
        self._seq = 0
        self.step = 0
        self.view = MarketView(self.book, self.balances, config.subject_id)

        f0 = int(self.fundamental.values[0])
        for lvl in range(1, config.initial_levels + 1):
            if f0 - lvl > 0:
                self._inject(SEED_OWNER, "buy", LIMIT, f0 - lvl, config.initial_level_qty)
            self._inject(SEED_OWNER, "sell", LIMIT, f0 + lvl, config.initial_level_qty)

    @property
    def done(self) -> bool:
        return self.step >= self.config.steps

    def _inject(self, owner: str, side: str, kind: str, price: int | None, qty: int) -> list[Trade]:
        order = Order(self._seq, owner, side, kind, price, qty, self._seq)
        self._seq += 1
        result = self.book.submit(order)
        self.order_log.append(order)
        if result.fills:
            _apply_trades(self.balances, result.fills)
            self.trade_log.extend(result.fills)
            self.view.last_trade_price = result.fills[-1].price
        if result.exhausted:
            self.exhausted += 1
        return result.fills

    def step_once(self, tickets: list[OrderTicket] | tuple[OrderTicket, ...] = ()) -> StepOutcome:
        """Advance the clock one step: background flow first, then tickets."""
        if self.done:
            raise RuntimeError("session clock exhausted")
        step = self.step
        self.view.step = step
        subject = self.config.subject_id
        own_fills: list[Trade] = []
        rejected: list[str] = []
        accepted = 0

        for spec in self._flow_by_step[step]:
            owner = FLOW_BUYER if spec.side == "buy" else FLOW_SELLER
            fills = self._inject(owner, spec.side, spec.kind, spec.price, spec.quantity)
            for t in fills:
                if t.buyer_id == subject or t.seller_id == subject:
                    own_fills.append(t)

        for ticket in tickets:
            try:
                probe = Order(
                    self._seq, subject, ticket.side, ticket.kind, ticket.price, ticket.quantity, self._seq
                )
                probe.validate()
            except OrderError as err:
                self.rejections.append((step, str(err)))
                rejected.append(str(err))
                continue
            accepted += 1
            fills = self._inject(subject, ticket.side, ticket.kind, ticket.price, ticket.quantity)
            for t in fills:
                if t.buyer_id == subject or t.seller_id == subject:
                    own_fills.append(t)

        self.step += 1
        return StepOutcome(step=step, accepted=accepted, fills=own_fills, rejections=rejected)

    def closing_price(self) -> int:
        """The official close is the terminal fundamental value.

        Last prints are microstructure-noisy (a late aggressive order can
        land ticks away from value), so positions are marked at the
        session's authoritative end value instead.
        """
        return int(self.fundamental.values[-1])

    def result(self) -> SessionResult:
        if not self.done:
            raise RuntimeError("session still has steps to run")
        closing = self.closing_price()
        accounts = _finalize_accounts(self.balances)
        subject_account = accounts.setdefault(
            self.config.subject_id, ParticipantAccount(owner_id=self.config.subject_id)
        )
        net = mark_to_market(subject_account, closing)
        return SessionResult(
            seed=self.seed,
            orders=self.order_log,
            trades=self.trade_log,
            accounts=accounts,
            closing_price=closing,
            net_profit=net,
            fundamental=self.fundamental,
            rejections=self.rejections,
            exhausted_orders=self.exhausted,
        )


def run_session(config: MarketConfig, controller: Controller, seed: int) -> SessionResult:
    """Run one full session; pure function of (config, controller, seed)."""
    engine = SessionEngine(config, seed)
    while not engine.done:
        engine.view.step = engine.step
        decided = controller(engine.view, engine.step, engine.agent_rng)
        if decided is None:
            tickets: list[OrderTicket] = []
        elif isinstance(decided, list):
            tickets = decided
        else:
            tickets = [decided]
        engine.step_once(tickets)
    return engine.result()


def replay_order_log(orders: list[Order]) -> tuple[list[Trade], dict[str, ParticipantAccount]]:
    """Re-match a recorded order log from scratch.

    Matching is deterministic, so this reproduces the original trades and
    final accounts exactly; used to audit live-maintained state.
    """
    book = OrderBook()
    balances: dict[str, list[int]] = {}
    trades: list[Trade] = []
    for order in orders:
        result = book.submit(order)
        if result.fills:
            _apply_trades(balances, result.fills)
            trades.extend(result.fills)
    return trades, _finalize_accounts(balances)


def write_trade_log_csv(trades: list[Trade], path) -> None:
    """One CSV per session: seq, price_ticks, quantity, buyer_id, seller_id."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["seq", "price_ticks", "quantity", "buyer_id", "seller_id"])
        for trade in trades:
            writer.writerow([trade.seq, trade.price, trade.quantity, trade.buyer_id, trade.seller_id])
