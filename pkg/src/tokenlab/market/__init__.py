"""Deterministic single-instrument electronic market."""

from .book import Order, OrderBook, OrderError, SubmitResult, Trade, submit_order
from .flow import FLOW_BUYER, FLOW_SELLER, FlowOrderSpec, FlowParams, FlowStream, generate_background_flow
from .fundamental import DRIFT_RANGE, FundamentalPath, generate_fundamental
from .session import (
    MarketConfig,
    MarketView,
    OrderTicket,
    ParticipantAccount,
    SEED_OWNER,
    SUBJECT,
    ScriptedController,
    SessionEngine,
    SessionResult,
    StepOutcome,
    mark_to_market,
    replay_order_log,
    run_session,
    write_trade_log_csv,
)

__all__ = [
    "Order",
    "OrderBook",
    "OrderError",
    "SubmitResult",
    "Trade",
    "submit_order",
    "FlowOrderSpec",
    "FlowParams",
    "FlowStream",
    "generate_background_flow",
    "FLOW_BUYER",
    "FLOW_SELLER",
    "DRIFT_RANGE",
    "FundamentalPath",
    "generate_fundamental",
    "MarketConfig",
    "MarketView",
    "OrderTicket",
    "ParticipantAccount",
    "SEED_OWNER",
    "SUBJECT",
    "ScriptedController",
    "SessionEngine",
    "SessionResult",
    "StepOutcome",
    "mark_to_market",
    "replay_order_log",
    "run_session",
    "write_trade_log_csv",
]
