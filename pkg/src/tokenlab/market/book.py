"""Limit order book with strict price-time priority matching.

Prices are integer ticks. Each side of the book is a map from price level
to a FIFO queue of resting orders, plus a sorted list of live prices kept
so the best level is always at the end (cheap to peek and pop).

Trades always execute at the resting order's price. A marketable limit
fills as far as its limit allows and rests any remainder; a market order
fills against available liquidity and cancels whatever cannot be filled
(flagged ``exhausted``). An incoming order never matches resting orders
of its own owner: a blocking own order is cancelled instead (self-trade
prevention), so every trade has distinct buyer and seller.
"""
from __future__ import annotations

import bisect
from collections import deque
from typing import NamedTuple

__all__ = [
    "Order",
    "Trade",
    "SubmitResult",
    "OrderBook",
    "OrderError",
    "submit_order",
]

BUY = "buy"
SELL = "sell"
LIMIT = "limit"
MARKET = "market"


class OrderError(ValueError):
    """Raised when an order violates basic validity rules."""


class Order(NamedTuple):
    order_id: int
    owner_id: str
    side: str  # "buy" | "sell"
    kind: str  # "limit" | "market"
    price: int | None  # ticks; None for market orders
    quantity: int
    seq: int

    def validate(self) -> None:
        if self.side not in (BUY, SELL):
            raise OrderError(f"invalid side: {self.side!r}")
        if self.kind not in (LIMIT, MARKET):
            raise OrderError(f"invalid kind: {self.kind!r}")
        if not isinstance(self.quantity, int) or self.quantity <= 0:
            raise OrderError(f"quantity must be a positive integer, got {self.quantity!r}")
        if self.kind == LIMIT:
            if not isinstance(self.price, int) or self.price <= 0:
                raise OrderError(f"limit order needs a positive integer price, got {self.price!r}")
        elif self.price is not None:
            raise OrderError("market order must not carry a price")


class Trade(NamedTuple):
    price: int
    quantity: int
    buyer_id: str
    seller_id: str
    seq: int


class SubmitResult(NamedTuple):
    fills: list[Trade]
    rested: bool  # True if a limit remainder is resting in the book
    exhausted: bool  # True if a market order ran out of liquidity


class _Resting:
    __slots__ = ("order_id", "owner_id", "qty")

    def __init__(self, order_id: int, owner_id: str, qty: int):
        self.order_id = order_id
        self.owner_id = owner_id
        self.qty = qty


class OrderBook:
    """Single-instrument book; not thread-safe (one session, one book)."""

    def __init__(self) -> None:
        self._bids: dict[int, deque[_Resting]] = {}
        self._asks: dict[int, deque[_Resting]] = {}
        # Sorted so the best price sits at the end of each list:
        # bids ascending by price, asks ascending by -price.
        self._bid_keys: list[int] = []
        self._ask_keys: list[int] = []
        self._trade_seq = 0

    # -- queries ------------------------------------------------------

    def best_bid(self) -> int | None:
        return self._bid_keys[-1] if self._bid_keys else None

    def best_ask(self) -> int | None:
        return -self._ask_keys[-1] if self._ask_keys else None

    def depth(self, levels: int = 5) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
        """Top `levels` of (price, total quantity) per side, best first."""
        bids = [
            (p, sum(r.qty for r in self._bids[p]))
            for p in [k for k in reversed(self._bid_keys)][:levels]
        ]
        asks = [
            (-k, sum(r.qty for r in self._asks[-k]))
            for k in [k for k in reversed(self._ask_keys)][:levels]
        ]
        return bids, asks

    def total_quantity(self, side: str) -> int:
        levels = self._bids if side == BUY else self._asks
        return sum(r.qty for q in levels.values() for r in q)

    def assert_sane(self) -> None:
        """Book invariants: uncrossed and strictly positive resting qty."""
        bb, ba = self.best_bid(), self.best_ask()
        if bb is not None and ba is not None and bb >= ba:
            raise AssertionError(f"crossed book: bid {bb} >= ask {ba}")
        for levels in (self._bids, self._asks):
            for price, queue in levels.items():
                if not queue:
                    raise AssertionError(f"empty level left at {price}")
                for r in queue:
                    if r.qty <= 0:
                        raise AssertionError(f"non-positive resting qty at {price}")

    # -- matching -----------------------------------------------------

    def submit(self, order: Order) -> SubmitResult:
        order.validate()
        if order.side == BUY:
            return self._match(order, self._asks, self._ask_keys, self._bids, self._bid_keys, True)
        return self._match(order, self._bids, self._bid_keys, self._asks, self._ask_keys, False)

    def _match(
        self,
        order: Order,
        opp: dict[int, deque[_Resting]],
        opp_keys: list[int],
        own: dict[int, deque[_Resting]],
        own_keys: list[int],
        is_buy: bool,
    ) -> SubmitResult:
        fills: list[Trade] = []
        remaining = order.quantity
        limit = order.price
        owner = order.owner_id

        while remaining > 0 and opp_keys:
            best = -opp_keys[-1] if is_buy else opp_keys[-1]
            if limit is not None and (best > limit if is_buy else best < limit):
                break
            queue = opp[best]
            while queue and remaining > 0:
                maker = queue[0]
                if maker.owner_id == owner:
                    # Self-trade prevention, cancel-resting flavor: an own
                    # order blocking the queue is removed, never matched.
                    queue.popleft()
                    continue
                qty = maker.qty if maker.qty < remaining else remaining
                buyer, seller = (owner, maker.owner_id) if is_buy else (maker.owner_id, owner)
                fills.append(Trade(best, qty, buyer, seller, self._trade_seq))
                self._trade_seq += 1
                remaining -= qty
                if qty == maker.qty:
                    queue.popleft()
                else:
                    maker.qty -= qty
            if not queue:
                del opp[best]
                opp_keys.pop()

        rested = False
        exhausted = False
        if remaining > 0:
            if order.kind == LIMIT:
                assert limit is not None
                level = own.get(limit)
                if level is None:
                    own[limit] = deque([_Resting(order.order_id, owner, remaining)])
                    key = limit if is_buy else -limit
                    bisect.insort(own_keys, key)
                else:
                    level.append(_Resting(order.order_id, owner, remaining))
                rested = True
            else:
                exhausted = True
        return SubmitResult(fills, rested, exhausted)


def submit_order(book: OrderBook, order: Order) -> SubmitResult:
    """Match `order` against `book` (mutated in place) under price-time priority."""
    return book.submit(order)
