/**
 * Console view model.
 *
 * The view is a pure function of the message sequence: `reduce` folds one
 * server message (or local client event) into a fresh view object and
 * never mutates its input, so replaying a recorded stream reproduces the
 * exact final state. All position and cash figures come from summing the
 * server's fill messages; the only client-side arithmetic on top is the
 * optional mark-to-market revaluation at the last trade price.
 */

import { validateTicket } from "./protocol.js";
import type { Level, OrderTicket, ServerMessage } from "./protocol.js";

export type Phase = "connecting" | "lobby" | "running" | "closed";

export interface OrderStatus {
  id: string;
  status: "pending" | "accepted" | "rejected";
  /** Step the order was scheduled for (accepted) or rejection reason. */
  step?: number;
  reason?: string;
}

export interface ConsoleView {
  readonly phase: Phase;
  readonly tokenId: string | null;
  /** Guidance text; empty string is the control condition's blank card. */
  readonly tokenText: string | null;
  readonly bids: Level[];
  readonly asks: Level[];
  readonly lastTrade: number | null;
  readonly step: number;
  readonly stepsTotal: number | null;
  /** Signed share position, summed from fills. */
  readonly position: number;
  /** Signed cash delta in ticks, summed from fills. */
  readonly cash: number;
  readonly fillCount: number;
  /** Mark-to-market toggle for the P&L readout; default on. */
  readonly markToMarket: boolean;
  readonly netProfit: number | null;
  readonly closingPrice: number | null;
  readonly recordId: string | null;
  readonly orders: Record<string, OrderStatus>;
  readonly banner: string | null;
}

export function initialView(): ConsoleView {
  return {
    phase: "connecting",
    tokenId: null,
    tokenText: null,
    bids: [],
    asks: [],
    lastTrade: null,
    step: 0,
    stepsTotal: null,
    position: 0,
    cash: 0,
    fillCount: 0,
    markToMarket: true,
    netProfit: null,
    closingPrice: null,
    recordId: null,
    orders: {},
    banner: null,
  };
}

/** Local, non-wire events the console itself generates. */
export type ClientEvent =
  | { kind: "started" }
  | { kind: "dropped" }
  | { kind: "reconnected" }
  | { kind: "toggle_mark_to_market" };

export function reduce(view: ConsoleView, msg: ServerMessage): ConsoleView {
  switch (msg.type) {
    case "token_artifact":
      return {
        ...view,
        phase: view.phase === "connecting" ? "lobby" : view.phase,
        tokenId: msg.token_id,
        tokenText: msg.text,
      };
    case "book_snapshot":
      return {
        ...view,
        bids: msg.bids,
        asks: msg.asks,
        lastTrade: msg.last_trade,
        step: msg.step,
      };
    case "clock_tick":
      return {
        ...view,
        phase: view.phase === "closed" ? view.phase : "running",
        step: msg.step,
        stepsTotal: msg.steps_total,
      };
    case "fill": {
      const signed = msg.side === "buy" ? msg.quantity : -msg.quantity;
      return {
        ...view,
        position: view.position + signed,
        cash: view.cash - signed * msg.price,
        fillCount: view.fillCount + 1,
      };
    }
    case "order_accepted":
      return withOrderStatus(view, msg.client_order_id, {
        status: "accepted",
        step: msg.step,
      });
    case "order_rejected":
      return withOrderStatus(view, msg.client_order_id, {
        status: "rejected",
        reason: msg.reason,
      });
    case "session_end":
      return {
        ...view,
        phase: "closed",
        netProfit: msg.net_profit,
        closingPrice: msg.closing_price,
        recordId: msg.record_id,
      };
    case "error":
      return { ...view, banner: msg.reason };
  }
}

function withOrderStatus(
  view: ConsoleView,
  id: string | null,
  patch: Partial<OrderStatus> & { status: OrderStatus["status"] },
): ConsoleView {
  if (id === null) return view;
  const existing = view.orders[id] ?? { id, status: "pending" as const };
  return { ...view, orders: { ...view.orders, [id]: { ...existing, ...patch } } };
}

export function applyClientEvent(view: ConsoleView, event: ClientEvent): ConsoleView {
  switch (event.kind) {
    case "started":
      return view.phase === "lobby" ? { ...view, phase: "running" } : view;
    case "dropped":
      return view.phase === "closed"
        ? view
        : { ...view, banner: "connection lost, retrying" };
    case "reconnected":
      return { ...view, banner: null };
    case "toggle_mark_to_market":
      return { ...view, markToMarket: !view.markToMarket };
  }
}

/** Record a locally submitted order as pending until the server answers. */
export function trackOrder(view: ConsoleView, id: string): ConsoleView {
  return { ...view, orders: { ...view.orders, [id]: { id, status: "pending" } } };
}

// -- derived readouts ----------------------------------------------------

export function bestBid(view: ConsoleView): number | null {
  return view.bids.length ? view.bids[0]![0] : null;
}

export function bestAsk(view: ConsoleView): number | null {
  return view.asks.length ? view.asks[0]![0] : null;
}

export function spread(view: ConsoleView): number | null {
  const bid = bestBid(view);
  const ask = bestAsk(view);
  return bid !== null && ask !== null ? ask - bid : null;
}

export function ladderCrossed(view: ConsoleView): boolean {
  const bid = bestBid(view);
  const ask = bestAsk(view);
  return bid !== null && ask !== null && bid >= ask;
}

/**
 * Running P&L: realized cash plus, when the mark-to-market toggle is on
 * and a trade price exists, the open position revalued at the last trade.
 * After session_end the server's net profit is authoritative.
 */
export function pnl(view: ConsoleView): number {
  if (view.netProfit !== null) return view.netProfit;
  if (view.markToMarket && view.lastTrade !== null) {
    return view.cash + view.position * view.lastTrade;
  }
  return view.cash;
}

export function clockRemaining(view: ConsoleView): number | null {
  if (view.stepsTotal === null) return null;
  return Math.max(0, view.stepsTotal - (view.step + 1));
}

/** Ticket entry is open only while the session clock is running. */
export function entryEnabled(view: ConsoleView): boolean {
  return view.phase === "running";
}

export interface LadderRow {
  bidQty: number | null;
  bid: number | null;
  ask: number | null;
  askQty: number | null;
}

/**
 * The two book sides aligned into display rows, best level on top. The
 * ladder is rendered only from an uncrossed book; a crossed snapshot
 * would be a server protocol violation and renders as an empty ladder
 * rather than a misleading one.
 */
export function ladderRows(view: ConsoleView, depth = 5): LadderRow[] {
  if (ladderCrossed(view)) return [];
  const rows: LadderRow[] = [];
  for (let i = 0; i < depth; i++) {
    const bid = view.bids[i];
    const ask = view.asks[i];
    if (!bid && !ask) continue;
    rows.push({
      bidQty: bid ? bid[1] : null,
      bid: bid ? bid[0] : null,
      ask: ask ? ask[0] : null,
      askQty: ask ? ask[1] : null,
    });
  }
  return rows;
}

/** Text for the token panel, including the control condition's placeholder. */
export function tokenPanelText(view: ConsoleView): string {
  if (view.tokenText === null) return "waiting for the session artifact...";
  if (view.tokenText === "") return "No guidance was provided for this session.";
  return view.tokenText;
}

/**
 * Full local gate for a ticket: session state first, then the field rules
 * mirrored from the server. Returns a refusal reason or null to send.
 */
export function gateTicket(view: ConsoleView, ticket: OrderTicket): string | null {
  if (!entryEnabled(view)) {
    return view.phase === "closed" ? "session is over" : "session has not started";
  }
  return validateTicket(ticket);
}
