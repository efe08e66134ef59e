/**
 * Wire protocol for tokenlab session servers.
 *
 * The stream carries JSON documents tagged by `type`; unknown fields are
 * ignored on read so the console stays compatible with additive server
 * changes. Message version is `v: 1`.
 */

export const PROTOCOL_VERSION = 1;

export type Side = "buy" | "sell";
export type OrderKind = "limit" | "market";

/** [price, quantity] ladder level, best level first. */
export type Level = [number, number];

export interface TokenArtifactMessage {
  v: number;
  type: "token_artifact";
  session_id: string;
  token_id: string;
  text: string;
}

export interface BookSnapshotMessage {
  v: number;
  type: "book_snapshot";
  step: number;
  bids: Level[];
  asks: Level[];
  last_trade: number | null;
}

export interface ClockTickMessage {
  v: number;
  type: "clock_tick";
  step: number;
  steps_total: number;
}

export interface OrderAcceptedMessage {
  v: number;
  type: "order_accepted";
  client_order_id: string | null;
  step: number;
}

export interface OrderRejectedMessage {
  v: number;
  type: "order_rejected";
  client_order_id: string | null;
  reason: string;
}

export interface FillMessage {
  v: number;
  type: "fill";
  step: number;
  side: Side;
  price: number;
  quantity: number;
}

export interface SessionEndMessage {
  v: number;
  type: "session_end";
  net_profit: number;
  closing_price: number;
  record_id: string;
}

export interface ErrorMessage {
  v: number;
  type: "error";
  reason: string;
}

export type ServerMessage =
  | TokenArtifactMessage
  | BookSnapshotMessage
  | ClockTickMessage
  | OrderAcceptedMessage
  | OrderRejectedMessage
  | FillMessage
  | SessionEndMessage
  | ErrorMessage;

const MESSAGE_TYPES = new Set([
  "token_artifact",
  "book_snapshot",
  "clock_tick",
  "order_accepted",
  "order_rejected",
  "fill",
  "session_end",
  "error",
]);

/**
 * Parse one wire document. Returns null for frames the console does not
 * understand rather than throwing: an unknown message type must never
 * take the session down.
 */
export function parseServerMessage(text: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const tag = (data as { type?: unknown }).type;
  if (typeof tag !== "string" || !MESSAGE_TYPES.has(tag)) return null;
  return data as ServerMessage;
}

/** Client-side order ticket, mirroring the server's order message body. */
export interface OrderTicket {
  side: Side;
  kind: OrderKind;
  quantity: number;
  price?: number;
}

/**
 * Local ticket validation, mirroring the server's rules so obviously bad
 * orders are blocked before they are sent. Returns a human-readable
 * reason, or null when the ticket may go out.
 */
export function validateTicket(ticket: OrderTicket): string | null {
  if (ticket.side !== "buy" && ticket.side !== "sell") {
    return "side must be buy or sell";
  }
  if (ticket.kind !== "limit" && ticket.kind !== "market") {
    return "kind must be limit or market";
  }
  if (!Number.isInteger(ticket.quantity) || ticket.quantity <= 0) {
    return "quantity must be a positive integer";
  }
  if (ticket.kind === "limit") {
    if (ticket.price === undefined || !Number.isInteger(ticket.price) || ticket.price <= 0) {
      return "limit order needs a positive integer price";
    }
  }
  return null;
}

/** Serialize an order ticket to its wire form. */
export function orderMessage(
  ticket: OrderTicket,
  clientOrderId: string,
  step?: number,
): string {
  const body: Record<string, unknown> = {
    type: "order",
    client_order_id: clientOrderId,
    side: ticket.side,
    kind: ticket.kind,
    quantity: ticket.quantity,
  };
  if (ticket.kind === "limit") body.price = ticket.price;
  if (step !== undefined) body.step = step;
  return JSON.stringify(body);
}

export function startMessage(): string {
  return JSON.stringify({ type: "start" });
}
