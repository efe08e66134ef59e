/**
 * Session lifecycle and stream wiring, transport-agnostic.
 *
 * The client owns a ConsoleView and folds every incoming frame through
 * the pure reducer; rendering and scripted drivers subscribe to updates.
 * Sockets are injected through a small factory interface so the same
 * client runs on the browser WebSocket and on node's `ws`.
 */

import {
  orderMessage,
  parseServerMessage,
  startMessage,
} from "./protocol.js";
import type { OrderTicket, ServerMessage } from "./protocol.js";
import {
  applyClientEvent,
  gateTicket,
  initialView,
  reduce,
  trackOrder,
} from "./view.js";
import type { ConsoleView } from "./view.js";

export interface MessageSocket {
  send(text: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((text: string) => void) | null;
  onclose: (() => void) | null;
}

export type SocketFactory = (url: string) => MessageSocket;

export interface SessionInfo {
  session_id: string;
  token_id: string;
  state: string;
  seed: number;
  steps: number;
}

export interface CreateSessionRequest {
  token_id: string;
  seed?: number;
  fast_forward?: boolean;
  tick_seconds?: number;
}

export async function createSession(
  server: string,
  body: CreateSessionRequest,
): Promise<SessionInfo> {
  const resp = await fetch(`${server.replace(/\/$/, "")}/sessions`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  const data = (await resp.json()) as SessionInfo & { error?: string };
  if (resp.status !== 201) {
    throw new Error(data.error ?? `session create failed with ${resp.status}`);
  }
  return data;
}

/** The stream endpoint for a session, with the ws(s) scheme. */
export function streamUrl(server: string, sessionId: string): string {
  const base = server.replace(/\/$/, "").replace(/^http/, "ws");
  return `${base}/sessions/${sessionId}/stream`;
}

export type UpdateListener = (view: ConsoleView, msg: ServerMessage | null) => void;

export interface SessionClientOptions {
  reconnectDelayMs?: number;
  maxReconnects?: number;
}

export class SessionClient {
  view: ConsoleView = initialView();

  private socket: MessageSocket | null = null;
  private listeners: UpdateListener[] = [];
  private seq = 0;
  private url: string | null = null;
  private closing = false;
  private reconnects = 0;
  private readonly reconnectDelayMs: number;
  private readonly maxReconnects: number;

  constructor(
    private readonly factory: SocketFactory,
    options: SessionClientOptions = {},
  ) {
    this.reconnectDelayMs = options.reconnectDelayMs ?? 500;
    this.maxReconnects = options.maxReconnects ?? 5;
  }

  connect(url: string): Promise<void> {
    this.url = url;
    this.closing = false;
    return this.open();
  }

  private open(): Promise<void> {
    const socket = this.factory(this.url!);
    this.socket = socket;
    return new Promise((resolve) => {
      socket.onopen = () => {
        if (this.reconnects > 0) {
          this.update(applyClientEvent(this.view, { kind: "reconnected" }), null);
        }
        resolve();
      };
      socket.onmessage = (text) => {
        const msg = parseServerMessage(text);
        if (msg) this.update(reduce(this.view, msg), msg);
      };
      socket.onclose = () => this.handleClose();
    });
  }

  private handleClose(): void {
    if (this.closing || this.view.phase === "closed") return;
    this.update(applyClientEvent(this.view, { kind: "dropped" }), null);
    if (this.reconnects >= this.maxReconnects) return;
    this.reconnects += 1;
    setTimeout(() => {
      if (!this.closing) void this.open();
    }, this.reconnectDelayMs);
  }

  onUpdate(listener: UpdateListener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(view: ConsoleView, msg: ServerMessage | null): void {
    this.view = view;
    for (const listener of [...this.listeners]) listener(view, msg);
  }

  private nextId(): string {
    this.seq += 1;
    return `c${this.seq}`;
  }

  /**
   * The human ticket path: gated on session state and local field rules.
   * Returns the client order id, or the refusal reason without sending.
   */
  submit(ticket: OrderTicket): { id: string } | { refused: string } {
    const refusal = gateTicket(this.view, ticket);
    if (refusal !== null) return { refused: refusal };
    const id = this.nextId();
    this.socket!.send(orderMessage(ticket, id));
    this.update(trackOrder(this.view, id), null);
    return { id };
  }

  /**
   * The scripted path: a step-tagged order queued before or during the
   * run, used by replay drivers. Field rules still apply; the session
   * state gate does not (the server schedules lobby orders for their
   * tagged step).
   */
  schedule(ticket: OrderTicket, step: number): string {
    const id = this.nextId();
    this.socket!.send(orderMessage(ticket, id, step));
    this.update(trackOrder(this.view, id), null);
    return id;
  }

  start(): void {
    this.socket!.send(startMessage());
    this.update(applyClientEvent(this.view, { kind: "started" }), null);
  }

  toggleMarkToMarket(): void {
    this.update(applyClientEvent(this.view, { kind: "toggle_mark_to_market" }), null);
  }

  close(): void {
    this.closing = true;
    this.socket?.close();
  }

  /** Resolve when the view satisfies a predicate (checked on every update). */
  waitFor(predicate: (view: ConsoleView) => boolean, timeoutMs = 10_000): Promise<ConsoleView> {
    if (predicate(this.view)) return Promise.resolve(this.view);
    return new Promise((resolve, reject) => {
      const timer = setTimeout(() => {
        unsubscribe();
        reject(new Error("timed out waiting for view state"));
      }, timeoutMs);
      const unsubscribe = this.onUpdate((view) => {
        if (predicate(view)) {
          clearTimeout(timer);
          unsubscribe();
          resolve(view);
        }
      });
    });
  }
}
