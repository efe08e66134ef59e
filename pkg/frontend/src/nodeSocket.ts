/** MessageSocket adapter over the `ws` package, for node-side drivers. */

import WebSocket from "ws";

import type { MessageSocket } from "./session.js";

export function nodeSocketFactory(url: string): MessageSocket {
  const ws = new WebSocket(url);
  const socket: MessageSocket = {
    send: (text) => ws.send(text),
    close: () => ws.close(),
    onopen: null,
    onmessage: null,
    onclose: null,
  };
  ws.on("open", () => socket.onopen?.());
  ws.on("message", (data) => socket.onmessage?.(data.toString()));
  ws.on("close", () => socket.onclose?.());
  ws.on("error", () => {
    /* surfaced through the close handler */
  });
  return socket;
}
