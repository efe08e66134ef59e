/** MessageSocket adapter over the browser's native WebSocket. */

import type { MessageSocket } from "./session.js";

export function browserSocketFactory(url: string): MessageSocket {
  const ws = new WebSocket(url);
  const socket: MessageSocket = {
    send: (text) => ws.send(text),
    close: () => ws.close(),
    onopen: null,
    onmessage: null,
    onclose: null,
  };
  ws.onopen = () => socket.onopen?.();
  ws.onmessage = (event) => socket.onmessage?.(String(event.data));
  ws.onclose = () => socket.onclose?.();
  return socket;
}
