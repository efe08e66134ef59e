/**
 * Browser entry point.
 *
 * Reads the session parameters from the query string, creates a live session
 * on the server, and wires the socket stream into the view reducer. Repaints
 * are batched through requestAnimationFrame so a burst of fills costs one
 * layout pass.
 */

import { browserSocketFactory } from "./browserSocket.js";
import { OrderKind, OrderTicket, Side } from "./protocol.js";
import { SessionClient, createSession, streamUrl } from "./session.js";
import { lookupScreen, paint } from "./render.js";

function intParam(params: URLSearchParams, name: string): number | undefined {
  const raw = params.get(name);
  if (raw === null) return undefined;
  const value = Number(raw);
  return Number.isInteger(value) ? value : undefined;
}

async function boot(): Promise<void> {
  const screen = lookupScreen();
  const params = new URLSearchParams(window.location.search);
  const server = params.get("server") ?? window.location.origin;

  const client = new SessionClient(browserSocketFactory);

  let frame = 0;
  const repaint = () => {
    if (frame !== 0) return;
    frame = requestAnimationFrame(() => {
      frame = 0;
      paint(screen, client.view);
    });
  };
  client.onUpdate(repaint);

  screen.startButton.addEventListener("click", () => {
    client.start();
  });

  screen.pnlMode.addEventListener("change", () => {
    client.toggleMarkToMarket();
  });

  screen.ticketForm.addEventListener("submit", (event) => {
    event.preventDefault();
    const data = new FormData(screen.ticketForm);
    const kind = data.get("kind") as OrderKind;
    const quantity = Number(data.get("quantity"));
    const priceRaw = String(data.get("price") ?? "").trim();
    const ticket: OrderTicket = {
      side: data.get("side") as Side,
      kind,
      quantity,
      ...(kind === "limit" ? { price: Number(priceRaw) } : {}),
    };
    const submitted = client.submit(ticket);
    if ("refused" in submitted) {
      screen.banner.hidden = false;
      screen.banner.textContent = submitted.refused;
    }
    repaint();
  });

  const seed = intParam(params, "seed");
  const info = await createSession(server, {
    token_id: params.get("token") ?? "T1",
    fast_forward: params.get("realtime") === null,
    ...(seed !== undefined ? { seed } : {}),
  });
  await client.connect(streamUrl(server, info.session_id));
  repaint();
}

boot().catch((err: unknown) => {
  const banner = document.getElementById("banner");
  if (banner !== null) {
    banner.hidden = false;
    banner.textContent = `failed to start: ${err instanceof Error ? err.message : String(err)}`;
  }
});
