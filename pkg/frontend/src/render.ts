/**
 * DOM painting for the trading console.
 *
 * All state lives in the ConsoleView; this module only projects it onto a
 * fixed set of elements looked up once at startup. Nothing here is stateful
 * beyond the element references, so a repaint is always safe.
 */

import {
  ConsoleView,
  OrderStatus,
  bestAsk,
  bestBid,
  clockRemaining,
  entryEnabled,
  ladderRows,
  pnl,
  spread,
  tokenPanelText,
} from "./view.js";

export interface Screen {
  phase: HTMLElement;
  clock: HTMLElement;
  token: HTMLElement;
  ladderBody: HTMLElement;
  spread: HTMLElement;
  lastTrade: HTMLElement;
  position: HTMLElement;
  cash: HTMLElement;
  pnl: HTMLElement;
  pnlMode: HTMLInputElement;
  fills: HTMLElement;
  orders: HTMLElement;
  banner: HTMLElement;
  result: HTMLElement;
  startButton: HTMLButtonElement;
  ticketForm: HTMLFormElement;
  submitButton: HTMLButtonElement;
}

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing element #${id}`);
  return el as T;
}

export function lookupScreen(): Screen {
  return {
    phase: byId("phase"),
    clock: byId("clock"),
    token: byId("token-panel"),
    ladderBody: byId("ladder-body"),
    spread: byId("spread"),
    lastTrade: byId("last-trade"),
    position: byId("position"),
    cash: byId("cash"),
    pnl: byId("pnl"),
    pnlMode: byId<HTMLInputElement>("pnl-mode"),
    fills: byId("fills"),
    orders: byId("order-log"),
    banner: byId("banner"),
    result: byId("result"),
    startButton: byId<HTMLButtonElement>("start-button"),
    ticketForm: byId<HTMLFormElement>("ticket-form"),
    submitButton: byId<HTMLButtonElement>("submit-button"),
  };
}

function money(value: number | null): string {
  return value === null ? "-" : String(value);
}

function orderLine(status: OrderStatus): string {
  if (status.status === "pending") return `${status.id}: pending`;
  if (status.status === "accepted") return `${status.id}: accepted at step ${status.step}`;
  return `${status.id}: rejected (${status.reason})`;
}

export function paint(screen: Screen, view: ConsoleView): void {
  screen.phase.textContent = view.phase;
  const remaining = clockRemaining(view);
  screen.clock.textContent =
    view.stepsTotal === null ? "-" : `${remaining} of ${view.stepsTotal} steps left`;

  screen.token.textContent = tokenPanelText(view);
  screen.token.classList.toggle("control", view.tokenText === "");

  const rows = ladderRows(view);
  screen.ladderBody.replaceChildren(
    ...rows.map((row) => {
      const tr = document.createElement("tr");
      for (const cell of [row.bidQty, row.bid, row.ask, row.askQty]) {
        const td = document.createElement("td");
        td.textContent = cell === null ? "" : String(cell);
        tr.appendChild(td);
      }
      return tr;
    }),
  );

  const bb = bestBid(view);
  const ba = bestAsk(view);
  const sp = spread(view);
  screen.spread.textContent =
    bb !== null && ba !== null && sp !== null ? `${bb} / ${ba} (spread ${sp})` : "-";
  screen.lastTrade.textContent = money(view.lastTrade);

  screen.position.textContent = String(view.position);
  screen.cash.textContent = String(view.cash);
  screen.pnl.textContent = money(pnl(view));
  screen.pnlMode.checked = view.markToMarket;
  screen.fills.textContent = String(view.fillCount);

  const lines = Object.values(view.orders).map(orderLine).reverse().slice(0, 12);
  screen.orders.replaceChildren(
    ...lines.map((line) => {
      const li = document.createElement("li");
      li.textContent = line;
      return li;
    }),
  );

  screen.banner.textContent = view.banner ?? "";
  screen.banner.hidden = view.banner === null;

  if (view.phase === "closed" && view.netProfit !== null) {
    screen.result.hidden = false;
    screen.result.textContent =
      `Session over. Net profit ${view.netProfit} at closing price ${view.closingPrice}` +
      (view.recordId !== null ? ` (record ${view.recordId}).` : ".");
  } else {
    screen.result.hidden = true;
  }

  screen.startButton.disabled = view.phase !== "lobby";
  screen.submitButton.disabled = !entryEnabled(view);
}
