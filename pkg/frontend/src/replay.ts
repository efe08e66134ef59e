/**
 * Scripted replay driver: feed a recorded order log into a live session
 * and return the finalized outcome.
 *
 * Orders are queued with their original step tags before the clock
 * starts, then the session runs in fast-forward. Because the server's
 * matching is deterministic in (seed, order schedule), the resulting net
 * profit equals the simulated run that produced the log.
 */

import { readFile } from "node:fs/promises";

import { nodeSocketFactory } from "./nodeSocket.js";
import type { OrderKind, Side } from "./protocol.js";
import { SessionClient, createSession, streamUrl } from "./session.js";
import type { SocketFactory } from "./session.js";

export interface RecordedOrder {
  step: number;
  side: Side;
  kind: OrderKind;
  quantity: number;
  price?: number | null;
}

export interface ReplayOutcome {
  sessionId: string;
  recordId: string;
  netProfit: number;
  closingPrice: number;
  fillCount: number;
  accepted: number;
}

export async function replayOrderLog(
  server: string,
  tokenId: string,
  seed: number,
  orders: RecordedOrder[],
  factory: SocketFactory = nodeSocketFactory,
): Promise<ReplayOutcome> {
  const info = await createSession(server, {
    token_id: tokenId,
    seed,
    fast_forward: true,
  });
  const client = new SessionClient(factory);
  try {
    await client.connect(streamUrl(server, info.session_id));
    await client.waitFor((v) => v.tokenText !== null);

    const ids = orders.map((order) =>
      client.schedule(
        {
          side: order.side,
          kind: order.kind,
          quantity: order.quantity,
          ...(order.price === null || order.price === undefined
            ? {}
            : { price: order.price }),
        },
        order.step,
      ),
    );
    await client.waitFor((v) =>
      ids.every((id) => v.orders[id]?.status !== "pending"),
    );
    const rejected = ids.filter((id) => client.view.orders[id]?.status === "rejected");
    if (rejected.length > 0) {
      const reason = client.view.orders[rejected[0]!]?.reason;
      throw new Error(`${rejected.length} replayed orders rejected: ${reason}`);
    }

    client.start();
    const final = await client.waitFor((v) => v.phase === "closed", 60_000);
    return {
      sessionId: info.session_id,
      recordId: final.recordId!,
      netProfit: final.netProfit!,
      closingPrice: final.closingPrice!,
      fillCount: final.fillCount,
      accepted: ids.length,
    };
  } finally {
    client.close();
  }
}

interface LogFile {
  token_id: string;
  seed: number;
  orders: RecordedOrder[];
  expected_net_profit?: number;
}

export async function replayFromFile(
  server: string,
  path: string,
): Promise<ReplayOutcome & { expected?: number }> {
  const log = JSON.parse(await readFile(path, "utf-8")) as LogFile;
  const outcome = await replayOrderLog(server, log.token_id, log.seed, log.orders);
  return { ...outcome, expected: log.expected_net_profit };
}

const invokedDirectly =
  typeof process !== "undefined" &&
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");

if (invokedDirectly) {
  const [server, path] = process.argv.slice(2);
  if (!server || !path) {
    console.error("usage: node replay.js <server-url> <order-log.json>");
    process.exit(2);
  }
  replayFromFile(server, path)
    .then((outcome) => {
      console.log(JSON.stringify(outcome, null, 2));
      if (outcome.expected !== undefined && outcome.expected !== outcome.netProfit) {
        console.error(
          `net profit ${outcome.netProfit} differs from expected ${outcome.expected}`,
        );
        process.exit(1);
      }
    })
    .catch((err) => {
      console.error(String(err));
      process.exit(1);
    });
}
