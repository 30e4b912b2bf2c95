// WebSocket client: fresh command ids, one in-flight command per kind
// (stop always goes through), reconnect with backoff.

import type { CommandKind, CommandMessage, ServerMessage } from "./protocol.js";
import { parseServerMessage } from "./protocol.js";

export interface Transport {
  send(text: string): void;
  close(): void;
}

export interface TransportFactory {
  (url: string, handlers: {
    onopen: () => void;
    onmessage: (text: string) => void;
    onclose: () => void;
  }): Transport;
}

export function browserTransport(): TransportFactory {
  return (url, handlers) => {
    const ws = new WebSocket(url);
    ws.onopen = () => handlers.onopen();
    ws.onmessage = (ev) => handlers.onmessage(String(ev.data));
    ws.onclose = () => handlers.onclose();
    return { send: (t) => ws.send(t), close: () => ws.close() };
  };
}

export class CockpitSocket {
  private transport: Transport | null = null;
  private nextId = 1;
  private inFlight = new Map<string, CommandKind>();
  private reconnectDelayMs = 500;
  private closedByUser = false;

  onMessage: (msg: ServerMessage) => void = () => {};
  onConnectionChange: (state: "connecting" | "open" | "closed") => void = () => {};

  constructor(
    private url: string,
    private factory: TransportFactory,
    private maxReconnectDelayMs = 8000,
  ) {}

  connect(): void {
    this.closedByUser = false;
    this.onConnectionChange("connecting");
    this.transport = this.factory(this.url, {
      onopen: () => {
        this.reconnectDelayMs = 500;
        this.onConnectionChange("open");
      },
      onmessage: (text) => {
        const msg = parseServerMessage(text);
        if (msg !== null) {
          if ((msg.type === "ack" || msg.type === "error") && msg.id !== null) {
            this.inFlight.delete(msg.id);
          }
          this.onMessage(msg);
        }
      },
      onclose: () => {
        this.inFlight.clear();
        this.onConnectionChange("closed");
        if (!this.closedByUser) {
          setTimeout(() => this.connect(), this.reconnectDelayMs);
          this.reconnectDelayMs = Math.min(
            this.reconnectDelayMs * 2,
            this.maxReconnectDelayMs,
          );
        }
      },
    });
  }

  close(): void {
    this.closedByUser = true;
    this.transport?.close();
  }

  /** Returns the command id, or null when a same-kind command is in flight.
      Stop is never blocked. */
  send(kind: CommandKind, payload: string): string | null {
    if (this.transport === null) return null;
    if (kind !== "stop") {
      for (const k of this.inFlight.values()) {
        if (k === kind) return null;
      }
    }
    const id = `c${this.nextId++}`;
    const msg: CommandMessage = { kind, payload, id };
    this.inFlight.set(id, kind);
    this.transport.send(JSON.stringify(msg));
    return id;
  }

  inFlightCount(): number {
    return this.inFlight.size;
  }
}
