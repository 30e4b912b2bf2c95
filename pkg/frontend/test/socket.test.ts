import { describe, expect, it, vi } from "vitest";

import { CockpitSocket, Transport, TransportFactory } from "../src/socket.js";

interface FakeServer {
  sent: string[];
  open: () => void;
  push: (msg: object) => void;
  close: () => void;
}

function fakeFactory(): { factory: TransportFactory; servers: FakeServer[] } {
  const servers: FakeServer[] = [];
  const factory: TransportFactory = (_url, handlers) => {
    const server: FakeServer = {
      sent: [],
      open: () => handlers.onopen(),
      push: (msg) => handlers.onmessage(JSON.stringify(msg)),
      close: () => handlers.onclose(),
    };
    servers.push(server);
    const transport: Transport = {
      send: (t) => server.sent.push(t),
      close: () => handlers.onclose(),
    };
    return transport;
  };
  return { factory, servers };
}

describe("CockpitSocket", () => {
  it("sends commands with fresh ids", () => {
    const { factory, servers } = fakeFactory();
    const sock = new CockpitSocket("ws://x", factory);
    sock.connect();
    servers[0].open();
    const id1 = sock.send("utterance", "fetch big");
    servers[0].push({ type: "ack", v: 1, id: id1, tick: 1 });
    const id2 = sock.send("utterance", "stop");
    expect(id1).not.toBeNull();
    expect(id2).not.toBeNull();
    expect(id1).not.toBe(id2);
    const sent = servers[0].sent.map((s) => JSON.parse(s));
    expect(sent[0].kind).toBe("utterance");
    expect(sent[1].id).toBe(id2);
  });

  it("blocks duplicate submission until ack", () => {
    const { factory, servers } = fakeFactory();
    const sock = new CockpitSocket("ws://x", factory);
    sock.connect();
    servers[0].open();
    const id = sock.send("utterance", "fetch big");
    expect(sock.send("utterance", "fetch big")).toBeNull();
    servers[0].push({ type: "ack", v: 1, id, tick: 2 });
    expect(sock.send("utterance", "fetch big")).not.toBeNull();
  });

  it("never queues stop behind an in-flight command", () => {
    const { factory, servers } = fakeFactory();
    const sock = new CockpitSocket("ws://x", factory);
    sock.connect();
    servers[0].open();
    sock.send("utterance", "fetch big");
    const stop1 = sock.send("stop", "");
    const stop2 = sock.send("stop", "");
    expect(stop1).not.toBeNull();
    expect(stop2).not.toBeNull();
  });

  it("errors clear the in-flight slot", () => {
    const { factory, servers } = fakeFactory();
    const sock = new CockpitSocket("ws://x", factory);
    sock.connect();
    servers[0].open();
    const id = sock.send("utterance", "frobnicate");
    servers[0].push({ type: "error", v: 1, id, error: "UnknownWord", detail: "" });
    expect(sock.inFlightCount()).toBe(0);
  });

  it("reconnects after close with backoff", () => {
    vi.useFakeTimers();
    const { factory, servers } = fakeFactory();
    const sock = new CockpitSocket("ws://x", factory);
    const states: string[] = [];
    sock.onConnectionChange = (s) => states.push(s);
    sock.connect();
    servers[0].open();
    servers[0].close();
    vi.advanceTimersByTime(600);
    expect(servers.length).toBe(2);
    expect(states).toEqual(["connecting", "open", "closed", "connecting"]);
    vi.useRealTimers();
  });

  it("does not reconnect after a user close", () => {
    vi.useFakeTimers();
    const { factory, servers } = fakeFactory();
    const sock = new CockpitSocket("ws://x", factory);
    sock.connect();
    servers[0].open();
    sock.close();
    vi.advanceTimersByTime(10_000);
    expect(servers.length).toBe(1);
    vi.useRealTimers();
  });

  it("parses incoming frames and routes them to onMessage", () => {
    const { factory, servers } = fakeFactory();
    const sock = new CockpitSocket("ws://x", factory);
    const seen: string[] = [];
    sock.onMessage = (m) => seen.push(m.type);
    sock.connect();
    servers[0].open();
    servers[0].push({ type: "hello", v: 1, protocol: 1, lexicon: [], tick_ms: 0, tick: 0 });
    servers[0].push({ type: "event", v: 1, event: "paused", tick: 1 });
    expect(seen).toEqual(["hello", "event"]);
  });
});
