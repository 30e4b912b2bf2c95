// Scripted cockpit session against a protocol-faithful fake server:
// type "fetch big", fire STOP at a fixed frame, set lesion 256. The server
// half of the equivalence story (service stream == CLI event log) is covered
// by the bridge-service test suite.
import { describe, expect, it } from "vitest";

import type { FrameMessage } from "../src/protocol.js";
import { CockpitSocket, TransportFactory } from "../src/socket.js";
import {
  ViewModel,
  applyServerMessage,
  commandSent,
  initialViewModel,
  validateUtterance,
} from "../src/state.js";

function frameAt(tick: number, overrides: Partial<FrameMessage> = {}): FrameMessage {
  return {
    type: "frame", v: 1, tick, theta0: 0.2, theta1: 0.4,
    hand: { x: 1.2, y: 0.6 }, hold: 0, pain: 0, omega: { w0: 0, w1: 0 },
    objects: [
      { id: "obj0", color: "blue", size: "big", x: 1.0, y: 0.4, held: false },
    ],
    command: null, intention: null, plan: [], attention: null,
    reports: [], imagined: null, imagined_shape: null, broca_text: null,
    ...overrides,
  };
}

describe("scripted cockpit session", () => {
  it("runs the fetch/stop/lesion script and mirrors the stream", () => {
    const sentByClient: { kind: string; payload: string; id: string }[] = [];
    let pushToClient: (msg: object) => void = () => {};
    const factory: TransportFactory = (_url, handlers) => {
      pushToClient = (msg) => handlers.onmessage(JSON.stringify(msg));
      setTimeout(() => handlers.onopen(), 0);
      return {
        send: (text) => sentByClient.push(JSON.parse(text)),
        close: () => handlers.onclose(),
      };
    };

    let vm: ViewModel = initialViewModel();
    const sock = new CockpitSocket("ws://fake", factory);
    sock.onMessage = (msg) => {
      vm = applyServerMessage(vm, msg);
    };
    sock.connect();
    pushToClient({
      type: "hello", v: 1, protocol: 1,
      lexicon: ["fetch", "big", "stop"], tick_ms: 0, tick: 0,
    });
    expect(vm.connection).toBe("open");

    // 1. type "fetch big"
    expect(validateUtterance(vm, "fetch big")).toBeNull();
    const u = sock.send("utterance", "fetch big")!;
    vm = commandSent(vm, { id: u, kind: "utterance", payload: "fetch big" });
    pushToClient({ type: "ack", v: 1, id: u, tick: 1 });
    pushToClient(frameAt(1, { intention: "fetch", attention: "big",
                              plan: ["reach", "hold", "pull", "release"] }));
    expect(vm.frame?.intention).toBe("fetch");
    expect(vm.history[0].status).toBe("acked");

    // 2. frames stream in order; STOP at frame 3
    pushToClient(frameAt(2, { command: "reach", plan: ["hold", "pull", "release"] }));
    expect(vm.frame?.tick).toBe(2);
    const s = sock.send("stop", "")!;
    vm = commandSent(vm, { id: s, kind: "stop", payload: "" });
    pushToClient({ type: "ack", v: 1, id: s, tick: 3 });
    pushToClient(frameAt(3, { command: "stop", plan: [] }));
    expect(vm.planStruck).toBe(true);
    expect(vm.frame?.command).toBe("stop");

    // 3. lesion 256 -> constant t2 text on every subsequent frame
    const l = sock.send("lesion_set", "256")!;
    vm = { ...commandSent(vm, { id: l, kind: "lesion_set", payload: "256" }), lesion: 256 };
    pushToClient({ type: "ack", v: 1, id: l, tick: 4 });
    pushToClient(frameAt(4, { broca_text: "t2" }));
    pushToClient(frameAt(5, { broca_text: "t2" }));
    expect(vm.frame?.broca_text).toBe("t2");
    expect(vm.lesion).toBe(256);

    // client sent exactly the scripted commands, in order, with fresh ids
    expect(sentByClient.map((m) => m.kind)).toEqual(
      ["utterance", "stop", "lesion_set"]);
    expect(new Set(sentByClient.map((m) => m.id)).size).toBe(3);
    // wire fidelity: the rendered frame is exactly the received frame
    expect(vm.frame?.tick).toBe(5);
  });
});
