// Wire protocol shared with the bridge service (text frames, JSON).

export const PROTOCOL_VERSION = 1;

export interface ObjectOnWire {
  id: string;
  color: string;
  size: string;
  x: number;
  y: number;
  held: boolean;
}

export interface FrameMessage {
  type: "frame";
  v: number;
  tick: number;
  theta0: number;
  theta1: number;
  hand: { x: number; y: number };
  hold: number;
  pain: number;
  omega: { w0: number; w1: number };
  objects: ObjectOnWire[];
  command: string | null;
  intention: string | null;
  plan: string[];
  attention: string | null;
  reports: string[];
  imagined: string | null;
  imagined_shape: [number, number, number] | null;
  broca_text: string | null;
}

export interface HelloMessage {
  type: "hello";
  v: number;
  protocol: number;
  lexicon: string[];
  tick_ms: number;
  tick: number;
}

export interface AckMessage {
  type: "ack";
  v: number;
  id: string | null;
  tick: number;
}

export interface ErrorMessage {
  type: "error";
  v: number;
  id: string | null;
  error: string;
  detail: string;
}

export interface EventMessage {
  type: "event";
  v: number;
  event: string;
  tick: number;
}

export type ServerMessage =
  | FrameMessage
  | HelloMessage
  | AckMessage
  | ErrorMessage
  | EventMessage;

export type CommandKind =
  | "utterance"
  | "stop"
  | "lesion_set"
  | "scenario_load"
  | "pause"
  | "resume"
  | "speed";

export interface CommandMessage {
  kind: CommandKind;
  payload: string;
  id: string;
}

export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as Record<string, unknown>;
  if (typeof msg.type !== "string") return null;
  switch (msg.type) {
    case "frame":
      if (typeof msg.tick !== "number" || typeof msg.theta0 !== "number") {
        return null;
      }
      return msg as unknown as FrameMessage;
    case "hello":
      if (!Array.isArray(msg.lexicon)) return null;
      return msg as unknown as HelloMessage;
    case "ack":
      if (typeof msg.tick !== "number") return null;
      return msg as unknown as AckMessage;
    case "error":
      if (typeof msg.error !== "string") return null;
      return msg as unknown as ErrorMessage;
    case "event":
      if (typeof msg.event !== "string") return null;
      return msg as unknown as EventMessage;
    default:
      return null;
  }
}
