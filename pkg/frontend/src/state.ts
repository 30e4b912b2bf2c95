// Cockpit view model: a pure reducer over wire messages and UI actions.
// Everything rendered is traceable to a received message; nothing is predicted.

import type { FrameMessage, ServerMessage } from "./protocol.js";

export type ConnectionState = "connecting" | "open" | "closed";

export interface PendingCommand {
  id: string;
  kind: string;
  payload: string;
}

export interface HistoryEntry {
  id: string;
  kind: string;
  payload: string;
  status: "pending" | "acked" | "error";
  tick: number | null;
  detail: string;
}

export interface ViewModel {
  connection: ConnectionState;
  lexicon: string[];
  frame: FrameMessage | null;
  history: HistoryEntry[];
  pending: PendingCommand[];
  lesion: number;
  inlineError: string | null;
  imagery: string | null; // base64 RGB payload of the latest imagined scene
  planStruck: boolean; // true once a stop truncated the plan
  reports: string[];
}

export function initialViewModel(): ViewModel {
  return {
    connection: "connecting",
    lexicon: [],
    frame: null,
    history: [],
    pending: [],
    lesion: 0,
    inlineError: null,
    imagery: null,
    planStruck: false,
    reports: [],
  };
}

export function hasInFlight(vm: ViewModel, kind: string): boolean {
  return vm.pending.some((p) => p.kind === kind);
}

export function commandSent(vm: ViewModel, cmd: PendingCommand): ViewModel {
  return {
    ...vm,
    pending: [...vm.pending, cmd],
    inlineError: null,
    history: [
      ...vm.history,
      { id: cmd.id, kind: cmd.kind, payload: cmd.payload, status: "pending", tick: null, detail: "" },
    ],
  };
}

export function applyServerMessage(vm: ViewModel, msg: ServerMessage): ViewModel {
  switch (msg.type) {
    case "hello":
      return { ...vm, connection: "open", lexicon: msg.lexicon };
    case "frame": {
      const imagery = msg.imagined !== null ? msg.imagined : vm.imagery;
      return {
        ...vm,
        frame: msg,
        imagery,
        reports: msg.reports.length ? [...vm.reports, ...msg.reports] : vm.reports,
      };
    }
    case "ack": {
      const pending = vm.pending.filter((p) => p.id !== msg.id);
      const wasStop = vm.pending.some((p) => p.id === msg.id && p.kind === "stop");
      return {
        ...vm,
        pending,
        planStruck: vm.planStruck || wasStop,
        history: vm.history.map((h) =>
          h.id === msg.id ? { ...h, status: "acked", tick: msg.tick } : h,
        ),
      };
    }
    case "error": {
      const pending = vm.pending.filter((p) => p.id !== msg.id);
      return {
        ...vm,
        pending,
        inlineError: `${msg.error}: ${msg.detail}`,
        history: vm.history.map((h) =>
          h.id === msg.id ? { ...h, status: "error", detail: msg.error } : h,
        ),
      };
    }
    case "event":
      return vm;
  }
}

export function connectionChanged(vm: ViewModel, state: ConnectionState): ViewModel {
  return { ...vm, connection: state, pending: state === "open" ? vm.pending : [] };
}

export function validateUtterance(vm: ViewModel, text: string): string | null {
  const words = text.trim().split(/\s+/).filter((w) => w.length > 0);
  if (words.length === 0) return "empty utterance";
  const unknown = words.filter((w) => !vm.lexicon.includes(w));
  if (unknown.length > 0) return `unknown words: ${unknown.join(", ")}`;
  return null;
}
