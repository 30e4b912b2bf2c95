// Cockpit wiring: socket -> view model -> panels.

import { drawArena, decodeImagined } from "./arena.js";
import { LESION_STOPS, snapLesion } from "./lesion.js";
import type { ServerMessage } from "./protocol.js";
import { CockpitSocket, browserTransport } from "./socket.js";
import {
  ViewModel,
  applyServerMessage,
  commandSent,
  connectionChanged,
  initialViewModel,
  validateUtterance,
} from "./state.js";

const ARENA_SIZE = 480;
const IMAGERY_SIZE = 64;

let vm: ViewModel = initialViewModel();

const $ = (id: string) => document.getElementById(id) as HTMLElement;

const arena = $("arena") as HTMLCanvasElement;
const imagery = $("imagery") as HTMLCanvasElement;
const input = $("command-input") as HTMLInputElement;
const sendBtn = $("send") as HTMLButtonElement;
const stopBtn = $("stop") as HTMLButtonElement;
const lesionSlider = $("lesion") as HTMLInputElement;

const proto = location.protocol === "https:" ? "wss:" : "ws:";
const socket = new CockpitSocket(`${proto}//${location.host}/ws`, browserTransport());

socket.onConnectionChange = (state) => {
  vm = connectionChanged(vm, state);
  render();
};

socket.onMessage = (msg: ServerMessage) => {
  vm = applyServerMessage(vm, msg);
  render();
};

function sendUtterance(): void {
  const text = input.value;
  const problem = validateUtterance(vm, text);
  if (problem !== null) {
    vm = { ...vm, inlineError: problem };
    render();
    return;
  }
  const id = socket.send("utterance", text.trim());
  if (id !== null) {
    vm = commandSent(vm, { id, kind: "utterance", payload: text.trim() });
    input.value = "";
  }
  render();
}

sendBtn.addEventListener("click", sendUtterance);
input.addEventListener("keydown", (ev) => {
  if (ev.key === "Enter") sendUtterance();
});

stopBtn.addEventListener("click", () => {
  const id = socket.send("stop", "");
  if (id !== null) vm = commandSent(vm, { id, kind: "stop", payload: "" });
  render();
});

lesionSlider.addEventListener("change", () => {
  const snapped = snapLesion(Number(lesionSlider.value));
  lesionSlider.value = String(snapped);
  const id = socket.send("lesion_set", String(snapped));
  if (id !== null) {
    vm = { ...commandSent(vm, { id, kind: "lesion_set", payload: String(snapped) }), lesion: snapped };
  }
  render();
});

for (const kind of ["pause", "resume"] as const) {
  $(kind).addEventListener("click", () => {
    const id = socket.send(kind, "");
    if (id !== null) vm = commandSent(vm, { id, kind, payload: "" });
    render();
  });
}

function render(): void {
  $("connection").textContent = vm.connection;
  $("connection").className = `pill ${vm.connection}`;
  $("overlay").style.display = vm.connection === "open" ? "none" : "flex";
  $("inline-error").textContent = vm.inlineError ?? "";

  const ctx = arena.getContext("2d");
  if (ctx !== null && vm.frame !== null) {
    drawArena(ctx, vm.frame, ARENA_SIZE);
  }

  if (vm.frame !== null) {
    const f = vm.frame;
    $("tick").textContent = String(f.tick);
    $("attention").textContent = f.attention ?? "-";
    $("intention").textContent = f.intention ?? "-";
    $("command").textContent = f.command ?? "-";
    const plan = $("plan");
    plan.innerHTML = "";
    for (const slot of f.plan) {
      const chip = document.createElement("span");
      chip.className = vm.planStruck && f.command === "stop" ? "chip struck" : "chip";
      chip.textContent = slot;
      plan.appendChild(chip);
    }
    $("pain").textContent = f.pain > 0 ? "PAIN" : "ok";
    $("pain").className = f.pain > 0 ? "pill pain" : "pill";
    $("broca-text").textContent = f.broca_text ?? "";
    $("reports").textContent = vm.reports.slice(-4).join(" | ");
  }

  const history = $("history");
  history.innerHTML = "";
  for (const entry of vm.history.slice(-12)) {
    const li = document.createElement("li");
    li.textContent = `${entry.kind} ${entry.payload} [${entry.status}` +
      (entry.tick !== null ? ` @${entry.tick}` : "") + `] ${entry.detail}`;
    history.appendChild(li);
  }

  if (vm.imagery !== null) {
    const ictx = imagery.getContext("2d");
    if (ictx !== null) {
      const data = new ImageData(
        decodeImagined(vm.imagery, IMAGERY_SIZE, IMAGERY_SIZE),
        IMAGERY_SIZE,
        IMAGERY_SIZE,
      );
      ictx.putImageData(data, 0, 0);
    }
  }

  $("lesion-value").textContent = String(vm.lesion);
}

lesionSlider.min = "0";
lesionSlider.max = "256";
lesionSlider.step = "1";
lesionSlider.value = "0";
$("lesion-stops").textContent = LESION_STOPS.join(" / ");

socket.connect();
render();
