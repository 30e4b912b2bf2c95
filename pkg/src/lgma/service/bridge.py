"""WebSocket bridge: one shared session, command queue applied at tick boundaries,
frame fan-out with bounded per-client backlog."""
from __future__ import annotations

import asyncio
import base64
import json
from pathlib import Path

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from lgma import config
from lgma.codecs import grammar
from lgma.codecs.lexicon import Utterance
from lgma.config import named_rng
from lgma.cortex.lesion import LesionMask
from lgma.orchestrator.resources import Resources
from lgma.orchestrator.session import FrameData, Session
from lgma.orchestrator.tasks import make_task
from lgma.world.scenario import parse_scenario

PROTOCOL_VERSION = 1
MAX_BACKLOG = 256
VALID_LESIONS = (0, 25, 64, 128, 192, 256)

FALLBACK_PAGE = """<!doctype html>
<html><head><title>lgma bridge</title></head>
<body><h1>lgma bridge service</h1>
<p>No cockpit build found. Connect a WebSocket client to <code>/ws</code>.</p>
</body></html>"""


class InvalidLesionCount(ValueError):
    pass


class UnknownWord(KeyError):
    pass


def _encode_image(img: np.ndarray | None) -> str | None:
    if img is None:
        return None
    raw = (np.clip(img, 0.0, 1.0) * 255).astype(np.uint8).tobytes()
    return base64.b64encode(raw).decode()


def frame_json(frame: FrameData, broca_text: str | None) -> dict:
    return {
        "type": "frame",
        "v": PROTOCOL_VERSION,
        "tick": frame.tick,
        "theta0": frame.theta0,
        "theta1": frame.theta1,
        "hand": {"x": frame.hand[0], "y": frame.hand[1]},
        "hold": frame.hold,
        "pain": frame.pain,
        "omega": {"w0": frame.omega[0], "w1": frame.omega[1]},
        "objects": frame.objects,
        "command": frame.command,
        "intention": frame.intention,
        "plan": frame.plan,
        "attention": frame.attention,
        "reports": frame.reports,
        "imagined": _encode_image(frame.imagined),
        "imagined_shape": [config.IMAGE_SIZE, config.IMAGE_SIZE, 3]
        if frame.imagined is not None else None,
        "broca_text": broca_text,
    }


class SessionRunner:
    """Owns the session; all mutations flow through the command queue."""

    def __init__(self, res: Resources, task: str = "fetch_big", seed: int = 0,
                 tick_ms: int = 100, start_paused: bool = False):
        self.res = res
        self.tick_ms = tick_ms
        self.paused = start_paused
        self.run_budget: int | None = None
        self.clients: dict[int, asyncio.Queue] = {}
        self._next_client = 0
        self.commands: asyncio.Queue = asyncio.Queue()
        self.lesion_n = 0
        self._lesion_mask: LesionMask | None = None
        self._demo_sentences = [
            tuple(grammar.sample_sentence(named_rng("service/demo", seed + i)))
            for i in range(8)]
        self._stopped = False
        self.spec = make_task(task, seed)
        self._build_session()

    def _build_session(self) -> None:
        scenario = parse_scenario(self.spec.scenario_text)
        self.session = Session(self.res, scenario, self.spec.seed,
                               imagery=self.spec.imagery)
        for tick, utt in self.spec.inject.items():
            self.session.inject(tick, utt)

    # ------------------------------------------------------------------
    def apply_command(self, msg: dict) -> dict:
        kind = msg.get("kind")
        payload = str(msg.get("payload", ""))
        req_id = msg.get("id")
        effect_tick = self.session.tick_count + 1
        try:
            if kind == "utterance":
                words = payload.split()
                if not words or not all(w in self.res.lexicon for w in words):
                    raise UnknownWord(payload)
                self.session.inject(effect_tick, payload)
            elif kind == "stop":
                self.session.inject(effect_tick, "stop")
            elif kind == "lesion_set":
                n = int(payload)
                if n not in VALID_LESIONS:
                    raise InvalidLesionCount(str(n))
                self.lesion_n = n
                self._lesion_mask = (LesionMask.random(n, self.spec.seed)
                                     if n else LesionMask.none())
            elif kind == "scenario_load":
                self.spec.scenario_text = payload
                self._build_session()
                effect_tick = 1
            elif kind == "pause":
                self.paused = True
                self.run_budget = None
            elif kind == "resume":
                self.paused = False
                self.run_budget = int(payload) if payload.strip() else None
            elif kind == "speed":
                self.tick_ms = max(0, int(payload))
            else:
                raise ValueError(f"unknown command kind {kind!r}")
        except (UnknownWord, InvalidLesionCount, ValueError, KeyError) as exc:
            return {"type": "error", "v": PROTOCOL_VERSION, "id": req_id,
                    "error": type(exc).__name__, "detail": str(exc)}
        return {"type": "ack", "v": PROTOCOL_VERSION, "id": req_id,
                "tick": effect_tick}

    def _broca_demo(self) -> str | None:
        if self._lesion_mask is None:
            return None
        toks = self._demo_sentences[self.session.tick_count % len(self._demo_sentences)]
        lv = self.res.broca.compose([self.res.codebook.lv(t) for t in toks],
                                    self._lesion_mask)
        return " ".join(self.res.language.decode(lv).tokens)

    # ------------------------------------------------------------------
    def add_client(self) -> tuple[int, asyncio.Queue]:
        cid = self._next_client
        self._next_client += 1
        queue: asyncio.Queue = asyncio.Queue(maxsize=MAX_BACKLOG)
        self.clients[cid] = queue
        return cid, queue

    def drop_client(self, cid: int) -> None:
        self.clients.pop(cid, None)

    def broadcast(self, message: dict) -> None:
        dead = []
        for cid, queue in self.clients.items():
            try:
                queue.put_nowait(message)
            except asyncio.QueueFull:
                dead.append(cid)
        for cid in dead:
            self.drop_client(cid)
            self.session.log.log(self.session.tick_count, "service",
                                 "client_dropped", f"id={cid} backlog>{MAX_BACKLOG}")

    async def loop(self) -> None:
        while not self._stopped:
            while not self.commands.empty():
                msg, reply_queue = self.commands.get_nowait()
                reply = self.apply_command(msg)
                if reply_queue is not None:
                    reply_queue.put_nowait(reply)
            if not self.paused:
                frame = self.session.tick()
                self.broadcast(frame_json(frame, self._broca_demo()))
                if self.run_budget is not None:
                    self.run_budget -= 1
                    if self.run_budget <= 0:
                        self.paused = True
                        self.run_budget = None
                        self.broadcast({"type": "event", "v": PROTOCOL_VERSION,
                                        "event": "paused",
                                        "tick": self.session.tick_count})
            await asyncio.sleep(self.tick_ms / 1000.0 if self.tick_ms else 0)

    def stop(self) -> None:
        self._stopped = True


def create_app(res: Resources, task: str = "fetch_big", seed: int = 0,
               tick_ms: int = 100, start_paused: bool = False,
               static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="lgma bridge")
    runner = SessionRunner(res, task, seed, tick_ms, start_paused)
    app.state.runner = runner

    @app.on_event("startup")
    async def _start():
        app.state.loop_task = asyncio.create_task(runner.loop())

    @app.on_event("shutdown")
    async def _stop():
        runner.stop()
        app.state.loop_task.cancel()

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        cid, queue = runner.add_client()
        hello = {
            "type": "hello",
            "v": PROTOCOL_VERSION,
            "protocol": PROTOCOL_VERSION,
            "lexicon": [w for w in res.lexicon.words],
            "tick_ms": runner.tick_ms,
            "tick": runner.session.tick_count,
        }
        await ws.send_text(json.dumps(hello))
        replies: asyncio.Queue = asyncio.Queue()

        async def pump_out():
            while True:
                # replies take priority over frames
                if not replies.empty():
                    msg = replies.get_nowait()
                elif not queue.empty():
                    msg = queue.get_nowait()
                else:
                    await asyncio.sleep(0.001)
                    continue
                await ws.send_text(json.dumps(msg))

        out_task = asyncio.create_task(pump_out())
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                    if not isinstance(msg, dict):
                        raise ValueError("message must be an object")
                except ValueError as exc:
                    replies.put_nowait({"type": "error", "v": PROTOCOL_VERSION,
                                        "id": None, "error": "BadMessage",
                                        "detail": str(exc)})
                    continue
                runner.commands.put_nowait((msg, replies))
        except WebSocketDisconnect:
            pass
        finally:
            out_task.cancel()
            runner.drop_client(cid)

    static = Path(static_dir) if static_dir else Path("frontend/dist")
    if static.is_dir():
        app.mount("/", StaticFiles(directory=str(static), html=True), name="static")
    else:
        @app.get("/")
        async def index() -> HTMLResponse:
            return HTMLResponse(FALLBACK_PAGE)

    return app
