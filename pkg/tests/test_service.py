"""Bridge service: protocol, command queue, fan-out, headless equivalence."""
import asyncio
import json

import pytest
from fastapi.testclient import TestClient

from lgma.orchestrator.session import Session
from lgma.orchestrator.tasks import make_task, run_task
from lgma.service.bridge import MAX_BACKLOG, SessionRunner, create_app
from lgma.world.scenario import parse_scenario


@pytest.fixture()
def paused_app(trained):
    app = create_app(trained, task="fetch_big", seed=1, tick_ms=0,
                     start_paused=True)
    return app


def _recv_type(ws, wanted, limit=600):
    for _ in range(limit):
        msg = json.loads(ws.receive_text())
        if msg["type"] == wanted:
            return msg
    raise AssertionError(f"no {wanted!r} message received")


def test_hello_protocol(paused_app, trained):
    with TestClient(paused_app) as client:
        with client.websocket_connect("/ws") as ws:
            hello = json.loads(ws.receive_text())
            assert hello["type"] == "hello"
            assert hello["protocol"] == 1 and hello["v"] == 1
            assert "fetch" in hello["lexicon"]


def test_malformed_message_gets_error(paused_app):
    with TestClient(paused_app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()  # hello
            ws.send_text("this is not json")
            msg = _recv_type(ws, "error")
            assert msg["error"] == "BadMessage"


def test_unknown_word_rejected(paused_app):
    with TestClient(paused_app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            ws.send_text(json.dumps({"kind": "utterance",
                                     "payload": "frobnicate", "id": "u1"}))
            msg = _recv_type(ws, "error")
            assert msg["error"] == "UnknownWord" and msg["id"] == "u1"


def test_invalid_lesion_count(paused_app):
    with TestClient(paused_app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            ws.send_text(json.dumps({"kind": "lesion_set", "payload": "13",
                                     "id": "l1"}))
            msg = _recv_type(ws, "error")
            assert msg["error"] == "InvalidLesionCount"


def test_ack_carries_effect_tick_and_frames_flow(paused_app):
    with TestClient(paused_app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            ws.send_text(json.dumps({"kind": "resume", "payload": "3",
                                     "id": "r1"}))
            ack = _recv_type(ws, "ack")
            assert ack["id"] == "r1"
            frames = [_recv_type(ws, "frame") for _ in range(3)]
            ticks = [f["tick"] for f in frames]
            assert ticks == sorted(ticks) and ticks[0] >= 1
            assert {"theta0", "theta1", "hand", "hold", "pain",
                    "objects", "plan"} <= set(frames[0])
            for f in frames:
                assert len(json.dumps(f).encode()) < 64 * 1024
                assert f["v"] == 1


def test_two_clients_identical_streams(trained):
    app = create_app(trained, task="fetch_big", seed=1, tick_ms=0,
                     start_paused=True)
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws1, \
                client.websocket_connect("/ws") as ws2:
            ws1.receive_text()
            ws2.receive_text()
            ws1.send_text(json.dumps({"kind": "resume", "payload": "4",
                                      "id": "r"}))
            _recv_type(ws1, "ack")
            f1 = [_recv_type(ws1, "frame") for _ in range(4)]
            f2 = [_recv_type(ws2, "frame") for _ in range(4)]
            assert [json.dumps(f) for f in f1] == [json.dumps(f) for f in f2]


def test_backlog_overflow_drops_client(trained):
    runner = SessionRunner(trained, task="fetch_big", seed=1, tick_ms=0,
                           start_paused=True)
    cid, queue = runner.add_client()
    for i in range(MAX_BACKLOG):
        queue.put_nowait({"i": i})
    runner.broadcast({"type": "frame"})
    assert cid not in runner.clients
    dropped = [l for l in runner.session.log.lines if "client_dropped" in l]
    assert dropped


def test_lesion_set_full_constant_t2(paused_app):
    with TestClient(paused_app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            ws.send_text(json.dumps({"kind": "lesion_set", "payload": "256",
                                     "id": "l"}))
            _recv_type(ws, "ack")
            ws.send_text(json.dumps({"kind": "resume", "payload": "3",
                                     "id": "r"}))
            frames = [_recv_type(ws, "frame") for _ in range(3)]
            assert all(f["broca_text"] == "t2" for f in frames)


def test_headless_service_equivalence(trained):
    """Scripted service session produces the same event log as the CLI path."""
    seed = 4
    spec = make_task("fetch_big", seed)
    stop_tick = 7

    # headless: injection applied at the tick boundary
    spec_cli = make_task("fetch_big", seed)
    spec_cli.inject[stop_tick] = "stop"
    scenario = parse_scenario(spec_cli.scenario_text)
    headless = Session(trained, scenario, seed)
    for tick, utt in spec_cli.inject.items():
        headless.inject(tick, utt)
    for _ in range(spec_cli.max_ticks):
        headless.tick()

    # service: run to tick stop_tick-1, send the stop command, run on
    app = create_app(trained, task="fetch_big", seed=seed, tick_ms=0,
                     start_paused=True)
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            ws.send_text(json.dumps({"kind": "resume",
                                     "payload": str(stop_tick - 1), "id": "a"}))
            _recv_type(ws, "event")  # paused after the budget
            ws.send_text(json.dumps({"kind": "stop", "payload": "", "id": "s"}))
            ack = _recv_type(ws, "ack")
            assert ack["tick"] == stop_tick
            remaining = spec_cli.max_ticks - (stop_tick - 1)
            ws.send_text(json.dumps({"kind": "resume",
                                     "payload": str(remaining), "id": "b"}))
            _recv_type(ws, "event")
            runner = app.state.runner
            assert runner.session.log.text() == headless.log.text()
