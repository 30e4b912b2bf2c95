"""Acceptance criteria, one test per criterion, printing one PASS/FAIL line each.

Tolerances are pinned here and in the evaluation suites; nothing is deferred
to later calibration. Trained checkpoints are built once by the `trained`
fixture and cached in ./checkpoints.
"""
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from lgma.orchestrator import evaluation as ev
from lgma.orchestrator.tasks import make_task, run_task


def _criterion(name: str, ok: bool, detail: str = ""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def test_acceptance_kinematics(cfg):
    r = ev.suite_kinematics(cfg)
    rows = dict((m, v) for _, m, v, _ in r.rows)
    _criterion(
        "kinematics oracle suite",
        r.passed,
        f"roundtrip={rows['ikfk_roundtrip_max']:.2e} "
        f"replay={rows['replay_theta_max']:.2e} runtime={r.elapsed:.1f}s",
    )


def test_acceptance_gradients(cfg):
    r = ev.suite_gradients(cfg)
    rows = dict((m, v) for _, m, v, _ in r.rows)
    _criterion(
        "gradient suite (5 seeds, all layer/cell types)",
        r.passed,
        f"max_rel={rows['fd_max_rel']:.2e} runtime={r.elapsed:.1f}s",
    )


def test_acceptance_codec_fidelity(cfg, trained):
    r = ev.suite_codecs(cfg, trained)
    rows = dict((m, v) for _, m, v, _ in r.rows)
    _criterion(
        "codec fidelity",
        r.passed,
        f"vision_mse={rows['vision_heldout_mse']:.4f} "
        f"lang_rt={rows['language_roundtrip']:.3f} "
        f"soma_hit={rows['soma_replay_hit']:.3f}",
    )


def test_acceptance_broca_lesion(cfg, trained):
    r = ev.suite_lesion(cfg, trained)
    rows = dict((m, v) for _, m, v, _ in r.rows)
    _criterion(
        "Broca lesion reproduction",
        r.passed,
        "wer=" + ",".join(f"{rows[f'wer_n{n}']:.3f}"
                          for n in (0, 25, 64, 128, 192, 256)),
    )


def test_acceptance_presma_table(cfg, trained):
    r = ev.suite_presma(cfg, trained)
    rows = dict((m, v) for _, m, v, _ in r.rows)
    _criterion("preSMA expansion table",
               r.passed, f"exact={rows['presma_exact']:.2f}")


def test_acceptance_fetch_big(trained):
    results = ev.run_episodes(trained, "fetch_big", 100)
    rate = float(np.mean([x["success"] for x in results]))
    _criterion("end-to-end fetch_big (100 scenes)", rate >= 0.90,
               f"success={rate:.2f}")


def test_acceptance_pain_reflex(trained):
    results = ev.run_episodes(trained, "pain_reflex", 50)
    rate = float(np.mean([x["success"] for x in results]))
    _criterion("pain reflex (50 episodes)", rate >= 0.95, f"success={rate:.2f}")


def test_acceptance_urgent_stop(trained):
    results = ev.run_episodes(trained, "urgent_stop", 50)
    rate = float(np.mean([x["success"] for x in results]))
    _criterion("urgent stop (50 episodes)", rate >= 1.0, f"success={rate:.2f}")


def test_acceptance_imagery_safety(trained):
    results = ev.run_episodes(trained, "imagery_reach", 50)
    rate = float(np.mean([x["success"] for x in results]))
    _criterion("imagery safety (50 episodes)", rate >= 1.0, f"success={rate:.2f}")


def test_acceptance_dlpfc_generalization(cfg, trained):
    r = ev.suite_dlpfc(cfg, trained)
    rows = dict((m, v) for _, m, v, _ in r.rows)
    _criterion("dlPFC out-of-vocabulary rules",
               r.passed,
               f"token_acc={rows['dlpfc_branch_token_acc']:.3f} "
               f"exact={rows['dlpfc_branch_exact']:.3f}")


def test_acceptance_determinism(trained, tmp_path):
    """Two `lgma eval --suite all` runs agree byte-for-byte; service and
    headless paths produce identical event logs for the same injections."""
    outs = []
    rcs = []
    for k in range(2):
        out = tmp_path / f"report{k}.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "lgma.cli", "eval", "--suite", "all",
             "--out", str(out)],
            cwd=Path.cwd(), capture_output=True, text=True, timeout=3600)
        rcs.append(proc.returncode)
        assert out.exists(), proc.stderr[-2000:]
        outs.append(out.read_bytes())
    reports_equal = outs[0] == outs[1] and rcs[0] == rcs[1]

    # headless vs scripted-service equivalence on fetch_big
    from fastapi.testclient import TestClient

    from lgma.orchestrator.session import Session
    from lgma.service.bridge import create_app
    from lgma.world.scenario import parse_scenario

    seed, stop_tick = 4, 7
    spec = make_task("fetch_big", seed)
    spec.inject[stop_tick] = "stop"
    headless = Session(trained, parse_scenario(spec.scenario_text), seed)
    for tick, utt in spec.inject.items():
        headless.inject(tick, utt)
    for _ in range(spec.max_ticks):
        headless.tick()

    app = create_app(trained, task="fetch_big", seed=seed, tick_ms=0,
                     start_paused=True)
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()

            def until(kind):
                while True:
                    msg = json.loads(ws.receive_text())
                    if msg["type"] == kind:
                        return msg

            ws.send_text(json.dumps({"kind": "resume",
                                     "payload": str(stop_tick - 1), "id": "a"}))
            until("event")
            ws.send_text(json.dumps({"kind": "stop", "payload": "", "id": "s"}))
            until("ack")
            ws.send_text(json.dumps({
                "kind": "resume",
                "payload": str(spec.max_ticks - (stop_tick - 1)), "id": "b"}))
            until("event")
            service_log = app.state.runner.session.log.text()
    equivalent = service_log == headless.log.text()
    _criterion("determinism (eval reports + headless/service equivalence)",
               reports_equal and equivalent,
               f"reports_equal={reports_equal} service_equivalent={equivalent}")
