"""Session pipeline, datasets, training driver, task runner."""
import numpy as np
import pytest

from lgma.config import default_config
from lgma.engine.checkpoint import read_records, write_records
from lgma.orchestrator import datasets
from lgma.orchestrator.datasets import UnknownGenerator, gen_dataset
from lgma.orchestrator.resources import MissingCheckpoint, Resources
from lgma.orchestrator.session import Session
from lgma.orchestrator.tasks import make_task, parse_log, run_task
from lgma.orchestrator.training import DivergedLoss, SchemaMismatch, train_module
from lgma.world.scenario import parse_scenario


def test_unknown_generator(res):
    with pytest.raises(UnknownGenerator):
        gen_dataset("nope", 1, 0, res)


def test_gen_count_zero(res):
    assert gen_dataset("vision", 0, 0, res) == []


def test_gen_deterministic_files(res, tmp_path):
    a = gen_dataset("vision", 5, 3, res)
    b = gen_dataset("vision", 5, 3, res)
    pa, pb = tmp_path / "a.bin", tmp_path / "b.bin"
    write_records("vision", a, pa)
    write_records("vision", b, pb)
    assert pa.read_bytes() == pb.read_bytes()


def test_soma_generator_blocks_valid(res):
    records = gen_dataset("soma", 40, 1, res)
    for r in records:
        m = r["m"]
        assert m.shape == (4, 8)
        # integration consistency of the generated rows
        for k in range(1, 4):
            assert np.allclose(m[k, 1], m[k - 1, 1] + m[k, 2], atol=1e-5)
            assert np.allclose(m[k, 0], m[k - 1, 0] + m[k, 1], atol=1e-5)


def test_missing_checkpoint_raises(tmp_path):
    cfg = default_config()
    cfg["checkpoint_dir"] = str(tmp_path / "empty")
    res2 = Resources(cfg)
    with pytest.raises(MissingCheckpoint):
        _ = res2.vision


def test_train_schema_mismatch(res):
    cfg = default_config()
    with pytest.raises(SchemaMismatch):
        train_module("soma", [{"bogus": np.zeros(3, dtype=np.float32)}], cfg, res)


def test_train_diverges_no_checkpoint(res, tmp_path):
    cfg = default_config()
    cfg["checkpoint_dir"] = str(tmp_path / "ck")
    cfg["soma.lr"] = 10.0
    cfg["soma.epochs"] = 3
    records = gen_dataset("soma", 64, 0, res)
    with pytest.raises(DivergedLoss):
        train_module("soma", records, cfg, res)
    assert not (tmp_path / "ck" / "soma.ckpt").exists()


def test_train_one_epoch_loads(res, tmp_path):
    cfg = default_config()
    cfg["checkpoint_dir"] = str(tmp_path / "ck")
    cfg["soma.epochs"] = 1
    records = gen_dataset("soma", 64, 0, res)
    path, losses = train_module("soma", records, cfg, res)
    assert path.exists() and len(losses) == 1
    from lgma.codecs.soma import SomaCodec
    codec = SomaCodec().load(path)
    assert codec.trained


# ---------------------------------------------------------------------------
# session behavior (trained)
# ---------------------------------------------------------------------------

def test_empty_scenario_arm_stationary(trained):
    scenario = parse_scenario("arm 0.4 0.9")
    session = Session(trained, scenario, seed=0)
    for _ in range(6):
        session.tick()
    events = parse_log(session.log.lines)
    states = [p for _, m, e, p in events if m == "world" and e == "state"]
    assert all(s.split()[0] == states[0].split()[0] for s in states)
    assert session.world.arm.omega0 == 0


def test_session_log_replayable(trained):
    spec = make_task("fetch_big", 2)
    logs = []
    for _ in range(2):
        scenario = parse_scenario(spec.scenario_text)
        session = Session(trained, scenario, spec.seed)
        for _ in range(spec.max_ticks):
            session.tick()
        logs.append(session.log.text())
    assert logs[0] == logs[1]


def test_fetch_big_event_order(trained):
    spec = make_task("fetch_big", 0)
    report = run_task(spec, trained, save_log=False)
    assert report["success"], report


def test_injection_changes_log(trained):
    spec = make_task("fetch_big", 3)
    base = run_task(spec, trained, save_log=False)
    spec2 = make_task("fetch_big", 3)
    spec2.inject[6] = "stop"
    stopped = run_task(spec2, trained, save_log=False)
    assert not stopped["success"]  # the fetch was interrupted


def test_unknown_utterance_rejected(trained):
    scenario = parse_scenario("arm 0.4 0.9")
    session = Session(trained, scenario, seed=0)
    with pytest.raises(KeyError):
        session.enqueue_utterance("frobnicate")


def test_run_task_report_fields(trained, tmp_path):
    cfg = trained.cfg
    old = cfg["run_dir"]
    cfg["run_dir"] = str(tmp_path)
    try:
        spec = make_task("fetch_big", 1)
        report = run_task(spec, trained)
        assert set(report) >= {"task", "seed", "success", "ticks", "metrics",
                               "log_path"}
        log_lines = (tmp_path / f"fetch_big-1.log").read_text().splitlines()
        events = parse_log(log_lines)
        kinds = {(m, e) for _, m, e, _ in events}
        assert ("dlpfc", "intend") in kinds
        assert ("sma", "command") in kinds
        assert ("world", "state") in kinds
    finally:
        cfg["run_dir"] = old
