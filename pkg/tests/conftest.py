"""Shared fixtures. Trained-model tests use ./checkpoints, training any missing
module once per machine (cached across runs)."""
from __future__ import annotations

import pytest

from lgma.config import default_config
from lgma.orchestrator.resources import Resources


@pytest.fixture(scope="session")
def cfg():
    return default_config()


@pytest.fixture(scope="session")
def res(cfg):
    return Resources(cfg)


@pytest.fixture(scope="session")
def trained(cfg, res):
    """Ensure every module checkpoint exists; train missing ones (slow, once)."""
    from lgma.orchestrator.datasets import gen_dataset
    from lgma.orchestrator.training import CURRICULUM, train_module

    for name in CURRICULUM:
        if not res.has_checkpoint(name):
            count = cfg.require_int(f"{name}.samples")
            records = gen_dataset(name, count, int(cfg["seed"]), res)
            train_module(name, records, cfg, res)
    return res
