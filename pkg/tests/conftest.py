"""
Shared fixtures for the mallowscycles test suite
"""
import logging
import sys
import threading
from pathlib import Path
from typing import Callable

import pandas as pd
import pytest

from context import ExperimentConfig
from sampler.rng import RngStream

ROOT: Path = Path(__file__).resolve().parent.parent
SEED: int = 20240601

@pytest.fixture
def rng() -> RngStream:
    """A fresh stream with the suite seed"""
    return RngStream(SEED, 0)

@pytest.fixture
def make_rng() -> Callable[[int], RngStream]:
    """Streams of the suite seed keyed by stream id"""
    def _make(stream_id: int = 0) -> RngStream:
        return RngStream(SEED, stream_id)
    return _make

@pytest.fixture
def logging_config() -> Path:
    """The repository logging config"""
    return ROOT.joinpath("logging-config.json")

@pytest.fixture
def oracle_values() -> pd.DataFrame:
    """Frozen exact oracle values (n, q, statistic, value)"""
    return pd.read_csv(ROOT.joinpath("tests", "fixtures", "oracle_values.csv"))

@pytest.fixture
def make_config(tmp_path: Path) -> Callable[..., ExperimentConfig]:
    """Small single-worker experiment configs writing into tmp_path"""
    def _make(name: str, q_grid: list[float], **overrides) -> ExperimentConfig:
        params = {"n": 50, "replicates": 200, "seed": SEED, "workers": 1,
                  "output_path": tmp_path.joinpath(f"{name}.csv")}
        params.update(overrides)
        return ExperimentConfig(name=name, q_grid=q_grid, **params)
    return _make

class RefusingLock:
    """Stands in for an output lock held by another process"""
    def __init__(self, path) -> None:
        self.path = path

    def acquire(self, blocking: bool = True, timeout: float | None = None) -> bool:
        return False

    def release(self) -> None:
        pass

@pytest.fixture
def locked_output(monkeypatch: pytest.MonkeyPatch) -> None:
    """Every output lock is refused"""
    monkeypatch.setattr("experiments.runner.InterProcessLock", RefusingLock)

@pytest.fixture
def reset_logging(monkeypatch: pytest.MonkeyPatch):
    """Undo setup_logging: hooks, handlers and disabled loggers"""
    monkeypatch.setattr(sys, "excepthook", sys.excepthook)
    monkeypatch.setattr(threading, "excepthook", threading.excepthook)
    yield
    for candidate in list(logging.root.manager.loggerDict.values()):
        if not isinstance(candidate, logging.Logger):
            continue
        candidate.disabled = False
        for handler in candidate.handlers[:]:
            candidate.removeHandler(handler)
            handler.close()
