"""Shared fixtures: an isolated calibration store and small vector builders."""

import json
import os

import numpy as np
import pytest

from src.spaces.dyadic import Rectangle
from src.spaces.fpq_space import FpqParams, FpqVector
from src.spaces.lpq_space import LpqParams, LpqVector


@pytest.fixture(scope="session", autouse=True)
def calibration_store(tmp_path_factory):
    """Empty calibration store; calibrated checks fit their constant on first use."""
    path = tmp_path_factory.mktemp("calibration") / "calibration.json"
    path.write_text(json.dumps({"seed": 0, "headroom": 1.05, "constants": {}}))
    previous = os.environ.get("GREEDY_CALIBRATION_PATH")
    os.environ["GREEDY_CALIBRATION_PATH"] = str(path)
    yield str(path)
    if previous is None:
        os.environ.pop("GREEDY_CALIBRATION_PATH", None)
    else:
        os.environ["GREEDY_CALIBRATION_PATH"] = previous


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def lpq(p, q, entries):
    return LpqVector.from_entries(LpqParams(p, q), entries)


def interval(level, offset):
    return Rectangle.from_levels((level,), (offset,))


def fpq(p, q, entries, d=1):
    return FpqVector.from_entries(FpqParams(p, q, d), entries)
