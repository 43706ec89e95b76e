"""
Frozen constants for inequalities that only hold up to an unknown constant.

Constants are fitted once on seed 0 (random samples plus the structured
corpora) and stored as JSON. Checks on any other seed compare against the
stored value times :data:`HEADROOM`.

File layout::

    {"seed": 0, "headroom": 1.05, "version": "1.0.0",
     "constants": {"democracy|fpq|p=1.5|q=2|d=2": 1.23, ...}}
"""

import json
import logging
import os
from typing import Dict, Iterable, Optional

from src import __version__
from src.checks.properties import (check_A3_direct, check_d1_log_bound, check_democracy,
                                   check_lorentz_sandwich)
from src.config import get_calibration_path
from src.errors import ParamError
from src.experiments.harness import ExperimentSpec
from src.experiments.sweeps import exp_lebesgue_sweep
from src.spaces.fpq_space import FpqParams
from src.spaces.lpq_space import LpqParams

logger = logging.getLogger(__name__)

HEADROOM = 1.05
CALIBRATION_SEED = 0
CALIBRATION_SET = {
    'democracy': [FpqParams(1.5, 2.0, 1), FpqParams(1.5, 2.0, 2), FpqParams(3.0, 1.5, 2), FpqParams(2.0, 2.0, 2)],
    'd1_log': [FpqParams(3.0, 1.5, 1), FpqParams(4.0, 2.0, 1), FpqParams(2.0, 1.5, 1)],
    'a3_fpq': [FpqParams(1.5, 2.0, 2), FpqParams(3.0, 1.5, 2), FpqParams(2.0, 2.0, 1)],
    'lorentz': [FpqParams(3.0, 1.5, 1), FpqParams(2.0, 2.0, 1), FpqParams(4.0, 2.0, 1)],
    'lebesgue': [LpqParams(2.0, 2.0), LpqParams(3.0, 1.5)],
}


def calibration_key(name: str, params) -> str:
    key = f"{name}|{params.to_dict()['space']}|p={params.p:g}|q={params.q:g}"
    if isinstance(params, FpqParams):
        key += f"|d={params.d}"
    return key


def fit_constant(name: str, params, seed: int = CALIBRATION_SEED) -> float:
    """Largest ratio with constant 1 over the calibration corpus."""
    if name == 'democracy':
        return check_democracy(params, seed=seed).details['fitted_constant']
    if name == 'd1_log':
        return check_d1_log_bound(params, seed=seed).details['fitted_constant']
    if name == 'a3_fpq':
        return check_A3_direct(params, seed=seed).details['fitted_constant']
    if name == 'lorentz':
        return check_lorentz_sandwich(params, seed=seed).details['fitted_constant']
    if name == 'lebesgue':
        result = exp_lebesgue_sweep(ExperimentSpec('lebesgue', params, seed=seed))
        return result.summary['fitted_constant']
    raise ParamError(f"no calibrated constant named {name!r}, expected one of {sorted(CALIBRATION_SET)}")


def calibrate(seed: int = CALIBRATION_SEED, path: Optional[str] = None,
              names: Optional[Iterable[str]] = None) -> Dict[str, float]:
    """Fit every constant of :data:`CALIBRATION_SET` and write the store."""
    constants = {}
    for name in (names or CALIBRATION_SET):
        for params in CALIBRATION_SET[name]:
            value = float(fit_constant(name, params, seed))
            constants[calibration_key(name, params)] = value
            logger.info(f"calibrated {calibration_key(name, params)} = {value:.6f}")
    _write(constants, seed, path or get_calibration_path())
    return constants


def _write(constants: Dict[str, float], seed: int, path: str) -> bool:
    data = {'seed': seed, 'headroom': HEADROOM, 'version': __version__,
            'constants': dict(sorted(constants.items()))}
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as fh:
            json.dump(data, fh, indent=2)
        logger.info(f"calibration written to {path}")
        return True
    except OSError as e:
        logger.warning(f"calibration file {path} not writable: {e}")
        return False


def load_calibration(path: Optional[str] = None) -> Dict[str, float]:
    """Read the store, calibrating and writing it first if it is missing."""
    path = path or get_calibration_path()
    if not os.path.exists(path):
        logger.info(f"no calibration at {path}, calibrating on seed {CALIBRATION_SEED}")
        return calibrate(CALIBRATION_SEED, path)
    with open(path, 'r', encoding='utf-8') as fh:
        data = json.load(fh)
    return {key: float(value) for key, value in data.get('constants', {}).items()}


def frozen_constant(name: str, params, path: Optional[str] = None) -> float:
    """Stored constant times :data:`HEADROOM`; missing keys are fitted on seed 0 and persisted."""
    path = path or get_calibration_path()
    constants = load_calibration(path)
    key = calibration_key(name, params)
    if key not in constants:
        constants[key] = float(fit_constant(name, params, CALIBRATION_SEED))
        logger.info(f"calibrated {key} = {constants[key]:.6f} on demand")
        _write(constants, CALIBRATION_SEED, path)
    return constants[key] * HEADROOM
