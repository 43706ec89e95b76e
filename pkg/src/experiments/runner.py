"""
Experiment registry: resolves frozen constants and writes the output file.
"""

import logging
from typing import Callable, Dict

from src.errors import ParamError
from src.experiments.calibration import frozen_constant
from src.experiments.harness import ExperimentResult, ExperimentSpec, write_result
from src.experiments.lower_bounds import exp_fpq_lower, exp_lpq_lower
from src.experiments.regimes import exp_tga_vs_wcga
from src.experiments.sweeps import exp_iteration_decay, exp_lebesgue_sweep

logger = logging.getLogger(__name__)


def _lebesgue(spec: ExperimentSpec) -> ExperimentResult:
    return exp_lebesgue_sweep(spec, c_fit=frozen_constant('lebesgue', spec.params))


EXPERIMENTS: Dict[str, Callable[[ExperimentSpec], ExperimentResult]] = {
    'lpq-lower': exp_lpq_lower,
    'fpq-lower': exp_fpq_lower,
    'tga-vs-wcga': exp_tga_vs_wcga,
    'lebesgue': _lebesgue,
    'iteration-decay': exp_iteration_decay,
}


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    runner = EXPERIMENTS.get(spec.experiment)
    if runner is None:
        raise ParamError(f"unknown experiment {spec.experiment!r}, expected one of {sorted(EXPERIMENTS)}")
    logger.info(f"running {spec.experiment} (seed={spec.seed}, workers={spec.workers})")
    result = runner(spec)
    if spec.output:
        write_result(result, spec.output, spec.fmt)
    if not result.passed:
        logger.warning(f"{spec.experiment} failed checks: "
                       f"{[name for name, ok in result.checks.items() if not ok]}")
    return result
