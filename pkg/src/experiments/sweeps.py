"""
Random sweeps: WCGA step counts on sparse-plus-noise targets, and the
geometric decay of residual norms on exactly sparse ones.
"""

import logging
import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.checks.samplers import make_vector, sample_support
from src.errors import ParamError
from src.experiments.harness import (MIN_FIT_POINTS, ExperimentResult, ExperimentSpec, fit_loglog,
                                     grid_rng, run_grid)
from src.greedy.best_n_term import decay_slope, recovery_steps, sigma_n_bruteforce
from src.greedy.greedy_algorithms import GreedyConfig, wcga_run
from src.spaces.fpq_space import FpqParams
from src.spaces.lpq_space import LpqParams

logger = logging.getLogger(__name__)

SPARSE_RANGE = (0.5, 2.0)
DEFAULT_SWEEP_N = [1, 2, 3, 4, 5, 6]
DEFAULT_DECAY_K = [1, 2, 4, 8, 12]
# Extra noise coordinates beyond N; keeps brute-force sigma_N cheap.
NOISE_EXTRA = 4

SWEEP_COLUMNS = ['N', 'sample', 'support', 'sigma', 'steps', 'phi_target', 'ratio', 'within_bound']
DECAY_COLUMNS = ['K', 'samples', 'mean_slope', 'K_rs', 'slope_times_K_rs']


def sweep_exponent(params) -> float:
    if isinstance(params, LpqParams):
        return params.beta
    return params.alpha_pq


def rs_exponent(params) -> float:
    """``r * s`` from the A3 and D parameters of the space."""
    r = params.r if isinstance(params, LpqParams) else 1.0 / params.p_conj
    return r * params.s


def sparse_plus_noise(params, rng: np.random.Generator, N: int, epsilon: float,
                      noise_size: Optional[int] = None):
    """``f = x + epsilon ||x|| g / ||g||`` with ``x`` N-sparse and ``g`` Gaussian
    on a support disjoint from ``supp(x)``."""
    noise_size = N + NOISE_EXTRA if noise_size is None else noise_size
    kind = 'scatter'
    keys = sample_support(params, rng, kind, N + noise_size)
    if len(keys) < N:
        raise ParamError(f"could not draw {N} distinct indices")
    order = rng.permutation(len(keys))
    sparse_keys = [keys[i] for i in sorted(order[:N])]
    noise_keys = [keys[i] for i in sorted(order[N:])]
    magnitudes = rng.uniform(SPARSE_RANGE[0], SPARSE_RANGE[1], N) * rng.choice((-1.0, 1.0), N)
    sparse = make_vector(params, sparse_keys, magnitudes)
    if epsilon == 0.0 or not noise_keys:
        return sparse
    noise = make_vector(params, noise_keys, rng.standard_normal(len(noise_keys)))
    scale = epsilon * sparse.norm() / noise.norm()
    keys_all = sparse_keys + noise_keys
    values = np.concatenate([sparse.values, scale * noise.values])
    return make_vector(params, keys_all, values)


def _check_params(params) -> None:
    if not isinstance(params, (LpqParams, FpqParams)):
        raise ParamError("sweeps need l^p(l^q) or f_(p,q) parameters")


def exp_lebesgue_sweep(spec: ExperimentSpec, c_fit: Optional[float] = None) -> ExperimentResult:
    """Steps to ``C sigma_N`` on sparse-plus-noise targets.

    With a frozen ``c_fit`` every row must satisfy
    ``steps <= ceil(c_fit N^beta)``; without one the run only reports the
    largest ``steps / N^beta`` as ``summary['fitted_constant']``.
    """
    params = spec.params
    _check_params(params)
    if spec.epsilon < 0:
        raise ParamError(f"epsilon must be >= 0, got {spec.epsilon}")
    grid = spec.n_values or DEFAULT_SWEEP_N
    spec.n_values = list(grid)
    exponent = sweep_exponent(params)
    logger.info(f"lebesgue sweep {params!r}, eps={spec.epsilon}, N in {grid}, {spec.samples} samples each")

    def point(index, N) -> List[Dict[str, Any]]:
        rows = []
        for sample in range(spec.samples):
            rng = grid_rng(spec.seed, index, sample)
            f = sparse_plus_noise(params, rng, N, spec.epsilon)
            sigma, _ = sigma_n_bruteforce(f, N)
            config = GreedyConfig(tau=spec.config.tau, tol=spec.config.tol)
            measurement = recovery_steps(f, N, spec.C, config, sigma=sigma, sigma_method='bruteforce')
            steps = measurement.steps_needed if measurement.recovered else len(f)
            curve = N ** exponent
            target = math.ceil(c_fit * curve) if c_fit is not None else None
            rows.append({'N': N, 'sample': sample, 'support': len(f), 'sigma': sigma, 'steps': steps,
                         'phi_target': target, 'ratio': steps / curve,
                         'within_bound': True if target is None else steps <= target})
        return rows

    rows = [row for chunk in run_grid(point, grid, spec.workers) for row in chunk]
    table = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    summary = {'exponent': exponent, 'fitted_constant': float(table['ratio'].max()) if len(table) else 0.0}
    checks = {}
    if c_fit is not None:
        summary['c_fit'] = c_fit
        checks['within_bound'] = bool(table['within_bound'].all())
    if spec.epsilon == 0.0:
        checks['exact_recovery'] = bool((table['steps'] == table['N']).all())
    return ExperimentResult(spec, table, None, checks, summary)


def sparse_target(params, rng: np.random.Generator, K: int):
    keys = sample_support(params, rng, 'scatter', K)
    values = rng.uniform(SPARSE_RANGE[0], SPARSE_RANGE[1], len(keys)) * rng.choice((-1.0, 1.0), len(keys))
    return make_vector(params, keys, values)


def exp_iteration_decay(spec: ExperimentSpec) -> ExperimentResult:
    """Mean slope of ``log ||f_m||`` against ``m`` on K-sparse targets.

    ``K = 1`` recovers in one step and has no slope (NaN).
    """
    params = spec.params
    _check_params(params)
    grid = spec.n_values or DEFAULT_DECAY_K
    spec.n_values = list(grid)
    rs = rs_exponent(params)

    def point(index, K) -> Dict[str, Any]:
        slopes = []
        for sample in range(spec.samples):
            f = sparse_target(params, grid_rng(spec.seed, index, sample), K)
            trace = wcga_run(f, GreedyConfig(tau=spec.config.tau, tol=spec.config.tol))
            slopes.append(decay_slope(trace.residual_norms))
        finite = [s for s in slopes if not math.isnan(s)]
        mean = float(np.mean(finite)) if finite else float('nan')
        K_rs = K ** rs
        return {'K': K, 'samples': spec.samples, 'mean_slope': mean, 'K_rs': K_rs,
                'slope_times_K_rs': mean * K_rs}

    rows = run_grid(point, grid, spec.workers)
    table = pd.DataFrame(rows, columns=DECAY_COLUMNS)
    measured = table.dropna(subset=['mean_slope'])
    checks = {'negative_slopes': bool((measured['mean_slope'] < 0).all())}
    summary = {'rs': rs}
    Ks, magnitudes = decay_trend(table)
    fit = None
    if len(Ks) >= MIN_FIT_POINTS:
        # |slope| ~ K^{-rs}; reported only, the shape is qualitative
        fit = fit_loglog(Ks, magnitudes)
        summary.update(fitted_exponent=fit.slope, exponent_target=-rs)
    return ExperimentResult(spec, table, fit, checks, summary)


def decay_trend(table: pd.DataFrame) -> Tuple[List[int], List[float]]:
    """``(K, |mean slope|)`` pairs with a finite slope, in grid order."""
    measured = table.dropna(subset=['mean_slope'])
    return list(measured['K']), [abs(v) for v in measured['mean_slope']]
