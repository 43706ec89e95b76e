"""
Tool functions over the library.

Every tool takes JSON-compatible arguments (vectors in the shared vector
schema), never raises, and returns a dict with ``'status'`` set to
``'success'`` or ``'error'``. The CLI and the MCP server both call these.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence

from src.checks.properties import CALIBRATED_CHECKS, CHECKS
from src.errors import GreedyLabError, ParamError
from src.experiments.calibration import calibrate, frozen_constant
from src.experiments.harness import ExperimentSpec, render
from src.experiments.runner import EXPERIMENTS, run_experiment
from src.greedy.best_n_term import sigma_n_bruteforce, sigma_n_greedy_upper
from src.greedy.greedy_algorithms import GreedyConfig, key_to_json, tga_run, wcga_run
from src.spaces.fpq_space import FpqParams
from src.spaces.haar import haar_coefficients, haar_lp_norm
from src.spaces.lpq_space import LpqParams
from src.spaces.vector_io import step_function_from_dict, vector_from_dict

logger = logging.getLogger(__name__)

SPACES = ('lpq', 'fpq', 'haar')
SIGMA_TOOL_METHODS = ('bruteforce', 'greedy_upper')


def _error(action: str, e: Exception) -> Dict[str, Any]:
    logger.error(f"Error in {action}: {e}")
    return {
        'error': f'Failed to {action}: {str(e)}',
        'error_type': type(e).__name__,
        'guard': isinstance(e, GreedyLabError),
        'status': 'error'
    }


def space_params(space: str, p: float, q: Optional[float] = None, d: int = 1):
    """Parameters for ``space``; the Haar space is f_{p,2}."""
    if space == 'lpq':
        return LpqParams(p, q)
    if space == 'fpq':
        return FpqParams(p, q, d)
    if space == 'haar':
        return FpqParams(p, 2.0, d)
    raise ParamError(f"unknown space {space!r}, expected one of {SPACES}")


def _vector_argument(vector: Dict[str, Any], p: Optional[float] = None, d: int = 1):
    """A coefficient vector, or a step function turned into Haar coefficients."""
    if 'grid_level' in vector:
        if p is None:
            raise ParamError("a step function needs p to be expanded in the Haar system")
        return haar_coefficients(step_function_from_dict(vector, d), p).coefficients
    return vector_from_dict(vector)


def compute_norm(vector: Dict[str, Any], p: Optional[float] = None, d: int = 1) -> Dict[str, Any]:
    """Norm of a vector, or Littlewood-Paley and L^p norms of a step function."""
    try:
        if 'grid_level' in vector:
            f = step_function_from_dict(vector, d)
            expansion = haar_coefficients(f, p)
            return {
                'norm': haar_lp_norm(expansion),
                'lp_norm': f.lp_norm(p),
                'coefficients': len(expansion.coefficients),
                'space': 'haar',
                'status': 'success'
            }
        x = vector_from_dict(vector)
        return {'norm': x.norm(), 'support': len(x), 'space': x.params.to_dict()['space'], 'status': 'success'}
    except Exception as e:
        return _error('compute norm', e)


def compute_norming_functional(vector: Dict[str, Any], other: Optional[Dict[str, Any]] = None,
                               p: Optional[float] = None, d: int = 1) -> Dict[str, Any]:
    """``F_x(e_i)`` for every ``i`` in ``supp(x)`` and, given ``other``, ``F_x(other)``."""
    try:
        x = _vector_argument(vector, p, d)
        coefficients = x.norming_coefficients()
        result = {
            'norm': x.norm(),
            'coefficients': [{'index': key_to_json(k), 'value': float(v)} for k, v in zip(x.keys, coefficients)],
            'status': 'success'
        }
        if other is not None:
            result['value'] = x.norming_apply(_vector_argument(other, p, d))
        return result
    except Exception as e:
        return _error('compute norming functional', e)


def _blocks_argument(x, blocks: Optional[Sequence[Dict[str, Any]]]):
    if blocks is None:
        return None
    return {x._normalize_key(entry['index']): str(entry['block']) for entry in blocks}


def run_wcga(vector: Dict[str, Any], tau: float = 1.0, tol: float = 1e-10, max_steps: Optional[int] = None,
             tie_break: str = 'lexicographic', chebyshev_mode: str = 'lattice_exact',
             blocks: Optional[List[Dict[str, Any]]] = None, target_norm: Optional[float] = None,
             store_approximants: bool = False) -> Dict[str, Any]:
    """Run the WCGA over the canonical dictionary.

    ``blocks`` is a list of ``{"index": ..., "block": "A"|"B"}`` entries for
    the adversarial tie-breaks.
    """
    try:
        x = vector_from_dict(vector)
        config = GreedyConfig(tau=tau, tol=tol, max_steps=max_steps, tie_break=tie_break,
                              chebyshev_mode=chebyshev_mode, blocks=_blocks_argument(x, blocks),
                              target_norm=target_norm, store_approximants=store_approximants)
        trace = wcga_run(x, config)
        logger.info(f"wcga finished after {trace.steps} steps ({trace.terminated_reason})")
        return {**trace.to_dict(), 'status': 'success'}
    except Exception as e:
        return _error('run WCGA', e)


def run_tga(vector: Dict[str, Any], N: int) -> Dict[str, Any]:
    try:
        trace = tga_run(vector_from_dict(vector), N)
        return {**trace.to_dict(), 'status': 'success'}
    except Exception as e:
        return _error('run TGA', e)


def compute_sigma(vector: Dict[str, Any], N: int, method: str = 'bruteforce') -> Dict[str, Any]:
    """Best N-term error: exact by enumeration, or the TGA upper bound."""
    try:
        x = vector_from_dict(vector)
        if method == 'bruteforce':
            value, support = sigma_n_bruteforce(x, N)
            return {'sigma': value, 'N': N, 'method': method,
                    'approximant_support': [key_to_json(k) for k in sorted(support)], 'status': 'success'}
        if method == 'greedy_upper':
            return {'sigma': sigma_n_greedy_upper(x, N), 'N': N, 'method': method, 'status': 'success'}
        raise ParamError(f"unknown sigma method {method!r}, expected one of {SIGMA_TOOL_METHODS}")
    except Exception as e:
        return _error('compute sigma_N', e)


def run_property_check(kind: str, space: str, p: float, q: Optional[float] = None, d: int = 1,
                       samples: Optional[int] = None, seed: int = 0, N: Optional[int] = None,
                       t_grid: Optional[List[float]] = None, s_override: Optional[float] = None,
                       c1_override: Optional[float] = None, gamma: Optional[float] = None,
                       frozen: bool = True) -> Dict[str, Any]:
    """Run one property checker; calibrated checks use the frozen constant unless ``frozen`` is off."""
    try:
        check = CHECKS.get(kind)
        if check is None:
            raise ParamError(f"unknown check {kind!r}, expected one of {sorted(CHECKS)}")
        params = space_params(space, p, q, d)
        kwargs: Dict[str, Any] = {}
        if kind != 'd-sharpness':
            kwargs['seed'] = seed
            if samples is not None:
                kwargs['samples'] = samples
        if N is not None and kind in ('a2', 'a3'):
            kwargs['N'] = N
        if t_grid is not None and kind in ('rho', 'd-sharpness'):
            kwargs['t_grid'] = t_grid
        if kind == 'd':
            kwargs.update(s_override=s_override, c1_override=c1_override, gamma=gamma)
        name = CALIBRATED_CHECKS.get(kind)
        if frozen and name and not (kind == 'a3' and isinstance(params, LpqParams)):
            kwargs['frozen_constant'] = frozen_constant(name, params)
        report = check(params, **kwargs)
        return {**report.to_dict(), 'status': 'success'}
    except Exception as e:
        return _error(f'run {kind} check', e)


def run_experiment_tool(name: str, space: Optional[str] = None, p: Optional[float] = None,
                        q: Optional[float] = None, d: int = 1, n_values: Optional[List[int]] = None,
                        pq_grid: Optional[List[List[float]]] = None, C: float = 1.0, seed: int = 0,
                        samples: int = 5, epsilon: float = 0.01, variant: Optional[str] = None,
                        tau: float = 1.0, tol: float = 1e-10, tie_break: str = 'lexicographic',
                        workers: int = 1, output: Optional[str] = None, fmt: str = 'csv') -> Dict[str, Any]:
    """Run an experiment; ``rendered`` holds the CSV or JSON text."""
    try:
        if name not in EXPERIMENTS:
            raise ParamError(f"unknown experiment {name!r}, expected one of {sorted(EXPERIMENTS)}")
        params = space_params(space, p, q, d) if space is not None else None
        spec = ExperimentSpec(
            name, params,
            n_values=list(n_values or []),
            pq_grid=[tuple(pq) for pq in (pq_grid or [])],
            config=GreedyConfig(tau=tau, tol=tol, tie_break=tie_break, blocks={} if tie_break != 'lexicographic' else None),
            C=C, seed=seed, samples=samples, epsilon=epsilon, variant=variant,
            workers=workers, output=output, fmt=fmt,
        )
        result = run_experiment(spec)
        return {
            'experiment': name,
            'passed': result.passed,
            'checks': result.checks,
            'fit': result.fit.to_dict() if result.fit else None,
            'summary': result.summary,
            'rows': len(result.table),
            'output': output,
            'rendered': render(result, fmt),
            'status': 'success'
        }
    except Exception as e:
        return _error(f'run experiment {name}', e)


def calibrate_constants(seed: int = 0, path: Optional[str] = None) -> Dict[str, Any]:
    try:
        constants = calibrate(seed, path)
        return {'constants': constants, 'seed': seed, 'status': 'success'}
    except Exception as e:
        return _error('calibrate constants', e)
