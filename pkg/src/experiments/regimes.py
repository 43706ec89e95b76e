"""
TGA against WCGA on l^p(l^q): analytic exponents and measured step counts.

The WCGA needs about ``N^beta`` steps with ``beta = max(p'/q', q'/p')``,
the TGA about ``N^b`` with ``b = max(p/q, q/p)``; ``beta <= b`` exactly
when ``q >= p'`` (or ``q = p``).
"""

import logging
import math
from typing import Any, Dict, List, Tuple

import numpy as np
import pandas as pd

from src.experiments.harness import ExperimentResult, ExperimentSpec, run_grid
from src.greedy.best_n_term import recovery_steps, sigma_n_symmetric_blocks, tga_recovery_steps
from src.greedy.greedy_algorithms import GreedyConfig
from src.spaces.lpq_space import (PSI_VARIANTS, LpqParams, LpqVector, build_psi_vector,
                                  psi_block_sizes, psi_blocks)

logger = logging.getLogger(__name__)

DEFAULT_P = (1.25, 1.5, 2.0, 3.0, 4.0)
DEFAULT_Q = (2.0, 2.5, 3.0, 4.0, 5.0)
DEFAULT_N = 8
# Lifts one block above the other so the TGA order is fixed.
BUMP = 1e-6
# Measured counts must differ by this factor before a winner is declared.
SEPARATION = 2.0
EXPONENT_TOL = 1e-12

COLUMNS = ['p', 'q', 'beta', 'b', 'winner', 'wcga_not_worse', 'wcga_steps', 'tga_steps',
           'measured_winner', 'agrees']


def analytic_winner(params: LpqParams) -> str:
    if abs(params.beta - params.b) <= EXPONENT_TOL:
        return 'tie'
    return 'WCGA' if params.beta < params.b else 'TGA'


def wcga_not_worse(params: LpqParams) -> bool:
    """``q >= p'`` or ``q = p``."""
    return params.q >= params.p_conj * (1.0 - EXPONENT_TOL) or params.q == params.p


def _family_row_heavy(params: LpqParams, N: int) -> Tuple[LpqVector, Dict, str]:
    """p > q: ``ceil(N^{p/q})`` slightly larger singletons plus one row of N ones."""
    size = int(math.ceil(N ** (params.p / params.q)))
    keys = [(j, 1) for j in range(1, size + 1)] + [(size + 1, k) for k in range(1, N + 1)]
    values = np.concatenate([np.full(size, 1.0 + BUMP), np.ones(N)])
    blocks = {key: ('D' if key[1] == 1 and key[0] <= size else 'R') for key in keys}
    return LpqVector(params, keys, values), blocks, 'lexicographic'


def _family_column_heavy(params: LpqParams, N: int) -> Tuple[LpqVector, Dict, str]:
    """p < q: one row of ``ceil(N^{q/p})`` slightly larger entries plus 2N singletons."""
    size = int(math.ceil(N ** (params.q / params.p)))
    keys = [(1, k) for k in range(1, size + 1)] + [(j, 1) for j in range(2, 2 * N + 2)]
    values = np.concatenate([np.full(size, 1.0 + BUMP), np.ones(2 * N)])
    blocks = {key: ('R' if key[0] == 1 else 'D') for key in keys}
    return LpqVector(params, keys, values), blocks, 'lexicographic'


def _family_psi(params: LpqParams, N: int) -> Tuple[LpqVector, Dict, str]:
    variant = PSI_VARIANTS[0]
    m, _ = psi_block_sizes(params, N, variant)
    return build_psi_vector(params, m, N, variant), psi_blocks(m, N, variant), 'prefer_block_A'


def regime_families(params: LpqParams, N: int) -> List[Tuple[str, LpqVector, Dict, str]]:
    """Named test vectors with their block labels and the WCGA tie-break to use."""
    families = [('psi',) + _family_psi(params, N)]
    if params.p > params.q:
        families.append(('row_heavy',) + _family_row_heavy(params, N))
    elif params.p < params.q:
        families.append(('column_heavy',) + _family_column_heavy(params, N))
    return families


def regime_point(p: float, q: float, N: int, C: float = 1.0) -> Dict[str, Any]:
    params = LpqParams(p, q)
    wcga_worst, tga_worst = 0, 0
    for name, x, blocks, tie_break in regime_families(params, N):
        sigma, _ = sigma_n_symmetric_blocks(x, blocks, N)
        config = GreedyConfig(tie_break=tie_break, blocks=blocks if tie_break != 'lexicographic' else None)
        wcga = recovery_steps(x, N, C, config, sigma=sigma, sigma_method='symmetric_blocks')
        tga = tga_recovery_steps(x, N, C, sigma=sigma, sigma_method='symmetric_blocks')
        wcga_steps = wcga.steps_needed if wcga.recovered else len(x)
        tga_steps = tga.steps_needed if tga.recovered else len(x)
        logger.debug(f"regime ({p}, {q}) {name}: wcga={wcga_steps} tga={tga_steps}")
        wcga_worst = max(wcga_worst, wcga_steps)
        tga_worst = max(tga_worst, tga_steps)
    if wcga_worst * SEPARATION <= tga_worst:
        measured = 'WCGA'
    elif tga_worst * SEPARATION <= wcga_worst:
        measured = 'TGA'
    else:
        measured = 'unresolved'
    winner = analytic_winner(params)
    agrees = measured == 'unresolved' or winner == 'tie' or measured == winner
    return {'p': p, 'q': q, 'beta': params.beta, 'b': params.b, 'winner': winner,
            'wcga_not_worse': wcga_not_worse(params), 'wcga_steps': wcga_worst,
            'tga_steps': tga_worst, 'measured_winner': measured, 'agrees': bool(agrees)}


def exp_tga_vs_wcga(spec: ExperimentSpec) -> ExperimentResult:
    grid = spec.pq_grid or [(p, q) for p in DEFAULT_P for q in DEFAULT_Q]
    spec.pq_grid = [tuple(pq) for pq in grid]
    N = spec.n_values[0] if spec.n_values else DEFAULT_N
    spec.n_values = [N]
    logger.info(f"tga-vs-wcga over {len(grid)} exponent pairs at N={N}")
    rows = run_grid(lambda index, pq: regime_point(pq[0], pq[1], N, spec.C), grid, spec.workers)
    table = pd.DataFrame(rows, columns=COLUMNS)
    checks = {'analytic_matches_measured': bool(table['agrees'].all())}
    summary = {'N': N, 'resolved': int((table['measured_winner'] != 'unresolved').sum())}
    return ExperimentResult(spec, table, None, checks, summary)
