"""
Lower-bound constructions: vectors on which the WCGA provably needs many
more than ``N`` steps to reach ``C sigma_N``.

l^p(l^q): ``1_A + n^alpha 1_B`` with A spread over ``m`` rows and B in a
single row, every coordinate carrying the same norming coefficient.
f_{p,q}: ``a 1_{A_n} + b 1_{B_m}`` with A the rectangles of measure
``2^-n`` in the lower-left cube and B one shape in the upper-right cube,
evaluated in closed form.
"""

import logging
import math
from typing import Any, Dict, Hashable, List, Optional

import pandas as pd

from src.errors import ParamError
from src.experiments.harness import ExperimentResult, ExperimentSpec, fit_loglog, run_grid
from src.greedy.best_n_term import TARGET_SLACK, recovery_target, sigma_n_symmetric_blocks
from src.greedy.greedy_algorithms import GreedyConfig, wcga_run, wcga_structured_run
from src.spaces.fpq_space import FpqParams, StructuredFamily, tied_b_coefficient
from src.spaces.lpq_space import (PSI_VARIANTS, LpqParams, build_psi_vector, psi_block_sizes,
                                  psi_blocks)

logger = logging.getLogger(__name__)

LPQ_COLUMNS = ['n', 'm', 'psi', 'sigma', 'beta_target', 'N', 'variant', 'size_b', 'psi_bound', 'wasted_steps',
               'lower_bound_ok']
FPQ_COLUMNS = ['n', 'N', 'm', 'psi', 'psi_bound', 'sigma', 'log_N', 'psi_over_N', 'log_exponent_target']
FPQ_MAX_D = 3
DEFAULT_LPQ_GRID = list(range(4, 25))


def default_variant(params: LpqParams) -> str:
    """The construction whose step count grows like ``N^beta``."""
    return PSI_VARIANTS[0] if params.p_conj >= params.q_conj else PSI_VARIANTS[1]


def psi_lower_bound(params: LpqParams, n: int, variant: str) -> float:
    """Steps the WCGA provably needs on the size-``n`` construction.

    ``p_conj_ge_q_conj``: every row of A is taken before B, ``psi >= n^{p'/q'}``.
    ``q_conj_ge_p_conj``: after ``n`` entries of B the residual still
    exceeds ``||1_A|| >= sigma_m``, so ``psi >= n``.
    """
    if variant == PSI_VARIANTS[0]:
        return n ** (params.p_conj / params.q_conj)
    if variant == PSI_VARIANTS[1]:
        return float(n)
    raise ParamError(f"unknown variant {variant!r}, expected one of {PSI_VARIANTS}")


def lower_bound_holds(psi: Optional[int], bound: float) -> bool:
    return psi is not None and psi >= bound * (1.0 - 1e-9)


def wasted_steps(selected: List[Hashable], blocks: Dict[Hashable, str], block: str) -> int:
    """Length of the opening run of selections inside ``block``."""
    count = 0
    for key in selected:
        if blocks.get(key) != block:
            break
        count += 1
    return count


def lpq_lower_point(params: LpqParams, n: int, variant: str, C: float = 1.0,
                    tau: float = 1.0, tol: float = 1e-10) -> Dict[str, Any]:
    """One row of the l^p(l^q) lower bound.

    With ``p' >= q'`` the comparison sparsity is ``N = n`` and ties go to A;
    otherwise ``N = m`` and ties go to B. ``wasted_steps`` counts the steps
    spent on the tie-preferred block before the greedy first leaves it,
    which is the quantity the lower bound is about.
    """
    m, size_b = psi_block_sizes(params, n, variant)
    x = build_psi_vector(params, m, n, variant)
    blocks = psi_blocks(m, n, variant)
    first = variant == PSI_VARIANTS[0]
    N = n if first else m
    sigma, _ = sigma_n_symmetric_blocks(x, blocks, N)
    config = GreedyConfig(tau=tau, tol=tol, tie_break='prefer_block_A' if first else 'prefer_block_B',
                          blocks=blocks)
    target = recovery_target(x.norm(), sigma, C, tol)
    trace = wcga_run(x, GreedyConfig(**{**config.__dict__, 'target_norm': target}))
    psi = trace.steps_to(target)
    wasted = wasted_steps(trace.selected, blocks, config.preferred_block)
    bound = psi_lower_bound(params, n, variant)
    ok = lower_bound_holds(psi, bound)
    logger.debug(f"lpq lower n={n}: m={m}, N={N}, psi={psi}, wasted={wasted}, sigma={sigma:.6e}")
    return {'n': n, 'm': m, 'psi': psi, 'sigma': sigma, 'beta_target': params.beta, 'N': N,
            'variant': variant, 'size_b': size_b, 'psi_bound': bound, 'wasted_steps': wasted,
            'lower_bound_ok': bool(ok)}


def exp_lpq_lower(spec: ExperimentSpec) -> ExperimentResult:
    """Lower-bound rows over ``n``; the fit is ``log wasted_steps`` against ``log N``."""
    params = spec.params
    if not isinstance(params, LpqParams):
        raise ParamError("lpq-lower needs l^p(l^q) parameters")
    variant = spec.variant or default_variant(params)
    if variant not in PSI_VARIANTS:
        raise ParamError(f"unknown variant {variant!r}, expected one of {PSI_VARIANTS}")
    spec.variant = variant
    grid = spec.n_values or DEFAULT_LPQ_GRID
    spec.n_values = list(grid)
    logger.info(f"lpq-lower {params!r} variant={variant} over {len(grid)} sizes")

    def point(index, n):
        return lpq_lower_point(params, n, variant, spec.C, spec.config.tau, spec.config.tol)

    rows = run_grid(point, grid, spec.workers)
    table = pd.DataFrame(rows, columns=LPQ_COLUMNS)
    complete = table.dropna(subset=['psi'])
    fit = None
    if len(complete) >= 4:
        fit = fit_loglog(complete['N'], complete['wasted_steps'].astype(float))
    checks = {'lower_bound_rows': bool(table['lower_bound_ok'].all())}
    summary = {'beta': params.beta, 'exponent_target': params.beta, 'variant': variant}
    if fit is not None:
        summary['fitted_exponent'] = fit.slope
    return ExperimentResult(spec, table, fit, checks, summary)


def _fpq_b_shape(params: FpqParams, psi_bound: float, C: float) -> tuple:
    """``m_vec = (m - d + 1, 1, ..., 1)`` with ``|B_m| = 2^{m-d}`` just above ``psi / C^p``."""
    d = params.d
    needed = psi_bound / C ** params.p
    exponent = max(1, int(math.floor(math.log2(needed))) + 1)
    while 2.0 ** exponent <= needed:
        exponent += 1
    return (exponent + 1,) + (1,) * (d - 1)


def fpq_lower_point(params: FpqParams, n: int, C: float = 1.0, tau: float = 1.0) -> Dict[str, Any]:
    """One row of the f_{p,q} lower bound, computed on the closed form.

    ``b`` ties the A and B norming coefficients; the WCGA (ties to B)
    strips B one rectangle at a time while ``sigma_N`` could drop A.
    """
    a = 1.0
    b = tied_b_coefficient(params, a, n)
    unit_shape = StructuredFamily(params, a, n, b, (1,) * params.d)
    psi_bound = unit_shape.mass_a() / unit_shape.mass_b_each()
    m_vec = _fpq_b_shape(params, psi_bound, C)
    family = StructuredFamily(params, a, n, b, m_vec)
    N = family.size_a
    drop_a = family.norm_b()
    drop_b = (family.mass_a() + max(family.size_b - N, 0) * family.mass_b_each()) ** (1.0 / params.p)
    sigma = min(drop_a, drop_b)
    target = C * sigma * (1.0 + TARGET_SLACK)
    config = GreedyConfig(tau=tau, tie_break='prefer_block_B', blocks={}, target_norm=target)
    trace = wcga_structured_run(family, config)
    psi = trace.steps if trace.terminated_reason == 'target_met' else None
    log_n = math.log(N)
    logger.debug(f"fpq lower n={n}: N={N}, m={family.m}, psi={psi}")
    return {'n': n, 'N': N, 'm': family.m, 'psi': psi, 'psi_bound': psi_bound, 'sigma': sigma,
            'log_N': log_n, 'psi_over_N': (psi / N) if psi is not None else None,
            'log_exponent_target': params.lower_bound_log_exponent}


def exp_fpq_lower(spec: ExperimentSpec) -> ExperimentResult:
    """``psi(N) / N`` against ``log N``; the fitted slope targets ``p'(d-1)(1/p - 1/q)``."""
    params = spec.params
    if not isinstance(params, FpqParams):
        raise ParamError("fpq-lower needs f_(p,q) parameters")
    if params.p > params.q:
        raise ParamError(f"fpq-lower needs p <= q, got p={params.p}, q={params.q}")
    if params.d > FPQ_MAX_D:
        raise ParamError(f"fpq-lower supports d <= {FPQ_MAX_D}, got d={params.d}")
    grid = spec.n_values or list(range(max(6, params.d), 21))
    if min(grid) < params.d:
        raise ParamError(f"A_n needs n >= d={params.d}, got {min(grid)}")
    spec.n_values = list(grid)
    logger.info(f"fpq-lower {params!r} over n={grid[0]}..{grid[-1]}")

    rows = run_grid(lambda index, n: fpq_lower_point(params, n, spec.C, spec.config.tau), grid, spec.workers)
    table = pd.DataFrame(rows, columns=FPQ_COLUMNS)
    complete = table.dropna(subset=['psi'])
    fit = None
    if len(complete) >= 4:
        fit = fit_loglog(complete['log_N'], complete['psi_over_N'].astype(float))
    checks = {'all_recovered': bool(table['psi'].notna().all())}
    if spec.C == 1.0:
        checks['psi_at_least_N'] = bool((complete['psi'] >= complete['N']).all())
    summary = {'exponent_target': params.lower_bound_log_exponent}
    if fit is not None:
        summary['fitted_exponent'] = fit.slope
    return ExperimentResult(spec, table, fit, checks, summary)
