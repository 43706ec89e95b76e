"""
Best N-term approximation oracles and Lebesgue-count measurement.

Both spaces are monotone lattices, so the best approximant supported on a
set ``S`` is ``f`` restricted to ``S`` and ``sigma_N(f)`` reduces to a
search over supports.
"""

import itertools
import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.config import get_sigma_support_limit
from src.errors import ParamError, SupportTooLarge
from src.greedy.greedy_algorithms import (GreedyConfig, tga_order, tga_residual_norm,
                                          wcga_run)
from src.spaces.base import CoefficientVector

logger = logging.getLogger(__name__)

SIGMA_METHODS = ('bruteforce', 'greedy_upper', 'symmetric_blocks', 'override')
# Residual norms are compared against C * sigma with this relative slack.
TARGET_SLACK = 1e-12


def sigma_n_bruteforce(f: CoefficientVector, N: int, limit: int = None) -> Tuple[float, frozenset]:
    """Exact ``sigma_N(f)`` and an optimal approximant support.

    Supports are enumerated in lexicographic order of positions; the first
    minimiser is returned.

    Raises:
        SupportTooLarge: if ``|supp(f)|`` exceeds the guard.
    """
    if N < 0:
        raise ParamError(f"N must be >= 0, got {N}")
    size = len(f)
    if N >= size:
        return 0.0, frozenset(f.keys)
    limit = get_sigma_support_limit() if limit is None else limit
    if size > limit:
        raise SupportTooLarge(size, limit)
    kernel = f.kernel()
    best_value, best_set = math.inf, ()
    values = f.values
    for chosen in itertools.combinations(range(size), N):
        trial = values.copy()
        trial[list(chosen)] = 0.0
        value = kernel.norm(trial)
        if value < best_value:
            best_value, best_set = value, chosen
    logger.debug(f"sigma_{N} over {math.comb(size, N)} supports = {best_value:.6e}")
    return float(best_value), frozenset(f.keys[i] for i in best_set)


def sigma_n_greedy_upper(f: CoefficientVector, N: int) -> float:
    """``||f - (N largest coefficients)||``, an upper bound for ``sigma_N``."""
    if N < 0:
        raise ParamError(f"N must be >= 0, got {N}")
    if N >= len(f):
        return 0.0
    return tga_residual_norm(f, N)


def sigma_n_symmetric_blocks(f: CoefficientVector, blocks: Dict[Hashable, str], N: int) -> Tuple[float, Dict[str, int]]:
    """Exact ``sigma_N`` for vectors whose norm only depends on how many
    entries of each block are removed.

    This holds for the lower-bound constructions (every entry of a block
    has the same modulus and the same position type), so the search runs
    over removal counts per block instead of over supports. Returns the
    value and the optimal removal counts.
    """
    groups: Dict[str, List[int]] = {}
    for pos, key in enumerate(f.keys):
        label = blocks.get(key)
        if label is None:
            raise ParamError(f"index {key} has no block label")
        groups.setdefault(label, []).append(pos)
    if N >= len(f):
        return 0.0, {label: len(pos) for label, pos in groups.items()}
    labels = sorted(groups)
    kernel = f.kernel()
    best_value, best_counts = math.inf, {}
    for counts in _removal_counts([len(groups[label]) for label in labels], N):
        trial = f.values.copy()
        for label, count in zip(labels, counts):
            trial[groups[label][:count]] = 0.0
        value = kernel.norm(trial)
        if value < best_value:
            best_value, best_counts = value, dict(zip(labels, counts))
    return float(best_value), best_counts


def _removal_counts(sizes: Sequence[int], total: int):
    if len(sizes) == 1:
        if total <= sizes[0]:
            yield (total,)
        return
    for first in range(min(sizes[0], total) + 1):
        for rest in _removal_counts(sizes[1:], total - first):
            yield (first,) + rest


@dataclass
class RecoveryMeasurement:
    """Smallest step count ``m`` with ``||f_m|| <= C sigma_N(f)``.

    ``steps_needed`` is None when the run ended before reaching the target.
    """

    N: int
    C: float
    sigma_N: float
    steps_needed: Optional[int]
    sigma_method: str
    algorithm: str = 'wcga'
    final_norm: float = 0.0
    terminated_reason: str = ''

    @property
    def recovered(self) -> bool:
        return self.steps_needed is not None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _resolve_sigma(f: CoefficientVector, N: int, sigma: Optional[float],
                   sigma_method: Optional[str]) -> Tuple[float, str]:
    if sigma is not None:
        return float(sigma), sigma_method or 'override'
    value, _ = sigma_n_bruteforce(f, N)
    return value, 'bruteforce'


def recovery_target(f_norm: float, sigma: float, C: float, tol: float) -> float:
    return max(C * sigma * (1.0 + TARGET_SLACK), tol * f_norm)


def recovery_steps(f: CoefficientVector, N: int, C: float = 1.0, config: GreedyConfig = None,
                   sigma: Optional[float] = None, sigma_method: Optional[str] = None) -> RecoveryMeasurement:
    """Run the WCGA until ``||f_m|| <= C sigma_N(f)``.

    Args:
        f: Target vector.
        N: Sparsity level of the comparison.
        C: Lebesgue constant, ``>= 1``.
        config: WCGA parameters; ``target_norm`` is overwritten.
        sigma: Known ``sigma_N(f)``; computed by brute force when omitted.
        sigma_method: Label recorded for an overridden sigma.

    Raises:
        SupportTooLarge: if sigma must be brute-forced on a large support.
    """
    if C < 1.0:
        raise ParamError(f"C must be >= 1, got {C}")
    sigma, method = _resolve_sigma(f, N, sigma, sigma_method)
    base = config or GreedyConfig()
    target = recovery_target(f.norm(), sigma, C, base.tol)
    run_config = GreedyConfig(**{**base.__dict__, 'target_norm': target})
    trace = wcga_run(f, run_config)
    steps = trace.steps_to(target)
    if steps is None:
        logger.warning(f"wcga did not reach C*sigma_{N}={target:.6e} ({trace.terminated_reason})")
    return RecoveryMeasurement(N, C, sigma, steps, method, 'wcga', trace.final_norm, trace.terminated_reason)


def tga_recovery_steps(f: CoefficientVector, N: int, C: float = 1.0, sigma: Optional[float] = None,
                       sigma_method: Optional[str] = None, tol: float = 1e-10) -> RecoveryMeasurement:
    """Smallest ``k`` whose TGA residual is within ``C sigma_N``.

    TGA residuals are nonincreasing in ``k``, so ``k`` is found by
    bisection instead of running every prefix.
    """
    if C < 1.0:
        raise ParamError(f"C must be >= 1, got {C}")
    sigma, method = _resolve_sigma(f, N, sigma, sigma_method)
    target = recovery_target(f.norm(), sigma, C, tol)
    order = tga_order(f)
    lo, hi = 0, len(f)
    while lo < hi:
        mid = (lo + hi) // 2
        if tga_residual_norm(f, mid, order) <= target:
            hi = mid
        else:
            lo = mid + 1
    final = tga_residual_norm(f, lo, order)
    steps = lo if final <= target else None
    return RecoveryMeasurement(N, C, sigma, steps, method, 'tga', final, 'target_met' if steps is not None else 'max_steps')


def decay_slope(residual_norms: Sequence[float]) -> float:
    """Least-squares slope of ``log ||f_m||`` against ``m`` over the nonzero prefix."""
    norms = np.asarray(residual_norms, dtype=float)
    positive = norms[norms > 0]
    if len(positive) < 2:
        return float('nan')
    slope, _ = np.polyfit(np.arange(len(positive)), np.log(positive), 1)
    return float(slope)
