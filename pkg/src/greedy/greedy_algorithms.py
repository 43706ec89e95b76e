"""
Weak Chebyshev Greedy Algorithm and Thresholding Greedy Algorithm.

Both run over the canonical dictionary of the ambient space. WCGA picks,
at every step, an index whose norming coefficient ``|F_{f_n}(e_i)|`` is at
least ``tau`` times the largest one, then replaces the approximant by the
best approximation from all selected coordinates. TGA keeps the largest
coefficients by modulus.
"""

import bisect
import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Hashable, Iterable, List, Optional, Tuple

import numpy as np

from src.errors import MaxIterExceeded, ParamError
from src.solvers.chebyshev import DictionaryElement, chebyshev_project
from src.spaces.base import CoefficientVector
from src.spaces.dyadic import Rectangle
from src.spaces.fpq_space import StructuredFamily

logger = logging.getLogger(__name__)

TIE_BREAKS = ('lexicographic', 'prefer_block_A', 'prefer_block_B')
CHEBYSHEV_MODES = ('lattice_exact', 'iterative')
TIE_TOL = 1e-12


@dataclass
class GreedyConfig:
    """Run parameters for :func:`wcga_run`.

    ``blocks`` maps indices to block labels ('A' / 'B') for the adversarial
    tie-breaks. ``target_norm`` stops the run as soon as the residual norm
    drops to it.
    """

    tau: float = 1.0
    tol: float = 1e-10
    max_steps: Optional[int] = None
    tie_break: str = 'lexicographic'
    chebyshev_mode: str = 'lattice_exact'
    blocks: Optional[Dict[Hashable, str]] = None
    target_norm: Optional[float] = None
    store_approximants: bool = False
    solver_tol: Optional[float] = None
    solver_max_iter: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.tau <= 1.0:
            raise ParamError(f"tau must lie in (0, 1], got {self.tau}")
        if self.tol < 0:
            raise ParamError(f"tol must be >= 0, got {self.tol}")
        if self.max_steps is not None and self.max_steps < 0:
            raise ParamError(f"max_steps must be >= 0, got {self.max_steps}")
        if self.tie_break not in TIE_BREAKS:
            raise ParamError(f"unknown tie_break {self.tie_break!r}, expected one of {TIE_BREAKS}")
        if self.chebyshev_mode not in CHEBYSHEV_MODES:
            raise ParamError(f"unknown chebyshev_mode {self.chebyshev_mode!r}, expected one of {CHEBYSHEV_MODES}")
        if self.tie_break != 'lexicographic' and self.blocks is None:
            raise ParamError(f"tie_break={self.tie_break} needs block labels")

    @property
    def preferred_block(self) -> Optional[str]:
        return {'prefer_block_A': 'A', 'prefer_block_B': 'B'}.get(self.tie_break)


def key_to_json(key: Hashable) -> Any:
    if isinstance(key, Rectangle):
        return key.to_json()
    return list(key) if isinstance(key, tuple) else key


@dataclass
class GreedyTrace:
    """Record of a greedy run.

    ``residual_norms[n]`` is ``||f_n||``; ``residual_norms[0] = ||f||``.
    ``functional_values[n]`` and ``functional_sups[n]`` hold the selected
    norming coefficient and the largest candidate one at step ``n + 1``.
    """

    algorithm: str
    selected: List[Hashable] = field(default_factory=list)
    residual_norms: List[float] = field(default_factory=list)
    terminated_reason: str = ''
    functional_values: List[float] = field(default_factory=list)
    functional_sups: List[float] = field(default_factory=list)
    approximants: Optional[List[Dict[Hashable, float]]] = None

    @property
    def steps(self) -> int:
        return len(self.selected)

    @property
    def final_norm(self) -> float:
        return self.residual_norms[-1]

    def steps_to(self, threshold: float) -> Optional[int]:
        """Smallest ``m`` with ``||f_m|| <= threshold``; None if never reached."""
        for m, value in enumerate(self.residual_norms):
            if value <= threshold:
                return m
        return None

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'algorithm': self.algorithm,
            'selected': [key_to_json(k) for k in self.selected],
            'residual_norms': [float(v) for v in self.residual_norms],
            'terminated': self.terminated_reason,
        }
        if self.approximants is not None:
            data['approximants'] = [
                [{'index': key_to_json(k), 'v': v} for k, v in step.items()] for step in self.approximants
            ]
        return data

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _block_labels(keys: Tuple[Hashable, ...], blocks: Optional[Dict[Hashable, str]]) -> np.ndarray:
    if not blocks:
        return np.full(len(keys), '', dtype=object)
    return np.array([blocks.get(k, '') for k in keys], dtype=object)


def _select(magnitudes: np.ndarray, available: np.ndarray, labels: np.ndarray,
            config: GreedyConfig) -> Tuple[Optional[int], float]:
    """Index of the next selection and the candidate supremum.

    Eligible indices clear ``tau * sup`` at relative tolerance ``TIE_TOL``;
    the first eligible key in sorted order wins, restricted to the preferred
    block when that block has an eligible index.
    """
    masked = np.where(available, magnitudes, -1.0)
    top = float(masked.max()) if len(masked) else -1.0
    if top <= 0.0:
        return None, max(top, 0.0)
    eligible = np.flatnonzero(masked >= config.tau * top * (1.0 - TIE_TOL))
    block = config.preferred_block
    if block is not None:
        preferred = eligible[labels[eligible] == block]
        if len(preferred):
            eligible = preferred
    return int(eligible[0]), top


def wcga_run(f: CoefficientVector, config: GreedyConfig = None,
             candidates: Optional[Iterable[Hashable]] = None) -> GreedyTrace:
    """Run the WCGA on ``f`` over the canonical dictionary.

    Args:
        f: Target vector.
        config: Run parameters; defaults to ``GreedyConfig()``.
        candidates: Indices the selection may use; defaults to ``supp(f)``.
            Norming coefficients vanish off the support, so the default loses
            nothing.

    Returns:
        GreedyTrace with one residual norm per step.
    """
    config = config or GreedyConfig()
    trace = GreedyTrace('wcga', approximants=[] if config.store_approximants else None)
    f_norm = f.norm()
    trace.residual_norms.append(f_norm)
    if f.is_zero():
        trace.terminated_reason = 'zero_residual'
        return trace
    if config.target_norm is not None and f_norm <= config.target_norm:
        trace.terminated_reason = 'target_met'
        return trace

    if candidates is None:
        keys = f.keys
        available = np.ones(len(keys), dtype=bool)
    else:
        wanted = {f._normalize_key(k) for k in candidates}
        keys = tuple(sorted(set(f.keys) | wanted))
        available = np.array([k in wanted for k in keys], dtype=bool)
    kernel = f.kernel_for(keys) if keys != f.keys else f.kernel()
    labels = _block_labels(keys, config.blocks)
    target = f.aligned(keys)
    residual = target.copy()
    max_steps = int(available.sum()) if config.max_steps is None else config.max_steps
    coefficients = np.zeros(0)
    logger.debug(f"wcga start: |supp|={len(f)}, tau={config.tau}, tie_break={config.tie_break}")

    norm = f_norm
    while True:
        if trace.steps >= max_steps:
            trace.terminated_reason = 'max_steps'
            break
        magnitudes = np.abs(kernel.norming(residual))
        pick, top = _select(magnitudes, available, labels, config)
        if pick is None:
            trace.terminated_reason = 'candidates_exhausted'
            break
        available[pick] = False
        trace.selected.append(keys[pick])
        trace.functional_values.append(float(magnitudes[pick]))
        trace.functional_sups.append(top)

        if config.chebyshev_mode == 'lattice_exact':
            residual[pick] = 0.0
            new_norm = kernel.norm(residual)
        else:
            elements = [DictionaryElement.canonical(f, k) for k in trace.selected]
            try:
                result = chebyshev_project(f, elements, tol=config.solver_tol,
                                           max_iter=config.solver_max_iter, warm_start=coefficients)
            except MaxIterExceeded as e:
                logger.warning(f"wcga step {trace.steps}: {e}; using the best iterate")
                result = e.result
            coefficients = result.coefficients
            residual = result.residual.aligned(keys)
            new_norm = result.residual_norm
        # nested subspaces: the projection never increases the distance
        norm = min(norm, new_norm)
        trace.residual_norms.append(norm)
        if trace.approximants is not None:
            if config.chebyshev_mode == 'lattice_exact':
                coefficients = np.array([f.get(k) for k in trace.selected])
            trace.approximants.append({k: float(c) for k, c in zip(trace.selected, coefficients)})
        logger.debug(f"wcga step {trace.steps}: picked {keys[pick]}, |F|={magnitudes[pick]:.6e}, "
                     f"residual={norm:.6e}")

        if norm <= config.tol * f_norm:
            trace.terminated_reason = 'zero_residual'
            break
        if config.target_norm is not None and norm <= config.target_norm:
            trace.terminated_reason = 'target_met'
            break
    return trace


def tga_order(f: CoefficientVector) -> np.ndarray:
    """Positions of ``f``'s coefficients by decreasing modulus, ties in key order."""
    return np.argsort(-np.abs(f.values), kind='stable')


def tga_residual_norm(f: CoefficientVector, k: int, order: np.ndarray = None) -> float:
    order = tga_order(f) if order is None else order
    values = f.values.copy()
    values[order[:k]] = 0.0
    return f.kernel().norm(values)


def tga_run(f: CoefficientVector, N: int) -> GreedyTrace:
    """Keep the ``N`` largest coefficients; the trace records every prefix."""
    if N < 0:
        raise ParamError(f"N must be >= 0, got {N}")
    trace = GreedyTrace('tga')
    trace.residual_norms.append(f.norm())
    order = tga_order(f)
    values = f.values.copy()
    kernel = f.kernel()
    for pos in order[:N]:
        trace.selected.append(f.keys[pos])
        trace.functional_values.append(abs(float(values[pos])))
        values[pos] = 0.0
        trace.residual_norms.append(kernel.norm(values) if len(values) else 0.0)
    trace.terminated_reason = 'zero_residual' if N >= len(f) else 'max_steps'
    return trace


@dataclass
class StructuredTrace:
    """WCGA run on ``a 1_{A_n} + b 1_{B_m}`` tracked in closed form.

    ``selections`` lists runs of consecutive picks as ``(block, count)``.
    """

    steps: int
    selections: List[Tuple[str, int]]
    initial_norm: float
    final_norm: float
    terminated_reason: str
    family: StructuredFamily

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['family'] = {'n': self.family.n, 'm_vec': list(self.family.m_vec), 'a': self.family.a,
                          'b': self.family.b, 'removed_b': self.family.removed_b}
        return data


def _first_block_lexicographic(family: StructuredFamily) -> str:
    d = family.params.d
    a_first = Rectangle.from_levels((1,) * (d - 1) + (family.n - d + 1,), (0,) * d)
    b_first = Rectangle.from_levels(family.m_vec, [1 << (m - 1) for m in family.m_vec])
    return 'A' if a_first < b_first else 'B'


def wcga_structured_run(family: StructuredFamily, config: GreedyConfig = None) -> StructuredTrace:
    """WCGA on a structured family without materialising the rectangles.

    Removing B rectangles leaves ``S_q`` constant on both half-cubes, so
    the ratio of the A and B norming coefficients never changes and the
    block chosen at the first step is chosen until B runs out. The number
    of steps to the target norm is found by bisection on the closed form.

    Only the B stretch is simulated: once B is exhausted the run stops with
    ``terminated_reason='structured_limit'`` and the residual ``a 1_{A_n}``,
    even if the target is not met. Continuing into A needs the
    materialised run.

    Raises:
        ParamError: if the selection rule picks A first; the closed form
            only covers B-first orders (use ``family.to_vector()`` and
            :func:`wcga_run` for small instances).
    """
    config = config or GreedyConfig(tie_break='prefer_block_B', blocks={})
    initial = family.norm()
    if config.target_norm is not None and initial <= config.target_norm:
        return StructuredTrace(0, [], initial, initial, 'target_met', family)

    coeffs = {'A': family.coeff_a(), 'B': family.coeff_b()}
    top = max(coeffs.values())
    eligible = [blk for blk in ('A', 'B') if coeffs[blk] > 0 and coeffs[blk] >= config.tau * top * (1 - TIE_TOL)]
    block = config.preferred_block
    if block not in eligible:
        block = eligible[0] if len(eligible) == 1 else _first_block_lexicographic(family)
    if block == 'A':
        raise ParamError("the structured WCGA only follows B-first selection orders")

    limit = family.remaining_b
    if config.max_steps is not None:
        limit = min(limit, config.max_steps)
    target = config.target_norm if config.target_norm is not None else config.tol * initial
    norms = _StructuredNorms(family)
    k = bisect.bisect_left(norms, -target, lo=0, hi=limit + 1)
    if k > limit:
        k = limit
        reason = 'max_steps' if config.max_steps is not None and limit == config.max_steps else 'structured_limit'
    else:
        reason = 'target_met' if config.target_norm is not None else 'zero_residual'
    final = family.remove_b(k)
    logger.info(f"structured wcga: n={family.n}, m={family.m}, {k} B-steps, reason={reason}")
    return StructuredTrace(k, [('B', k)] if k else [], initial, final.norm(), reason, final)


class _StructuredNorms:
    """Negated residual norms after k B-removals, increasing in k for bisect."""

    def __init__(self, family: StructuredFamily):
        self.family = family

    def __len__(self) -> int:
        return self.family.remaining_b + 1

    def __getitem__(self, k: int) -> float:
        return -self.family.remove_b(k).norm()

