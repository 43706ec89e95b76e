"""
Best approximation from the span of finitely many dictionary elements.

For canonical dictionaries the minimiser is a coordinate restriction
(:func:`canonical_project`). For general unit-norm elements the convex map
``c -> ||f - sum_j c_j phi_j||`` is minimised by gradient descent with
Armijo backtracking; the partial derivative in ``c_j`` is
``-F_r(phi_j)`` where ``r`` is the current residual. Plain descent stalls
before the first-order certificate on norms that are only C^1 near a zero
coordinate, so descent alternates with coordinate sweeps that bisect each
coefficient on the sign of its partial derivative. A sweep comes first:
for canonical and orthonormal elements it lands on the minimiser directly.
"""

import logging
from dataclasses import dataclass, field
from typing import Hashable, Iterable, List, Optional, Sequence

import numpy as np

from src.config import get_chebyshev_max_iter, get_chebyshev_tol
from src.errors import MaxIterExceeded, ParamError, ZeroVector
from src.spaces.base import CoefficientVector, linear_combination, union_keys

logger = logging.getLogger(__name__)

UNIT_NORM_TOL = 1e-10
ARMIJO_SHRINK = 0.5
ARMIJO_DECREASE = 1e-4
MIN_STEP = 1e-300
# Float bisection between two doubles ends after at most ~2100 halvings.
BISECTION_LIMIT = 2200


@dataclass(frozen=True)
class DictionaryElement:
    """Unit-norm vector of the ambient space."""

    vector: CoefficientVector
    label: Optional[Hashable] = None

    def __post_init__(self):
        norm = self.vector.norm()
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise ParamError(f"dictionary element {self.label!r} has norm {norm}, expected 1")

    @classmethod
    def canonical(cls, template: CoefficientVector, key: Hashable) -> 'DictionaryElement':
        vector = template.basis_vector(key)
        return cls(vector, vector.keys[0])

    @classmethod
    def normalized(cls, vector: CoefficientVector, label: Optional[Hashable] = None) -> 'DictionaryElement':
        norm = vector.norm()
        if norm == 0.0:
            raise ZeroVector("cannot normalise the zero vector into a dictionary element")
        return cls(vector.scaled(1.0 / norm), label)


@dataclass
class ChebyshevResult:
    coefficients: np.ndarray
    residual: CoefficientVector
    residual_norm: float
    grad_sup: float
    iterations: int
    converged: bool = True
    history: List[float] = field(default_factory=list)

    def to_dict(self):
        return {
            'coefficients': [float(c) for c in self.coefficients],
            'residual_norm': self.residual_norm,
            'grad_sup': self.grad_sup,
            'iterations': self.iterations,
            'converged': self.converged,
        }


def norm_directional_derivative(f: CoefficientVector, g: CoefficientVector) -> float:
    """Derivative of the norm at ``f`` in direction ``g``, i.e. ``F_f(g)``.

    Raises:
        ZeroVector: if ``f`` is zero.
        ParamMismatch: if the vectors live in different spaces.
    """
    return f.norming_apply(g)


class _Objective:
    """``c -> ||f - c @ Phi||`` on the union of all supports."""

    def __init__(self, f: CoefficientVector, elements: Sequence[DictionaryElement]):
        vectors = [e.vector for e in elements]
        self.f = f
        self.keys = union_keys([f] + vectors)
        self.kernel = f.kernel_for(self.keys)
        self.target = f.aligned(self.keys)
        self.phi = linear_combination(f, self.keys, vectors)
        self.evaluations = 0

    def residual(self, c: np.ndarray) -> np.ndarray:
        return self.target - c @ self.phi

    def norm(self, c: np.ndarray) -> float:
        self.evaluations += 1
        return self.kernel.norm(self.residual(c))

    def gradient(self, c: np.ndarray) -> np.ndarray:
        """``-F_r(phi_j)`` for every element; zero at a zero residual."""
        r = self.residual(c)
        try:
            return -(self.phi @ self.kernel.norming(r))
        except ZeroVector:
            return np.zeros(len(c))

    def partial(self, c: np.ndarray, j: int) -> float:
        r = self.residual(c)
        try:
            return -float(self.phi[j] @ self.kernel.norming(r))
        except ZeroVector:
            return 0.0


def _certified(grad_sup: float, norm: float, f_norm: float, tol: float) -> bool:
    return grad_sup <= tol * max(1.0, norm) or norm <= tol * f_norm


def _armijo_step(objective: _Objective, c: np.ndarray, norm: float, grad: np.ndarray,
                 step: float):
    """Backtrack from ``step`` until the sufficient-decrease condition holds."""
    slope = float(grad @ grad)
    while step > MIN_STEP:
        trial = c - step * grad
        trial_norm = objective.norm(trial)
        if trial_norm <= norm - ARMIJO_DECREASE * step * slope:
            return step, trial, trial_norm
        step *= ARMIJO_SHRINK
    return 0.0, c, norm


def _bisect_coordinate(objective: _Objective, c: np.ndarray, norm: float, j: int):
    """Minimise along coordinate ``j`` by bisection on the partial derivative.

    The minimiser lies within ``2 ||r||`` of the current value because the
    element has unit norm.
    """
    radius = 2.0 * norm
    lo, hi = c[j] - radius, c[j] + radius
    trial = c.copy()
    for _ in range(BISECTION_LIMIT):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        trial[j] = mid
        if objective.partial(trial, j) < 0.0:
            lo = mid
        else:
            hi = mid
    best_c, best_norm = c, norm
    for value in (hi, lo):
        trial = c.copy()
        trial[j] = value
        trial_norm = objective.norm(trial)
        if trial_norm < best_norm:
            best_c, best_norm = trial, trial_norm
    return best_c, best_norm


def chebyshev_project(f: CoefficientVector, elements: Sequence[DictionaryElement],
                      tol: float = None, max_iter: int = None,
                      warm_start: Optional[Sequence[float]] = None,
                      debug: bool = False, sweeps: bool = True) -> ChebyshevResult:
    """Best approximation of ``f`` from ``span{elements}``.

    Args:
        f: Vector to approximate.
        elements: Linearly independent unit-norm elements of the same space.
        tol: Certificate tolerance; success means
            ``max_j |F_r(phi_j)| <= tol * max(1, ||r||)``.
        max_iter: Budget of descent steps plus coordinate sweeps.
        warm_start: Initial coefficients, padded with zeros to ``len(elements)``.
        debug: Keep the residual-norm history and assert it never increases.
        sweeps: Alternate descent with coordinate bisection sweeps. With
            False the solver is plain Armijo descent, restarted from
            ``1 / ||grad||`` whenever a line search stalls; it reaches
            smooth minimisers but may need a looser ``tol``.

    Returns:
        ChebyshevResult with the residual recomputed as ``f - sum c_j phi_j``.

    Raises:
        MaxIterExceeded: budget exhausted before the certificate holds; the
            exception carries the best iterate as ``result``.
    """
    tol = get_chebyshev_tol() if tol is None else tol
    max_iter = get_chebyshev_max_iter() if max_iter is None else max_iter
    if tol <= 0:
        raise ParamError(f"tol must be positive, got {tol}")
    for element in elements:
        f.check_same_space(element.vector)

    n = len(elements)
    if f.is_zero() or n == 0:
        return ChebyshevResult(np.zeros(n), f, f.norm(), 0.0, 0)

    objective = _Objective(f, elements)
    f_norm = f.norm()
    c = np.zeros(n)
    if warm_start is not None:
        start = np.asarray(warm_start, dtype=float)[:n]
        c[:len(start)] = start
    norm = objective.norm(c)
    if warm_start is not None and norm > f_norm:
        c, norm = np.zeros(n), f_norm
    history = [norm] if debug else []

    def record(value: float):
        if debug:
            assert value <= history[-1], f"residual norm increased: {history[-1]} -> {value}"
            history.append(value)

    iterations = 0
    step = None
    grad = objective.gradient(c)
    grad_sup = float(np.max(np.abs(grad)))
    sweep_next = sweeps
    while not _certified(grad_sup, norm, f_norm, tol) and iterations < max_iter:
        iterations += 1
        if sweep_next:
            for j in range(n):
                c, norm = _bisect_coordinate(objective, c, norm, j)
            sweep_next = False
            step = None
        else:
            if step is None:
                step = 1.0 / float(np.linalg.norm(grad))
            accepted, new_c, new_norm = _armijo_step(objective, c, norm, grad, step)
            if accepted == 0.0 or norm - new_norm <= 1e-15 * norm:
                sweep_next = sweeps
                step = None
            else:
                step = 2.0 * accepted
            c, norm = new_c, new_norm
        record(norm)
        grad = objective.gradient(c)
        grad_sup = float(np.max(np.abs(grad)))
        logger.debug(f"chebyshev iter {iterations}: norm={norm:.6e} grad_sup={grad_sup:.3e}")

    residual = type(f)(f.params, objective.keys, objective.residual(c))
    result = ChebyshevResult(c, residual, residual.norm(), grad_sup, iterations,
                             converged=_certified(grad_sup, norm, f_norm, tol), history=history)
    if not result.converged:
        logger.warning(f"chebyshev_project stopped at max_iter={max_iter} with grad_sup={grad_sup:.3e}")
        raise MaxIterExceeded(f"no certificate after {max_iter} iterations (grad_sup={grad_sup:.3e})", result)
    return result


def canonical_project(f: CoefficientVector, index_set: Iterable[Hashable]) -> ChebyshevResult:
    """Exact projection onto ``span{e_i : i in S}``: keep ``f`` on ``S``.

    ``grad_sup`` is measured, not assumed; the residual vanishes on ``S``,
    so its norming functional does too.
    """
    keys = sorted({f._normalize_key(k) for k in index_set})
    coefficients = np.array([f.get(k) for k in keys], dtype=float)
    residual = f.zero_out(keys)
    grad_sup = 0.0
    if keys and not residual.is_zero():
        grad_sup = max(residual.norming_coeff(k) for k in keys)
    return ChebyshevResult(coefficients, residual, residual.norm(), grad_sup, 0)
